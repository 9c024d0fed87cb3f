use crate::error::{Error, Result};

/// Guard for operations that enumerate subsets of the vertex (or orbit) set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumLimit(pub usize);

impl EnumLimit {
    pub const DEFAULT: EnumLimit = EnumLimit(16);

    pub fn check(self, what: &'static str, size: usize) -> Result<()> {
        if size > self.0 {
            Err(Error::LimitExceeded {
                what,
                size,
                limit: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for EnumLimit {
    fn default() -> Self {
        EnumLimit::DEFAULT
    }
}
