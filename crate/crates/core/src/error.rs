use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{location}: {message}")]
    Syntax { location: String, message: String },

    #[error("{location}: dangling endpoint `{vertex}` (vertex not declared)")]
    DanglingEndpoint { location: String, vertex: String },

    #[error("{location}: duplicate {kind} id `{id}`")]
    DuplicateId {
        location: String,
        kind: &'static str,
        id: String,
    },

    #[error("{location}: invalid multiplicity `{token}` (expected a positive integer or `omega`)")]
    InvalidMultiplicity { location: String, token: String },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("edge path is not composable: {0}")]
    InvalidPath(String),

    #[error("vertex set is not hereditary")]
    NotHereditary,

    #[error("vertex set is not saturated and hereditary")]
    NotSaturatedHereditary,

    #[error("vertex set must be nonempty")]
    EmptySet,

    #[error("pair is not admissible: {0}")]
    InadmissiblePair(String),

    #[error("pairs belong to different graphs")]
    ForeignPair,

    #[error("invalid pair selector `{0}` (expected e.g. \"H=a,b;B=c\")")]
    PairSelector(String),

    #[error(
        "enumeration limit exceeded: {what} has size {size}, limit is {limit} (raise it with --limit)"
    )]
    LimitExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("unsupported group `{0}` (expected `Z` or `F<k>`)")]
    UnsupportedGroup(String),

    #[error("invalid generator `{name}`: {reason}")]
    InvalidGenerator { name: String, reason: String },

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("malformed word `{word}`: {reason}")]
    MalformedWord { word: String, reason: String },

    #[error("set is not open")]
    NotOpen,

    #[error("malformed decomposition: {0}")]
    MalformedDecomposition(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_limit(&self) -> bool {
        matches!(self, Error::LimitExceeded { .. })
    }
}
