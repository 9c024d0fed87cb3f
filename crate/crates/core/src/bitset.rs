//! Fixed-universe bit sets used for vertex and point subsets.

use std::cmp::Ordering;
use std::fmt;

const WORD: usize = 64;

/// A subset of `{0, .., universe - 1}`.
///
/// Ordering is the canonical enumeration order used throughout the crate:
/// first by cardinality, then lexicographically by the sorted member list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    universe: usize,
    words: Vec<u64>,
}

/// Subset of a graph's vertices, indexed by canonical vertex order.
pub type VertexSet = BitSet;

impl BitSet {
    pub fn empty(universe: usize) -> Self {
        BitSet {
            universe,
            words: vec![0; universe.div_ceil(WORD)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, items: I) -> Self {
        let mut s = Self::empty(universe);
        for i in items {
            s.insert(i);
        }
        s
    }

    /// Builds a set from the low bits of `mask`. Requires `universe <= 64`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= WORD);
        let mut s = Self::empty(universe);
        if universe > 0 {
            let keep = if universe == WORD {
                u64::MAX
            } else {
                (1u64 << universe) - 1
            };
            s.words[0] = mask & keep;
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) -> bool {
        assert!(
            i < self.universe,
            "index {i} outside universe {}",
            self.universe
        );
        let fresh = !self.contains(i);
        self.words[i / WORD] |= 1 << (i % WORD);
        fresh
    }

    pub fn remove(&mut self, i: usize) -> bool {
        let had = self.contains(i);
        if had {
            self.words[i / WORD] &= !(1 << (i % WORD));
        }
        had
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn check_universe(&self, other: &Self) {
        assert_eq!(
            self.universe, other.universe,
            "bit sets over different universes"
        );
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check_universe(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.check_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.check_universe(other);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        BitSet {
            universe: self.universe,
            words,
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.check_universe(other);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        BitSet {
            universe: self.universe,
            words,
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.check_universe(other);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & !b)
            .collect();
        BitSet {
            universe: self.universe,
            words,
        }
    }

    pub fn complement(&self) -> Self {
        Self::full(self.universe).difference(self)
    }

    pub fn union_with(&mut self, other: &Self) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// All subsets of `self`, in canonical order.
    pub fn subsets(&self) -> Vec<BitSet> {
        let members: Vec<usize> = self.iter().collect();
        assert!(members.len() < 63, "too many members to enumerate subsets");
        let mut out: Vec<BitSet> = (0u64..1 << members.len())
            .map(|mask| {
                BitSet::from_indices(
                    self.universe,
                    members
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| mask >> k & 1 == 1)
                        .map(|(_, &m)| m),
                )
            })
            .collect();
        out.sort();
        out
    }
}

impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
            .then_with(|| self.universe.cmp(&other.universe))
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = BitSet::from_indices(70, [1, 3, 65]);
        let b = BitSet::from_indices(70, [3, 4]);
        assert_eq!(a.len(), 3);
        assert!(a.contains(65));
        assert!(!a.contains(2));
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![3]);
        assert_eq!(a.union(&b).len(), 4);
        assert_eq!(a.difference(&b).iter().collect::<Vec<_>>(), vec![1, 65]);
        assert_eq!(a.complement().len(), 67);
        assert!(BitSet::from_indices(70, [3]).is_subset(&a));
    }

    #[test]
    fn canonical_order_is_size_then_lex() {
        let mut v = [
            BitSet::from_indices(4, [0, 1]),
            BitSet::from_indices(4, [2]),
            BitSet::empty(4),
            BitSet::from_indices(4, [0, 3]),
            BitSet::from_indices(4, [1]),
        ];
        v.sort();
        let lists: Vec<Vec<usize>> = v.iter().map(|s| s.iter().collect()).collect();
        assert_eq!(
            lists,
            vec![vec![], vec![1], vec![2], vec![0, 1], vec![0, 3]]
        );
    }

    #[test]
    fn subsets_enumerates_powerset() {
        let s = BitSet::from_indices(5, [1, 4]);
        let subs = s.subsets();
        assert_eq!(subs.len(), 4);
        assert!(subs[0].is_empty());
        assert!(subs.iter().all(|t| t.is_subset(&s)));
    }

    #[test]
    fn from_mask_truncates() {
        let s = BitSet::from_mask(3, 0b1111);
        assert_eq!(s.len(), 3);
    }
}
