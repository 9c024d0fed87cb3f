//! Brute-force order isomorphism between small finite posets.

/// A finite poset given by its order matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    leq: Vec<Vec<bool>>,
}

impl Poset {
    pub fn new(n: usize, leq: impl Fn(usize, usize) -> bool) -> Poset {
        Poset {
            leq: (0..n)
                .map(|i| (0..n).map(|j| leq(i, j)).collect())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    /// (elements below, elements above): preserved by any isomorphism.
    fn signature(&self, i: usize) -> (usize, usize) {
        let n = self.len();
        (
            (0..n).filter(|&j| self.leq[j][i]).count(),
            (0..n).filter(|&j| self.leq[i][j]).count(),
        )
    }
}

/// Searches for a bijection `f` with `a.leq(i, j) ⟺ b.leq(f(i), f(j))`.
pub fn find_order_isomorphism(a: &Poset, b: &Poset) -> Option<Vec<usize>> {
    let n = a.len();
    if n != b.len() {
        return None;
    }
    let sa: Vec<_> = (0..n).map(|i| a.signature(i)).collect();
    let sb: Vec<_> = (0..n).map(|i| b.signature(i)).collect();
    let (mut x, mut y) = (sa.clone(), sb.clone());
    x.sort();
    y.sort();
    if x != y {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        i: usize,
        a: &Poset,
        b: &Poset,
        sa: &[(usize, usize)],
        sb: &[(usize, usize)],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == a.len() {
            return true;
        }
        for c in 0..b.len() {
            if used[c] || sa[i] != sb[c] {
                continue;
            }
            let consistent =
                (0..i).all(|j| a.leq(i, j) == b.leq(c, map[j]) && a.leq(j, i) == b.leq(map[j], c));
            if !consistent {
                continue;
            }
            map[i] = c;
            used[c] = true;
            if extend(i + 1, a, b, sa, sb, map, used) {
                return true;
            }
            used[c] = false;
        }
        false
    }
    extend(0, a, b, &sa, &sb, &mut map, &mut used).then_some(map)
}
