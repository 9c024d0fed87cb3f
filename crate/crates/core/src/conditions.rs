//! Hereditary and saturated sets, and Conditions (L) and (K).

use std::collections::{HashSet, VecDeque};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, Multiplicity, Path};
use crate::limits::EnumLimit;

/// `v ∈ H` and `v >= w` imply `w ∈ H`: every vertex that reaches `H` is in `H`.
pub fn is_hereditary(g: &Graph, h: &VertexSet) -> bool {
    g.edges()
        .iter()
        .all(|e| !h.contains(e.rng) || h.contains(e.src))
}

/// Every vertex of finite nonzero in-degree whose in-edges all start in `H`
/// belongs to `H`.
pub fn is_saturated(g: &Graph, h: &VertexSet) -> bool {
    (0..g.vertex_count()).all(|v| h.contains(v) || !forced_by(g, h, v))
}

pub fn is_saturated_hereditary(g: &Graph, h: &VertexSet) -> bool {
    is_hereditary(g, h) && is_saturated(g, h)
}

fn forced_by(g: &Graph, h: &VertexSet, v: usize) -> bool {
    g.in_degree_at(v).is_finite_nonzero()
        && g.in_edges(v).iter().all(|&k| h.contains(g.edge(k).src))
}

/// Smallest hereditary superset of `s`: all vertices from which `s` is reachable.
pub fn hereditary_closure(g: &Graph, s: &VertexSet) -> VertexSet {
    let mut out = s.clone();
    let mut stack: Vec<usize> = s.iter().collect();
    while let Some(v) = stack.pop() {
        for &k in g.in_edges(v) {
            let u = g.edge(k).src;
            if out.insert(u) {
                stack.push(u);
            }
        }
    }
    out
}

/// Least saturated superset of a hereditary set `h`.
pub fn saturation(g: &Graph, h: &VertexSet) -> Result<VertexSet> {
    if !is_hereditary(g, h) {
        return Err(Error::NotHereditary);
    }
    let mut out = h.clone();
    // Only successors of newly added vertices can become forced.
    let mut queue: VecDeque<usize> = (0..g.vertex_count()).collect();
    while let Some(v) = queue.pop_front() {
        if !out.contains(v) && forced_by(g, &out, v) {
            out.insert(v);
            queue.extend(g.successors(v));
        }
    }
    debug_assert!(is_hereditary(g, &out));
    Ok(out)
}

/// `saturation ∘ hereditary_closure`.
pub fn saturated_hereditary_closure(g: &Graph, s: &VertexSet) -> VertexSet {
    saturation(g, &hereditary_closure(g, s)).expect("hereditary closure is hereditary")
}

/// All saturated hereditary subsets of `E⁰` in canonical order (by size,
/// then lexicographically). The family is closed under intersection, so it
/// is generated from the closure of ∅ by adding one vertex at a time.
pub fn saturated_hereditary_sets(g: &Graph, limit: EnumLimit) -> Result<Vec<VertexSet>> {
    limit.check("vertex set", g.vertex_count())?;
    let bottom = saturated_hereditary_closure(g, &g.empty_set());
    let mut seen: HashSet<VertexSet> = HashSet::new();
    seen.insert(bottom.clone());
    let mut queue = VecDeque::from([bottom]);
    while let Some(h) = queue.pop_front() {
        for v in h.complement().iter() {
            let mut grown = h.clone();
            grown.insert(v);
            let closed = saturated_hereditary_closure(g, &grown);
            if seen.insert(closed.clone()) {
                queue.push_back(closed);
            }
        }
    }
    let mut out: Vec<VertexSet> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// A cycle together with its entrances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub cycle: Path,
    pub missing_entrance: bool,
    /// Edge records `e` with `r(e) = r(μk)` and `e ≠ μk`. A cycle edge with
    /// multiplicity at least 2 is listed too: its parallel copies enter.
    pub entrance_edges: Vec<usize>,
}

impl CycleWitness {
    pub fn new(g: &Graph, cycle: Path) -> CycleWitness {
        let entrance_edges = cycle_entrances(g, &cycle);
        CycleWitness {
            missing_entrance: entrance_edges.is_empty(),
            cycle,
            entrance_edges,
        }
    }
}

/// Entrances of a cycle, in edge order.
pub fn cycle_entrances(g: &Graph, cycle: &Path) -> Vec<usize> {
    let mut out = Vec::new();
    for (k, e) in g.edges().iter().enumerate() {
        let enters = cycle.edges().iter().any(|&mu| {
            let m = g.edge(mu);
            e.rng == m.rng && (k != mu || m.mult > Multiplicity::Finite(1))
        });
        if enters {
            out.push(k);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionL {
    Holds,
    Fails(CycleWitness),
}

impl ConditionL {
    pub fn holds(&self) -> bool {
        matches!(self, ConditionL::Holds)
    }
}

/// Condition (L): every cycle has an entrance.
///
/// A cycle without an entrance is simple and runs through vertices of total
/// in-degree exactly 1, so it suffices to follow unique in-edges backwards.
pub fn condition_l(g: &Graph) -> ConditionL {
    let n = g.vertex_count();
    let unique_in: Vec<Option<usize>> = (0..n)
        .map(|v| match g.in_edges(v) {
            [k] if g.edge(*k).mult == Multiplicity::Finite(1) => Some(*k),
            _ => None,
        })
        .collect();
    // 0 = unvisited, 1 = on current walk, 2 = finished
    let mut state = vec![0u8; n];
    for start in 0..n {
        let mut walk: Vec<usize> = Vec::new();
        let mut v = start;
        loop {
            if state[v] == 2 {
                break;
            }
            if state[v] == 1 {
                let pos = walk.iter().position(|&x| x == v).unwrap();
                let cycle_vertices = &walk[pos..];
                let first = *cycle_vertices.iter().min().unwrap();
                // Walk backwards from the smallest vertex: μ1 enters it,
                // μ2 enters s(μ1), and so on.
                let mut edges = Vec::new();
                let mut x = first;
                loop {
                    let k = unique_in[x].unwrap();
                    edges.push(k);
                    x = g.edge(k).src;
                    if x == first {
                        break;
                    }
                }
                let path = Path::new(g, edges).expect("backward walk is composable");
                return ConditionL::Fails(CycleWitness::new(g, path));
            }
            state[v] = 1;
            walk.push(v);
            match unique_in[v] {
                Some(k) => v = g.edge(k).src,
                None => break,
            }
        }
        for x in walk {
            state[x] = 2;
        }
    }
    ConditionL::Holds
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionK {
    Holds,
    /// A vertex with exactly one first-return path.
    Fails {
        vertex: usize,
    },
}

impl ConditionK {
    pub fn holds(&self) -> bool {
        matches!(self, ConditionK::Holds)
    }
}

/// Condition (K): every vertex has no first return or at least two.
///
/// Two cycles based at `v`, neither an initial subpath of the other, exist
/// iff `v` has two distinct first-return paths.
pub fn condition_k(g: &Graph) -> ConditionK {
    (0..g.vertex_count())
        .find(|&v| g.first_return_count_at(v, 2).is_one())
        .map_or(ConditionK::Holds, |vertex| ConditionK::Fails { vertex })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graph::EdgeSpec;

    fn set(g: &Graph, names: &[&str]) -> VertexSet {
        g.set_of(names).unwrap()
    }

    fn names(g: &Graph, family: &[VertexSet]) -> Vec<Vec<String>> {
        family.iter().map(|s| g.names_of(s)).collect()
    }

    #[test]
    fn hereditary_closure_examples() {
        let g = corpus::e3();
        assert_eq!(
            hereditary_closure(&g, &set(&g, &["w"])),
            set(&g, &["v", "w"])
        );
        assert_eq!(hereditary_closure(&g, &set(&g, &["v"])), set(&g, &["v"]));
        assert!(hereditary_closure(&g, &g.empty_set()).is_empty());
    }

    #[test]
    fn saturation_examples() {
        let g = corpus::e3();
        assert_eq!(saturation(&g, &set(&g, &["w"])), Err(Error::NotHereditary));
        let h = hereditary_closure(&g, &set(&g, &["v"]));
        assert_eq!(saturation(&g, &h).unwrap(), g.full_set());

        let g = corpus::e4();
        assert_eq!(saturation(&g, &set(&g, &["w"])).unwrap(), set(&g, &["w"]));
    }

    #[test]
    fn saturated_hereditary_examples() {
        let lim = EnumLimit::default();
        let g = corpus::e2();
        assert_eq!(
            saturated_hereditary_sets(&g, lim).unwrap(),
            vec![g.empty_set(), g.full_set()]
        );
        let g = corpus::e4();
        assert_eq!(
            names(&g, &saturated_hereditary_sets(&g, lim).unwrap()),
            vec![
                vec![],
                vec!["w".to_string()],
                vec!["v".to_string(), "w".to_string()]
            ]
        );
        let g = corpus::e3();
        assert_eq!(
            saturated_hereditary_sets(&g, lim).unwrap(),
            vec![g.empty_set(), g.full_set()]
        );
    }

    #[test]
    fn enumeration_respects_limit() {
        let g = corpus::e2();
        assert!(saturated_hereditary_sets(&g, EnumLimit(2))
            .unwrap_err()
            .is_limit());
    }

    #[test]
    fn isolated_vertices_give_the_powerset() {
        let g = corpus::all()
            .into_iter()
            .find(|(n, _)| *n == "isolated")
            .unwrap()
            .1;
        assert_eq!(
            saturated_hereditary_sets(&g, EnumLimit::default())
                .unwrap()
                .len(),
            4
        );
    }

    #[test]
    fn condition_l_examples() {
        assert!(condition_l(&corpus::e1()).holds());
        let g = corpus::e2();
        match condition_l(&g) {
            ConditionL::Fails(w) => {
                assert!(w.missing_entrance);
                assert!(w.entrance_edges.is_empty());
                assert!(w.cycle.is_cycle(&g));
                assert_eq!(w.cycle.len(), 3);
                assert_eq!(w.cycle.rng(&g), g.vertex("a").unwrap());
            }
            ConditionL::Holds => panic!("3-cycle has no entrance"),
        }
        let empty = Graph::new(&["a", "b"], vec![]).unwrap();
        assert!(condition_l(&empty).holds());
    }

    #[test]
    fn single_loop_of_multiplicity_two_has_entrance() {
        let g = Graph::new(
            &["v"],
            vec![EdgeSpec::new("v", "v", Multiplicity::Finite(2))],
        )
        .unwrap();
        assert!(condition_l(&g).holds());
        let cycle = Path::new(&g, vec![0]).unwrap();
        assert_eq!(cycle_entrances(&g, &cycle), vec![0]);
    }

    #[test]
    fn condition_k_examples() {
        assert!(condition_k(&corpus::e1()).holds());
        let g = corpus::e2();
        assert!(matches!(condition_k(&g), ConditionK::Fails { vertex } if g.on_cycle(vertex)));
        assert!(condition_k(&corpus::e5()).holds());
    }

    #[test]
    fn toeplitz_has_l_but_not_k() {
        let g = corpus::all()
            .into_iter()
            .find(|(n, _)| *n == "toeplitz")
            .unwrap()
            .1;
        assert!(condition_l(&g).holds());
        assert!(!condition_k(&g).holds());
    }
}
