//! Maximal tails, breaking vertices and the primitive ideal space.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::bitset::VertexSet;
use crate::conditions::{condition_k, is_saturated_hereditary, saturated_hereditary_sets};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lattice::{escape_dot, h_inf_fin_unchecked, AdmissiblePair};
use crate::limits::EnumLimit;
use crate::paction::FiniteT0Space;

/// `Ω(X)`: vertices outside `X` that do not dominate any member of `X`.
pub fn omega(g: &Graph, x: &VertexSet) -> Result<VertexSet> {
    if x.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = g.vertex_count();
    Ok(VertexSet::from_indices(
        n,
        (0..n).filter(|&w| !x.contains(w) && x.iter().all(|v| !g.geq_at(w, v))),
    ))
}

fn omega_of_vertex(g: &Graph, v: usize) -> VertexSet {
    omega(g, &VertexSet::from_indices(g.vertex_count(), [v])).expect("singleton is nonempty")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MaxTail {
    m: VertexSet,
}

impl MaxTail {
    pub fn vertices(&self) -> &VertexSet {
        &self.m
    }
}

/// `∀ v,w ∈ M ∃ y ∈ M` with `v >= y` and `w >= y`.
fn is_directed(g: &Graph, m: &VertexSet) -> bool {
    let below: Vec<VertexSet> = m.iter().map(|v| g.below(v).intersection(m)).collect();
    below
        .iter()
        .enumerate()
        .all(|(i, bi)| below[i..].iter().all(|bj| !bi.is_disjoint(bj)))
}

/// Complements of saturated hereditary sets that are nonempty and directed,
/// largest first, ties broken lexicographically.
pub fn maximal_tails(g: &Graph, limit: EnumLimit) -> Result<Vec<MaxTail>> {
    let mut tails: Vec<MaxTail> = saturated_hereditary_sets(g, limit)?
        .into_iter()
        .map(|h| h.complement())
        .filter(|m| !m.is_empty() && is_directed(g, m))
        .map(|m| MaxTail { m })
        .collect();
    tails.sort_by(|a, b| {
        b.m.len()
            .cmp(&a.m.len())
            .then_with(|| a.m.iter().cmp(b.m.iter()))
    });
    Ok(tails)
}

/// Vertices `v` of infinite in-degree with `v ∈ Ω(v)_∞^fin`.
pub fn breaking_vertices(g: &Graph) -> Vec<usize> {
    (0..g.vertex_count())
        .filter(|&v| {
            g.in_degree_at(v).is_omega() && {
                let o = omega_of_vertex(g, v);
                debug_assert!(is_saturated_hereditary(g, &o));
                h_inf_fin_unchecked(g, &o).contains(v)
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointKind {
    Tail(VertexSet),
    Breaking(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimPoint {
    pub kind: PointKind,
    pub pair: AdmissiblePair,
}

impl PrimPoint {
    pub fn label(&self, g: &Graph) -> String {
        match &self.kind {
            PointKind::Tail(m) => format!("tail {{{}}}", g.names_of(m).join(",")),
            PointKind::Breaking(v) => format!("breaking {}", g.vertex_name(*v)),
        }
    }
}

/// One point per maximal tail, then one per breaking vertex.
pub fn prime_points(g: &Graph, limit: EnumLimit) -> Result<Vec<PrimPoint>> {
    let mut points = Vec::new();
    for tail in maximal_tails(g, limit)? {
        let h = tail.m.complement();
        if !is_saturated_hereditary(g, &h) {
            return Err(Error::Internal(
                "complement of a maximal tail is not saturated hereditary".into(),
            ));
        }
        debug_assert_eq!(omega(g, &tail.m)?, h);
        let b = h_inf_fin_unchecked(g, &h);
        let pair = AdmissiblePair::new(g, h, b)?;
        points.push(PrimPoint {
            kind: PointKind::Tail(tail.m),
            pair,
        });
    }
    for v in breaking_vertices(g) {
        let h = omega_of_vertex(g, v);
        let mut b = h_inf_fin_unchecked(g, &h);
        b.remove(v);
        let pair = AdmissiblePair::new(g, h, b)?;
        points.push(PrimPoint {
            kind: PointKind::Breaking(v),
            pair,
        });
    }
    let mut seen = HashSet::new();
    if !points.iter().all(|p| seen.insert(p.pair.clone())) {
        return Err(Error::Internal("two prime points share a pair".into()));
    }
    Ok(points)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimStatus {
    /// Condition (K) holds: the points are exactly the primitive ideals.
    Primitive,
    /// The points are the graded prime ideals; no claim about `Prim`.
    PrimeOnly,
}

impl PrimStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PrimStatus::Primitive => "primitive",
            PrimStatus::PrimeOnly => "prime_only",
        }
    }
}

/// Finite T0 space of prime points; `q ∈ cl{p}` iff `pair(p) <= pair(q)`.
#[derive(Debug, Clone)]
pub struct PrimSpace {
    pub points: Vec<PrimPoint>,
    pub status: PrimStatus,
}

pub fn prim_space(g: &Graph, limit: EnumLimit) -> Result<PrimSpace> {
    let points = prime_points(g, limit)?;
    let status = if condition_k(g).holds() {
        PrimStatus::Primitive
    } else {
        PrimStatus::PrimeOnly
    };
    Ok(PrimSpace { points, status })
}

impl PrimSpace {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `q ∈ cl{p}`.
    pub fn in_closure(&self, p: usize, q: usize) -> bool {
        let (a, b) = (&self.points[p].pair, &self.points[q].pair);
        a.h().is_subset(b.h()) && a.b().is_subset(&b.h().union(b.b()))
    }

    pub fn closure(&self, p: usize) -> Vec<usize> {
        (0..self.len()).filter(|&q| self.in_closure(p, q)).collect()
    }

    /// Specialization pairs `(p, q)` with `q ∈ cl{p}`, reflexive pairs omitted.
    pub fn specialization(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|p| (0..n).map(move |q| (p, q)))
            .filter(|&(p, q)| p != q && self.in_closure(p, q))
            .collect()
    }

    /// Covering pairs of the specialization order.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let strict = self.specialization();
        strict
            .iter()
            .copied()
            .filter(|&(p, q)| {
                !strict
                    .iter()
                    .any(|&(a, b)| a == p && b != q && self.in_closure(b, q))
            })
            .collect()
    }

    /// The space as a [`FiniteT0Space`] with points named by their labels.
    pub fn to_t0_space(&self, g: &Graph) -> FiniteT0Space {
        let names = self.points.iter().map(|p| p.label(g)).collect();
        FiniteT0Space::from_relation(names, |p, q| self.in_closure(p, q))
            .expect("pairs are distinct")
    }

    pub fn to_dot(&self, g: &Graph) -> String {
        let mut s = String::from("digraph prim {\n  rankdir=BT;\n");
        writeln!(s, "  label=\"{}\";", self.status.as_str()).unwrap();
        for (i, p) in self.points.iter().enumerate() {
            let label = format!(
                "{}\\n{}",
                escape_dot(&p.label(g)),
                escape_dot(&p.pair.label(g))
            );
            writeln!(s, "  p{i} [label=\"{label}\"];").unwrap();
        }
        for (p, q) in self.hasse() {
            writeln!(s, "  p{p} -> p{q};").unwrap();
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        let points: Vec<Value> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let kind = match &p.kind {
                    PointKind::Tail(m) => json!({"type": "tail", "tail": g.names_of(m)}),
                    PointKind::Breaking(v) => {
                        json!({"type": "breaking", "vertex": g.vertex_name(*v)})
                    }
                };
                json!({
                    "index": i,
                    "kind": kind,
                    "pair": p.pair.to_json(g),
                    "closure": self.closure(i),
                })
            })
            .collect();
        json!({
            "status": self.status.as_str(),
            "size": self.len(),
            "points": points,
            "hasse": self.hasse(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn set(g: &Graph, names: &[&str]) -> VertexSet {
        g.set_of(names).unwrap()
    }

    fn named(name: &str) -> Graph {
        corpus::all()
            .into_iter()
            .find(|(n, _)| *n == name)
            .unwrap()
            .1
    }

    #[test]
    fn omega_examples() {
        let g = corpus::e3();
        assert_eq!(omega(&g, &set(&g, &["w"])).unwrap(), set(&g, &["v"]));
        let g = corpus::e4();
        assert_eq!(omega(&g, &set(&g, &["v"])).unwrap(), set(&g, &["w"]));
        let g = corpus::e2();
        for v in ["a", "b", "c"] {
            assert!(omega(&g, &set(&g, &[v])).unwrap().is_empty());
        }
        assert_eq!(omega(&g, &g.empty_set()), Err(Error::EmptySet));
    }

    #[test]
    fn maximal_tail_examples() {
        let lim = EnumLimit::default();
        let tails = |g: &Graph| -> Vec<Vec<String>> {
            maximal_tails(g, lim)
                .unwrap()
                .iter()
                .map(|t| g.names_of(t.vertices()))
                .collect()
        };
        assert_eq!(tails(&corpus::e4()), vec![vec!["v", "w"], vec!["v"]]);
        assert_eq!(tails(&corpus::e2()), vec![vec!["a", "b", "c"]]);
        assert_eq!(tails(&named("isolated")), vec![vec!["a"], vec!["b"]]);
    }

    #[test]
    fn tails_satisfy_their_axioms() {
        for (_, g) in corpus::all() {
            for t in maximal_tails(&g, EnumLimit::default()).unwrap() {
                let m = t.vertices();
                for w in m.iter() {
                    assert!(g.above(w).is_subset(m), "(a) upward closed");
                    let d = g.in_degree_at(w);
                    if d.is_finite_nonzero() {
                        assert!(
                            g.in_edges(w).iter().any(|&k| m.contains(g.edge(k).src)),
                            "(b)"
                        );
                    }
                }
                assert!(is_directed(&g, m));
                assert_eq!(omega(&g, m).unwrap(), m.complement());
            }
        }
    }

    #[test]
    fn breaking_vertex_examples() {
        let g = corpus::e4();
        assert_eq!(breaking_vertices(&g), vec![g.vertex("v").unwrap()]);
        assert!(breaking_vertices(&corpus::e1()).is_empty());
        assert!(breaking_vertices(&named("omega_loops")).is_empty());
        assert!(breaking_vertices(&named("omega_not_breaking")).is_empty());
        assert_eq!(breaking_vertices(&named("two_breaking")).len(), 2);
    }

    #[test]
    fn prime_point_examples() {
        let lim = EnumLimit::default();
        let g = corpus::e4();
        let pts = prime_points(&g, lim).unwrap();
        let labels: Vec<String> = pts.iter().map(|p| p.pair.label(&g)).collect();
        assert_eq!(labels, ["H={};B={}", "H={w};B={v}", "H={w};B={}"]);
        assert_eq!(pts[2].kind, PointKind::Breaking(g.vertex("v").unwrap()));

        let g = corpus::e1();
        let pts = prime_points(&g, lim).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].pair, AdmissiblePair::bottom(&g));

        let g = corpus::e3();
        let pts = prime_points(&g, lim).unwrap();
        assert_eq!(pts[0].kind, PointKind::Tail(g.full_set()));
    }

    #[test]
    fn breaking_points_sit_below_their_tail_points() {
        for (_, g) in corpus::all() {
            let pts = prime_points(&g, EnumLimit::default()).unwrap();
            for b in pts
                .iter()
                .filter(|p| matches!(p.kind, PointKind::Breaking(_)))
            {
                for t in pts.iter().filter(|p| matches!(p.kind, PointKind::Tail(_))) {
                    if t.pair.h() == b.pair.h() {
                        assert!(b.pair.b().is_subset(t.pair.b()) && b.pair != t.pair);
                    }
                }
            }
        }
    }

    #[test]
    fn prim_space_examples() {
        let lim = EnumLimit::default();
        let g = corpus::e4();
        let s = prim_space(&g, lim).unwrap();
        assert_eq!(s.status, PrimStatus::Primitive);
        // Chain: tail E⁰ (bottom) < breaking v < tail {v}.
        assert_eq!(s.closure(0), vec![0, 1, 2]);
        assert_eq!(s.hasse(), vec![(0, 2), (2, 1)]);
        assert_eq!(s.to_dot(&g).matches("->").count(), 2);

        let s = prim_space(&corpus::e1(), lim).unwrap();
        assert_eq!((s.len(), s.status), (1, PrimStatus::Primitive));
        let s = prim_space(&corpus::e2(), lim).unwrap();
        assert_eq!((s.len(), s.status), (1, PrimStatus::PrimeOnly));
    }

    #[test]
    fn json_export_lists_closures() {
        let g = corpus::e4();
        let js = prim_space(&g, EnumLimit::default()).unwrap().to_json(&g);
        assert_eq!(js["status"], "primitive");
        assert_eq!(js["points"][2]["kind"]["type"], "breaking");
        assert_eq!(js["points"][1]["closure"], json!([1]));
    }
}
