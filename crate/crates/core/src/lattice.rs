//! Admissible pairs `(H, B)` and their lattice.
//!
//! A pair names the gauge-invariant ideal `I_{H,B}`; the pairs ordered by
//! `(H,B) <= (H',B')  iff  H ⊆ H' and B ⊆ H' ∪ B'` form a lattice
//! isomorphic to the lattice of those ideals.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::bitset::VertexSet;
use crate::conditions::{is_saturated_hereditary, saturated_hereditary_sets};
use crate::error::{Error, Result};
use crate::graph::{EdgeSpec, Graph};
use crate::limits::EnumLimit;

/// `H_∞^fin`: vertices outside `H` receiving ω edges in total but a finite,
/// nonzero number from outside `H`.
pub fn h_inf_fin(g: &Graph, h: &VertexSet) -> Result<VertexSet> {
    if !is_saturated_hereditary(g, h) {
        return Err(Error::NotSaturatedHereditary);
    }
    Ok(h_inf_fin_unchecked(g, h))
}

pub(crate) fn h_inf_fin_unchecked(g: &Graph, h: &VertexSet) -> VertexSet {
    let n = g.vertex_count();
    VertexSet::from_indices(
        n,
        (0..n).filter(|&v| {
            !h.contains(v)
                && g.in_degree_at(v).is_omega()
                && g.in_degree_from(v, |s| !h.contains(s)).is_finite_nonzero()
        }),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissiblePair {
    h: VertexSet,
    b: VertexSet,
    graph: u64,
}

impl AdmissiblePair {
    pub fn new(g: &Graph, h: VertexSet, b: VertexSet) -> Result<AdmissiblePair> {
        if !is_saturated_hereditary(g, &h) {
            return Err(Error::InadmissiblePair(
                "H is not saturated and hereditary".into(),
            ));
        }
        let allowed = h_inf_fin_unchecked(g, &h);
        if let Some(bad) = b.difference(&allowed).first() {
            return Err(Error::InadmissiblePair(format!(
                "`{}` in B is not in H_inf^fin",
                g.vertex_name(bad)
            )));
        }
        Ok(AdmissiblePair {
            h,
            b,
            graph: g.fingerprint(),
        })
    }

    pub fn bottom(g: &Graph) -> AdmissiblePair {
        AdmissiblePair {
            h: g.empty_set(),
            b: g.empty_set(),
            graph: g.fingerprint(),
        }
    }

    pub fn top(g: &Graph) -> AdmissiblePair {
        AdmissiblePair {
            h: g.full_set(),
            b: g.empty_set(),
            graph: g.fingerprint(),
        }
    }

    pub fn h(&self) -> &VertexSet {
        &self.h
    }

    pub fn b(&self) -> &VertexSet {
        &self.b
    }

    pub fn belongs_to(&self, g: &Graph) -> bool {
        self.graph == g.fingerprint()
    }

    /// Renders as `H={a,b};B={c}`.
    pub fn label(&self, g: &Graph) -> String {
        format!(
            "H={{{}}};B={{{}}}",
            g.names_of(&self.h).join(","),
            g.names_of(&self.b).join(",")
        )
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        json!({
            "label": self.label(g),
            "H": g.names_of(&self.h),
            "B": g.names_of(&self.b),
        })
    }
}

fn same_graph(p: &AdmissiblePair, q: &AdmissiblePair) -> Result<()> {
    if p.graph == q.graph {
        Ok(())
    } else {
        Err(Error::ForeignPair)
    }
}

/// `H ⊆ H'` and `B ⊆ H' ∪ B'`.
pub fn pair_leq(p: &AdmissiblePair, q: &AdmissiblePair) -> Result<bool> {
    same_graph(p, q)?;
    Ok(leq_unchecked(p, q))
}

fn leq_unchecked(p: &AdmissiblePair, q: &AdmissiblePair) -> bool {
    p.h.is_subset(&q.h) && p.b.is_subset(&q.h.union(&q.b))
}

/// `(H ∩ H', (H ∩ B') ∪ (B ∩ H') ∪ (B ∩ B'))`, checked to be admissible.
pub fn pair_meet(g: &Graph, p: &AdmissiblePair, q: &AdmissiblePair) -> Result<AdmissiblePair> {
    same_graph(p, q)?;
    if !p.belongs_to(g) {
        return Err(Error::ForeignPair);
    }
    let (h, b) = meet_sets(p, q);
    AdmissiblePair::new(g, h, b).map_err(|e| Error::Internal(format!("meet not admissible: {e}")))
}

fn meet_sets(p: &AdmissiblePair, q: &AdmissiblePair) -> (VertexSet, VertexSet) {
    let h = p.h.intersection(&q.h);
    let b =
        p.h.intersection(&q.b)
            .union(&p.b.intersection(&q.h))
            .union(&p.b.intersection(&q.b));
    (h, b)
}

/// Least upper bound, computed in the enumerated lattice.
pub fn pair_join(
    lattice: &IdealLattice,
    p: &AdmissiblePair,
    q: &AdmissiblePair,
) -> Result<AdmissiblePair> {
    same_graph(p, q)?;
    let i = lattice.position(p).ok_or(Error::ForeignPair)?;
    let j = lattice.position(q).ok_or(Error::ForeignPair)?;
    Ok(lattice.pairs[lattice.join(i, j)].clone())
}

/// All admissible pairs of a graph, ordered by `H` then `B` (canonical set order).
#[derive(Debug, Clone)]
pub struct IdealLattice {
    graph: u64,
    pairs: Vec<AdmissiblePair>,
    index: HashMap<AdmissiblePair, usize>,
}

/// Enumerates the admissible pairs of `g`.
pub fn admissible_pairs(g: &Graph, limit: EnumLimit) -> Result<IdealLattice> {
    let mut pairs = Vec::new();
    for h in saturated_hereditary_sets(g, limit)? {
        let fin = h_inf_fin_unchecked(g, &h);
        limit.check("H_inf^fin", fin.len())?;
        for b in fin.subsets() {
            pairs.push(AdmissiblePair {
                h: h.clone(),
                b,
                graph: g.fingerprint(),
            });
        }
    }
    let index = pairs
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    Ok(IdealLattice {
        graph: g.fingerprint(),
        pairs,
        index,
    })
}

impl IdealLattice {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[AdmissiblePair] {
        &self.pairs
    }

    pub fn pair(&self, i: usize) -> &AdmissiblePair {
        &self.pairs[i]
    }

    pub fn position(&self, p: &AdmissiblePair) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn belongs_to(&self, g: &Graph) -> bool {
        self.graph == g.fingerprint()
    }

    /// Index of `(∅, ∅)`.
    pub fn bottom(&self) -> usize {
        0
    }

    /// Index of `(E⁰, ∅)`.
    pub fn top(&self) -> usize {
        self.pairs.len() - 1
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        leq_unchecked(&self.pairs[i], &self.pairs[j])
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        let (h, b) = meet_sets(&self.pairs[i], &self.pairs[j]);
        let p = AdmissiblePair {
            h,
            b,
            graph: self.graph,
        };
        self.position(&p).expect("meet formula leaves the lattice")
    }

    /// Meet of all common upper bounds of `i` and `j`.
    pub fn join(&self, i: usize, j: usize) -> usize {
        let mut acc = self.top();
        for k in 0..self.len() {
            if self.leq(i, k) && self.leq(j, k) {
                acc = self.meet(acc, k);
            }
        }
        debug_assert!(self.leq(i, acc) && self.leq(j, acc));
        acc
    }

    /// Meet of a family of indices; the empty meet is the top.
    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items
            .into_iter()
            .fold(self.top(), |acc, k| self.meet(acc, k))
    }

    /// Cover relation `(i, j)`: `i < j` with nothing strictly between.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            let ups: Vec<usize> = (0..n).filter(|&j| j != i && self.leq(i, j)).collect();
            for &j in &ups {
                if !ups.iter().any(|&k| k != j && self.leq(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn leq_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.len())
            .map(|i| (0..self.len()).map(|j| self.leq(i, j)).collect())
            .collect()
    }

    pub fn meet_table(&self) -> Vec<Vec<usize>> {
        (0..self.len())
            .map(|i| (0..self.len()).map(|j| self.meet(i, j)).collect())
            .collect()
    }

    pub fn join_table(&self) -> Vec<Vec<usize>> {
        (0..self.len())
            .map(|i| (0..self.len()).map(|j| self.join(i, j)).collect())
            .collect()
    }

    /// Hasse diagram as a DOT digraph, edges pointing upwards.
    pub fn to_dot(&self, g: &Graph) -> String {
        let mut s = String::from("digraph ideal_lattice {\n  rankdir=BT;\n");
        for (i, p) in self.pairs.iter().enumerate() {
            writeln!(s, "  n{i} [label=\"{}\"];", escape_dot(&p.label(g))).unwrap();
        }
        for (i, j) in self.hasse() {
            writeln!(s, "  n{i} -> n{j};").unwrap();
        }
        s.push_str("}\n");
        s
    }

    /// Pairs, cover relation and full order/meet/join tables.
    pub fn to_json(&self, g: &Graph) -> Value {
        let pairs: Vec<Value> = self
            .pairs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut v = p.to_json(g);
                v["index"] = json!(i);
                v
            })
            .collect();
        json!({
            "size": self.len(),
            "pairs": pairs,
            "hasse": self.hasse(),
            "leq": self.leq_matrix(),
            "meet": self.meet_table(),
            "join": self.join_table(),
        })
    }
}

pub(crate) fn escape_dot(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Parses a pair selector `H=a,b;B=c` (either side may be empty).
pub fn parse_pair_selector(g: &Graph, text: &str) -> Result<AdmissiblePair> {
    let bad = || Error::PairSelector(text.to_string());
    let mut h = None;
    let mut b = None;
    for part in text.split(';') {
        let (key, value) = part.split_once('=').ok_or_else(bad)?;
        let names: Vec<&str> = value
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        let set = g.set_of(&names)?;
        match key.trim() {
            "H" if h.is_none() => h = Some(set),
            "B" if b.is_none() => b = Some(set),
            _ => return Err(bad()),
        }
    }
    let h = h.ok_or_else(bad)?;
    let b = b.unwrap_or_else(|| g.empty_set());
    AdmissiblePair::new(g, h, b)
}

fn fresh_name(taken: &mut Vec<String>, base: &str) -> String {
    let mut name = format!("{base}'");
    while taken.iter().any(|t| t == &name) {
        name.push('\'');
    }
    taken.push(name.clone());
    name
}

/// The graph `(E/H) ∖ β(B)` whose C*-algebra is the quotient by `I_{H,B}`.
///
/// Vertices outside `H` and edges between them are kept. Each
/// `v ∈ H_∞^fin ∖ B` gets a new vertex `v'` that receives nothing and emits
/// a copy of every edge leaving `v` (same range, same multiplicity).
pub fn quotient_graph(g: &Graph, p: &AdmissiblePair) -> Result<Graph> {
    if !p.belongs_to(g) {
        return Err(Error::ForeignPair);
    }
    let p = AdmissiblePair::new(g, p.h.clone(), p.b.clone())?;
    let keep = p.h.complement();
    let extra = h_inf_fin_unchecked(g, &p.h).difference(&p.b);

    let mut vertex_names: Vec<String> = keep.iter().map(|v| g.vertex_name(v).to_string()).collect();
    let mut all_names: Vec<String> = g.vertices().to_vec();
    let mut copies = Vec::new();
    for v in extra.iter() {
        let name = fresh_name(&mut all_names, g.vertex_name(v));
        vertex_names.push(name.clone());
        copies.push((v, name));
    }

    let mut edge_ids: Vec<String> = g.edges().iter().map(|e| e.id.clone()).collect();
    let mut edges: Vec<EdgeSpec> = g
        .edges()
        .iter()
        .filter(|e| keep.contains(e.src) && keep.contains(e.rng))
        .map(|e| EdgeSpec::new(g.vertex_name(e.src), g.vertex_name(e.rng), e.mult).with_id(&e.id))
        .collect();
    for (v, name) in &copies {
        for &k in g.out_edges(*v) {
            let e = g.edge(k);
            debug_assert!(keep.contains(e.rng), "edge from outside H into H");
            let id = fresh_name(&mut edge_ids, &e.id);
            edges.push(EdgeSpec::new(name, g.vertex_name(e.rng), e.mult).with_id(&id));
        }
    }
    Graph::new(&vertex_names, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graph::Multiplicity;

    fn pair(g: &Graph, h: &[&str], b: &[&str]) -> AdmissiblePair {
        AdmissiblePair::new(g, g.set_of(h).unwrap(), g.set_of(b).unwrap()).unwrap()
    }

    #[test]
    fn h_inf_fin_examples() {
        let g = corpus::e4();
        assert_eq!(
            h_inf_fin(&g, &g.set_of(&["w"]).unwrap()).unwrap(),
            g.set_of(&["v"]).unwrap()
        );
        assert!(h_inf_fin(&g, &g.empty_set()).unwrap().is_empty());
        let g = corpus::e5();
        for h in saturated_hereditary_sets(&g, EnumLimit::default()).unwrap() {
            assert!(h_inf_fin(&g, &h).unwrap().is_empty());
        }
        let g = corpus::e3();
        assert_eq!(
            h_inf_fin(&g, &g.set_of(&["v"]).unwrap()),
            Err(Error::NotSaturatedHereditary)
        );
    }

    #[test]
    fn admissible_pairs_examples() {
        let lim = EnumLimit::default();
        let g = corpus::e1();
        let l = admissible_pairs(&g, lim).unwrap();
        assert_eq!(l.pairs(), &[pair(&g, &[], &[]), pair(&g, &["v"], &[])]);

        let g = corpus::e4();
        let l = admissible_pairs(&g, lim).unwrap();
        assert_eq!(
            l.pairs(),
            &[
                pair(&g, &[], &[]),
                pair(&g, &["w"], &[]),
                pair(&g, &["w"], &["v"]),
                pair(&g, &["v", "w"], &[]),
            ]
        );
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(l.leq(i, j), i <= j, "E4 lattice is a chain");
            }
        }

        let g = corpus::e3();
        let l = admissible_pairs(&g, lim).unwrap();
        assert_eq!(l.pairs(), &[pair(&g, &[], &[]), pair(&g, &["v", "w"], &[])]);
    }

    #[test]
    fn pair_operation_examples() {
        let g = corpus::e4();
        let l = admissible_pairs(&g, EnumLimit::default()).unwrap();
        let w = pair(&g, &["w"], &[]);
        let wv = pair(&g, &["w"], &["v"]);
        assert!(pair_leq(&w, &wv).unwrap());
        assert!(!pair_leq(&wv, &w).unwrap());
        assert_eq!(pair_meet(&g, &wv, &wv).unwrap(), wv);
        assert_eq!(pair_join(&l, &AdmissiblePair::bottom(&g), &w).unwrap(), w);
    }

    #[test]
    fn foreign_pairs_are_rejected() {
        let g = corpus::e4();
        let other = corpus::e1();
        let p = AdmissiblePair::bottom(&g);
        let q = AdmissiblePair::bottom(&other);
        assert_eq!(pair_leq(&p, &q), Err(Error::ForeignPair));
        assert_eq!(pair_meet(&g, &p, &q), Err(Error::ForeignPair));
        assert!(quotient_graph(&other, &p).is_err());
    }

    #[test]
    fn inadmissible_pairs_are_rejected() {
        let g = corpus::e4();
        let v = g.set_of(&["v"]).unwrap();
        assert!(AdmissiblePair::new(&g, v.clone(), g.empty_set()).is_err());
        assert!(AdmissiblePair::new(&g, g.empty_set(), v).is_err());
    }

    #[test]
    fn quotient_by_bottom_is_identity() {
        for (_, g) in corpus::all() {
            let q = quotient_graph(&g, &AdmissiblePair::bottom(&g)).unwrap();
            assert_eq!(q, g);
        }
    }

    #[test]
    fn quotient_by_top_is_empty() {
        for (_, g) in corpus::all() {
            let q = quotient_graph(&g, &AdmissiblePair::top(&g)).unwrap();
            assert_eq!(q.vertex_count(), 0);
            assert!(q.edges().is_empty());
        }
    }

    #[test]
    fn quotient_examples() {
        let g = corpus::e4();
        let q = quotient_graph(&g, &pair(&g, &["w"], &["v"])).unwrap();
        assert_eq!(q.vertices(), &["v".to_string()]);
        assert_eq!(q.total_multiplicity(), Multiplicity::Finite(2));
        assert_eq!(q.edge(0).src, q.edge(0).rng);

        // v' receives nothing and emits copies of the two loops at v.
        let q = quotient_graph(&g, &pair(&g, &["w"], &[])).unwrap();
        assert_eq!(q.vertices(), &["v".to_string(), "v'".to_string()]);
        let (v, vbar) = (q.vertex("v").unwrap(), q.vertex("v'").unwrap());
        assert_eq!(q.in_degree_at(v), Multiplicity::Finite(4));
        assert_eq!(q.in_degree_at(vbar), Multiplicity::ZERO);
        let copy = q.edges().iter().find(|e| e.src == vbar).unwrap();
        assert_eq!(
            (copy.rng, copy.mult, copy.id.as_str()),
            (v, Multiplicity::Finite(2), "loops'")
        );
    }

    #[test]
    fn selector_parsing() {
        let g = corpus::e4();
        assert_eq!(
            parse_pair_selector(&g, "H=w;B=v").unwrap(),
            pair(&g, &["w"], &["v"])
        );
        assert_eq!(
            parse_pair_selector(&g, "H=;B=").unwrap(),
            AdmissiblePair::bottom(&g)
        );
        assert_eq!(
            parse_pair_selector(&g, "H=v,w").unwrap(),
            AdmissiblePair::top(&g)
        );
        assert!(matches!(
            parse_pair_selector(&g, "nonsense"),
            Err(Error::PairSelector(_))
        ));
        assert!(matches!(
            parse_pair_selector(&g, "H=q;B="),
            Err(Error::UnknownVertex(_))
        ));
        assert!(matches!(
            parse_pair_selector(&g, "H=v;B="),
            Err(Error::InadmissiblePair(_))
        ));
    }

    #[test]
    fn hasse_and_exports() {
        let g = corpus::e4();
        let l = admissible_pairs(&g, EnumLimit::default()).unwrap();
        assert_eq!(l.hasse(), vec![(0, 1), (1, 2), (2, 3)]);
        let dot = l.to_dot(&g);
        assert!(dot.contains("n1 [label=\"H={w};B={}\"]"));
        assert!(dot.contains("n2 -> n3;"));
        let js = l.to_json(&g);
        assert_eq!(js["size"], 4);
        assert_eq!(js["join"][0][1], 1);
        assert_eq!(js["meet"][2][3], 2);
    }
}
