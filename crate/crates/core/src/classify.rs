//! Classification verdicts for `C*(E)` assembled from the combinatorics.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::bitset::VertexSet;
use crate::conditions::{
    condition_k, condition_l, cycle_entrances, saturated_hereditary_closure, ConditionK,
    ConditionL, CycleWitness,
};
use crate::error::{Error, Result};
use crate::graph::{Graph, Path};
use crate::lattice::AdmissiblePair;
use crate::limits::EnumLimit;
use crate::spectrum::{breaking_vertices, maximal_tails};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

impl TriState {
    pub fn as_str(self) -> &'static str {
        match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotSimple {
    /// The graph has no vertices.
    ZeroAlgebra,
    /// A cycle without an entrance. Necessity of (L) for simplicity is the
    /// standard fact that such a cycle yields a hereditary subalgebra
    /// isomorphic to `M_n(C(T))`.
    ConditionLFails(CycleWitness),
    NontrivialLattice(AdmissiblePair),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Simple {
    Yes,
    No(NotSimple),
}

impl Simple {
    pub fn is_yes(&self) -> bool {
        matches!(self, Simple::Yes)
    }
}

/// Simple iff (L) holds and the only saturated hereditary sets are `∅` and `E⁰`.
///
/// The lattice check needs no enumeration: it is trivial iff `∅` is
/// saturated and every single vertex generates all of `E⁰`.
pub fn is_simple(g: &Graph) -> Simple {
    if g.vertex_count() == 0 {
        return Simple::No(NotSimple::ZeroAlgebra);
    }
    if let ConditionL::Fails(w) = condition_l(g) {
        return Simple::No(NotSimple::ConditionLFails(w));
    }
    let n = g.vertex_count();
    let mut candidates = vec![saturated_hereditary_closure(g, &g.empty_set())];
    candidates
        .extend((0..n).map(|v| saturated_hereditary_closure(g, &VertexSet::from_indices(n, [v]))));
    candidates.retain(|h| !h.is_empty() && !h.is_full());
    match candidates.into_iter().min() {
        None => Simple::Yes,
        Some(h) => Simple::No(NotSimple::NontrivialLattice(
            AdmissiblePair::new(g, h, g.empty_set()).expect("(H, ∅) is admissible"),
        )),
    }
}

/// Audit witness: a cycle inside the tail and a path from it to `vertex`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedWitness {
    pub tail: VertexSet,
    pub vertex: usize,
    pub cycle: Path,
    /// From `cycle`'s base to `vertex`; `None` when `vertex` is the base.
    pub path: Option<Path>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotPurelyInfinite {
    FailsK {
        vertex: usize,
    },
    TailVertexNotFedByCycle {
        tail: VertexSet,
        vertex: usize,
    },
    /// A breaking vertex gives a quotient with a source-like projection.
    BreakingVertex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PurelyInfinite {
    Yes(Vec<FeedWitness>),
    No(NotPurelyInfinite),
}

impl PurelyInfinite {
    pub fn is_yes(&self) -> bool {
        matches!(self, PurelyInfinite::Yes(_))
    }
}

/// Purely infinite iff (K) holds, every vertex of every maximal tail `M`
/// is reached from a cycle lying in `M`, and there are no breaking vertices.
pub fn is_purely_infinite(g: &Graph, limit: EnumLimit) -> Result<PurelyInfinite> {
    if let ConditionK::Fails { vertex } = condition_k(g) {
        return Ok(PurelyInfinite::No(NotPurelyInfinite::FailsK { vertex }));
    }
    let mut witnesses = Vec::new();
    for tail in maximal_tails(g, limit)? {
        let m = tail.vertices();
        let on_cycle = cycle_vertices_within(g, m);
        for v in m.iter() {
            match feed(g, m, &on_cycle, v) {
                Some((cycle, path)) => {
                    if !cycle_entrances(g, &cycle)
                        .iter()
                        .any(|&k| m.contains(g.edge(k).src))
                    {
                        return Err(Error::Internal(format!(
                            "feeding cycle of `{}` has no entrance inside its tail",
                            g.vertex_name(v)
                        )));
                    }
                    witnesses.push(FeedWitness {
                        tail: m.clone(),
                        vertex: v,
                        cycle,
                        path,
                    });
                }
                None => {
                    return Ok(PurelyInfinite::No(
                        NotPurelyInfinite::TailVertexNotFedByCycle {
                            tail: m.clone(),
                            vertex: v,
                        },
                    ))
                }
            }
        }
    }
    if let Some(&v) = breaking_vertices(g).first() {
        return Ok(PurelyInfinite::No(NotPurelyInfinite::BreakingVertex(v)));
    }
    Ok(PurelyInfinite::Yes(witnesses))
}

/// Vertices lying on a cycle of the subgraph induced on `m`.
fn cycle_vertices_within(g: &Graph, m: &VertexSet) -> VertexSet {
    let sub = g.induced(m);
    let mut out = g.empty_set();
    for (i, v) in m.iter().enumerate() {
        if sub.on_cycle(i) {
            out.insert(v);
        }
    }
    out
}

/// Nearest in-`m` cycle vertex `y` with `v >= y`, as (cycle at `y`, path `y -> v`).
fn feed(g: &Graph, m: &VertexSet, on_cycle: &VertexSet, v: usize) -> Option<(Path, Option<Path>)> {
    // Backwards BFS from v; `via[x]` is the edge leaving x towards v.
    let mut via: Vec<Option<usize>> = vec![None; g.vertex_count()];
    let mut seen = g.empty_set();
    seen.insert(v);
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        if on_cycle.contains(x) {
            let mut path = Vec::new();
            let mut y = x;
            while let Some(k) = via[y] {
                path.push(k);
                y = g.edge(k).rng;
            }
            // Collected from the cycle towards v; paths list the last edge first.
            path.reverse();
            let path = if path.is_empty() {
                None
            } else {
                Some(Path::new(g, path).ok()?)
            };
            return Some((cycle_at(g, m, x)?, path));
        }
        for &k in g.in_edges(x) {
            let u = g.edge(k).src;
            if m.contains(u) && seen.insert(u) {
                via[u] = Some(k);
                queue.push_back(u);
            }
        }
    }
    None
}

/// A shortest cycle based at `y` inside `m`.
fn cycle_at(g: &Graph, m: &VertexSet, y: usize) -> Option<Path> {
    // Forward BFS from y; `via[x]` is the edge entering x.
    let mut via: Vec<Option<usize>> = vec![None; g.vertex_count()];
    let mut seen = g.empty_set();
    seen.insert(y);
    let mut queue = VecDeque::from([y]);
    while let Some(x) = queue.pop_front() {
        for &k in g.out_edges(x) {
            let u = g.edge(k).rng;
            if u == y {
                let mut edges = vec![k];
                let mut z = x;
                while let Some(e) = via[z] {
                    edges.push(e);
                    z = g.edge(e).src;
                }
                return Path::new(g, edges).ok();
            }
            if m.contains(u) && seen.insert(u) {
                via[u] = Some(k);
                queue.push_back(u);
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub aperiodic: bool,
    pub residually_aperiodic: bool,
    pub intersection_property: bool,
    pub residual_intersection: bool,
    /// Cross-sectional algebras of bundles over ℤ are always exact.
    pub exact: bool,
    pub ideal_property_of_crossproduct: TriState,
    pub simple: Simple,
    /// `None` when the enumeration limit was hit.
    pub purely_infinite: Option<PurelyInfinite>,
    /// Topological freeness of the dual partial action; only decided for
    /// graphs without infinite multiplicities, where it is equivalent to (L).
    pub dual_topologically_free: Option<bool>,
    pub condition_l: ConditionL,
    pub condition_k: ConditionK,
    pub limit_exceeded: bool,
}

pub fn classify(g: &Graph, limit: EnumLimit) -> Result<ClassificationReport> {
    let l = condition_l(g);
    let k = condition_k(g);
    let (purely_infinite, limit_exceeded) = match is_purely_infinite(g, limit) {
        Ok(p) => (Some(p), false),
        Err(e) if e.is_limit() => (None, true),
        Err(e) => return Err(e),
    };
    if let Some(p) = &purely_infinite {
        if p.is_yes() && !k.holds() {
            return Err(Error::Internal(
                "purely infinite without Condition (K)".into(),
            ));
        }
    }
    if k.holds() && !l.holds() {
        return Err(Error::Internal(
            "Condition (K) without Condition (L)".into(),
        ));
    }
    Ok(ClassificationReport {
        aperiodic: l.holds(),
        residually_aperiodic: k.holds(),
        intersection_property: l.holds(),
        residual_intersection: k.holds(),
        exact: true,
        ideal_property_of_crossproduct: if k.holds() {
            TriState::Yes
        } else {
            TriState::Unknown
        },
        simple: is_simple(g),
        purely_infinite,
        dual_topologically_free: (!g.has_omega()).then(|| l.holds()),
        condition_l: l,
        condition_k: k,
        limit_exceeded,
    })
}

fn cycle_json(g: &Graph, w: &CycleWitness) -> Value {
    json!({
        "cycle": w.cycle.ids(g),
        "missing_entrance": w.missing_entrance,
        "entrance_edges": w.entrance_edges.iter().map(|&k| g.edge(k).id.clone()).collect::<Vec<_>>(),
    })
}

impl ClassificationReport {
    pub fn to_json(&self, g: &Graph) -> Value {
        let simple = match &self.simple {
            Simple::Yes => json!({"verdict": "yes"}),
            Simple::No(NotSimple::ZeroAlgebra) => {
                json!({"verdict": "no", "reason": {"type": "zero_algebra"}})
            }
            Simple::No(NotSimple::ConditionLFails(w)) => json!({
                "verdict": "no",
                "reason": {
                    "type": "condition_l_fails",
                    "witness": cycle_json(g, w),
                    "note": "an entrance-less cycle obstructs simplicity (standard graph-algebra fact)",
                },
            }),
            Simple::No(NotSimple::NontrivialLattice(p)) => json!({
                "verdict": "no",
                "reason": {"type": "nontrivial_lattice", "pair": p.to_json(g)},
            }),
        };
        let purely_infinite = match &self.purely_infinite {
            None => json!({"verdict": "unknown"}),
            Some(PurelyInfinite::Yes(ws)) => json!({
                "verdict": "yes",
                "witnesses": ws.iter().map(|w| json!({
                    "tail": g.names_of(&w.tail),
                    "vertex": g.vertex_name(w.vertex),
                    "cycle": w.cycle.ids(g),
                    "path": w.path.as_ref().map_or_else(Vec::new, |p| p.ids(g)),
                })).collect::<Vec<_>>(),
            }),
            Some(PurelyInfinite::No(reason)) => {
                let reason = match reason {
                    NotPurelyInfinite::FailsK { vertex } => {
                        json!({"type": "fails_k", "vertex": g.vertex_name(*vertex)})
                    }
                    NotPurelyInfinite::TailVertexNotFedByCycle { tail, vertex } => json!({
                        "type": "tail_vertex_not_fed_by_cycle",
                        "tail": g.names_of(tail),
                        "vertex": g.vertex_name(*vertex),
                    }),
                    NotPurelyInfinite::BreakingVertex(v) => {
                        json!({"type": "breaking_vertex", "vertex": g.vertex_name(*v)})
                    }
                };
                json!({"verdict": "no", "reason": reason})
            }
        };
        let dual = match self.dual_topologically_free {
            Some(b) => {
                json!({"verdict": if b { "yes" } else { "no" }, "basis": "equivalent to condition (L) for finite graphs"})
            }
            None => json!({"verdict": "abstain", "basis": "graph has infinite multiplicities"}),
        };
        json!({
            "aperiodic": self.aperiodic,
            "residually_aperiodic": self.residually_aperiodic,
            "intersection_property": self.intersection_property,
            "residual_intersection": self.residual_intersection,
            "exact": self.exact,
            "ideal_property_of_crossproduct": self.ideal_property_of_crossproduct.as_str(),
            "simple": simple,
            "purely_infinite": purely_infinite,
            "dual_topologically_free": dual,
            "witnesses": {
                "condition_l": match &self.condition_l {
                    ConditionL::Holds => Value::Null,
                    ConditionL::Fails(w) => cycle_json(g, w),
                },
                "condition_k": match &self.condition_k {
                    ConditionK::Holds => Value::Null,
                    ConditionK::Fails { vertex } => json!({"single_return_vertex": g.vertex_name(*vertex)}),
                },
            },
            "limit_exceeded": self.limit_exceeded,
        })
    }

    pub fn render_text(&self, g: &Graph) -> String {
        let mark = |b: bool| if b { "yes" } else { "no" };
        let mut s = String::new();
        writeln!(
            s,
            "vertices: {}  edges: {}",
            g.vertex_count(),
            g.edges().len()
        )
        .unwrap();
        writeln!(
            s,
            "condition (L) / aperiodic:            {}",
            mark(self.aperiodic)
        )
        .unwrap();
        if let ConditionL::Fails(w) = &self.condition_l {
            writeln!(s, "  cycle without entrance: {}", w.cycle.ids(g).join(" ")).unwrap();
        }
        writeln!(
            s,
            "condition (K) / residually aperiodic: {}",
            mark(self.residually_aperiodic)
        )
        .unwrap();
        if let ConditionK::Fails { vertex } = &self.condition_k {
            writeln!(s, "  single first return at: {}", g.vertex_name(*vertex)).unwrap();
        }
        writeln!(
            s,
            "intersection property:                {}",
            mark(self.intersection_property)
        )
        .unwrap();
        writeln!(
            s,
            "residual intersection property:       {}",
            mark(self.residual_intersection)
        )
        .unwrap();
        writeln!(
            s,
            "exact:                                {}",
            mark(self.exact)
        )
        .unwrap();
        writeln!(
            s,
            "ideal property:                       {}",
            self.ideal_property_of_crossproduct.as_str()
        )
        .unwrap();
        let simple = match &self.simple {
            Simple::Yes => "yes".to_string(),
            Simple::No(NotSimple::ZeroAlgebra) => "no (empty graph)".to_string(),
            Simple::No(NotSimple::ConditionLFails(_)) => "no (cycle without entrance)".to_string(),
            Simple::No(NotSimple::NontrivialLattice(p)) => {
                format!("no (invariant ideal {})", p.label(g))
            }
        };
        writeln!(s, "simple:                               {simple}").unwrap();
        let pi = match &self.purely_infinite {
            None => "unknown (enumeration limit exceeded)".to_string(),
            Some(PurelyInfinite::Yes(_)) => "yes".to_string(),
            Some(PurelyInfinite::No(NotPurelyInfinite::FailsK { vertex })) => {
                format!("no (condition (K) fails at {})", g.vertex_name(*vertex))
            }
            Some(PurelyInfinite::No(NotPurelyInfinite::TailVertexNotFedByCycle {
                tail,
                vertex,
            })) => format!(
                "no ({} in tail {{{}}} is not reached from a cycle in the tail)",
                g.vertex_name(*vertex),
                g.names_of(tail).join(",")
            ),
            Some(PurelyInfinite::No(NotPurelyInfinite::BreakingVertex(v))) => {
                format!("no (breaking vertex {})", g.vertex_name(*v))
            }
        };
        writeln!(s, "purely infinite:                      {pi}").unwrap();
        let dual = match self.dual_topologically_free {
            Some(b) => mark(b),
            None => "abstain (infinite multiplicities)",
        };
        writeln!(s, "dual action topologically free:       {dual}").unwrap();
        s
    }
}
