//! Directed multigraphs with possibly infinite edge multiplicities.
//!
//! Direction convention: an edge `e` goes from `src(e)` to `rng(e)`, and
//! `v >= w` means there is a path from `w` to `v` (the empty path included).
//! Every other module asks [`Graph::geq`] instead of re-deriving directions.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Add;
use std::sync::OnceLock;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};

/// An edge count: a natural number or ω (countably infinite).
///
/// `Finite(0)` only arises as a sum (e.g. an in-degree); edges themselves
/// always carry a positive multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Multiplicity {
    Finite(u64),
    Omega,
}

impl Multiplicity {
    pub const ZERO: Multiplicity = Multiplicity::Finite(0);

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    pub fn is_omega(self) -> bool {
        self == Multiplicity::Omega
    }

    /// `0 < self < ω`
    pub fn is_finite_nonzero(self) -> bool {
        matches!(self, Multiplicity::Finite(n) if n > 0)
    }

    /// Counts parallel choices, saturating at `cap` (ω always saturates).
    pub fn capped(self, cap: u64) -> u64 {
        match self {
            Multiplicity::Finite(n) => n.min(cap),
            Multiplicity::Omega => cap,
        }
    }
}

impl Add for Multiplicity {
    type Output = Multiplicity;

    fn add(self, rhs: Multiplicity) -> Multiplicity {
        match (self, rhs) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => {
                Multiplicity::Finite(a.checked_add(b).expect("edge multiplicity overflow"))
            }
            _ => Multiplicity::Omega,
        }
    }
}

impl std::iter::Sum for Multiplicity {
    fn sum<I: Iterator<Item = Multiplicity>>(iter: I) -> Multiplicity {
        iter.fold(Multiplicity::ZERO, Add::add)
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(n) => write!(f, "{n}"),
            Multiplicity::Omega => f.write_str("omega"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub rng: usize,
    pub mult: Multiplicity,
}

/// Edge description by vertex name, used to build a [`Graph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub id: Option<String>,
    pub src: String,
    pub rng: String,
    pub mult: Multiplicity,
}

impl EdgeSpec {
    pub fn new(src: &str, rng: &str, mult: Multiplicity) -> Self {
        EdgeSpec {
            id: None,
            src: src.to_string(),
            rng: rng.to_string(),
            mult,
        }
    }

    pub fn with_id(mut self, id: &str) -> Self {
        self.id = Some(id.to_string());
        self
    }
}

/// A strongly connected component; `nontrivial` iff it carries a cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub nontrivial: bool,
}

/// Number of first-return paths at a vertex, saturated at a cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReturnCount {
    Exactly(u64),
    AtLeast(u64),
}

impl ReturnCount {
    pub fn is_zero(self) -> bool {
        self == ReturnCount::Exactly(0)
    }

    pub fn is_one(self) -> bool {
        self == ReturnCount::Exactly(1)
    }
}

#[derive(Debug)]
pub struct Graph {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
    fingerprint: u64,
    // reach[w] = { v : v >= w }
    reach: OnceLock<Vec<VertexSet>>,
}

impl Clone for Graph {
    fn clone(&self) -> Self {
        Graph::from_parts(self.vertices.clone(), self.edges.clone())
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Validates and builds a graph. Edges without an id get `e<k>`, where
    /// `k` is the 1-based position of the edge in `edges`.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: Vec<EdgeSpec>) -> Result<Graph> {
        let mut names = Vec::with_capacity(vertices.len());
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            let v = v.as_ref();
            if index.insert(v.to_string(), i).is_some() {
                return Err(Error::DuplicateId {
                    location: format!("vertices[{i}]"),
                    kind: "vertex",
                    id: v.to_string(),
                });
            }
            names.push(v.to_string());
        }
        let mut seen = HashMap::new();
        let mut built = Vec::with_capacity(edges.len());
        for (k, spec) in edges.into_iter().enumerate() {
            let location = format!("edges[{k}]");
            let id = spec.id.unwrap_or_else(|| format!("e{}", k + 1));
            if seen.insert(id.clone(), k).is_some() {
                return Err(Error::DuplicateId {
                    location,
                    kind: "edge",
                    id,
                });
            }
            let lookup = |name: &str| {
                index
                    .get(name)
                    .copied()
                    .ok_or_else(|| Error::DanglingEndpoint {
                        location: location.clone(),
                        vertex: name.to_string(),
                    })
            };
            let src = lookup(&spec.src)?;
            let rng = lookup(&spec.rng)?;
            if spec.mult.is_zero() {
                return Err(Error::InvalidMultiplicity {
                    location,
                    token: "0".into(),
                });
            }
            built.push(Edge {
                id,
                src,
                rng,
                mult: spec.mult,
            });
        }
        Ok(Graph::from_parts(names, built))
    }

    fn from_parts(vertices: Vec<String>, edges: Vec<Edge>) -> Graph {
        let n = vertices.len();
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            out_edges[e.src].push(k);
            in_edges[e.rng].push(k);
        }
        let mut h = DefaultHasher::new();
        vertices.hash(&mut h);
        edges.hash(&mut h);
        Graph {
            vertices,
            index,
            edges,
            out_edges,
            in_edges,
            fingerprint: h.finish(),
            reach: OnceLock::new(),
        }
    }

    /// Structural hash identifying the graph; used to reject mixing pairs
    /// from different graphs.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> &Edge {
        &self.edges[k]
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.vertex_count())
    }

    pub fn full_set(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    /// Resolves vertex names into a set.
    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet> {
        let mut s = self.empty_set();
        for n in names {
            s.insert(self.vertex(n.as_ref())?);
        }
        Ok(s)
    }

    pub fn names_of(&self, set: &VertexSet) -> Vec<String> {
        set.iter().map(|v| self.vertices[v].clone()).collect()
    }

    /// True if some edge has multiplicity ω (the graph is then infinite).
    pub fn has_omega(&self) -> bool {
        self.edges.iter().any(|e| e.mult.is_omega())
    }

    pub fn total_multiplicity(&self) -> Multiplicity {
        self.edges.iter().map(|e| e.mult).sum()
    }

    /// `|r^{-1}(v)|`, counted with multiplicity.
    pub fn in_degree(&self, v: &str) -> Result<Multiplicity> {
        Ok(self.in_degree_at(self.vertex(v)?))
    }

    pub fn in_degree_at(&self, v: usize) -> Multiplicity {
        self.in_edges[v].iter().map(|&k| self.edges[k].mult).sum()
    }

    /// Multiplicity of the edges into `v` whose source satisfies `from`.
    pub fn in_degree_from(&self, v: usize, from: impl Fn(usize) -> bool) -> Multiplicity {
        self.in_edges[v]
            .iter()
            .map(|&k| &self.edges[k])
            .filter(|e| from(e.src))
            .map(|e| e.mult)
            .sum()
    }

    /// Out-neighbours of `v`, deduplicated, in edge order.
    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let mut seen = VertexSet::empty(self.vertex_count());
        self.out_edges[v]
            .iter()
            .map(|&k| self.edges[k].rng)
            .filter(move |&w| seen.insert(w))
    }

    fn reach_table(&self) -> &[VertexSet] {
        self.reach.get_or_init(|| {
            (0..self.vertex_count())
                .map(|w| {
                    let mut seen = self.empty_set();
                    seen.insert(w);
                    let mut stack = vec![w];
                    while let Some(x) = stack.pop() {
                        for &k in &self.out_edges[x] {
                            let y = self.edges[k].rng;
                            if seen.insert(y) {
                                stack.push(y);
                            }
                        }
                    }
                    seen
                })
                .collect()
        })
    }

    /// Decides `v >= w`, i.e. whether a path runs from `w` to `v`.
    pub fn geq(&self, v: &str, w: &str) -> Result<bool> {
        Ok(self.geq_at(self.vertex(v)?, self.vertex(w)?))
    }

    pub fn geq_at(&self, v: usize, w: usize) -> bool {
        self.reach_table()[w].contains(v)
    }

    /// `{ v : v >= w }`: everything reachable from `w`.
    pub fn above(&self, w: usize) -> &VertexSet {
        &self.reach_table()[w]
    }

    /// `{ w : v >= w }`: everything that reaches `v`.
    pub fn below(&self, v: usize) -> VertexSet {
        let n = self.vertex_count();
        VertexSet::from_indices(n, (0..n).filter(|&w| self.geq_at(v, w)))
    }

    /// Strongly connected components, ordered by their smallest vertex;
    /// vertices inside a component are sorted.
    pub fn scc_decomposition(&self) -> Vec<Component> {
        let comp = self.component_ids();
        let count = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (v, &c) in comp.iter().enumerate() {
            groups[c].push(v);
        }
        let mut out: Vec<Component> = groups
            .into_iter()
            .map(|vertices| {
                let nontrivial = vertices.len() > 1
                    || self.out_edges[vertices[0]]
                        .iter()
                        .any(|&k| self.edges[k].rng == vertices[0]);
                Component {
                    vertices,
                    nontrivial,
                }
            })
            .collect();
        out.sort_by_key(|c| c.vertices[0]);
        out
    }

    /// Iterative Tarjan; returns a component id per vertex.
    fn component_ids(&self) -> Vec<usize> {
        const UNSEEN: usize = usize::MAX;
        let n = self.vertex_count();
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comp = vec![UNSEEN; n];
        let mut next_index = 0;
        let mut next_comp = 0;
        for root in 0..n {
            if index[root] != UNSEEN {
                continue;
            }
            // (vertex, position in its out-edge list)
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if *pos < self.out_edges[v].len() {
                    let w = self.edges[self.out_edges[v][*pos]].rng;
                    *pos += 1;
                    if index[w] == UNSEEN {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        loop {
                            let w = stack.pop().expect("tarjan stack underflow");
                            on_stack[w] = false;
                            comp[w] = next_comp;
                            if w == v {
                                break;
                            }
                        }
                        next_comp += 1;
                    }
                }
            }
        }
        comp
    }

    /// True iff `v` lies on a cycle.
    pub fn on_cycle(&self, v: usize) -> bool {
        self.out_edges[v]
            .iter()
            .any(|&k| self.geq_at(v, self.edges[k].rng))
    }

    /// Counts first-return paths at `v`: paths from `v` back to `v` that
    /// visit `v` only at their endpoints. Parallel edges of multiplicity `m`
    /// give `m` choices; ω counts as at least `cap`.
    pub fn first_return_count(&self, v: &str, cap: u64) -> Result<ReturnCount> {
        Ok(self.first_return_count_at(self.vertex(v)?, cap))
    }

    pub fn first_return_count_at(&self, v: usize, cap: u64) -> ReturnCount {
        assert!(cap >= 1, "cap must be positive");
        let n = self.vertex_count();
        // Vertices other than v that reach v without passing through v.
        let mut back = self.empty_set();
        let mut stack: Vec<usize> = Vec::new();
        for &k in &self.in_edges[v] {
            let s = self.edges[k].src;
            if s != v && back.insert(s) {
                stack.push(s);
            }
        }
        while let Some(x) = stack.pop() {
            for &k in &self.in_edges[x] {
                let s = self.edges[k].src;
                if s != v && back.insert(s) {
                    stack.push(s);
                }
            }
        }
        // Only the part of `back` entered from v matters.
        let mut live = self.empty_set();
        for &k in &self.out_edges[v] {
            let t = self.edges[k].rng;
            if back.contains(t) && live.insert(t) {
                stack.push(t);
            }
        }
        while let Some(x) = stack.pop() {
            for &k in &self.out_edges[x] {
                let t = self.edges[k].rng;
                if back.contains(t) && live.insert(t) {
                    stack.push(t);
                }
            }
        }
        // A cycle inside `live` yields infinitely many first returns.
        let mut state = vec![0u8; n]; // 0 = new, 1 = open, 2 = done
        let mut order = Vec::new();
        for start in live.iter() {
            if state[start] != 0 {
                continue;
            }
            let mut call = vec![(start, 0usize)];
            state[start] = 1;
            while let Some(&mut (x, ref mut pos)) = call.last_mut() {
                if *pos < self.out_edges[x].len() {
                    let t = self.edges[self.out_edges[x][*pos]].rng;
                    *pos += 1;
                    if !live.contains(t) {
                        continue;
                    }
                    match state[t] {
                        0 => {
                            state[t] = 1;
                            call.push((t, 0));
                        }
                        1 => return ReturnCount::AtLeast(cap),
                        _ => {}
                    }
                } else {
                    state[x] = 2;
                    order.push(x);
                    call.pop();
                }
            }
        }
        // `order` is a post-order: successors first.
        let mut paths = vec![0u64; n];
        for &x in &order {
            let mut total = 0u64;
            for &k in &self.out_edges[x] {
                let e = &self.edges[k];
                let onward = if e.rng == v {
                    1
                } else if live.contains(e.rng) {
                    paths[e.rng]
                } else {
                    0
                };
                total = total
                    .saturating_add(e.mult.capped(cap).saturating_mul(onward))
                    .min(cap);
            }
            paths[x] = total;
        }
        let mut total = 0u64;
        for &k in &self.out_edges[v] {
            let e = &self.edges[k];
            let onward = if e.rng == v {
                1
            } else if live.contains(e.rng) {
                paths[e.rng]
            } else {
                0
            };
            total = total
                .saturating_add(e.mult.capped(cap).saturating_mul(onward))
                .min(cap);
        }
        if total >= cap {
            ReturnCount::AtLeast(cap)
        } else {
            ReturnCount::Exactly(total)
        }
    }

    /// Subgraph on the vertices in `keep`, keeping edges with both ends kept.
    pub fn induced(&self, keep: &VertexSet) -> Graph {
        let names: Vec<&str> = keep.iter().map(|v| self.vertices[v].as_str()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| keep.contains(e.src) && keep.contains(e.rng))
            .map(|e| {
                EdgeSpec::new(&self.vertices[e.src], &self.vertices[e.rng], e.mult).with_id(&e.id)
            })
            .collect();
        Graph::new(&names, edges).expect("induced subgraph of a valid graph")
    }

    pub fn edge_specs(&self) -> Vec<EdgeSpec> {
        self.edges
            .iter()
            .map(|e| {
                EdgeSpec::new(&self.vertices[e.src], &self.vertices[e.rng], e.mult).with_id(&e.id)
            })
            .collect()
    }
}

/// A nonempty composable edge sequence `μ1 … μn` with `s(μi) = r(μi+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    edges: Vec<usize>,
}

impl Path {
    pub fn new(g: &Graph, edges: Vec<usize>) -> Result<Path> {
        if edges.is_empty() {
            return Err(Error::InvalidPath("empty edge sequence".into()));
        }
        for pair in edges.windows(2) {
            let (a, b) = (g.edge(pair[0]), g.edge(pair[1]));
            if a.src != b.rng {
                return Err(Error::InvalidPath(format!(
                    "s({}) = {} but r({}) = {}",
                    a.id,
                    g.vertex_name(a.src),
                    b.id,
                    g.vertex_name(b.rng)
                )));
            }
        }
        Ok(Path { edges })
    }

    pub fn from_ids<S: AsRef<str>>(g: &Graph, ids: &[S]) -> Result<Path> {
        let edges = ids
            .iter()
            .map(|id| {
                g.edge_index(id.as_ref())
                    .ok_or_else(|| Error::InvalidPath(format!("unknown edge `{}`", id.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        Path::new(g, edges)
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `s(μ) = s(μn)`
    pub fn src(&self, g: &Graph) -> usize {
        g.edge(*self.edges.last().unwrap()).src
    }

    /// `r(μ) = r(μ1)`
    pub fn rng(&self, g: &Graph) -> usize {
        g.edge(self.edges[0]).rng
    }

    pub fn is_cycle(&self, g: &Graph) -> bool {
        self.rng(g) == self.src(g)
    }

    /// Vertices `r(μ1), r(μ2), …, r(μn)`.
    pub fn ranges<'a>(&'a self, g: &'a Graph) -> impl Iterator<Item = usize> + 'a {
        self.edges.iter().map(move |&k| g.edge(k).rng)
    }

    pub fn ids(&self, g: &Graph) -> Vec<String> {
        self.edges.iter().map(|&k| g.edge(k).id.clone()).collect()
    }
}
