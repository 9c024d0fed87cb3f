//! Partial actions of free groups and ℤ on finite T0 spaces.
//!
//! A finite T0 space is a poset: `p ⊑ q` means `q ∈ cl{p}`. Open sets are
//! the down-sets, closed sets the up-sets, and `cl{p}` is the up-set of `p`.
//!
//! Generators are partial homeomorphisms between open sets. A reduced word
//! `g₁…gₙ` acts as `θ_{g₁} ∘ … ∘ θ_{gₙ}` (rightmost letter first) on its
//! natural domain; this is the canonical partial action they generate.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::limits::EnumLimit;

pub type PointSet = BitSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteT0Space {
    points: Vec<String>,
    /// `up[p]` = `cl{p}` = `{q : p ⊑ q}`.
    up: Vec<PointSet>,
    down: Vec<PointSet>,
}

impl FiniteT0Space {
    /// Builds the space from generating pairs `(p, q)` meaning `p ⊑ q`;
    /// the order is their reflexive-transitive closure.
    pub fn new<S: AsRef<str>>(points: &[S], relations: &[(S, S)]) -> Result<FiniteT0Space> {
        let points: Vec<String> = points.iter().map(|p| p.as_ref().to_string()).collect();
        let n = points.len();
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidSpace(format!("duplicate point `{p}`")));
            }
        }
        let index = |name: &str| {
            points
                .iter()
                .position(|p| p == name)
                .ok_or_else(|| Error::UnknownPoint(name.to_string()))
        };
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for (p, q) in relations {
            rel[index(p.as_ref())?][index(q.as_ref())?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if rel[i][k] {
                    let through = rel[k].clone();
                    for (x, r) in rel[i].iter_mut().zip(through) {
                        *x |= r;
                    }
                }
            }
        }
        FiniteT0Space::from_relation(points, |p, q| rel[p][q])
    }

    /// `leq(p, q)` must already be a partial order.
    pub fn from_relation(
        points: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<FiniteT0Space> {
        let n = points.len();
        for p in 0..n {
            if !leq(p, p) {
                return Err(Error::InvalidSpace(
                    "specialization is not reflexive".into(),
                ));
            }
            for q in 0..n {
                if p != q && leq(p, q) && leq(q, p) {
                    return Err(Error::InvalidSpace(format!(
                        "`{}` and `{}` specialize to each other (not T0)",
                        points[p], points[q]
                    )));
                }
                for r in 0..n {
                    if leq(p, q) && leq(q, r) && !leq(p, r) {
                        return Err(Error::InvalidSpace(
                            "specialization is not transitive".into(),
                        ));
                    }
                }
            }
        }
        let up = (0..n)
            .map(|p| BitSet::from_indices(n, (0..n).filter(|&q| leq(p, q))))
            .collect();
        let down = (0..n)
            .map(|q| BitSet::from_indices(n, (0..n).filter(|&p| leq(p, q))))
            .collect();
        Ok(FiniteT0Space { points, up, down })
    }

    pub fn discrete<S: AsRef<str>>(points: &[S]) -> Result<FiniteT0Space> {
        FiniteT0Space::new(points, &[])
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn name(&self, p: usize) -> &str {
        &self.points[p]
    }

    pub fn point(&self, name: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<PointSet> {
        let mut s = self.empty_set();
        for name in names {
            s.insert(self.point(name.as_ref())?);
        }
        Ok(s)
    }

    pub fn names_of(&self, s: &PointSet) -> Vec<String> {
        s.iter().map(|p| self.points[p].clone()).collect()
    }

    pub fn empty_set(&self) -> PointSet {
        BitSet::empty(self.len())
    }

    pub fn full_set(&self) -> PointSet {
        BitSet::full(self.len())
    }

    /// `p ⊑ q`, i.e. `q ∈ cl{p}`.
    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.up[p].contains(q)
    }

    /// Pairs `(p, q)` with `p ⊏ q` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for p in 0..n {
            for q in self.up[p].iter().filter(|&q| q != p) {
                if !(0..n).any(|r| r != p && r != q && self.leq(p, r) && self.leq(r, q)) {
                    out.push((p, q));
                }
            }
        }
        out
    }

    pub fn is_open(&self, s: &PointSet) -> bool {
        s.iter().all(|q| self.down[q].is_subset(s))
    }

    pub fn is_closed(&self, s: &PointSet) -> bool {
        s.iter().all(|p| self.up[p].is_subset(s))
    }

    pub fn closure(&self, s: &PointSet) -> PointSet {
        let mut out = self.empty_set();
        for p in s.iter() {
            out.union_with(&self.up[p]);
        }
        out
    }

    /// Largest open subset of `s`.
    pub fn interior(&self, s: &PointSet) -> PointSet {
        BitSet::from_indices(self.len(), s.iter().filter(|&q| self.down[q].is_subset(s)))
    }

    /// Smallest open superset of `s`.
    pub fn open_hull(&self, s: &PointSet) -> PointSet {
        let mut out = self.empty_set();
        for q in s.iter() {
            out.union_with(&self.down[q]);
        }
        out
    }

    /// Subspace on `keep`; points are renumbered in order.
    pub fn subspace(&self, keep: &PointSet) -> FiniteT0Space {
        let idx: Vec<usize> = keep.iter().collect();
        let names = idx.iter().map(|&p| self.points[p].clone()).collect();
        FiniteT0Space::from_relation(names, |a, b| self.leq(idx[a], idx[b]))
            .expect("subspace of a T0 space")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "points": self.points,
            "specialization": self.covers().iter()
                .map(|&(p, q)| [self.points[p].clone(), self.points[q].clone()])
                .collect::<Vec<_>>(),
        })
    }
}

/// A bijection between two subsets of a finite set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialHomeo {
    map: Vec<Option<usize>>,
}

impl PartialHomeo {
    pub fn identity(n: usize) -> PartialHomeo {
        PartialHomeo {
            map: (0..n).map(Some).collect(),
        }
    }

    pub fn identity_on(n: usize, s: &PointSet) -> PartialHomeo {
        PartialHomeo {
            map: (0..n).map(|x| s.contains(x).then_some(x)).collect(),
        }
    }

    /// From `(x, y)` pairs; fails unless the pairs form an injective function.
    pub fn from_pairs(
        n: usize,
        pairs: &[(usize, usize)],
    ) -> std::result::Result<PartialHomeo, String> {
        let mut map = vec![None; n];
        let mut hit = vec![false; n];
        for &(x, y) in pairs {
            if map[x].is_some() {
                return Err(format!("point {x} is mapped twice"));
            }
            if hit[y] {
                return Err(format!("point {y} is hit twice"));
            }
            map[x] = Some(y);
            hit[y] = true;
        }
        Ok(PartialHomeo { map })
    }

    pub fn universe(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.map[x]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| (x, y)))
    }

    pub fn domain(&self) -> PointSet {
        BitSet::from_indices(self.universe(), self.pairs().map(|(x, _)| x))
    }

    pub fn image(&self) -> PointSet {
        BitSet::from_indices(self.universe(), self.pairs().map(|(_, y)| y))
    }

    pub fn image_of(&self, s: &PointSet) -> PointSet {
        BitSet::from_indices(self.universe(), s.iter().filter_map(|x| self.map[x]))
    }

    pub fn is_empty(&self) -> bool {
        self.map.iter().all(Option::is_none)
    }

    pub fn inverse(&self) -> PartialHomeo {
        let mut map = vec![None; self.universe()];
        for (x, y) in self.pairs() {
            map[y] = Some(x);
        }
        PartialHomeo { map }
    }

    /// `self ∘ inner` on `{x : inner(x) ∈ dom(self)}`.
    pub fn compose(&self, inner: &PartialHomeo) -> PartialHomeo {
        PartialHomeo {
            map: inner
                .map
                .iter()
                .map(|y| y.and_then(|y| self.map[y]))
                .collect(),
        }
    }

    pub fn fixed_points(&self) -> PointSet {
        BitSet::from_indices(
            self.universe(),
            self.pairs().filter(|(x, y)| x == y).map(|(x, _)| x),
        )
    }

    /// Restriction to `keep`, renumbered; `keep` must contain the image of
    /// `keep ∩ domain`.
    pub fn restrict(&self, keep: &PointSet) -> PartialHomeo {
        let idx: Vec<usize> = keep.iter().collect();
        let pos = |x: usize| idx.iter().position(|&p| p == x);
        PartialHomeo {
            map: idx.iter().map(|&x| self.map[x].and_then(pos)).collect(),
        }
    }

    /// Domain and image open, and an order isomorphism between them.
    pub fn check_homeomorphism(&self, space: &FiniteT0Space) -> std::result::Result<(), String> {
        if self.universe() != space.len() {
            return Err("map and space have different sizes".into());
        }
        if !space.is_open(&self.domain()) {
            return Err("domain is not open".into());
        }
        if !space.is_open(&self.image()) {
            return Err("image is not open".into());
        }
        for (x, fx) in self.pairs() {
            for (y, fy) in self.pairs() {
                if space.leq(x, y) != space.leq(fx, fy) {
                    return Err(format!(
                        "not a homeomorphism: order between `{}` and `{}` is not preserved",
                        space.name(x),
                        space.name(y)
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    /// Free group on `k` generators.
    Free(usize),
    /// ℤ with its single generator.
    Integer,
}

impl Group {
    pub fn parse(text: &str) -> Result<Group> {
        let t = text.trim();
        if t == "Z" {
            return Ok(Group::Integer);
        }
        t.strip_prefix('F')
            .and_then(|k| k.parse::<usize>().ok())
            .map(Group::Free)
            .ok_or_else(|| Error::UnsupportedGroup(text.to_string()))
    }

    pub fn rank(self) -> usize {
        match self {
            Group::Free(k) => k,
            Group::Integer => 1,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Free(k) => write!(f, "F{k}"),
            Group::Integer => f.write_str("Z"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Letter {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }
}

/// A reduced word; the leftmost letter acts last.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

const MAX_EXPONENT: i64 = 1 << 16;

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    /// Freely reduces `letters`.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    #[allow(clippy::len_without_is_empty)] // `is_identity` plays that role
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// `self · other`, reduced.
    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.letters.iter().chain(&other.letters).copied())
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// Parses e.g. `g*h^-1`, `g·g⁻¹`, `g^3 h`, `e`, or (for ℤ) `-2`.
    pub fn parse(text: &str, names: &[String], group: Group) -> Result<Word> {
        let bad = |reason: &str| Error::MalformedWord {
            word: text.to_string(),
            reason: reason.to_string(),
        };
        let mut letters = Vec::new();
        let normalized = text
            .replace('⁻', "^-")
            .replace('¹', "1")
            .replace(['*', '·', '.'], " ");
        for token in normalized.split_whitespace() {
            if token == "e" {
                continue;
            }
            if group == Group::Integer {
                if let Ok(k) = token.parse::<i64>() {
                    push_power(&mut letters, 0, k).map_err(|r| bad(&r))?;
                    continue;
                }
            }
            let (name, exp) = match token.split_once('^') {
                Some((name, exp)) => (name, exp.parse::<i64>().map_err(|_| bad("bad exponent"))?),
                None => (token, 1),
            };
            let gen = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| bad(&format!("unknown generator `{name}`")))?;
            push_power(&mut letters, gen, exp).map_err(|r| bad(&r))?;
        }
        Ok(Word::from_letters(letters))
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "e".into();
        }
        self.letters
            .iter()
            .map(|l| {
                if l.inverse {
                    format!("{}^-1", names[l.gen])
                } else {
                    names[l.gen].clone()
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

fn push_power(letters: &mut Vec<Letter>, gen: usize, k: i64) -> std::result::Result<(), String> {
    if k.abs() > MAX_EXPONENT {
        return Err(format!("exponent {k} is too large"));
    }
    let l = Letter {
        gen,
        inverse: k < 0,
    };
    letters.extend(std::iter::repeat_n(l, k.unsigned_abs() as usize));
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePartialAction {
    space: FiniteT0Space,
    group: Group,
    names: Vec<String>,
    generators: Vec<PartialHomeo>,
    inverses: Vec<PartialHomeo>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonAction {
    points: Vec<String>,
    #[serde(default)]
    specialization: Vec<(String, String)>,
    group: String,
    #[serde(default)]
    generators: Vec<JsonGenerator>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGenerator {
    name: String,
    #[serde(default)]
    map: Vec<(String, String)>,
}

fn valid_generator_name(name: &str) -> bool {
    !name.is_empty()
        && name != "e"
        && name.parse::<i64>().is_err()
        && name.chars().all(|c| c.is_alphanumeric() || c == '_')
}

impl FinitePartialAction {
    pub fn new(
        space: FiniteT0Space,
        group: Group,
        generators: Vec<(String, PartialHomeo)>,
    ) -> Result<FinitePartialAction> {
        if generators.len() != group.rank() {
            return Err(Error::InvalidGenerator {
                name: group.to_string(),
                reason: format!(
                    "group needs {} generator(s), got {}",
                    group.rank(),
                    generators.len()
                ),
            });
        }
        let mut names = Vec::new();
        let mut maps = Vec::new();
        for (name, map) in generators {
            let invalid = |reason: String| Error::InvalidGenerator {
                name: name.clone(),
                reason,
            };
            if !valid_generator_name(&name) {
                return Err(invalid(
                    "names are alphanumeric, not `e` and not an integer".into(),
                ));
            }
            if names.contains(&name) {
                return Err(invalid("duplicate generator name".into()));
            }
            map.check_homeomorphism(&space).map_err(invalid)?;
            names.push(name);
            maps.push(map);
        }
        let inverses = maps.iter().map(PartialHomeo::inverse).collect();
        Ok(FinitePartialAction {
            space,
            group,
            names,
            generators: maps,
            inverses,
        })
    }

    /// The trivial action of `group` (every generator acts as the identity).
    pub fn trivial(space: FiniteT0Space, group: Group) -> FinitePartialAction {
        let gens = (0..group.rank())
            .map(|i| (format!("g{}", i + 1), PartialHomeo::identity(space.len())))
            .collect();
        FinitePartialAction::new(space, group, gens).expect("identity maps are homeomorphisms")
    }

    pub fn from_json(text: &str) -> Result<FinitePartialAction> {
        let raw: JsonAction = serde_json::from_str(text).map_err(|e| Error::Syntax {
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        let space = FiniteT0Space::new(&raw.points, &raw.specialization)?;
        let group = Group::parse(&raw.group)?;
        let mut gens = Vec::new();
        for g in raw.generators {
            let mut pairs = Vec::new();
            for (x, y) in &g.map {
                pairs.push((space.point(x)?, space.point(y)?));
            }
            let map = PartialHomeo::from_pairs(space.len(), &pairs).map_err(|reason| {
                Error::InvalidGenerator {
                    name: g.name.clone(),
                    reason,
                }
            })?;
            gens.push((g.name, map));
        }
        FinitePartialAction::new(space, group, gens)
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.space.to_json();
        v["group"] = json!(self.group.to_string());
        v["generators"] = json!(self
            .names
            .iter()
            .zip(&self.generators)
            .map(|(name, m)| json!({
                "name": name,
                "map": m.pairs().map(|(x, y)| [self.space.name(x), self.space.name(y)]).collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>());
        v
    }

    pub fn space(&self) -> &FiniteT0Space {
        &self.space
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.names.len())
            .flat_map(|gen| {
                [
                    Letter {
                        gen,
                        inverse: false,
                    },
                    Letter { gen, inverse: true },
                ]
            })
            .collect()
    }

    pub fn letter_map(&self, l: Letter) -> &PartialHomeo {
        if l.inverse {
            &self.inverses[l.gen]
        } else {
            &self.generators[l.gen]
        }
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Word::parse(text, &self.names, self.group)
    }

    /// The restriction to a closed invariant set, as an action on the subspace.
    pub fn restrict(&self, keep: &PointSet) -> FinitePartialAction {
        let space = self.space.subspace(keep);
        let gens = self
            .names
            .iter()
            .cloned()
            .zip(self.generators.iter().map(|m| m.restrict(keep)))
            .collect();
        FinitePartialAction::new(space, self.group, gens)
            .expect("restriction to an invariant subspace")
    }
}

/// `θ_w`: composition along the reduced word, on its natural domain.
pub fn element_map(a: &FinitePartialAction, w: &Word) -> PartialHomeo {
    w.letters()
        .iter()
        .rev()
        .fold(PartialHomeo::identity(a.space.len()), |acc, &l| {
            a.letter_map(l).compose(&acc)
        })
}

/// All points reachable from `x` by generators and their inverses.
pub fn orbit(a: &FinitePartialAction, x: usize) -> PointSet {
    let mut seen = a.space.empty_set();
    seen.insert(x);
    let mut queue = VecDeque::from([x]);
    let letters = a.letters();
    while let Some(y) = queue.pop_front() {
        for &l in &letters {
            if let Some(z) = a.letter_map(l).apply(y) {
                if seen.insert(z) {
                    queue.push_back(z);
                }
            }
        }
    }
    seen
}

/// Orbits, ordered by their smallest point.
pub fn orbits(a: &FinitePartialAction) -> Vec<PointSet> {
    let mut covered = a.space.empty_set();
    let mut out = Vec::new();
    for x in 0..a.space.len() {
        if !covered.contains(x) {
            let o = orbit(a, x);
            covered.union_with(&o);
            out.push(o);
        }
    }
    out
}

pub fn orbit_closure(a: &FinitePartialAction, x: usize) -> PointSet {
    a.space.closure(&orbit(a, x))
}

/// Points whose orbit closure equals that of `x`.
pub fn quasi_orbit(a: &FinitePartialAction, x: usize) -> PointSet {
    let target = orbit_closure(a, x);
    BitSet::from_indices(
        a.space.len(),
        (0..a.space.len()).filter(|&y| orbit_closure(a, y) == target),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiOrbitSpace {
    /// Classes ordered by their smallest point.
    pub classes: Vec<PointSet>,
    /// `leq[i][j]`: class `j` lies in the closure of class `i`.
    pub leq: Vec<Vec<bool>>,
}

/// Quotient by equality of orbit closures, with the quotient topology.
///
/// A set of classes is open iff its union is open, so class `Q` lies in
/// the closure of class `P` iff `P` meets the smallest saturated open set
/// containing `Q`.
pub fn quasi_orbit_space(a: &FinitePartialAction) -> Result<QuasiOrbitSpace> {
    let n = a.space.len();
    let mut classes: Vec<PointSet> = Vec::new();
    let mut class_of = vec![usize::MAX; n];
    for x in 0..n {
        if class_of[x] == usize::MAX {
            let q = quasi_orbit(a, x);
            for y in q.iter() {
                class_of[y] = classes.len();
            }
            classes.push(q);
        }
    }
    let saturate = |s: &PointSet| {
        let mut out = s.clone();
        for x in s.iter() {
            out.union_with(&classes[class_of[x]]);
        }
        out
    };
    let hulls: Vec<PointSet> = classes
        .iter()
        .map(|q| {
            let mut u = q.clone();
            loop {
                let next = saturate(&a.space.open_hull(&u));
                if next == u {
                    break u;
                }
                u = next;
            }
        })
        .collect();
    let k = classes.len();
    let leq: Vec<Vec<bool>> = (0..k)
        .map(|p| (0..k).map(|q| !classes[p].is_disjoint(&hulls[q])).collect())
        .collect();
    if (0..k).any(|p| (0..k).any(|q| p != q && leq[p][q] && leq[q][p])) {
        return Err(Error::Internal("quasi-orbit space is not T0".into()));
    }
    Ok(QuasiOrbitSpace { classes, leq })
}

impl QuasiOrbitSpace {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// The quotient as a space whose points are named `{a,b}` after their members.
    pub fn to_space(&self, base: &FiniteT0Space) -> FiniteT0Space {
        let names = self
            .classes
            .iter()
            .map(|c| format!("{{{}}}", base.names_of(c).join(",")))
            .collect();
        FiniteT0Space::from_relation(names, |p, q| self.leq[p][q]).expect("quasi-orbit space is T0")
    }
}

/// `θ_t(V ∩ Ω_{t⁻¹}) ⊆ V` for every generator and inverse.
pub fn is_invariant(a: &FinitePartialAction, v: &PointSet) -> bool {
    a.letters()
        .into_iter()
        .all(|l| a.letter_map(l).image_of(v).is_subset(v))
}

/// Invariant sets are exactly the unions of orbits; listed in canonical order.
pub fn invariant_subsets(a: &FinitePartialAction, limit: EnumLimit) -> Result<Vec<PointSet>> {
    let orbits = orbits(a);
    limit.check("orbit set", orbits.len())?;
    let mut out: Vec<PointSet> = BitSet::full(orbits.len())
        .subsets()
        .into_iter()
        .map(|pick| {
            let mut s = a.space.empty_set();
            for i in pick.iter() {
                s.union_with(&orbits[i]);
            }
            s
        })
        .collect();
    out.sort();
    Ok(out)
}

pub fn closed_invariant_subsets(
    a: &FinitePartialAction,
    limit: EnumLimit,
) -> Result<Vec<PointSet>> {
    Ok(invariant_subsets(a, limit)?
        .into_iter()
        .filter(|s| a.space.is_closed(s))
        .collect())
}

/// No closed invariant sets besides `∅` and `Ω`; equivalently every orbit is dense.
pub fn is_minimal(a: &FinitePartialAction) -> bool {
    (0..a.space.len()).all(|x| orbit_closure(a, x).is_full())
}

/// Union of `Fix(θ_t)` over all `t ≠ e`.
///
/// Walks the reduced words by prepending letters, keeping one state per
/// (partial map, leftmost letter); maps with empty domain are dropped since
/// they only extend to empty maps.
pub fn fixed_point_union(a: &FinitePartialAction) -> PointSet {
    let letters = a.letters();
    let mut union = a.space.empty_set();
    let mut seen: HashSet<(PartialHomeo, Letter)> = HashSet::new();
    let mut queue = VecDeque::new();
    for &l in &letters {
        let m = a.letter_map(l).clone();
        if !m.is_empty() && seen.insert((m.clone(), l)) {
            queue.push_back((m, l));
        }
    }
    while let Some((m, first)) = queue.pop_front() {
        union.union_with(&m.fixed_points());
        for &l in &letters {
            if l == first.inv() {
                continue;
            }
            let next = a.letter_map(l).compose(&m);
            if !next.is_empty() && seen.insert((next.clone(), l)) {
                queue.push_back((next, l));
            }
        }
    }
    union
}

pub fn is_topologically_free(a: &FinitePartialAction) -> bool {
    a.space.interior(&fixed_point_union(a)).is_empty()
}

/// The restriction to every closed invariant set is topologically free.
pub fn is_residually_topologically_free(a: &FinitePartialAction, limit: EnumLimit) -> Result<bool> {
    Ok(closed_invariant_subsets(a, limit)?
        .iter()
        .filter(|c| !c.is_empty())
        .all(|c| is_topologically_free(&a.restrict(c))))
}

/// Candidate witness for G-paradoxicality (`split = Some(n)`) or
/// G-infiniteness (`split = None`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub v: PointSet,
    pub parts: Vec<(PointSet, Word)>,
    pub split: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonDecomposition {
    #[serde(rename = "V")]
    v: Vec<String>,
    parts: Vec<JsonPart>,
    #[serde(default)]
    split: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonPart {
    set: Vec<String>,
    word: String,
}

impl Decomposition {
    /// `{"V": [...], "parts": [{"set": [...], "word": "g*h"}], "split": n}`.
    pub fn from_json(a: &FinitePartialAction, text: &str) -> Result<Decomposition> {
        let malformed = |e: Error| Error::MalformedDecomposition(e.to_string());
        let raw: JsonDecomposition =
            serde_json::from_str(text).map_err(|e| Error::MalformedDecomposition(e.to_string()))?;
        let v = a.space.set_of(&raw.v).map_err(malformed)?;
        let mut parts = Vec::new();
        for p in raw.parts {
            let set = a.space.set_of(&p.set).map_err(malformed)?;
            let word = a.parse_word(&p.word).map_err(malformed)?;
            parts.push((set, word));
        }
        Ok(Decomposition {
            v,
            parts,
            split: raw.split,
        })
    }

    pub fn to_json(&self, a: &FinitePartialAction) -> Value {
        let mut v = json!({
            "V": a.space.names_of(&self.v),
            "parts": self.parts.iter().map(|(s, w)| json!({
                "set": a.space.names_of(s),
                "word": w.display(a.generator_names()),
            })).collect::<Vec<_>>(),
        });
        if let Some(n) = self.split {
            v["split"] = json!(n);
        }
        v
    }

    fn check_shape(&self, a: &FinitePartialAction, paradoxical: bool) -> Result<()> {
        let n = a.space.len();
        if self.v.universe() != n || self.parts.iter().any(|(s, _)| s.universe() != n) {
            return Err(Error::MalformedDecomposition(
                "sets do not belong to this space".into(),
            ));
        }
        let rank = a.generator_names().len();
        if self
            .parts
            .iter()
            .any(|(_, w)| w.letters().iter().any(|l| l.gen >= rank))
        {
            return Err(Error::MalformedDecomposition(
                "word uses an unknown generator".into(),
            ));
        }
        match (paradoxical, self.split) {
            (true, None) => Err(Error::MalformedDecomposition(
                "paradoxical witness needs `split`".into(),
            )),
            (true, Some(k)) if k > self.parts.len() => Err(Error::MalformedDecomposition(format!(
                "split {k} exceeds {} parts",
                self.parts.len()
            ))),
            (false, Some(_)) => Err(Error::MalformedDecomposition(
                "infiniteness witness takes no `split`".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// First violated clause of a witness definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `V` must be nonempty.
    EmptySet,
    /// `V` (`part = None`) or some `V_i` is not open.
    NotOpen { part: Option<usize> },
    /// At least one part is required.
    NoParts,
    /// Clause 1: the parts (or one half of them) do not cover `V`.
    Cover { half: Option<usize> },
    /// Clause 2: `V_i ⊄ Ω_{t_i⁻¹}`.
    NotInDomain { part: usize },
    /// Clause 2: `θ_{t_i}(V_i) ⊄ V`.
    ImageOutside { part: usize },
    /// Clause 2: the closure of the images is not a proper subset of `V`.
    ClosureNotProper,
    /// Clause 3: images of parts `i` and `j` intersect.
    Overlap { i: usize, j: usize },
    /// All clauses were met, which the counting argument rules out on a
    /// finite space; never expected.
    FiniteCounting,
}

impl Violation {
    /// Definition clause the violation refers to (0 for preconditions).
    pub fn clause(&self) -> u8 {
        match self {
            Violation::EmptySet
            | Violation::NotOpen { .. }
            | Violation::NoParts
            | Violation::FiniteCounting => 0,
            Violation::Cover { .. } => 1,
            Violation::NotInDomain { .. }
            | Violation::ImageOutside { .. }
            | Violation::ClosureNotProper => 2,
            Violation::Overlap { .. } => 3,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptySet => f.write_str("V must be nonempty"),
            Violation::NotOpen { part: None } => f.write_str("V is not open"),
            Violation::NotOpen { part: Some(i) } => write!(f, "V_{} is not open", i + 1),
            Violation::NoParts => f.write_str("at least one part is required"),
            Violation::Cover { half: None } => f.write_str("clause 1: the parts do not cover V"),
            Violation::Cover { half: Some(0) } => f.write_str("clause 1: V_1..V_n do not cover V"),
            Violation::Cover { half: Some(_) } => {
                f.write_str("clause 1: V_n+1..V_n+m do not cover V")
            }
            Violation::NotInDomain { part } => write!(
                f,
                "clause 2: V_{} is not inside the domain of t_{}",
                part + 1,
                part + 1
            ),
            Violation::ImageOutside { part } => {
                write!(f, "clause 2: the image of V_{} leaves V", part + 1)
            }
            Violation::ClosureNotProper => {
                f.write_str("clause 2: the closure of the images is not a proper subset of V")
            }
            Violation::Overlap { i, j } => write!(
                f,
                "clause 3: images of V_{} and V_{} intersect",
                i + 1,
                j + 1
            ),
            Violation::FiniteCounting => f.write_str("impossible on a finite space (counting)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessCheck {
    Valid,
    Violation(Violation),
}

impl WitnessCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, WitnessCheck::Valid)
    }
}

fn images(a: &FinitePartialAction, d: &Decomposition) -> Vec<PointSet> {
    d.parts
        .iter()
        .map(|(s, w)| element_map(a, w).image_of(s))
        .collect()
}

fn union_all<'a>(n: usize, sets: impl IntoIterator<Item = &'a PointSet>) -> PointSet {
    let mut out = BitSet::empty(n);
    for s in sets {
        out.union_with(s);
    }
    out
}

fn common_checks(a: &FinitePartialAction, d: &Decomposition) -> Option<Violation> {
    if !a.space.is_open(&d.v) {
        return Some(Violation::NotOpen { part: None });
    }
    d.parts
        .iter()
        .position(|(s, _)| !a.space.is_open(s))
        .map(|i| Violation::NotOpen { part: Some(i) })
}

fn first_overlap(imgs: &[PointSet]) -> Option<Violation> {
    for i in 0..imgs.len() {
        for j in i + 1..imgs.len() {
            if !imgs[i].is_disjoint(&imgs[j]) {
                return Some(Violation::Overlap { i, j });
            }
        }
    }
    None
}

fn not_in_domain(a: &FinitePartialAction, d: &Decomposition) -> Option<Violation> {
    d.parts
        .iter()
        .position(|(s, w)| !s.is_subset(&element_map(a, w).domain()))
        .map(|part| Violation::NotInDomain { part })
}

/// Checks the clauses of G-paradoxicality in order and reports the first failure.
pub fn check_paradoxical_witness(
    a: &FinitePartialAction,
    d: &Decomposition,
) -> Result<WitnessCheck> {
    d.check_shape(a, true)?;
    let n = a.space.len();
    let split = d.split.expect("checked by check_shape");
    let violation = (|| {
        if d.v.is_empty() {
            return Some(Violation::EmptySet);
        }
        if let Some(v) = common_checks(a, d) {
            return Some(v);
        }
        let (first, second) = d.parts.split_at(split);
        for (half, parts) in [first, second].into_iter().enumerate() {
            if union_all(n, parts.iter().map(|(s, _)| s)) != d.v {
                return Some(Violation::Cover { half: Some(half) });
            }
        }
        if let Some(v) = not_in_domain(a, d) {
            return Some(v);
        }
        let imgs = images(a, d);
        if let Some(part) = imgs.iter().position(|img| !img.is_subset(&d.v)) {
            return Some(Violation::ImageOutside { part });
        }
        first_overlap(&imgs)
    })();
    Ok(WitnessCheck::Violation(violation.unwrap_or_else(|| {
        debug_assert!(false, "paradoxical decomposition on a finite space");
        Violation::FiniteCounting
    })))
}

/// Checks the clauses of G-infiniteness in order and reports the first failure.
pub fn check_infinite_witness(a: &FinitePartialAction, d: &Decomposition) -> Result<WitnessCheck> {
    d.check_shape(a, false)?;
    let n = a.space.len();
    let violation = (|| {
        if let Some(v) = common_checks(a, d) {
            return Some(v);
        }
        if d.parts.is_empty() {
            return Some(Violation::NoParts);
        }
        if union_all(n, d.parts.iter().map(|(s, _)| s)) != d.v {
            return Some(Violation::Cover { half: None });
        }
        if let Some(v) = not_in_domain(a, d) {
            return Some(v);
        }
        let imgs = images(a, d);
        let closure = a.space.closure(&union_all(n, &imgs));
        if !(closure.is_subset(&d.v) && closure != d.v) {
            return Some(Violation::ClosureNotProper);
        }
        first_overlap(&imgs)
    })();
    Ok(WitnessCheck::Violation(violation.unwrap_or_else(|| {
        debug_assert!(false, "infinite decomposition on a finite space");
        Violation::FiniteCounting
    })))
}

/// Why no open set of a finite space is G-infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotGInfinite {
    /// The parts cover `V`, so their sizes sum to at least `|V|`; partial
    /// maps are injective and the images are disjoint, so the union of the
    /// images has at least `|V|` points, yet it must sit inside a proper
    /// subset of `V`.
    FiniteCounting { points: usize },
}

impl fmt::Display for NotGInfinite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotGInfinite::FiniteCounting { points } => write!(
                f,
                "not G-infinite: disjoint injective images of a cover of V have at least {points} points, \
                 more than any proper subset of V"
            ),
        }
    }
}

pub fn decide_g_infinite(a: &FinitePartialAction, v: &PointSet) -> Result<NotGInfinite> {
    if v.universe() != a.space.len() {
        return Err(Error::Internal("set does not belong to this space".into()));
    }
    if v.is_empty() {
        return Err(Error::EmptySet);
    }
    if !a.space.is_open(v) {
        return Err(Error::NotOpen);
    }
    Ok(NotGInfinite::FiniteCounting { points: v.len() })
}
