//! Random graphs, partial actions and decompositions for testing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bitset::BitSet;
use crate::graph::{EdgeSpec, Graph, Multiplicity};
use crate::paction::{
    Decomposition, FinitePartialAction, FiniteT0Space, Group, Letter, PartialHomeo, PointSet, Word,
};

fn random_mult<R: Rng>(rng: &mut R) -> Multiplicity {
    match rng.gen_range(0..10) {
        0..=5 => Multiplicity::Finite(1),
        6 | 7 => Multiplicity::Finite(2),
        8 => Multiplicity::Finite(3),
        _ => Multiplicity::Omega,
    }
}

/// A graph on `1..=max_vertices` vertices named `v0, v1, …`.
pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize) -> Graph {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let density = rng.gen_range(0.05..0.45);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            while rng.gen_bool(density) {
                edges.push(EdgeSpec::new(&names[u], &names[v], random_mult(rng)));
                if edges.len() > 4 * n * n {
                    break;
                }
            }
        }
    }
    Graph::new(&names, edges).expect("random graph is valid")
}

pub fn random_space<R: Rng>(rng: &mut R, max_points: usize) -> FiniteT0Space {
    let n = rng.gen_range(1..=max_points.max(1));
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let density = rng.gen_range(0.0..0.5);
    let mut rel = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                rel.push((names[perm[i]].clone(), names[perm[j]].clone()));
            }
        }
    }
    FiniteT0Space::new(&names, &rel).expect("relation along a permutation is acyclic")
}

pub fn random_open_set<R: Rng>(rng: &mut R, space: &FiniteT0Space) -> PointSet {
    let p = rng.gen_range(0.1..0.7);
    let s = BitSet::from_indices(space.len(), (0..space.len()).filter(|_| rng.gen_bool(p)));
    if rng.gen_bool(0.5) {
        space.open_hull(&s)
    } else {
        space.interior(&s)
    }
}

/// A partial homeomorphism between open sets; falls back to the identity
/// on a random open set when random bijections fail to be homeomorphisms.
pub fn random_partial_homeo<R: Rng>(rng: &mut R, space: &FiniteT0Space) -> PartialHomeo {
    let n = space.len();
    let dom = random_open_set(rng, space);
    for _ in 0..20 {
        let img = random_open_set(rng, space);
        if img.len() != dom.len() {
            continue;
        }
        let mut targets: Vec<usize> = img.iter().collect();
        targets.shuffle(rng);
        let pairs: Vec<(usize, usize)> = dom.iter().zip(targets).collect();
        let m = PartialHomeo::from_pairs(n, &pairs).expect("bijection");
        if m.check_homeomorphism(space).is_ok() {
            return m;
        }
    }
    PartialHomeo::identity_on(n, &dom)
}

/// An action of `F0`, `F1`, `F2` or `ℤ` (at most `max_generators` generators).
pub fn random_action<R: Rng>(
    rng: &mut R,
    max_points: usize,
    max_generators: usize,
) -> FinitePartialAction {
    let space = random_space(rng, max_points);
    let k = rng.gen_range(0..=max_generators);
    let group = if k == 1 && rng.gen_bool(0.5) {
        Group::Integer
    } else {
        Group::Free(k)
    };
    let gens = (0..k)
        .map(|i| (format!("g{}", i + 1), random_partial_homeo(rng, &space)))
        .collect();
    FinitePartialAction::new(space, group, gens).expect("random generators are homeomorphisms")
}

pub fn random_word<R: Rng>(rng: &mut R, a: &FinitePartialAction, max_len: usize) -> Word {
    let letters = a.letters();
    if letters.is_empty() {
        return Word::identity();
    }
    let len = rng.gen_range(0..=max_len);
    Word::from_letters((0..len).map(|_| -> Letter { *letters.choose(rng).unwrap() }))
}

/// Every reduced word of length at most `max_len`.
pub fn all_words(a: &FinitePartialAction, max_len: usize) -> Vec<Word> {
    let letters = a.letters();
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                if w.letters().first() == Some(&l.inv()) {
                    continue;
                }
                next.push(Word::from_letters(
                    std::iter::once(l).chain(w.letters().iter().copied()),
                ));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// A candidate paradoxical decomposition (always carries a split). Most
/// candidates are well formed with both halves covering `V`, so rejections exercise the
/// mapping and disjointness clauses rather than the shape checks.
pub fn random_decomposition<R: Rng>(rng: &mut R, a: &FinitePartialAction) -> Decomposition {
    let space = a.space();
    let mut v = random_open_set(rng, space);
    for _ in 0..8 {
        if !v.is_empty() || rng.gen_bool(0.1) {
            break;
        }
        v = random_open_set(rng, space);
    }
    let inside = |rng: &mut R| {
        (
            space.interior(&random_open_set(rng, space).intersection(&v)),
            random_word(rng, a, 3),
        )
    };
    if rng.gen_bool(0.8) {
        // Two halves, each covering V.
        let mut parts = Vec::new();
        let mut split = 0;
        for half in 0..2 {
            let mut covered = space.empty_set();
            for _ in 0..rng.gen_range(1..=2) {
                let part = inside(rng);
                covered.union_with(&part.0);
                parts.push(part);
            }
            if !v.is_subset(&covered) {
                parts.push((v.clone(), random_word(rng, a, 3)));
            }
            if half == 0 {
                split = parts.len();
            }
        }
        return Decomposition {
            v,
            parts,
            split: Some(split),
        };
    }
    let parts: Vec<(PointSet, Word)> = (0..rng.gen_range(0..=4))
        .map(|_| {
            if rng.gen_bool(0.7) {
                inside(rng)
            } else {
                (random_open_set(rng, space), random_word(rng, a, 3))
            }
        })
        .collect();
    let split = rng.gen_range(0..=parts.len());
    Decomposition {
        v,
        parts,
        split: Some(split),
    }
}
