//! Small reference graphs shipped with the crate (see `corpus/`).
//!
//! * `e1`: one vertex `v` with two loops.
//! * `e2`: the 3-cycle `a -> b -> c -> a`.
//! * `e3`: a single edge `v -> w`.
//! * `e4`: two loops at `v`, ω edges `w -> v`.
//! * `e5`: two loops at `v`, one edge `v -> w`.

use crate::format::{parse_graph, GraphFormat};
use crate::graph::Graph;

const FILES: &[(&str, &str)] = &[
    ("e1.json", include_str!("../corpus/e1.json")),
    ("e2.json", include_str!("../corpus/e2.json")),
    ("e3.json", include_str!("../corpus/e3.json")),
    ("e4.json", include_str!("../corpus/e4.json")),
    ("e5.json", include_str!("../corpus/e5.json")),
    ("isolated.txt", include_str!("../corpus/isolated.txt")),
    (
        "breaking_pi_fails.txt",
        include_str!("../corpus/breaking_pi_fails.txt"),
    ),
    (
        "omega_not_breaking.txt",
        include_str!("../corpus/omega_not_breaking.txt"),
    ),
    ("omega_loops.txt", include_str!("../corpus/omega_loops.txt")),
    (
        "two_breaking.txt",
        include_str!("../corpus/two_breaking.txt"),
    ),
    (
        "chain_of_cuntz.txt",
        include_str!("../corpus/chain_of_cuntz.txt"),
    ),
    ("toeplitz.txt", include_str!("../corpus/toeplitz.txt")),
    ("mixed.txt", include_str!("../corpus/mixed.txt")),
];

fn load(name: &str) -> Graph {
    let (file, text) = FILES
        .iter()
        .find(|(f, _)| f.split('.').next() == Some(name))
        .unwrap_or_else(|| panic!("no corpus graph `{name}`"));
    let format = if file.ends_with(".json") {
        GraphFormat::Json
    } else {
        GraphFormat::Edgelist
    };
    parse_graph(text, format).unwrap_or_else(|e| panic!("corpus graph {file}: {e}"))
}

pub fn e1() -> Graph {
    load("e1")
}

pub fn e2() -> Graph {
    load("e2")
}

pub fn e3() -> Graph {
    load("e3")
}

pub fn e4() -> Graph {
    load("e4")
}

pub fn e5() -> Graph {
    load("e5")
}

/// The five headline graphs `e1` to `e5`, in order.
pub fn headline() -> Vec<(&'static str, Graph)> {
    vec![
        ("e1", e1()),
        ("e2", e2()),
        ("e3", e3()),
        ("e4", e4()),
        ("e5", e5()),
    ]
}

/// Every shipped graph, keyed by file stem.
pub fn all() -> Vec<(&'static str, Graph)> {
    FILES
        .iter()
        .map(|(file, _)| {
            let stem = file.split('.').next().unwrap();
            (stem, load(stem))
        })
        .collect()
}
