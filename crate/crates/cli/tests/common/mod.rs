//! Shared fixtures for the CLI test targets.
#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use graphviz_rust::dot_structures::{EdgeTy, Graph as Dot, Id, Stmt, Vertex};
use serde_json::Value;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/corpus"))
}

pub fn docs_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs"))
}

pub fn corpus(name: &str) -> String {
    corpus_dir().join(name).to_string_lossy().into_owned()
}

pub fn action(name: &str) -> String {
    corpus_dir()
        .join("actions")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn sorted_files(dir: PathBuf, keep: impl Fn(&str) -> bool) -> Vec<String> {
    let mut files: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file() && keep(&p.file_name().unwrap().to_string_lossy()))
        .map(|p| p.to_string_lossy().into_owned())
        .collect();
    files.sort();
    files
}

pub fn graph_files() -> Vec<String> {
    sorted_files(corpus_dir(), |_| true)
}

pub fn action_files() -> Vec<String> {
    sorted_files(corpus_dir().join("actions"), |f| {
        !f.ends_with("_witness.json")
    })
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the built `gideal` binary.
pub fn gideal(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_gideal"))
        .args(args)
        .output()
        .expect("spawn gideal");
    Output {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn json(out: &Output) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("not json ({e}):\n{}", out.stdout))
}

pub fn schema(name: &str) -> jsonschema::Validator {
    let path = docs_dir().join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).expect("schema compiles")
}

pub fn assert_valid(validator: &jsonschema::Validator, value: &Value, context: &str) {
    let errors: Vec<String> = validator
        .iter_errors(value)
        .map(|e| e.to_string())
        .collect();
    assert!(errors.is_empty(), "{context}: {errors:?}\n{value:#}");
}

/// Nodes (declared or mentioned) and directed edges of a parsed DOT digraph.
pub struct DotShape {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
}

fn id_text(id: &Id) -> String {
    match id {
        Id::Html(s) | Id::Escaped(s) | Id::Plain(s) | Id::Anonymous(s) => s.clone(),
    }
}

pub fn parse_dot(text: &str) -> DotShape {
    let graph =
        graphviz_rust::parse(text).unwrap_or_else(|e| panic!("dot does not parse: {e}\n{text}"));
    let Dot::DiGraph { stmts, .. } = graph else {
        panic!("expected a digraph:\n{text}")
    };
    let mut shape = DotShape {
        nodes: Vec::new(),
        edges: Vec::new(),
    };
    let vertex = |v: &Vertex| match v {
        Vertex::N(n) => id_text(&n.0),
        Vertex::S(_) => panic!("unexpected subgraph"),
    };
    for stmt in &stmts {
        match stmt {
            Stmt::Node(n) => shape.nodes.push(id_text(&n.id.0)),
            Stmt::Edge(e) => {
                let chain: Vec<String> = match &e.ty {
                    EdgeTy::Pair(a, b) => vec![vertex(a), vertex(b)],
                    EdgeTy::Chain(vs) => vs.iter().map(vertex).collect(),
                };
                for w in chain.windows(2) {
                    shape.edges.push((w[0].clone(), w[1].clone()));
                }
            }
            _ => {}
        }
    }
    for (a, b) in shape.edges.clone() {
        for x in [a, b] {
            if !shape.nodes.contains(&x) {
                shape.nodes.push(x);
            }
        }
    }
    shape
}

/// The invocation matrix shared by the schema, grammar and determinism checks:
/// every graph command in every format over the corpus, every action query,
/// and the documented examples.
pub fn invocation_matrix() -> Vec<Vec<String>> {
    let mut m: Vec<Vec<String>> = Vec::new();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    for g in graph_files() {
        for cmd in ["analyze", "lattice", "spectrum"] {
            for fmt in ["text", "json", "dot"] {
                m.push(s(&[cmd, &g, "--format", fmt]));
            }
        }
        for fmt in ["text", "json", "dot"] {
            m.push(s(&["quotient", &g, "--pair", "H=;B=", "--format", fmt]));
        }
    }
    m.push(s(&["quotient", &corpus("e4.json"), "--pair", "H=w;B=v"]));
    m.push(s(&["quotient", &corpus("e4.json"), "--pair", "H=w;B="]));
    m.push(s(&[
        "quotient",
        &corpus("two_breaking.txt"),
        "--pair",
        "H=;B=",
    ]));
    let queries = [
        "orbit",
        "quasi_orbit",
        "quasi_orbit_space",
        "invariant_subsets",
        "is_minimal",
        "is_topologically_free",
        "is_residually_topologically_free",
    ];
    for a in action_files() {
        for q in queries {
            for fmt in ["text", "json"] {
                m.push(s(&["paction", &a, q, "--format", fmt]));
            }
        }
        m.push(s(&["paction", &a, "quasi_orbit_space", "--format", "dot"]));
    }
    let cycle = action("three_cycle.json");
    let shift = action("partial_shift.json");
    for fmt in ["text", "json"] {
        m.push(s(&[
            "paction", &cycle, "orbit", "--point", "b", "--format", fmt,
        ]));
        m.push(s(&[
            "paction",
            &cycle,
            "element_map",
            "--word",
            "t*t",
            "--format",
            fmt,
        ]));
        m.push(s(&[
            "paction",
            &cycle,
            "decide_G_infinite",
            "--set",
            "a,b,c",
            "--format",
            fmt,
        ]));
        m.push(s(&[
            "paction",
            &cycle,
            "check_paradoxical_witness",
            "--witness",
            &action("three_cycle_witness.json"),
            "--format",
            fmt,
        ]));
        m.push(s(&[
            "paction",
            &shift,
            "check_infinite_witness",
            "--witness",
            &action("partial_shift_witness.json"),
            "--format",
            fmt,
        ]));
    }
    m
}

/// Schema that a JSON result of `args` must satisfy.
pub fn schema_for(args: &[String]) -> Option<&'static str> {
    if !args
        .windows(2)
        .any(|w| w[0] == "--format" && w[1] == "json")
    {
        return None;
    }
    Some(match args[0].as_str() {
        "analyze" => "report",
        "lattice" => "lattice",
        "spectrum" => "spectrum",
        "quotient" => "graph",
        "paction" => "paction-result",
        other => panic!("unknown command {other}"),
    })
}
