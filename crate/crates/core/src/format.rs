//! Text formats for graphs.
//!
//! JSON:
//!
//! ```text
//! {"vertices": ["v", "w"],
//!  "edges": [{"id": "e1", "src": "w", "rng": "v", "mult": "omega"},
//!            {"id": "e2", "src": "v", "rng": "v", "mult": 2}]}
//! ```
//!
//! `mult` is a positive integer or `"omega"` (default 1); `id` is optional
//! and defaults to `e<k>` with `k` the 1-based position in the file.
//!
//! Edgelist: one edge per line as `src rng [mult [id]]`, `#` starts a
//! comment, and `vertex <id>` lines declare vertices. When a file declares
//! any vertex, every endpoint must be declared; otherwise vertices are
//! introduced in order of first appearance.

use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeSpec, Graph, Multiplicity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Json,
    Edgelist,
}

impl GraphFormat {
    /// `.json` means JSON; anything else is read as an edgelist.
    pub fn from_path(path: &FsPath) -> GraphFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => GraphFormat::Json,
            _ => GraphFormat::Edgelist,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGraph {
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<JsonEdge>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonEdge {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    src: String,
    rng: String,
    #[serde(default)]
    mult: Option<serde_json::Value>,
}

pub fn parse_multiplicity(token: &str) -> Option<Multiplicity> {
    match token {
        "omega" | "ω" | "inf" => Some(Multiplicity::Omega),
        _ => token
            .parse::<u64>()
            .ok()
            .filter(|&n| n > 0)
            .map(Multiplicity::Finite),
    }
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::Json => parse_json(text),
        GraphFormat::Edgelist => parse_edgelist(text),
    }
}

fn parse_json(text: &str) -> Result<Graph> {
    let raw: JsonGraph = serde_json::from_str(text).map_err(|e| Error::Syntax {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let mut edges = Vec::with_capacity(raw.edges.len());
    for (k, e) in raw.edges.into_iter().enumerate() {
        let mult = match &e.mult {
            None => Multiplicity::Finite(1),
            Some(serde_json::Value::Number(n)) => n
                .as_u64()
                .filter(|&n| n > 0)
                .map(Multiplicity::Finite)
                .ok_or_else(|| Error::InvalidMultiplicity {
                    location: format!("edges[{k}]"),
                    token: n.to_string(),
                })?,
            Some(serde_json::Value::String(s)) if s == "omega" => Multiplicity::Omega,
            Some(other) => {
                return Err(Error::InvalidMultiplicity {
                    location: format!("edges[{k}]"),
                    token: other.to_string(),
                })
            }
        };
        edges.push(EdgeSpec {
            id: e.id,
            src: e.src,
            rng: e.rng,
            mult,
        });
    }
    Graph::new(&raw.vertices, edges)
}

fn parse_edgelist(text: &str) -> Result<Graph> {
    let mut declared: Vec<String> = Vec::new();
    let mut implicit: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, EdgeSpec)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            ["vertex", id] => declared.push(id.to_string()),
            ["vertex", ..] => {
                return Err(Error::Syntax {
                    location: format!("line {lineno}"),
                    message: "expected `vertex <id>`".into(),
                })
            }
            [src, rng, rest @ ..] if rest.len() <= 2 => {
                let mult = match rest.first() {
                    None => Multiplicity::Finite(1),
                    Some(tok) => {
                        parse_multiplicity(tok).ok_or_else(|| Error::InvalidMultiplicity {
                            location: format!("line {lineno}"),
                            token: tok.to_string(),
                        })?
                    }
                };
                for v in [src, rng] {
                    if !implicit.iter().any(|x| x == v) {
                        implicit.push(v.to_string());
                    }
                }
                let mut spec = EdgeSpec::new(src, rng, mult);
                spec.id = rest.get(1).map(|s| s.to_string());
                edges.push((lineno, spec));
            }
            _ => {
                return Err(Error::Syntax {
                    location: format!("line {lineno}"),
                    message: "expected `src rng [mult [id]]`".into(),
                })
            }
        }
    }
    let vertices = if declared.is_empty() {
        implicit
    } else {
        declared
    };
    // Rewrite positional error locations into line numbers.
    let lines: Vec<usize> = edges.iter().map(|(l, _)| *l).collect();
    Graph::new(&vertices, edges.into_iter().map(|(_, e)| e).collect()).map_err(|err| {
        let relocate = |loc: &str| {
            loc.strip_prefix("edges[")
                .and_then(|r| r.strip_suffix(']'))
                .and_then(|k| k.parse::<usize>().ok())
                .and_then(|k| lines.get(k))
                .map(|l| format!("line {l}"))
                .unwrap_or_else(|| loc.to_string())
        };
        match err {
            Error::DanglingEndpoint { location, vertex } => Error::DanglingEndpoint {
                location: relocate(&location),
                vertex,
            },
            Error::DuplicateId { location, kind, id } => Error::DuplicateId {
                location: relocate(&location),
                kind,
                id,
            },
            other => other,
        }
    })
}

pub fn to_json_value(g: &Graph) -> serde_json::Value {
    let raw = JsonGraph {
        vertices: g.vertices().to_vec(),
        edges: g
            .edges()
            .iter()
            .map(|e| JsonEdge {
                id: Some(e.id.clone()),
                src: g.vertex_name(e.src).to_string(),
                rng: g.vertex_name(e.rng).to_string(),
                mult: Some(match e.mult {
                    Multiplicity::Finite(n) => serde_json::Value::from(n),
                    Multiplicity::Omega => serde_json::Value::from("omega"),
                }),
            })
            .collect(),
    };
    serde_json::to_value(raw).expect("graph serializes")
}

pub fn serialize_graph(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Json => {
            let mut s = serde_json::to_string_pretty(&to_json_value(g)).expect("graph serializes");
            s.push('\n');
            s
        }
        GraphFormat::Edgelist => {
            let mut s = String::new();
            for v in g.vertices() {
                s.push_str(&format!("vertex {v}\n"));
            }
            for e in g.edges() {
                s.push_str(&format!(
                    "{} {} {} {}\n",
                    g.vertex_name(e.src),
                    g.vertex_name(e.rng),
                    e.mult,
                    e.id
                ));
            }
            s
        }
    }
}

/// DOT rendering of the graph; edges are labelled with id and multiplicity.
pub fn graph_to_dot(g: &Graph) -> String {
    let quote = |s: &str| format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
    let mut s = String::from("digraph E {\n");
    for v in g.vertices() {
        s.push_str(&format!("  {};\n", quote(v)));
    }
    for e in g.edges() {
        s.push_str(&format!(
            "  {} -> {} [label={}];\n",
            quote(g.vertex_name(e.src)),
            quote(g.vertex_name(e.rng)),
            quote(&format!("{} ({})", e.id, e.mult))
        ));
    }
    s.push_str("}\n");
    s
}
