//! End-to-end tests of the `gideal` binary.

mod common;

use common::*;
use graph_ideals::format::{parse_graph, GraphFormat};
use graph_ideals::Multiplicity;

#[test]
fn analyze_e1_json_reports_residual_aperiodicity() {
    let out = gideal(&["analyze", &corpus("e1.json"), "--format", "json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["residually_aperiodic"], true);
    assert_eq!(v["simple"]["verdict"], "yes");
    assert_eq!(v["purely_infinite"]["verdict"], "yes");
    assert_valid(&schema("report"), &v, "e1");
}

#[test]
fn spectrum_e4_dot_is_a_three_node_chain() {
    let out = gideal(&["spectrum", &corpus("e4.json"), "--format", "dot"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let dot = parse_dot(&out.stdout);
    assert_eq!(dot.nodes.len(), 3);
    assert_eq!(dot.edges.len(), 2);
    // A chain: one node with no incoming edge, each edge continuing the previous one.
    let start: Vec<&String> = dot
        .nodes
        .iter()
        .filter(|n| dot.edges.iter().all(|(_, b)| b != *n))
        .collect();
    assert_eq!(start.len(), 1);
    let mut at = start[0].clone();
    for _ in 0..2 {
        let next: Vec<&(String, String)> = dot.edges.iter().filter(|(a, _)| *a == at).collect();
        assert_eq!(next.len(), 1);
        at = next[0].1.clone();
    }
}

#[test]
fn quotient_e4_is_one_vertex_with_two_loops() {
    let out = gideal(&["quotient", &corpus("e4.json"), "--pair", "H=w;B=v"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let q = parse_graph(&out.stdout, GraphFormat::Json).unwrap();
    assert_eq!(q.vertices(), ["v"]);
    let loops: u64 = q
        .edges()
        .iter()
        .map(|e| {
            assert_eq!((e.src, e.rng), (0, 0));
            match e.mult {
                Multiplicity::Finite(k) => k,
                Multiplicity::Omega => panic!("unexpected omega"),
            }
        })
        .sum();
    assert_eq!(loops, 2);
    assert_valid(&schema("graph"), &json(&out), "quotient");
}

#[test]
fn quotient_keeps_the_edgelist_format() {
    let out = gideal(&["quotient", &corpus("e4.json"), "--pair", "H=w;B="]);
    assert_eq!(out.code, 0);
    let q = parse_graph(&out.stdout, GraphFormat::Json).unwrap();
    // v plus the added copy of v, which keeps the two loops' copies.
    assert_eq!(q.vertex_count(), 2);

    let out = gideal(&["quotient", &corpus("toeplitz.txt"), "--pair", "H=;B="]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(serde_json::from_str::<serde_json::Value>(&out.stdout).is_err());
    let q = parse_graph(&out.stdout, GraphFormat::Edgelist).unwrap();
    let original = graph_ideals::corpus::all()
        .into_iter()
        .find(|(n, _)| *n == "toeplitz")
        .unwrap()
        .1;
    assert_eq!(q.vertices(), original.vertices());
    assert_eq!(q.edges().len(), original.edges().len());
}

#[test]
fn exit_codes() {
    let e4 = corpus("e4.json");
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["analyze", &e4], 0),
        (vec!["--help"], 0),
        (vec!["--version"], 0),
        (vec![], 1),
        (vec!["frobnicate", &e4], 1),
        (vec!["analyze", "/nonexistent/graph.json"], 1),
        (vec!["analyze", &e4, "--format", "svg"], 1),
        (vec!["analyze", &e4, "--limit", "0"], 1),
        (vec!["analyze", &e4, "--limit", "lots"], 1),
        (vec!["quotient", &e4], 1),
        (vec!["quotient", &e4, "--pair", "H=v;B="], 1),
        (vec!["quotient", &e4, "--pair", "H=w;B=w"], 1),
        (vec!["quotient", &e4, "--pair", "H=x;B="], 1),
        (vec!["quotient", &e4, "--pair", "garbage"], 1),
        (vec!["lattice", &e4, "--limit", "1"], 2),
        (vec!["spectrum", &e4, "--limit", "1"], 2),
        (vec!["lattice", &e4, "--limit", "2"], 0),
    ];
    for (args, code) in cases {
        let out = gideal(&args);
        assert_eq!(out.code, code, "{args:?}: {}", out.stderr);
        if code == 0 {
            assert!(out.stderr.is_empty(), "{args:?}: {}", out.stderr);
        } else {
            assert!(out.stdout.is_empty(), "{args:?} wrote to stdout");
            assert!(!out.stderr.is_empty(), "{args:?} gave no diagnostic");
        }
    }
}

#[test]
fn malformed_inputs_exit_1() {
    let dir = std::env::temp_dir().join(format!("gideal-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = [
        ("not_json.json", "{"),
        (
            "unknown_vertex.json",
            r#"{"vertices":["v"],"edges":[{"src":"v","rng":"w","mult":1}]}"#,
        ),
        (
            "zero_mult.json",
            r#"{"vertices":["v"],"edges":[{"src":"v","rng":"v","mult":0}]}"#,
        ),
        ("bad_line.txt", "a b c d\n"),
    ];
    for (name, text) in bad {
        let path = dir.join(name);
        std::fs::write(&path, text).unwrap();
        let out = gideal(&["analyze", path.to_str().unwrap()]);
        assert_eq!(out.code, 1, "{name}: {}", out.stdout);
        assert!(out.stderr.starts_with("error:"), "{name}: {}", out.stderr);
    }
    let bad_actions = [
        (
            "cyclic.json",
            r#"{"points":["a","b"],"specialization":[["a","b"],["b","a"]],"group":"F1","generators":[{"name":"g","map":[]}]}"#,
        ),
        (
            "z2.json",
            r#"{"points":["a"],"group":"Z2","generators":[]}"#,
        ),
        (
            "not_open.json",
            r#"{"points":["a","b"],"specialization":[["a","b"]],"group":"F1","generators":[{"name":"g","map":[["b","b"]]}]}"#,
        ),
    ];
    for (name, text) in bad_actions {
        let path = dir.join(name);
        std::fs::write(&path, text).unwrap();
        let out = gideal(&["paction", path.to_str().unwrap(), "orbit"]);
        assert_eq!(out.code, 1, "{name}: {}", out.stdout);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn paction_usage_errors() {
    let cycle = action("three_cycle.json");
    for args in [
        vec!["paction", &cycle, "element_map"],
        vec!["paction", &cycle, "element_map", "--word", "u"],
        vec!["paction", &cycle, "check_infinite_witness"],
        vec!["paction", &cycle, "decide_G_infinite"],
        vec!["paction", &cycle, "orbit", "--point", "zz"],
        vec!["paction", &cycle, "orbit", "--format", "dot"],
        vec!["paction", &cycle, "no_such_query"],
    ] {
        assert_eq!(gideal(&args).code, 1, "{args:?}");
    }
    let sierpinski = action("sierpinski_partial.json");
    let out = gideal(&["paction", &sierpinski, "decide_G_infinite", "--set", "c"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("open"), "{}", out.stderr);
}

#[test]
fn paction_answers() {
    let cycle = action("three_cycle.json");
    let shift = action("partial_shift.json");
    let sierpinski = action("sierpinski_partial.json");
    let q = |a: &str, rest: &[&str]| {
        let mut args = vec!["paction", a];
        args.extend_from_slice(rest);
        args.extend_from_slice(&["--format", "json"]);
        let out = gideal(&args);
        assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        json(&out)["result"].clone()
    };
    assert_eq!(q(&cycle, &["is_minimal"]), true);
    assert_eq!(q(&cycle, &["is_topologically_free"]), false);
    assert_eq!(q(&shift, &["is_topologically_free"]), true);
    assert_eq!(q(&shift, &["is_residually_topologically_free"]), true);
    assert_eq!(q(&sierpinski, &["is_minimal"]), false);
    assert_eq!(
        q(&sierpinski, &["quasi_orbit_space"])["covers"],
        serde_json::json!([[0, 1]])
    );
    assert_eq!(
        q(&cycle, &["element_map", "--word", "t^-1"])["map"],
        serde_json::json!([["a", "c"], ["b", "a"], ["c", "b"]])
    );
    assert_eq!(
        q(&cycle, &["decide_G_infinite", "--set", "a,b,c"])["g_infinite"],
        false
    );
    let witness = action("three_cycle_witness.json");
    let verdict = q(
        &cycle,
        &["check_paradoxical_witness", "--witness", &witness],
    );
    assert_eq!(verdict["valid"], false);
    assert_eq!(verdict["clause"], 1);
}

#[test]
fn json_outputs_match_schemas_and_dot_outputs_parse() {
    let graph = schema("graph");
    for args in invocation_matrix() {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = gideal(&argv);
        assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        if let Some(name) = schema_for(&args) {
            assert_valid(&schema(name), &json(&out), &format!("{args:?}"));
        }
        if args.windows(2).any(|w| w[0] == "--format" && w[1] == "dot") {
            parse_dot(&out.stdout);
        }
    }
    for path in graph_files().into_iter().filter(|p| p.ends_with(".json")) {
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_valid(&graph, &v, &path);
    }
    let action_schema = schema("action");
    let witness_schema = schema("decomposition");
    for entry in std::fs::read_dir(corpus_dir().join("actions")).unwrap() {
        let path = entry.unwrap().path();
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let s = if path.to_string_lossy().ends_with("_witness.json") {
            &witness_schema
        } else {
            &action_schema
        };
        assert_valid(s, &v, &path.to_string_lossy());
    }
}

#[test]
fn in_process_run_matches_the_binary() {
    let e4 = corpus("e4.json");
    let args = ["gideal", "lattice", e4.as_str(), "--format", "json"];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = graph_ideals_cli::run(args, &mut out, &mut err);
    assert_eq!(code, 0);
    assert!(err.is_empty());
    assert_eq!(String::from_utf8(out).unwrap(), gideal(&args[1..]).stdout);
}

#[test]
fn schemas_reject_malformed_documents() {
    let out = gideal(&["analyze", &corpus("e4.json"), "--format", "json"]);
    let mut v = json(&out);
    v["simple"]["verdict"] = "maybe".into();
    assert!(!schema("report").is_valid(&v));

    let out = gideal(&["lattice", &corpus("e4.json"), "--format", "json"]);
    let mut v = json(&out);
    v["pairs"][0].as_object_mut().unwrap().remove("B");
    assert!(!schema("lattice").is_valid(&v));

    let out = gideal(&["spectrum", &corpus("e4.json"), "--format", "json"]);
    let mut v = json(&out);
    v["status"] = "primitive-ish".into();
    assert!(!schema("spectrum").is_valid(&v));

    let bad_graph =
        serde_json::json!({"vertices": ["v"], "edges": [{"src": "v", "rng": "v", "mult": "many"}]});
    assert!(!schema("graph").is_valid(&bad_graph));
    let bad_action = serde_json::json!({"points": ["a"], "group": "Z3", "generators": []});
    assert!(!schema("action").is_valid(&bad_action));
    let bad_result = serde_json::json!({"query": "is_minimal", "result": "yes"});
    assert!(!schema("paction-result").is_valid(&bad_result));
}
