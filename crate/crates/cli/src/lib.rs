//! `gideal`: command-line front end for `graph-ideals`.
//!
//! Exit codes: 0 on success, 1 on parse/validation/usage errors, 2 when an
//! enumeration limit is exceeded. Results go to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use graph_ideals::classify::classify;
use graph_ideals::format::{
    graph_to_dot, parse_graph, serialize_graph, to_json_value, GraphFormat,
};
use graph_ideals::lattice::{admissible_pairs, parse_pair_selector, quotient_graph};
use graph_ideals::paction::{
    check_infinite_witness, check_paradoxical_witness, closed_invariant_subsets, decide_g_infinite,
    element_map, invariant_subsets, is_minimal, is_residually_topologically_free,
    is_topologically_free, orbit, orbits, quasi_orbit, quasi_orbit_space, Decomposition,
    FinitePartialAction, PointSet, WitnessCheck,
};
use graph_ideals::spectrum::{prim_space, PointKind};
use graph_ideals::{EnumLimit, Error, Graph};

#[derive(Debug, Parser)]
#[command(
    name = "gideal",
    version,
    about = "Ideal structure of graph C*-algebras and finite partial actions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,

    /// Largest vertex (or orbit) set whose subsets may be enumerated.
    #[arg(long, default_value_t = EnumLimit::DEFAULT.0 as u64, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub limit: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Conditions (L)/(K), simplicity, pure infiniteness and related flags.
    Analyze { graph: PathBuf },
    /// Lattice of admissible pairs (gauge-invariant ideals).
    Lattice { graph: PathBuf },
    /// Prime/primitive ideal space as a finite T0 space.
    Spectrum { graph: PathBuf },
    /// Quotient graph for an admissible pair, e.g. --pair "H=w;B=v".
    Quotient {
        graph: PathBuf,
        #[arg(long)]
        pair: String,
    },
    /// Queries on a finite partial action.
    Paction(PactionArgs),
}

#[derive(Debug, Args)]
pub struct PactionArgs {
    pub action: PathBuf,
    #[arg(value_enum)]
    pub query: Query,
    /// Point for `orbit` / `quasi_orbit` (all points when omitted).
    #[arg(long)]
    pub point: Option<String>,
    /// Group word for `element_map`, e.g. "g1*g2^-1".
    #[arg(long)]
    pub word: Option<String>,
    /// Decomposition file for the witness checks.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// Comma-separated open set for `decide_G_infinite`.
    #[arg(long)]
    pub set: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Query {
    #[value(name = "orbit")]
    Orbit,
    #[value(name = "quasi_orbit")]
    QuasiOrbit,
    #[value(name = "quasi_orbit_space")]
    QuasiOrbitSpace,
    #[value(name = "invariant_subsets")]
    InvariantSubsets,
    #[value(name = "is_minimal")]
    IsMinimal,
    #[value(name = "is_topologically_free")]
    IsTopologicallyFree,
    #[value(name = "is_residually_topologically_free")]
    IsResiduallyTopologicallyFree,
    #[value(name = "element_map")]
    ElementMap,
    #[value(name = "check_infinite_witness")]
    CheckInfiniteWitness,
    #[value(name = "check_paradoxical_witness")]
    CheckParadoxicalWitness,
    #[value(name = "decide_G_infinite")]
    DecideGInfinite,
}

impl Query {
    fn name(self) -> String {
        self.to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_string()
    }
}

/// Failure of a command: message plus exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure {
            code: if e.is_limit() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<(Graph, GraphFormat), Failure> {
    let format = GraphFormat::from_path(path);
    let text = read(path)?;
    let g = parse_graph(&text, format).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok((g, format))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

/// Runs one invocation; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                1
            }
        },
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn execute(cli: &Cli) -> Result<String, Failure> {
    let limit = EnumLimit(cli.limit as usize);
    match &cli.command {
        Command::Analyze { graph } => {
            let (g, _) = load_graph(graph)?;
            let report = classify(&g, limit)?;
            Ok(match cli.format {
                OutputFormat::Text => report.render_text(&g),
                OutputFormat::Json => pretty(&report.to_json(&g)),
                OutputFormat::Dot => graph_to_dot(&g),
            })
        }
        Command::Lattice { graph } => {
            let (g, _) = load_graph(graph)?;
            let l = admissible_pairs(&g, limit)?;
            Ok(match cli.format {
                OutputFormat::Text => {
                    let mut s = format!("{} admissible pair{}\n", l.len(), plural(l.len()));
                    for (i, p) in l.pairs().iter().enumerate() {
                        writeln!(s, "  {i:>3}  {}", p.label(&g)).unwrap();
                    }
                    s.push_str("covers:\n");
                    for (i, j) in l.hasse() {
                        writeln!(s, "  {i} < {j}").unwrap();
                    }
                    s
                }
                OutputFormat::Json => pretty(&l.to_json(&g)),
                OutputFormat::Dot => l.to_dot(&g),
            })
        }
        Command::Spectrum { graph } => {
            let (g, _) = load_graph(graph)?;
            let space = prim_space(&g, limit)?;
            Ok(match cli.format {
                OutputFormat::Text => {
                    let mut s = format!(
                        "status: {}\n{} point{}\n",
                        space.status.as_str(),
                        space.len(),
                        plural(space.len())
                    );
                    for (i, p) in space.points.iter().enumerate() {
                        let closure: Vec<String> =
                            space.closure(i).iter().map(usize::to_string).collect();
                        writeln!(
                            s,
                            "  {i:>3}  {:<20} {:<24} closure: {}",
                            p.label(&g),
                            p.pair.label(&g),
                            closure.join(" ")
                        )
                        .unwrap();
                    }
                    let breaking = space
                        .points
                        .iter()
                        .filter(|p| matches!(p.kind, PointKind::Breaking(_)))
                        .count();
                    writeln!(
                        s,
                        "maximal tails: {}  breaking vertices: {breaking}",
                        space.len() - breaking
                    )
                    .unwrap();
                    s
                }
                OutputFormat::Json => pretty(&space.to_json(&g)),
                OutputFormat::Dot => space.to_dot(&g),
            })
        }
        Command::Quotient { graph, pair } => {
            let (g, input_format) = load_graph(graph)?;
            let p = parse_pair_selector(&g, pair)?;
            let q = quotient_graph(&g, &p)?;
            Ok(match cli.format {
                OutputFormat::Text => serialize_graph(&q, input_format),
                OutputFormat::Json => pretty(&to_json_value(&q)),
                OutputFormat::Dot => graph_to_dot(&q),
            })
        }
        Command::Paction(args) => paction(args, cli.format, limit),
    }
}

fn set_json(a: &FinitePartialAction, s: &PointSet) -> Value {
    json!(a.space().names_of(s))
}

fn set_text(a: &FinitePartialAction, s: &PointSet) -> String {
    format!("{{{}}}", a.space().names_of(s).join(","))
}

fn sets_result(a: &FinitePartialAction, sets: &[PointSet]) -> (Value, String) {
    let json = Value::Array(sets.iter().map(|s| set_json(a, s)).collect());
    let text = sets.iter().map(|s| set_text(a, s) + "\n").collect();
    (json, text)
}

fn paction(args: &PactionArgs, format: OutputFormat, limit: EnumLimit) -> Result<String, Failure> {
    let text = read(&args.action)?;
    let a = FinitePartialAction::from_json(&text).map_err(|e| {
        let code = if e.is_limit() { 2 } else { 1 };
        Failure {
            code,
            message: format!("{}: {e}", args.action.display()),
        }
    })?;
    let need = |what: Option<&String>, flag: &str| {
        what.cloned()
            .ok_or_else(|| usage(format!("query `{}` needs --{flag}", args.query.name())))
    };
    if format == OutputFormat::Dot && args.query != Query::QuasiOrbitSpace {
        return Err(usage(format!(
            "--format dot is only available for quasi_orbit_space, not `{}`",
            args.query.name()
        )));
    }
    let points = |sel: &Option<String>| -> Result<Vec<usize>, Failure> {
        match sel {
            Some(p) => Ok(vec![a.space().point(p)?]),
            None => Ok((0..a.space().len()).collect()),
        }
    };
    let (result, text) = match args.query {
        Query::Orbit | Query::QuasiOrbit => {
            let sets: Vec<PointSet> = match (args.query, &args.point) {
                (Query::Orbit, None) => orbits(&a),
                (Query::Orbit, sel) => points(sel)?.into_iter().map(|x| orbit(&a, x)).collect(),
                (_, None) => quasi_orbit_space(&a)?.classes,
                (_, sel) => points(sel)?
                    .into_iter()
                    .map(|x| quasi_orbit(&a, x))
                    .collect(),
            };
            sets_result(&a, &sets)
        }
        Query::QuasiOrbitSpace => {
            let qs = quasi_orbit_space(&a)?;
            let space = qs.to_space(a.space());
            if format == OutputFormat::Dot {
                let mut s = String::from("digraph quasi_orbits {\n  rankdir=BT;\n");
                for (i, name) in space.points().iter().enumerate() {
                    writeln!(s, "  c{i} [label=\"{name}\"];").unwrap();
                }
                for (p, q) in space.covers() {
                    writeln!(s, "  c{p} -> c{q};").unwrap();
                }
                s.push_str("}\n");
                return Ok(s);
            }
            let covers: Vec<[usize; 2]> = space.covers().into_iter().map(|(p, q)| [p, q]).collect();
            let json = json!({
                "classes": qs.classes.iter().map(|c| set_json(&a, c)).collect::<Vec<_>>(),
                "covers": covers,
            });
            let mut t = String::new();
            for (i, c) in qs.classes.iter().enumerate() {
                writeln!(t, "  {i:>3}  {}", set_text(&a, c)).unwrap();
            }
            t.push_str("covers (lower < higher, higher in the closure of lower):\n");
            for [p, q] in covers {
                writeln!(t, "  {p} < {q}").unwrap();
            }
            (json, t)
        }
        Query::InvariantSubsets => {
            let all = invariant_subsets(&a, limit)?;
            let closed = closed_invariant_subsets(&a, limit)?;
            let json = json!({
                "invariant": all.iter().map(|s| set_json(&a, s)).collect::<Vec<_>>(),
                "closed_invariant": closed.iter().map(|s| set_json(&a, s)).collect::<Vec<_>>(),
            });
            let mut t = String::new();
            for s in &all {
                let mark = if a.space().is_closed(s) {
                    "  (closed)"
                } else {
                    ""
                };
                writeln!(t, "{}{mark}", set_text(&a, s)).unwrap();
            }
            (json, t)
        }
        Query::IsMinimal => bool_result(is_minimal(&a)),
        Query::IsTopologicallyFree => bool_result(is_topologically_free(&a)),
        Query::IsResiduallyTopologicallyFree => {
            bool_result(is_residually_topologically_free(&a, limit)?)
        }
        Query::ElementMap => {
            let w = a.parse_word(&need(args.word.as_ref(), "word")?)?;
            let m = element_map(&a, &w);
            let pairs: Vec<[&str; 2]> = m
                .pairs()
                .map(|(x, y)| [a.space().name(x), a.space().name(y)])
                .collect();
            let json = json!({"word": w.display(a.generator_names()), "map": pairs});
            let mut t = format!("{}:\n", w.display(a.generator_names()));
            for [x, y] in &pairs {
                writeln!(t, "  {x} -> {y}").unwrap();
            }
            (json, t)
        }
        Query::CheckInfiniteWitness | Query::CheckParadoxicalWitness => {
            let path = args
                .witness
                .as_ref()
                .ok_or_else(|| usage(format!("query `{}` needs --witness", args.query.name())))?;
            let d = Decomposition::from_json(&a, &read(path)?)?;
            let check = if args.query == Query::CheckInfiniteWitness {
                check_infinite_witness(&a, &d)?
            } else {
                check_paradoxical_witness(&a, &d)?
            };
            match check {
                WitnessCheck::Valid => (json!({"valid": true}), "valid\n".into()),
                WitnessCheck::Violation(v) => (
                    json!({"valid": false, "clause": v.clause(), "reason": v.to_string()}),
                    format!("violation: {v}\n"),
                ),
            }
        }
        Query::DecideGInfinite => {
            let names: Vec<String> = need(args.set.as_ref(), "set")?
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            let v = a.space().set_of(&names)?;
            let verdict = decide_g_infinite(&a, &v)?;
            (
                json!({"g_infinite": false, "proof": "finite_counting", "explanation": verdict.to_string()}),
                format!("no: {verdict}\n"),
            )
        }
    };
    Ok(match format {
        OutputFormat::Json => pretty(&json!({"query": args.query.name(), "result": result})),
        _ => text,
    })
}

fn plural(n: usize) -> &'static str {
    if n == 1 {
        ""
    } else {
        "s"
    }
}

fn bool_result(b: bool) -> (Value, String) {
    (json!(b), format!("{}\n", if b { "yes" } else { "no" }))
}
