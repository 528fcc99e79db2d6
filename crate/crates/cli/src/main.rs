//! `hampow` command-line front end.
//!
//! Exit status: 0 on success, 1 on a domain error (reported as one JSON line
//! on stderr), 2 on a usage error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use hampow::decomposition::power_path_edge_formula;
use hampow::density::{density_profile, DEFAULT_SUBSET_CAP};
use hampow::experiments::{threshold_scan, write_jsonl, write_summary_csv};
use hampow::gadgets::{b_minus_edge_formula, braid_edge_formula, parse_ratio};
use hampow::*;

#[derive(Parser)]
#[command(name = "hampow", version = hampow::VERSION, about = "Powers of Hamiltonian cycles in randomly perturbed graphs")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    output: Format,

    /// Master seed for anything random.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for experiments (default: available cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Subcommand)]
enum Command {
    /// Build a gadget and report its size, optionally dumping it.
    Gadget {
        #[command(subcommand)]
        kind: GadgetKind,
    },
    /// Build and verify the decomposition of a path or cycle power.
    Decompose {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        t: usize,
        /// Decompose the cycle power instead of the path power.
        #[arg(long)]
        cycle: bool,
    },
    /// Density profile (d, m, Ψ, Φ) of a graph at (n, p).
    Density {
        /// Braid `l,r,t`.
        #[arg(long, value_parser = triple, conflicts_with = "graph", required_unless_present = "graph")]
        braid: Option<(usize, usize, usize)>,
        /// Edge-list file.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: f64,
        /// Largest component enumerated by brute force.
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
        cap: usize,
    },
    /// Exact search for the m-th power of a Hamiltonian cycle.
    Search {
        #[arg(long)]
        m: usize,
        /// Edge-list file; without it the base graph is empty on `--n` vertices.
        #[arg(long, required_unless_present = "n")]
        graph: Option<PathBuf>,
        #[arg(long, conflicts_with = "graph")]
        n: Option<usize>,
        /// Add a sample of G(n, p) drawn from `--seed`.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        max_nodes: Option<u64>,
        #[arg(long)]
        max_millis: Option<u64>,
    },
    /// Monte-Carlo experiments from a TOML config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Curve)]
        mode: Mode,
        /// Vertex count for `p-half`.
        #[arg(long, required_if_eq("mode", "p-half"))]
        n: Option<usize>,
        /// Write trial records here as JSONL instead of to stdout.
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// Counting certificates.
    Audit {
        #[command(subcommand)]
        kind: AuditKind,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Curve,
    PHalf,
    Scan,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    l: usize,
    #[arg(long)]
    r: Option<usize>,
    /// `k·ℓ + r`; checked against `--r` when both are given.
    #[arg(long)]
    m: Option<usize>,
}

impl ParamArgs {
    fn resolve(&self) -> Result<ProblemParams> {
        ProblemParams::resolve(self.k, self.l, self.r, self.m)
    }
}

#[derive(Args)]
struct DumpArgs {
    /// Write the edge list here.
    #[arg(long)]
    edges: Option<PathBuf>,
    /// Write the label sidecar here.
    #[arg(long, requires = "edges")]
    labels: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GadgetKind {
    /// `t` cliques of size `l`, consecutive ones joined by an `r`-bridge
    Braid {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        dump: DumpArgs,
    },
    /// `s` disjoint braids
    MultiBraid {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        dump: DumpArgs,
    },
    /// Braid family with the two end cliques trimmed
    BMinus {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        dump: DumpArgs,
    },
    /// Complete `(k+1)`-partite base graph with the `W` parts joined inside
    LowerBound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        eps: String,
        #[command(flatten)]
        dump: DumpArgs,
    },
    /// `m`-th power of a path on `s` vertices
    PowerPath {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        dump: DumpArgs,
    },
    /// `m`-th power of a cycle on `n` vertices
    PowerCycle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        dump: DumpArgs,
    },
}

#[derive(Subcommand)]
enum AuditKind {
    /// Check the lower-bound construction against one sample of G(n, p).
    LowerBound {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        #[arg(long, default_value_t = 10_000_000)]
        cap: u64,
    },
    /// Edge counts of path powers on q vertices.
    PathEdges {
        #[arg(long)]
        q: usize,
    },
}

fn triple(s: &str) -> std::result::Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b, c] = parts[..] else {
        return Err(format!(
            "expected three comma-separated integers, got `{s}`"
        ));
    };
    let num = |x: &str| x.parse::<usize>().map_err(|e| format!("`{x}`: {e}"));
    Ok((num(a)?, num(b)?, num(c)?))
}

/// What a command produced: a single document, or an experiment whose
/// records stream as JSONL.
enum Report {
    Doc(Value),
    Curve {
        points: Vec<CurvePoint>,
        records: Vec<TrialRecord>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help and version land here too, with exit code 0
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let format = cli.output;
    match run(cli).and_then(|rep| emit(format, rep)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = json!({ "error": e.code(), "message": e.to_string() });
            eprintln!("{line}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<Report> {
    let format = cli.output;
    let seed = cli.seed.unwrap_or(0);
    let workers = cli.workers.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    if workers == 0 {
        return Err(Error::InvalidParameter("--workers must be >= 1".into()));
    }
    match cli.command {
        Command::Gadget { kind } => gadget(kind),
        Command::Decompose { params, t, cycle } => {
            let p = params.resolve()?;
            let d = if cycle {
                decompose_cycle(p, t)?
            } else {
                decompose_path(p, t)?
            };
            let rep = verify_decomposition(&d);
            let mut doc = json!({
                "k": p.k, "l": p.l, "r": p.r, "m": p.m(), "t": t, "cycle": cycle,
                "vertices": d.base.graph.n(),
                "braid_supports_independent": d.braid_supports_independent(),
            });
            merge(&mut doc, to_value(&rep));
            Ok(Report::Doc(doc))
        }
        Command::Density {
            braid: spec,
            graph,
            n,
            p,
            cap,
        } => {
            let g = match (spec, &graph) {
                (Some((l, r, t)), _) => hampow::braid(l, r, t)?.graph,
                (None, Some(path)) => read_graph(path)?,
                (None, None) => unreachable!("clap requires one source"),
            };
            let model = RandomModel::new(n, p)?;
            let mut doc = to_value(&density_profile(&g, &model, cap)?);
            if let Some((l, r, t)) = spec {
                let closed = match braid_m_closed_form(l, r, t) {
                    BraidDensity::Closed(x) => {
                        Value::String(format!("{}/{}", x.numer(), x.denom()))
                    }
                    BraidDensity::Unknown => Value::Null,
                };
                merge(&mut doc, json!({ "m_closed_form": closed }));
            }
            Ok(Report::Doc(doc))
        }
        Command::Search {
            m,
            graph,
            n,
            p,
            max_nodes,
            max_millis,
        } => {
            let mut g = match (&graph, n) {
                (Some(path), _) => read_graph(path)?,
                (None, Some(n)) => Graph::empty(n),
                (None, None) => unreachable!("clap requires one source"),
            };
            if let Some(p) = p {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidParameter(format!("p = {p} not in [0, 1]")));
                }
                g = g.union(&sample_gnp(g.n(), p, seed))?;
            }
            let defaults = SearchBudget::default();
            let budget = SearchBudget::new(
                max_nodes.unwrap_or(defaults.max_nodes),
                max_millis.unwrap_or(defaults.max_millis),
                false,
            )?;
            let out = contains_power_ham_cycle(&g, m, &budget)?;
            let witness = match &out.verdict {
                Verdict::Found(w) => json!(w),
                _ => Value::Null,
            };
            Ok(Report::Doc(json!({
                "n": g.n(),
                "edges": g.edge_count(),
                "m": m,
                "p": p,
                "seed": p.map(|_| seed),
                "verdict": out.verdict.token(),
                "witness": witness,
                "nodes_expanded": out.nodes_expanded,
            })))
        }
        Command::Experiment {
            config,
            mode,
            n,
            records,
        } => {
            let mut cfg = ExperimentConfig::from_file(&config)?;
            if let Some(s) = cli.seed {
                cfg.run.seed = s;
            }
            let (doc, recs, points) = match mode {
                Mode::Curve => {
                    let run = success_curve(&cfg, workers)?;
                    (None, run.records, run.points)
                }
                Mode::PHalf => {
                    let est = find_p_half(&cfg, n.expect("clap requires --n"), workers)?;
                    let recs = est.records.clone();
                    let points = est.probes.clone();
                    (Some(to_value(&est)), recs, points)
                }
                Mode::Scan => {
                    let scan = threshold_scan(&cfg, workers)?;
                    let recs = scan
                        .estimates
                        .iter()
                        .flat_map(|e| e.records.clone())
                        .collect();
                    let points = scan
                        .estimates
                        .iter()
                        .flat_map(|e| e.probes.clone())
                        .collect();
                    (Some(to_value(&scan)), recs, points)
                }
            };
            if let Some(path) = &records {
                write_jsonl(&recs, BufWriter::new(File::create(path)?))?;
            }
            Ok(match doc {
                Some(mut d) => {
                    merge(&mut d, json!({ "config_hash": cfg.hash() }));
                    Report::Doc(d)
                }
                // records already went to the file; csv and human keep the
                // per-point summary
                None if records.is_some() && !matches!(format, Format::Json) => Report::Curve {
                    points,
                    records: Vec::new(),
                },
                None if records.is_some() => Report::Doc(json!({
                    "config_hash": cfg.hash(),
                    "points": to_value(&points),
                })),
                None => Report::Curve {
                    points,
                    records: recs,
                },
            })
        }
        Command::Audit { kind } => match kind {
            AuditKind::LowerBound {
                params,
                n,
                eps,
                p,
                cap,
            } => {
                let pr = params.resolve()?;
                let spec = LowerBoundSpec::new(n, pr.k, pr.m(), parse_ratio(&eps)?)?;
                Ok(Report::Doc(to_value(&lower_bound_audit(
                    &spec, pr, p, seed, cap,
                )?)))
            }
            AuditKind::PathEdges { q } => Ok(Report::Doc(to_value(&path_edge_audit(q)?))),
        },
    }
}

fn gadget(kind: GadgetKind) -> Result<Report> {
    let (name, g, formula, dump) = match kind {
        GadgetKind::Braid { l, r, t, dump } => (
            "braid",
            braid(l, r, t)?,
            Some(braid_edge_formula(l, r, t)),
            dump,
        ),
        GadgetKind::MultiBraid { s, l, r, t, dump } => (
            "multi_braid",
            multi_braid(s, l, r, t)?,
            Some(s * braid_edge_formula(l, r, t)),
            dump,
        ),
        GadgetKind::BMinus { params, dump } => {
            let p = params.resolve()?;
            ("b_minus", b_minus(p)?, Some(b_minus_edge_formula(p)), dump)
        }
        GadgetKind::LowerBound { n, k, m, eps, dump } => {
            let spec = LowerBoundSpec::new(n, k, m, parse_ratio(&eps)?)?;
            (
                "lower_bound",
                lower_bound_graph(&spec)?.gadget(),
                None,
                dump,
            )
        }
        GadgetKind::PowerPath { s, m, dump } => {
            let g = power_path(s, m);
            let formula = (s > m).then(|| power_path_edge_formula(s, m));
            ("power_path", plain(g)?, formula, dump)
        }
        GadgetKind::PowerCycle { n, m, dump } => {
            ("power_cycle", plain(power_cycle(n, m)?)?, None, dump)
        }
    };
    if let Some(path) = &dump.edges {
        let edges = BufWriter::new(File::create(path)?);
        match &dump.labels {
            Some(lp) => g.write_dump(edges, BufWriter::new(File::create(lp)?))?,
            None => g.graph.write_edge_list(edges)?,
        }
    }
    Ok(Report::Doc(json!({
        "kind": name,
        "vertices": g.graph.n(),
        "edges": g.graph.edge_count(),
        "edge_formula": formula,
        "min_degree": g.graph.min_degree(),
        "max_degree": g.graph.max_degree(),
    })))
}

/// A graph without structure: every vertex gets a trivial label.
fn plain(g: Graph) -> Result<LabeledGadget> {
    let labels = (0..g.n())
        .map(|v| Label::new(Role::Part, 0, 0, v))
        .collect();
    LabeledGadget::new(g, labels)
}

fn read_graph(path: &Path) -> Result<Graph> {
    Graph::read_edge_list(path, true)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialise")
}

fn merge(into: &mut Value, extra: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, extra) {
        a.extend(b);
    }
}

fn emit(format: Format, rep: Report) -> Result<()> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match (format, rep) {
        (Format::Json, Report::Doc(doc)) => writeln!(out, "{doc}")?,
        (Format::Json, Report::Curve { records, .. }) => write_jsonl(&records, &mut out)?,
        (Format::Csv, Report::Curve { points, .. }) => write_summary_csv(&points, &mut out)?,
        (Format::Human, Report::Curve { points, .. }) => {
            for (i, pt) in points.iter().enumerate() {
                write_human(&mut out, &to_value(pt), &format!("points.{i}"))?;
            }
        }
        (Format::Csv, Report::Doc(doc)) => {
            let flat = flatten(&doc);
            let mut w = csv::Writer::from_writer(&mut out);
            let io = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(flat.keys()).map_err(io)?;
            w.write_record(flat.values().map(scalar_text)).map_err(io)?;
            w.flush()?;
        }
        (Format::Human, Report::Doc(doc)) => write_human(&mut out, &doc, "")?,
    }
    out.flush()?;
    Ok(())
}

/// Nested objects become dotted keys; arrays stay as compact JSON.
fn flatten(v: &Value) -> Map<String, Value> {
    fn go(v: &Value, prefix: &str, out: &mut Map<String, Value>) {
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    let key = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    go(x, &key, out);
                }
            }
            other => {
                out.insert(prefix.to_string(), other.clone());
            }
        }
    }
    let mut out = Map::new();
    go(v, "", &mut out);
    out
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn write_human<W: Write>(out: &mut W, doc: &Value, prefix: &str) -> Result<()> {
    let flat = flatten(doc);
    let width = flat.keys().map(|k| k.len()).max().unwrap_or(0) + prefix.len() + 1;
    for (k, v) in &flat {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        writeln!(out, "{key:<width$}  {}", scalar_text(v))?;
    }
    Ok(())
}
