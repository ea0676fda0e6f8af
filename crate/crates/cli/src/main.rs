use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use saturnum::construction::{analyze, nanotube_matching};
use saturnum::discharging::verify_certificate;
use saturnum::io::{read_any, write_planar_code};
use saturnum::matching::{greedy_maximal, is_maximal, Matching};
use saturnum::solver::{saturation_exact, SolveRecord};
use saturnum::spiral::generate_isomers;
use saturnum::tube::{build_nanotube, find_cap, TubeSpec};
use saturnum::FullereneGraph;
use saturnum_cli::{solve_all, survey_row, Config, CSV_HEADER};
use serde_json::json;

/// Saturation numbers of fullerene graphs.
#[derive(Parser)]
#[command(name = "saturnum", version)]
struct Cli {
    /// Config file (key = value); defaults to $SATURNUM_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write all isomers on n vertices as planar_code.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Saturation numbers (or greedy maximal matchings) as JSON lines.
    Saturation {
        #[command(flatten)]
        method: Method,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Build a capped nanotube and optionally match and certify it.
    Nanotube {
        #[arg(long)]
        p1: i64,
        #[arg(long)]
        p2: i64,
        #[arg(long)]
        rings: usize,
        /// Cap file, config name, or builtin:5_5 / builtin:8_0.
        #[arg(long)]
        cap_start: String,
        #[arg(long)]
        cap_end: String,
        #[arg(long = "match")]
        run_match: bool,
        /// Also write the graph as planar_code.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate, solve and tabulate every n in a range.
    Survey {
        #[arg(long)]
        min: usize,
        #[arg(long)]
        max: usize,
        #[arg(long, value_enum, default_value_t = Report::Csv)]
        report: Report,
        /// Allow n above 50 (n = 60 takes about a minute per core).
        #[arg(long)]
        deep: bool,
    },
    /// Enumerate caps for a tube type.
    FindCap {
        #[arg(long)]
        p1: i64,
        #[arg(long)]
        p2: i64,
        #[arg(long, default_value_t = 14)]
        max_faces: usize,
        /// Write cap_<i>.txt files here instead of printing.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Check the discharging certificate for a matching of each graph.
    Certify {
        #[command(flatten)]
        method: Method,
        #[arg(long = "in")]
        input: PathBuf,
        /// Include per-vertex and per-face charges.
        #[arg(long)]
        trace: bool,
    },
    /// Pentagon clustering and patch cuts of each graph.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct Method {
    #[arg(long)]
    exact: bool,
    /// Greedy maximal matching with this seed.
    #[arg(long)]
    greedy: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Report {
    Csv,
    Json,
}

enum Failure {
    Input(String),
    Budget,
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget) => {
            eprintln!("search budget exceeded; results marked partial");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = Config::load(cli.config.as_deref()).map_err(Failure::Input)?;
    if let Some(j) = cli.jobs.or(cfg.jobs) {
        rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global().map_err(input)?;
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = match cli.cmd {
        Cmd::Generate { n, out: path } => generate(n, path.as_deref(), &mut out),
        Cmd::Saturation { method, input } => saturation(&cfg, &method, &input, &mut out),
        Cmd::Nanotube { p1, p2, rings, cap_start, cap_end, run_match, out: path } => {
            let spec = TubeSpec {
                p1,
                p2,
                rings,
                cap_start: cfg.resolve_cap(&cap_start).map_err(Failure::Input)?,
                cap_end: cfg.resolve_cap(&cap_end).map_err(Failure::Input)?,
            };
            nanotube(&spec, run_match, path.as_deref(), &mut out)
        }
        Cmd::Survey { min, max, report, deep } => survey(&cfg, min, max, report, deep, &mut out),
        Cmd::FindCap { p1, p2, max_faces, out_dir } => caps(p1, p2, max_faces, out_dir.as_deref(), &mut out),
        Cmd::Certify { method, input, trace } => certify(&cfg, &method, &input, trace, &mut out),
        Cmd::Analyze { input } => analyze_all(&input, &mut out),
    };
    out.flush()?;
    result
}

fn read_graphs(path: &Path) -> Result<Vec<FullereneGraph>, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    read_any(&bytes).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn generate(n: usize, path: Option<&Path>, out: &mut impl Write) -> Result<(), Failure> {
    let graphs: Vec<FullereneGraph> = generate_isomers(n).map_err(input)?.into_iter().map(|i| i.graph).collect();
    match path {
        Some(p) => {
            let mut f = BufWriter::new(fs::File::create(p)?);
            write_planar_code(&mut f, &graphs, true)?;
            f.flush()?;
        }
        None => write_planar_code(out, &graphs, true)?,
    }
    eprintln!("{} graphs on {n} vertices", graphs.len());
    Ok(())
}

/// Matching per graph: exact witness unless a greedy seed is given.
fn matchings(cfg: &Config, method: &Method, graphs: &[FullereneGraph]) -> Vec<Result<(Matching, bool, u64), String>> {
    graphs
        .par_iter()
        .map(|g| match method.greedy {
            Some(seed) => Ok((greedy_maximal(g, seed), false, 0)),
            None => saturation_exact(g, &cfg.solver)
                .map(|r| (r.witness, r.proof.optimal, r.proof.nodes_explored))
                .map_err(|e| e.to_string()),
        })
        .collect()
}

fn saturation(cfg: &Config, method: &Method, path: &Path, out: &mut impl Write) -> Result<(), Failure> {
    let graphs = read_graphs(path)?;
    let (mut partial, mut failed) = (false, false);
    for (id, (g, r)) in graphs.iter().zip(matchings(cfg, method, &graphs)).enumerate() {
        let line = match r {
            Ok((m, optimal, nodes)) if method.greedy.is_none() => {
                partial |= !optimal;
                let r = saturnum::solver::SaturationResult {
                    s: m.len(),
                    witness: m,
                    proof: saturnum::solver::Proof { nodes_explored: nodes, lower_bound_used: 0, optimal },
                };
                serde_json::to_value(SolveRecord::new(id, g.n(), &r)).unwrap()
            }
            Ok((m, _, _)) => json!({
                "id": id, "n": g.n(), "size": m.len(), "seed": method.greedy, "maximal": is_maximal(g, &m),
                "witness_edges": m.edges,
            }),
            Err(e) => {
                failed = true;
                json!({ "id": id, "n": g.n(), "error": e })
            }
        };
        writeln!(out, "{line}")?;
    }
    finish(failed, partial)
}

fn finish(failed: bool, partial: bool) -> Result<(), Failure> {
    if failed {
        Err(Failure::Input("some graphs could not be solved".into()))
    } else if partial {
        Err(Failure::Budget)
    } else {
        Ok(())
    }
}

fn nanotube(spec: &TubeSpec, run_match: bool, path: Option<&Path>, out: &mut impl Write) -> Result<(), Failure> {
    let (g, rs) = build_nanotube(spec).map_err(input)?;
    if let Some(p) = path {
        let mut f = BufWriter::new(fs::File::create(p)?);
        write_planar_code(&mut f, std::slice::from_ref(&g), true)?;
        f.flush()?;
    }
    let mut report = json!({
        "p1": spec.p1, "p2": spec.p2, "rings": rs.num_rings(), "n": g.n(), "faces": g.num_faces(),
        "hexagons_in_tube": rs.hexagons.len(),
    });
    if run_match {
        let nm = nanotube_matching(&g, &rs).map_err(input)?;
        let cert = verify_certificate(&g, &nm.matching, false);
        let maximal = is_maximal(&g, &nm.matching);
        report["matching"] = json!({
            "size": nm.matching.len(), "maximal": maximal, "phase": nm.phase,
            "pattern_edges": nm.pattern_edges, "completion_edges": nm.completion_edges,
            "completion_optimal": nm.completion_optimal, "witness_edges": nm.matching.edges,
        });
        report["certificate"] = json!({
            "valid": cert.valid, "implied_bound": cert.implied_bound, "ledger_bound": cert.ledger_bound,
        });
        report["optimal"] = json!(maximal && cert.valid && nm.matching.len() == cert.implied_bound);
    }
    writeln!(out, "{report}")?;
    Ok(())
}

fn survey(cfg: &Config, min: usize, max: usize, report: Report, deep: bool, out: &mut impl Write) -> Result<(), Failure> {
    if min > max {
        return Err(Failure::Input(format!("empty range {min}..{max}")));
    }
    if max > 50 && !deep {
        return Err(Failure::Input("n above 50 needs --deep".into()));
    }
    if let Report::Csv = report {
        writeln!(out, "{CSV_HEADER}")?;
    }
    let mut partial = false;
    for n in (min..=max).filter(|n| n % 2 == 0) {
        let isomers = generate_isomers(n).map_err(input)?;
        let row = survey_row(n, &solve_all(&isomers, &cfg.solver)).map_err(input)?;
        partial |= row.partial;
        match report {
            Report::Csv => writeln!(out, "{}", row.csv())?,
            Report::Json => writeln!(out, "{}", serde_json::to_string(&row).unwrap())?,
        }
        out.flush()?;
    }
    finish(false, partial)
}

fn caps(p1: i64, p2: i64, max_faces: usize, dir: Option<&Path>, out: &mut impl Write) -> Result<(), Failure> {
    let found = find_cap(p1, p2, max_faces);
    for (i, cap) in found.iter().enumerate() {
        let text = format!("# cap {i}: {} faces, boundary {}\n{}", cap.num_faces(), cap.boundary_code, cap.to_text());
        match dir {
            Some(d) => fs::write(d.join(format!("cap_{i}.txt")), text)?,
            None => writeln!(out, "{text}")?,
        }
    }
    eprintln!("{} caps for ({p1},{p2}) with at most {max_faces} faces", found.len());
    Ok(())
}

fn certify(cfg: &Config, method: &Method, path: &Path, trace: bool, out: &mut impl Write) -> Result<(), Failure> {
    let graphs = read_graphs(path)?;
    let mut failed = false;
    for (id, (g, r)) in graphs.iter().zip(matchings(cfg, method, &graphs)).enumerate() {
        let line = match r {
            Ok((m, _, _)) => {
                let mut v = serde_json::to_value(verify_certificate(g, &m, trace)).unwrap();
                v["id"] = json!(id);
                v
            }
            Err(e) => {
                failed = true;
                json!({ "id": id, "n": g.n(), "error": e })
            }
        };
        writeln!(out, "{line}")?;
    }
    finish(failed, false)
}

fn analyze_all(path: &Path, out: &mut impl Write) -> Result<(), Failure> {
    let graphs = read_graphs(path)?;
    let reports: Vec<_> = graphs.par_iter().map(|g| analyze(g).map(|(r, _)| r)).collect();
    for (id, r) in reports.into_iter().enumerate() {
        let mut v = serde_json::to_value(r.map_err(input)?).unwrap();
        v["id"] = json!(id);
        writeln!(out, "{v}")?;
    }
    Ok(())
}
