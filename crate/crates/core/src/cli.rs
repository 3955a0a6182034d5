//! Command implementations for the `stepup` binary.
//!
//! Every command is a pure function of its flags and input files. The first
//! stdout line echoes the configuration (`# stepup <command> key=value ...`);
//! artifacts go to `--out` when given and to stdout otherwise.
//!
//! Exit codes: 0 success, 1 negative result (not found, counterexample,
//! violation, infeasible, set too small), 2 bad arguments or unreadable
//! input, 3 internal inconsistency in the extractor.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::certificate::{extract_edge_with, LayerParams};
use crate::coloring::bound::probabilistic_bound;
use crate::coloring::steiner::greedy_partial_steiner;
use crate::coloring::{random_phi_search_indexed, trial_rng, verify_phi, PairColoring, PhiCheck};
use crate::construction::{write_edge_list, HypergraphView, MATERIALIZE_CAP};
use crate::delta::OrderedTuple;
use crate::error::Error;
use crate::verification::{
    greedy_independent_lower_bound, sweep_line, EdgeIndex, SweepLine, EXACT_CAP,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

/// Largest width swept over all colorings without `--sample`.
pub const FULL_SWEEP_MAX_D: u32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "stepup",
    version,
    about = "Stepping-up 4-graph construction toolkit"
)]
pub struct Cli {
    /// Worker threads (overrides STEPUP_WORKERS).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Random search for a coloring in which every n-set has a good triple.
    SearchPhi(SearchPhiArgs),
    /// Check a coloring file against n.
    VerifyPhi(VerifyPhiArgs),
    /// Write the edge list of the 4-graph.
    Build(GraphArgs),
    /// Search the 4-graph for a K5.
    K5check(GraphArgs),
    /// Independence number (exact up to the cap, greedy beyond it).
    Alpha(AlphaArgs),
    /// Extract an edge inside a vertex set.
    Extract(ExtractArgs),
    /// Greedy partial Steiner triple system.
    Steiner(SteinerArgs),
    /// Union-bound feasibility for (n, c0).
    Bound(BoundArgs),
    /// K5 and alpha over all (or sampled) colorings of a width.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct SearchPhiArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyPhiArgs {
    #[arg(long)]
    pub coloring: PathBuf,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(long)]
    pub coloring: PathBuf,
    /// Vertex width; defaults to the coloring's universe size.
    #[arg(long)]
    pub d: Option<u32>,
    /// Vertex cap (build: 4096, k5check: 64).
    #[arg(long)]
    pub cap: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AlphaArgs {
    #[arg(long)]
    pub coloring: PathBuf,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long, default_value_t = EXACT_CAP)]
    pub cap: u64,
    /// Seed for the greedy bound used above the cap.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long)]
    pub coloring: PathBuf,
    /// Vertex-set file: ascending integers, one per line.
    #[arg(long)]
    pub set: PathBuf,
    #[arg(long)]
    pub n: usize,
    /// Layer shrink factor; defaults to 2n.
    #[arg(long)]
    pub factor: Option<usize>,
    #[arg(long, default_value_t = 5)]
    pub depth: usize,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long)]
    pub strict_paper: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SteinerArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub c0: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub d: u32,
    /// Sweep this many random colorings instead of all of them.
    #[arg(long)]
    pub sample: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = EXACT_CAP)]
    pub cap: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Result of one command: exit code plus the text for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn usage(err: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_USAGE,
            stderr: format!("error: {err}\n"),
            ..Self::default()
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn execute<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Output {
                    code,
                    stdout: text,
                    ..Output::default()
                }
            } else {
                Output {
                    code,
                    stderr: text,
                    ..Output::default()
                }
            }
        }
    }
}

fn configure_workers(workers: Option<usize>) {
    let workers = workers.or_else(|| {
        std::env::var("STEPUP_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(w) = workers.filter(|&w| w > 0) {
        // fails only if the pool already exists, which is fine
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global();
    }
}

pub fn run(cli: Cli) -> Output {
    configure_workers(cli.workers);
    match cli.command {
        Command::SearchPhi(a) => search_phi(a),
        Command::VerifyPhi(a) => verify_phi_cmd(a),
        Command::Build(a) => build(a),
        Command::K5check(a) => k5check(a),
        Command::Alpha(a) => alpha(a),
        Command::Extract(a) => extract(a),
        Command::Steiner(a) => steiner(a),
        Command::Bound(a) => bound(a),
        Command::Sweep(a) => sweep(a),
    }
}

/// Writes `body` to `out` if given, else appends it to `stdout`.
fn emit(out: Option<&Path>, body: &str, stdout: &mut String) -> Result<(), Output> {
    match out {
        Some(path) => fs::write(path, body)
            .map_err(|e| Output::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            stdout.push_str(body);
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String, Output> {
    fs::read_to_string(path)
        .map_err(|e| Output::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_coloring(path: &Path) -> Result<PairColoring, Output> {
    read(path)?
        .parse()
        .map_err(|e: Error| Output::usage(format!("{}: {e}", path.display())))
}

fn load_view(path: &Path, d: Option<u32>) -> Result<HypergraphView, Output> {
    let phi = load_coloring(path)?;
    let width = d.unwrap_or(phi.universe() as u32);
    HypergraphView::new(width, phi).map_err(Output::usage)
}

/// Vertex-set file: one base-10 integer per line, strictly ascending.
pub fn parse_vertex_set(text: &str) -> Result<OrderedTuple, Error> {
    let values = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse::<u64>()
                .map_err(|e| Error::Parse(format!("bad vertex {l:?}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    OrderedTuple::new(values)
}

pub fn write_vertex_set(set: &OrderedTuple) -> String {
    set.as_slice().iter().map(|v| format!("{v}\n")).collect()
}

fn unwrap_or_output(r: Result<Output, Output>) -> Output {
    r.unwrap_or_else(|e| e)
}

fn search_phi(a: SearchPhiArgs) -> Output {
    let mut stdout = format!(
        "# stepup search-phi d={} n={} trials={} seed={}\n",
        a.d, a.n, a.trials, a.seed
    );
    if a.n < 3 || a.n > a.d {
        return Output::usage(Error::BadArity { n: a.n, d: a.d });
    }
    if a.trials == 0 {
        return Output::usage("trials must be at least 1");
    }
    unwrap_or_output(
        (|| match random_phi_search_indexed(a.d, a.n, a.trials, a.seed) {
            Some((trial, phi)) => {
                writeln!(stdout, "found trial={trial}").unwrap();
                emit(a.out.as_deref(), &phi.to_string(), &mut stdout)?;
                Ok(Output {
                    code: EXIT_OK,
                    stdout,
                    ..Output::default()
                })
            }
            None => {
                writeln!(stdout, "not found").unwrap();
                Ok(Output {
                    code: EXIT_NEGATIVE,
                    stdout,
                    ..Output::default()
                })
            }
        })(),
    )
}

fn verify_phi_cmd(a: VerifyPhiArgs) -> Output {
    unwrap_or_output((|| {
        let phi = load_coloring(&a.coloring)?;
        let mut stdout = format!("# stepup verify-phi d={} n={}\n", phi.universe(), a.n);
        match verify_phi(&phi, a.n).map_err(Output::usage)? {
            PhiCheck::Ok => {
                stdout.push_str("OK\n");
                Ok(Output {
                    code: EXIT_OK,
                    stdout,
                    ..Output::default()
                })
            }
            PhiCheck::Counterexample(set) => {
                let list: Vec<String> = set.iter().map(ToString::to_string).collect();
                writeln!(stdout, "COUNTEREXAMPLE {}", list.join(" ")).unwrap();
                Ok(Output {
                    code: EXIT_NEGATIVE,
                    stdout,
                    ..Output::default()
                })
            }
        }
    })())
}

fn build(a: GraphArgs) -> Output {
    unwrap_or_output((|| {
        let h = load_view(&a.coloring, a.d)?;
        let cap = a.cap.unwrap_or(MATERIALIZE_CAP);
        let mut stdout = format!("# stepup build d={} cap={cap}\n", h.width());
        let edges = h.materialize(cap).map_err(Output::usage)?;
        let mut counts = [0usize; 3];
        for e in &edges {
            counts[e.rule as usize] += 1;
        }
        writeln!(
            stdout,
            "edges={} I={} II={} III={}",
            edges.len(),
            counts[0],
            counts[1],
            counts[2]
        )
        .unwrap();
        emit(a.out.as_deref(), &write_edge_list(&edges), &mut stdout)?;
        Ok(Output {
            code: EXIT_OK,
            stdout,
            ..Output::default()
        })
    })())
}

fn k5check(a: GraphArgs) -> Output {
    unwrap_or_output((|| {
        let h = load_view(&a.coloring, a.d)?;
        let cap = a.cap.unwrap_or(EXACT_CAP);
        let mut stdout = format!("# stepup k5check d={} cap={cap}\n", h.width());
        let index = EdgeIndex::build(&h, cap).map_err(Output::usage)?;
        let body = match index.find_k5() {
            None => "k5free=true\n".to_string(),
            Some(v) => format!(
                "k5free=false K5 {} {} {} {} {}\n",
                v[0], v[1], v[2], v[3], v[4]
            ),
        };
        let code = if body.starts_with("k5free=true") {
            EXIT_OK
        } else {
            EXIT_NEGATIVE
        };
        emit(a.out.as_deref(), &body, &mut stdout)?;
        Ok(Output {
            code,
            stdout,
            ..Output::default()
        })
    })())
}

fn alpha(a: AlphaArgs) -> Output {
    unwrap_or_output((|| {
        let h = load_view(&a.coloring, a.d)?;
        let mut stdout = format!(
            "# stepup alpha d={} cap={} seed={}\n",
            h.width(),
            a.cap,
            a.seed
        );
        let exact = h.vertex_count() <= a.cap.min(EXACT_CAP);
        let (size, witness) = if exact {
            let r = EdgeIndex::build(&h, a.cap)
                .map_err(Output::usage)?
                .independence_number();
            (r.alpha, r.witness)
        } else {
            let s = greedy_independent_lower_bound(&h, a.seed);
            (s.len(), s.into_vec())
        };
        let list: Vec<String> = witness.iter().map(ToString::to_string).collect();
        writeln!(stdout, "alpha={size} exact={exact}").unwrap();
        writeln!(stdout, "witness {}", list.join(" ")).unwrap();
        Ok(Output {
            code: EXIT_OK,
            stdout,
            ..Output::default()
        })
    })())
}

fn extract(a: ExtractArgs) -> Output {
    unwrap_or_output((|| {
        let h = load_view(&a.coloring, a.d)?;
        let set = parse_vertex_set(&read(&a.set)?)
            .map_err(|e| Output::usage(format!("{}: {e}", a.set.display())))?;
        let params = LayerParams {
            n: a.n,
            factor: a.factor.unwrap_or(2 * a.n),
            depth: a.depth,
            strict: a.strict_paper,
        };
        let mut stdout = format!(
            "# stepup extract d={} n={} factor={} depth={} strict={} size={}\n",
            h.width(),
            params.n,
            params.factor,
            params.depth,
            params.strict,
            set.len()
        );
        match extract_edge_with(&h, &set, &params) {
            Ok(trace) => {
                emit(a.out.as_deref(), &trace.to_string(), &mut stdout)?;
                Ok(Output {
                    code: EXIT_OK,
                    stdout,
                    ..Output::default()
                })
            }
            Err(Error::InsufficientSize) => Ok(Output {
                code: EXIT_NEGATIVE,
                stdout,
                stderr: format!("{}\n", Error::InsufficientSize),
            }),
            Err(e @ Error::InternalInconsistency(_)) => Ok(Output {
                code: EXIT_INCONSISTENT,
                stdout,
                stderr: format!("{e}\n"),
            }),
            Err(e) => Err(Output::usage(e)),
        }
    })())
}

fn steiner(a: SteinerArgs) -> Output {
    unwrap_or_output((|| {
        let mut stdout = format!("# stepup steiner n={}\n", a.n);
        let s = greedy_partial_steiner(a.n).map_err(Output::usage)?;
        writeln!(stdout, "count={}", s.count()).unwrap();
        let body: String = s
            .triples
            .iter()
            .map(|t| format!("{} {} {}\n", t[0], t[1], t[2]))
            .collect();
        emit(a.out.as_deref(), &body, &mut stdout)?;
        Ok(Output {
            code: EXIT_OK,
            stdout,
            ..Output::default()
        })
    })())
}

fn bound(a: BoundArgs) -> Output {
    let mut stdout = format!("# stepup bound n={} c0={}\n", a.n, a.c0);
    match probabilistic_bound(a.n, a.c0) {
        Ok(r) => {
            stdout.push_str(&r.to_string());
            let code = if r.feasible { EXIT_OK } else { EXIT_NEGATIVE };
            Output {
                code,
                stdout,
                ..Output::default()
            }
        }
        Err(e) => Output::usage(e),
    }
}

fn sweep(a: SweepArgs) -> Output {
    unwrap_or_output((|| {
        if a.d == 0 || a.d > 63 {
            return Err(Output::usage(format!("bad width {}", a.d)));
        }
        if a.sample.is_none() && a.d > FULL_SWEEP_MAX_D {
            return Err(Output::usage(format!(
                "full sweep needs d <= {FULL_SWEEP_MAX_D}; pass --sample for d={}",
                a.d
            )));
        }
        let universe = a.d as usize;
        let mut stdout = format!(
            "# stepup sweep d={} sample={} seed={} cap={}\n",
            a.d,
            a.sample.map_or("all".to_string(), |s| s.to_string()),
            a.seed,
            a.cap
        );
        let colorings: Vec<PairColoring> = match a.sample {
            None => (0..1u64 << (universe * (universe - 1) / 2))
                .map(|code| PairColoring::from_code(universe, code))
                .collect(),
            Some(k) => (0..k)
                .map(|i| PairColoring::random(universe, &mut trial_rng(a.seed, i)))
                .collect(),
        };
        let mut lines: Vec<SweepLine> = colorings
            .into_par_iter()
            .map(|phi| {
                let h = HypergraphView::new(a.d, phi)?;
                sweep_line(&h, a.cap)
            })
            .collect::<Result<_, Error>>()
            .map_err(Output::usage)?;
        lines.sort_by(|x, y| x.code.iter().rev().cmp(y.code.iter().rev()));
        let mut body = String::new();
        for l in &lines {
            writeln!(body, "{l}").unwrap();
        }
        let violations = lines.iter().filter(|l| !l.k5free).count();
        let amin = lines.iter().map(|l| l.alpha).min().unwrap_or(0);
        let amax = lines.iter().map(|l| l.alpha).max().unwrap_or(0);
        writeln!(
            body,
            "summary colorings={} k5_violations={violations} alpha_min={amin} alpha_max={amax}",
            lines.len()
        )
        .unwrap();
        emit(a.out.as_deref(), &body, &mut stdout)?;
        let code = if violations == 0 {
            EXIT_OK
        } else {
            EXIT_NEGATIVE
        };
        Ok(Output {
            code,
            stdout,
            ..Output::default()
        })
    })())
}
