//! `mbr`: minmax-regret broadcast centers from the command line.
//!
//! Exit codes: 0 success, 1 oracle mismatch, 2 usage or parse error,
//! 3 violated invariant.

mod bench;
mod check;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mbr_core::generate::{random_tree, Shape, TreeSpec};
use mbr_core::{parse_tree_file, write_tree_file, Scenario, TreeFile, Weight};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("{0}")]
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Usage(_) | Failure::Parse(_) => 2,
            Failure::Invariant(_) => 3,
        }
    }
}

impl From<mbr_core::Error> for Failure {
    fn from(e: mbr_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

pub type Outcome = Result<(), Failure>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Naive,
    Fast,
    Both,
}

#[derive(Debug, Parser)]
#[command(
    name = "mbr",
    version,
    about = "Minmax-regret broadcast centers on trees with interval edge weights"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Input {
    /// Tree file (`n rho` header, then `u v lo hi` per edge).
    file: PathBuf,
    /// Connection latency; overrides the file header.
    #[arg(long)]
    rho: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Broadcast time of every vertex under one scenario.
    Btime {
        #[command(flatten)]
        input: Input,
        /// `lo`, `hi`, or comma-separated weights in edge order.
        #[arg(long, default_value = "lo")]
        scenario: String,
    },
    /// Broadcast centers and the prime center under one scenario.
    Centers {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "lo")]
        scenario: String,
    },
    /// Maximum regret of one vertex, or of every vertex.
    MaxRegret {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        vertex: Option<usize>,
        #[arg(long, value_enum, default_value = "fast")]
        mode: Mode,
    },
    /// Minmax-regret broadcast center.
    Solve {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "fast")]
        mode: Mode,
    },
    /// Random tree file.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        lo: Weight,
        #[arg(long, default_value_t = 10)]
        hi: Weight,
        #[arg(long, default_value = "random")]
        shape: Shape,
        #[arg(long, default_value_t = 1)]
        rho: Weight,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check every routine against brute force on random instances.
    OracleCheck(check::Args),
    /// Timing table for the regret routines and the solver.
    Bench(bench::Args),
}

fn rational(tok: &str, scale: Weight) -> Result<Weight, Failure> {
    let (p, q) = tok.split_once('/').unwrap_or((tok, "1"));
    let bad = || Failure::Parse(format!("bad number `{tok}`"));
    let p: Weight = p.trim().parse().map_err(|_| bad())?;
    let q: Weight = q.trim().parse().map_err(|_| bad())?;
    if q <= 0 || p < 0 {
        return Err(bad());
    }
    let scaled = p.checked_mul(scale).ok_or_else(bad)?;
    if scaled % q != 0 {
        return Err(Failure::Parse(format!(
            "`{tok}` is not a whole number once scaled by the file's factor {scale}"
        )));
    }
    Ok(scaled / q)
}

pub fn load(path: &Path, rho: Option<&str>) -> Result<TreeFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("cannot read {}: {e}", path.display())))?;
    let mut file =
        parse_tree_file(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    if let Some(r) = rho {
        file.rho = rational(r, file.scale)?;
    }
    Ok(file)
}

fn scenario(file: &TreeFile, spec: &str) -> Result<Scenario, Failure> {
    let t = &file.tree;
    match spec {
        "lo" => Ok(Scenario::all_lo(t)),
        "hi" => Ok(Scenario::all_hi(t)),
        list => {
            let w = list
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|tok| rational(tok, file.scale))
                .collect::<Result<Vec<_>, _>>()?;
            Scenario::new(t, w).map_err(|e| Failure::Parse(e.to_string()))
        }
    }
}

pub fn threads() -> usize {
    std::env::var("MBR_THREADS")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Btime {
            input,
            scenario: spec,
        } => {
            let file = load(&input.file, input.rho.as_deref())?;
            let s = scenario(&file, &spec)?;
            report::btime(&file, &s, input.format)
        }
        Command::Centers {
            input,
            scenario: spec,
        } => {
            let file = load(&input.file, input.rho.as_deref())?;
            let s = scenario(&file, &spec)?;
            report::centers(&file, &s, input.format)
        }
        Command::MaxRegret {
            input,
            vertex,
            mode,
        } => {
            let file = load(&input.file, input.rho.as_deref())?;
            report::max_regret(&file, vertex, mode, input.format)
        }
        Command::Solve { input, mode } => {
            let file = load(&input.file, input.rho.as_deref())?;
            report::solve(&file, mode, input.format)
        }
        Command::Gen {
            n,
            lo,
            hi,
            shape,
            rho,
            seed,
            out,
        } => {
            if n == 0 {
                return Err(Failure::Usage("--n must be at least 1".into()));
            }
            if rho < 0 {
                return Err(Failure::Usage("--rho must be nonnegative".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random_tree(&TreeSpec { n, lo, hi, shape }, &mut rng)?;
            let text = write_tree_file(&t, rho);
            match out {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::OracleCheck(args) => check::run(&args),
        Command::Bench(args) => bench::run(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("mbr: {f}");
            ExitCode::from(f.code())
        }
    }
}
