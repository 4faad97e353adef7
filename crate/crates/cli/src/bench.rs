//! `bench`: wall-clock timings as CSV.

use std::time::Instant;

use mbr_core::generate::{random_tree, Shape, TreeSpec};
use mbr_core::scenario_regret::{max_regret_fast, max_regret_naive, preprocess_extremes};
use mbr_core::{solve, Weight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Failure, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BenchMode {
    /// One naive maximum-regret query.
    Naive,
    /// Preprocessing plus one fast maximum-regret query.
    Fast,
    /// A full solve.
    Solve,
    All,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Comma-separated tree sizes.
    #[arg(long, default_value = "500,1000,2000")]
    sizes: String,
    /// Repetitions per size and mode.
    #[arg(long, default_value_t = 3)]
    count: usize,
    #[arg(long, value_enum, default_value = "all")]
    mode: BenchMode,
    #[arg(long, default_value = "random")]
    shape: Shape,
    #[arg(long, default_value_t = 1)]
    rho: Weight,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

pub fn run(args: &Args) -> Outcome {
    let sizes = args
        .sizes
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Failure::Usage(format!("bad size `{s}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Failure::Usage("--sizes needs positive tree sizes".into()));
    }
    if args.rho < 0 {
        return Err(Failure::Usage("--rho must be nonnegative".into()));
    }
    let modes: &[BenchMode] = match args.mode {
        BenchMode::All => &[BenchMode::Naive, BenchMode::Fast, BenchMode::Solve],
        ref m => std::slice::from_ref(m),
    };
    println!("n,mode,rep,micros");
    for &n in &sizes {
        for rep in 0..args.count {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ (n as u64) << 20 ^ rep as u64);
            let t = random_tree(
                &TreeSpec {
                    n,
                    lo: 0,
                    hi: 100,
                    shape: args.shape,
                },
                &mut rng,
            )?;
            let x = rng.gen_range(0..n);
            for &mode in modes {
                let start = Instant::now();
                let (name, value) = match mode {
                    BenchMode::Naive => ("naive", max_regret_naive(&t, args.rho, x)?.max_regret),
                    BenchMode::Fast => {
                        let tables = preprocess_extremes(&t, args.rho)?;
                        (
                            "fast",
                            max_regret_fast(&t, args.rho, x, &tables)?.max_regret,
                        )
                    }
                    BenchMode::Solve => ("solve", solve(&t, args.rho)?.max_regret),
                    BenchMode::All => unreachable!("expanded above"),
                };
                let micros = start.elapsed().as_micros();
                std::hint::black_box(value);
                println!("{n},{name},{rep},{micros}");
            }
        }
    }
    Ok(())
}
