//! `oracle-check`: the brute-force equivalence battery.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use mbr_core::broadcast::btime_all;
use mbr_core::generate::{random_extremal_scenario, random_tree, Shape, TreeSpec};
use mbr_core::oracle::{btime_bruteforce, max_regret_bruteforce, minmax_center_bruteforce};
use mbr_core::scenario_regret::{max_regret_fast, max_regret_naive, preprocess_extremes};
use mbr_core::{solve, write_tree_file, Tree, Weight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{threads, Failure, Outcome};

const MAX_N: usize = 10;
const BTIME_MAX_N: usize = 8;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Number of random instances.
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 2)]
    min_n: usize,
    #[arg(long, default_value_t = 9)]
    max_n: usize,
    /// Comma-separated connection latencies, used round-robin.
    #[arg(long, default_value = "0,1,2,5")]
    rhos: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for reproducer files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Skews the fast regret routine by one (harness self-test).
    #[arg(long, hide = true)]
    inject_fault: bool,
}

/// The first disagreement found on one instance, if any.
type Verdict = Result<Option<String>, Failure>;

struct Battery {
    fault: bool,
}

impl Battery {
    /// First disagreement on `(t, rho)`, if any.
    fn run(&self, t: &Tree, rho: Weight, scenario_seed: u64) -> Result<Option<String>, Failure> {
        let n = t.n();
        if n <= BTIME_MAX_N {
            let s = random_extremal_scenario(t, &mut ChaCha8Rng::seed_from_u64(scenario_seed));
            let dp = btime_all(t, &s, rho);
            for (v, &got) in dp.iter().enumerate() {
                let want = btime_bruteforce(t, s.weights(), rho, v)?;
                if got != want {
                    return Ok(Some(format!(
                        "broadcast time of vertex {v} under {:?}: dynamic program {got}, brute force {want}",
                        s.weights()
                    )));
                }
            }
        }
        let tables = preprocess_extremes(t, rho)?;
        for x in 0..n {
            let want = max_regret_bruteforce(t, rho, x)?;
            let naive = max_regret_naive(t, rho, x)?.max_regret;
            let mut fast = max_regret_fast(t, rho, x, &tables)?.max_regret;
            if self.fault && n >= 3 && x == 0 {
                fast += 1;
            }
            if naive != want || fast != want {
                return Ok(Some(format!(
                    "maximum regret of vertex {x}: naive {naive}, fast {fast}, brute force {want}"
                )));
            }
        }
        let (_, want) = minmax_center_bruteforce(t, rho)?;
        let got = solve(t, rho)?;
        if got.max_regret != want {
            return Ok(Some(format!(
                "solver returned vertex {} with regret {}, brute force optimum {want}",
                got.center, got.max_regret
            )));
        }
        Ok(None)
    }
}

/// `t` with leaf `v` removed and higher ids shifted down.
fn without_leaf(t: &Tree, v: usize) -> Tree {
    let shift = |u: usize| if u > v { u - 1 } else { u };
    let edges: Vec<_> = t
        .edges()
        .iter()
        .filter(|e| e.u != v && e.v != v)
        .map(|e| (shift(e.u), shift(e.v), e.interval.lo(), e.interval.hi()))
        .collect();
    Tree::with_vertex_count(t.n() - 1, &edges).expect("removing a leaf keeps a tree")
}

/// Drops leaves while the mismatch persists.
fn minimize(
    b: &Battery,
    mut t: Tree,
    rho: Weight,
    seed: u64,
    mut msg: String,
) -> Result<(Tree, String), Failure> {
    'outer: loop {
        for v in (0..t.n()).filter(|&v| t.degree(v) == 1) {
            let smaller = without_leaf(&t, v);
            if let Some(m) = b.run(&smaller, rho, seed)? {
                t = smaller;
                msg = m;
                continue 'outer;
            }
        }
        return Ok((t, msg));
    }
}

pub fn run(args: &Args) -> Outcome {
    let rhos = args
        .rhos
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<Weight>()
                .map_err(|_| Failure::Usage(format!("bad latency `{s}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if rhos.is_empty() || rhos.iter().any(|&r| r < 0) {
        return Err(Failure::Usage(
            "--rhos needs at least one nonnegative latency".into(),
        ));
    }
    if args.count == 0 || args.min_n == 0 || args.min_n > args.max_n {
        return Err(Failure::Usage("empty instance range".into()));
    }
    if args.max_n > MAX_N {
        return Err(Failure::Usage(format!(
            "--max-n is capped at {MAX_N} for brute force"
        )));
    }

    let battery = Battery {
        fault: args.inject_fault,
    };
    let instance = |i: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed.wrapping_add(i as u64));
        let n = rng.gen_range(args.min_n..=args.max_n);
        let t = random_tree(
            &TreeSpec {
                n,
                lo: 0,
                hi: 9,
                shape: Shape::Random,
            },
            &mut rng,
        )
        .expect("valid range");
        (t, rhos[i % rhos.len()], rng.gen())
    };
    let results: Mutex<Vec<Option<Verdict>>> = Mutex::new((0..args.count).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..threads().min(args.count) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= args.count {
                    break;
                }
                let (t, rho, sseed) = instance(i);
                let r = battery.run(&t, rho, sseed);
                results.lock().expect("no poisoned workers")[i] = Some(r);
            });
        }
    });

    for (i, r) in results
        .into_inner()
        .expect("workers joined")
        .into_iter()
        .enumerate()
    {
        if let Some(msg) = r.expect("every instance ran")? {
            let (t, rho, sseed) = instance(i);
            let (small, msg) = minimize(&battery, t, rho, sseed, msg)?;
            std::fs::create_dir_all(&args.out).map_err(|e| {
                Failure::Usage(format!("cannot create {}: {e}", args.out.display()))
            })?;
            let path = args
                .out
                .join(format!("oracle-repro-{}-{i}.tree", args.seed));
            let body = format!(
                "# oracle mismatch (seed {}, instance {i}, scenario seed {sseed})\n# {msg}\n{}",
                args.seed,
                write_tree_file(&small, rho)
            );
            std::fs::write(&path, body)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            return Err(Failure::Mismatch(format!(
                "instance {i}: {msg}\nreproducer written to {}",
                path.display()
            )));
        }
    }
    println!(
        "oracle-check: {} instances with n in [{}, {}], latencies {:?}: all routines agree",
        args.count, args.min_n, args.max_n, rhos
    );
    Ok(())
}
