//! Output for the single-instance subcommands.

use std::collections::BTreeMap;

use mbr_core::broadcast::{broadcast_centers, btime_all, prime_broadcast_center};
use mbr_core::scenario_regret::{
    max_regret_fast, max_regret_naive, preprocess_extremes, relative_regret,
};
use mbr_core::{
    solve as solve_fast, solve_naive, RegretReport, Scenario, SolveResult, Tree, TreeFile, Weight,
};
use serde::Serialize;
use serde_json::json;

use crate::{Failure, Format, Mode, Outcome};

fn by_edge(s: &Scenario) -> BTreeMap<usize, Weight> {
    s.weights().iter().copied().enumerate().collect()
}

fn emit_json(value: serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(&value).expect("plain data")
    );
}

pub fn btime(file: &TreeFile, s: &Scenario, format: Format) -> Outcome {
    let times = btime_all(&file.tree, s, file.rho);
    match format {
        Format::Json => emit_json(json!({
            "schema": 1,
            "rho": file.rho,
            "scale": file.scale,
            "scenario": by_edge(s),
            "times": times,
        })),
        Format::Csv => {
            println!("vertex,btime");
            for (v, b) in times.iter().enumerate() {
                println!("{v},{b}");
            }
        }
        Format::Text => {
            for (v, b) in times.iter().enumerate() {
                println!("vertex {v}: {b}");
            }
        }
    }
    Ok(())
}

pub fn centers(file: &TreeFile, s: &Scenario, format: Format) -> Outcome {
    let centers = broadcast_centers(&file.tree, s, file.rho);
    let prime = prime_broadcast_center(&file.tree, s, file.rho);
    if !centers.contains(&prime) {
        return Err(Failure::Invariant(format!(
            "prime center {prime} is not a broadcast center"
        )));
    }
    match format {
        Format::Json => emit_json(json!({
            "schema": 1,
            "rho": file.rho,
            "scale": file.scale,
            "centers": centers,
            "prime": prime,
        })),
        Format::Csv => {
            println!("vertex,prime");
            for &c in &centers {
                println!("{c},{}", c == prime);
            }
        }
        Format::Text => {
            let list: Vec<_> = centers.iter().map(|c| c.to_string()).collect();
            println!("centers: {}", list.join(" "));
            println!("prime: {prime}");
        }
    }
    Ok(())
}

/// A regret report with its worst scenario spelled out as edge id to weight.
#[derive(Debug, Serialize)]
struct ReportOut {
    vertex: usize,
    max_regret: Weight,
    pivot: Option<usize>,
    j: usize,
    witness_center: usize,
    scenario: BTreeMap<usize, Weight>,
}

/// Materializes the worst scenario and confirms the report against it.
fn audited(t: &Tree, rho: Weight, r: &RegretReport) -> Result<ReportOut, Failure> {
    let s = r.worst.materialize(t, rho)?;
    if r.max_regret < 0 {
        return Err(Failure::Invariant(format!(
            "negative maximum regret at vertex {}",
            r.vertex
        )));
    }
    let times = btime_all(t, &s, rho);
    let best = times.iter().copied().min().unwrap_or(0);
    if times[r.witness_center] != best {
        return Err(Failure::Invariant(format!(
            "witness {} is not a center under the worst scenario of vertex {}",
            r.witness_center, r.vertex
        )));
    }
    if relative_regret(t, &s, rho, r.vertex, r.witness_center)? != r.max_regret {
        return Err(Failure::Invariant(format!(
            "reported regret of vertex {} does not match its worst scenario",
            r.vertex
        )));
    }
    Ok(ReportOut {
        vertex: r.vertex,
        max_regret: r.max_regret,
        pivot: r.worst.pivot,
        j: r.worst.j,
        witness_center: r.witness_center,
        scenario: by_edge(&s),
    })
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Naive => "naive",
        Mode::Fast => "fast",
        Mode::Both => "both",
    }
}

pub fn max_regret(file: &TreeFile, vertex: Option<usize>, mode: Mode, format: Format) -> Outcome {
    let t = &file.tree;
    let rho = file.rho;
    let targets: Vec<usize> = match vertex {
        Some(v) => {
            t.check_vertex(v)?;
            vec![v]
        }
        None => (0..t.n()).collect(),
    };
    let tables = preprocess_extremes(t, rho)?;
    let mut out = Vec::new();
    for &x in &targets {
        let r = match mode {
            Mode::Naive => max_regret_naive(t, rho, x)?,
            Mode::Fast => max_regret_fast(t, rho, x, &tables)?,
            Mode::Both => {
                let naive = max_regret_naive(t, rho, x)?;
                let fast = max_regret_fast(t, rho, x, &tables)?;
                if naive.max_regret != fast.max_regret {
                    return Err(Failure::Invariant(format!(
                        "naive and fast maximum regret differ at vertex {x}: {} vs {}",
                        naive.max_regret, fast.max_regret
                    )));
                }
                audited(t, rho, &naive)?;
                fast
            }
        };
        out.push(audited(t, rho, &r)?);
    }
    match format {
        Format::Json => emit_json(json!({
            "schema": 1,
            "rho": rho,
            "scale": file.scale,
            "mode": mode_name(mode),
            "reports": out,
        })),
        Format::Csv => {
            println!("vertex,max_regret,pivot,j,witness_center");
            for r in &out {
                let pivot = r.pivot.map_or(String::new(), |p| p.to_string());
                println!(
                    "{},{},{},{},{}",
                    r.vertex, r.max_regret, pivot, r.j, r.witness_center
                );
            }
        }
        Format::Text => {
            for r in &out {
                let worst = match r.pivot {
                    Some(p) => format!("pivot {p}, j = {}", r.j),
                    None => "all edges low".to_string(),
                };
                println!(
                    "vertex {}: max regret {} (worst: {worst}; witness center {})",
                    r.vertex, r.max_regret, r.witness_center
                );
            }
        }
    }
    Ok(())
}

pub fn solve(file: &TreeFile, mode: Mode, format: Format) -> Outcome {
    let t = &file.tree;
    let rho = file.rho;
    let (result, naive): (SolveResult, Option<SolveResult>) = match mode {
        Mode::Fast => (solve_fast(t, rho)?, None),
        Mode::Naive => (solve_naive(t, rho)?, None),
        Mode::Both => {
            let fast = solve_fast(t, rho)?;
            let naive = solve_naive(t, rho)?;
            if fast.max_regret != naive.max_regret {
                return Err(Failure::Invariant(format!(
                    "solver and all-vertex scan disagree: {} vs {}",
                    fast.max_regret, naive.max_regret
                )));
            }
            (fast, Some(naive))
        }
    };
    let tables = preprocess_extremes(t, rho)?;
    if max_regret_fast(t, rho, result.center, &tables)?.max_regret != result.max_regret {
        return Err(Failure::Invariant(format!(
            "reported regret of center {} is not recomputable",
            result.center
        )));
    }
    match format {
        Format::Json => {
            let mut value = json!({
                "schema": 1,
                "rho": rho,
                "scale": file.scale,
                "mode": mode_name(mode),
                "center": result.center,
                "max_regret": result.max_regret,
                "iterations": result.iterations,
                "trace": result.trace,
            });
            if let Some(n) = &naive {
                value["naive"] = json!({ "center": n.center, "max_regret": n.max_regret });
            }
            emit_json(value);
        }
        Format::Csv => {
            println!("center,max_regret,iterations");
            println!(
                "{},{},{}",
                result.center, result.max_regret, result.iterations
            );
        }
        Format::Text => {
            println!("center: {}", result.center);
            println!("max regret: {}", result.max_regret);
            println!("iterations: {}", result.iterations);
            for (i, s) in result.trace.iter().enumerate() {
                println!(
                    "  pass {}: {} vertices, centroid {} (regret {}), kept {}",
                    i + 1,
                    s.size,
                    s.centroid,
                    s.centroid_regret,
                    s.kept
                );
            }
            if let Some(n) = &naive {
                println!(
                    "all-vertex scan: center {}, max regret {}",
                    n.center, n.max_regret
                );
            }
        }
    }
    Ok(())
}
