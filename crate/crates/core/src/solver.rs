//! Minmax-regret broadcast center by prune-and-search over centroids.
//!
//! Each round evaluates the centroid `z` of the surviving vertex set. If `z`
//! is a broadcast center under its own worst scenario its regret is zero and
//! nothing can beat it. Otherwise some optimal vertex lies on the side of `z`
//! facing the witnessing center, so the search keeps that side plus `z`,
//! which is at most half the set plus one. Regret is always measured on the
//! full tree; the surviving set only narrows which vertices are candidates.

use serde::Serialize;

use crate::error::Result;
use crate::scenario_regret::{
    max_regret_fast, max_regret_naive, preprocess_extremes, RegretReport,
};
use crate::tree::{Tree, Vertex, Weight};

/// One pass of the search loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    /// Surviving vertices at the start of the pass.
    pub size: usize,
    pub centroid: Vertex,
    pub centroid_regret: Weight,
    /// Surviving vertices after the pass (equal to `size` when the centroid
    /// is returned).
    pub kept: usize,
    /// The surviving set after the pass, ascending.
    #[serde(skip)]
    pub members: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub center: Vertex,
    pub max_regret: Weight,
    pub iterations: usize,
    pub trace: Vec<TraceStep>,
}

/// Prune-and-search using the fast regret routine.
pub fn solve(t: &Tree, rho: Weight) -> Result<SolveResult> {
    let n = t.n();
    let tables = preprocess_extremes(t, rho)?;
    let regret = |v: Vertex| -> Result<RegretReport> { max_regret_fast(t, rho, v, &tables) };
    let mut alive = vec![true; n];
    let mut size = n;
    let mut trace = Vec::new();

    while size >= 3 {
        let z = t.centroid_of(&alive);
        let report = regret(z)?;
        if report.max_regret == 0 {
            trace.push(TraceStep {
                size,
                centroid: z,
                centroid_regret: 0,
                kept: size,
                members: (0..n).filter(|&v| alive[v]).collect(),
            });
            return Ok(SolveResult {
                center: z,
                max_regret: 0,
                iterations: trace.len(),
                trace,
            });
        }
        let side = t.open_branch(z, report.witness_center)?;
        let mut keep = vec![false; n];
        keep[z] = true;
        for &v in &side.members {
            keep[v] = alive[v];
        }
        alive = keep;
        let before = size;
        size = alive.iter().filter(|&&a| a).count();
        trace.push(TraceStep {
            size: before,
            centroid: z,
            centroid_regret: report.max_regret,
            kept: size,
            members: (0..n).filter(|&v| alive[v]).collect(),
        });
    }

    let mut best: Option<(Weight, Vertex)> = None;
    for v in (0..n).filter(|&v| alive[v]) {
        let r = regret(v)?.max_regret;
        if best.is_none_or(|b| r < b.0) {
            best = Some((r, v));
        }
    }
    let (max_regret, center) = best.expect("at least one vertex survives");
    Ok(SolveResult {
        center,
        max_regret,
        iterations: trace.len(),
        trace,
    })
}

/// Maximum regret of every vertex, each from the naive routine.
pub fn regret_profile(t: &Tree, rho: Weight) -> Result<Vec<Weight>> {
    (0..t.n())
        .map(|v| max_regret_naive(t, rho, v).map(|r| r.max_regret))
        .collect()
}

/// Examines every vertex; lowest id wins ties.
pub fn solve_naive(t: &Tree, rho: Weight) -> Result<SolveResult> {
    let profile = regret_profile(t, rho)?;
    let (center, &max_regret) = profile
        .iter()
        .enumerate()
        .min_by_key(|&(v, r)| (*r, v))
        .expect("nonempty tree");
    Ok(SolveResult {
        center,
        max_regret,
        iterations: 0,
        trace: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{random_tree, Shape, TreeSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_vertex() {
        let t = Tree::build(&[]).unwrap();
        let r = solve(&t, 1).unwrap();
        assert_eq!((r.center, r.max_regret, r.iterations), (0, 0, 0));
        let r = solve_naive(&t, 1).unwrap();
        assert_eq!((r.center, r.max_regret), (0, 0));
    }

    #[test]
    fn one_edge() {
        let t = Tree::build(&[(0, 1, 1, 4)]).unwrap();
        let a = solve(&t, 1).unwrap();
        let b = solve_naive(&t, 1).unwrap();
        assert_eq!((a.center, a.max_regret), (b.center, b.max_regret));
        assert_eq!(a.iterations, 0);
    }

    #[test]
    fn symmetric_path() {
        let t = Tree::build(&[(0, 1, 2, 5), (1, 2, 2, 5)]).unwrap();
        assert_eq!(solve_naive(&t, 1).unwrap().center, 1);
        assert_eq!(solve(&t, 1).unwrap().center, 1);
    }

    #[test]
    fn matches_naive_and_prunes_safely() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..80 {
            let n = rng.gen_range(3..=40);
            let shape = [Shape::Random, Shape::Caterpillar, Shape::Path][rng.gen_range(0..3)];
            let t = random_tree(
                &TreeSpec {
                    n,
                    lo: 0,
                    hi: 9,
                    shape,
                },
                &mut rng,
            )
            .unwrap();
            let rho = rng.gen_range(0..4);
            let fast = solve(&t, rho).unwrap();
            let profile = regret_profile(&t, rho).unwrap();
            let best = *profile.iter().min().unwrap();
            assert_eq!(fast.max_regret, best);
            assert_eq!(profile[fast.center], best);
            let bound = (usize::BITS - (n - 1).leading_zeros()) as usize + 1;
            assert!(fast.iterations <= bound);
            for step in &fast.trace {
                assert!(step.kept <= step.size / 2 + 1 || step.centroid_regret == 0);
                assert!(step.members.iter().any(|&v| profile[v] == best));
            }
        }
    }
}
