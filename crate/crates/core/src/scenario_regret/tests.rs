use super::*;
use crate::broadcast::btime_all;
use crate::generate::{random_tree, Shape, TreeSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const A: Vertex = 0;
const B: Vertex = 1;
const C: Vertex = 2;
const D: Vertex = 3;
const E: Vertex = 4;
const F: Vertex = 5;
const G: Vertex = 6;
const H: Vertex = 7;
const I: Vertex = 8;
const J: Vertex = 9;
const K: Vertex = 10;
const L: Vertex = 11;
const M: Vertex = 12;
const N: Vertex = 13;

fn sample_tree() -> Tree {
    Tree::build(&[
        (A, B, 0, 7),
        (B, C, 1, 2),
        (C, D, 1, 2),
        (C, E, 0, 3),
        (D, F, 5, 6),
        (A, G, 2, 5),
        (B, H, 2, 5),
        (H, J, 3, 4),
        (H, K, 1, 6),
        (B, I, 5, 7),
        (D, L, 2, 4),
        (L, M, 1, 4),
        (L, N, 2, 3),
    ])
    .unwrap()
}

fn weight_of(t: &Tree, s: &Scenario, u: Vertex, v: Vertex) -> Weight {
    s.weight(t.edge_between(u, v).unwrap())
}

#[test]
fn sample_alpha() {
    let t = sample_tree();
    let s = alpha_scenario(&t, D, B).unwrap();
    let w = |u, v| weight_of(&t, &s, u, v);
    assert_eq!((w(D, C), w(C, B)), (2, 2));
    assert_eq!(
        [w(A, B), w(A, G), w(B, H), w(H, K), w(H, J), w(B, I)],
        [7, 5, 5, 6, 4, 7]
    );
    assert_eq!(
        [w(C, E), w(D, F), w(D, L), w(L, N), w(L, M)],
        [0, 5, 2, 2, 1]
    );
    assert_eq!(pivot_order(&t, 1, D, B).unwrap(), vec![A, H, I]);
}

#[test]
fn sample_betas() {
    let t = sample_tree();
    let alpha = alpha_scenario(&t, D, B).unwrap();
    let b1 = beta_scenario(&t, 1, D, B, 1).unwrap();
    let b2 = beta_scenario(&t, 1, D, B, 2).unwrap();
    let b3 = beta_scenario(&t, 1, D, B, 3).unwrap();
    assert_eq!(b3, alpha);
    let changed = |s: &Scenario| -> Vec<(Weight, Weight)> {
        (0..t.edges().len())
            .filter(|&e| s.weight(e) != alpha.weight(e))
            .map(|e| (alpha.weight(e), s.weight(e)))
            .collect()
    };
    let mut flips = changed(&b1);
    flips.sort();
    assert_eq!(flips, vec![(4, 3), (5, 2), (6, 1), (7, 5)]);
    assert_eq!(changed(&b2), vec![(7, 5)]);
    assert_eq!(
        beta_scenario(&t, 1, D, B, 0),
        Err(Error::IndexOutOfRange { j: 0, h: 3 })
    );
    assert_eq!(
        beta_scenario(&t, 1, D, B, 4),
        Err(Error::IndexOutOfRange { j: 4, h: 3 })
    );
    assert_eq!(alpha_scenario(&t, D, D), Err(Error::SameVertex(D)));
}

#[test]
fn sample_regret_and_objective() {
    let t = sample_tree();
    let b1 = beta_scenario(&t, 1, D, B, 1).unwrap();
    assert_eq!(btime(&t, &b1, 1, D, None).unwrap(), 20);
    assert_eq!(btime(&t, &b1, 1, B, None).unwrap(), 14);
    assert_eq!(relative_regret(&t, &b1, 1, D, B).unwrap(), 6);
    assert_eq!(relative_regret(&t, &b1, 1, B, D).unwrap(), -6);
    assert_eq!(relative_regret(&t, &b1, 1, D, D).unwrap(), 0);
    let tables = preprocess_extremes(&t, 1).unwrap();
    assert_eq!(candidate_objective(&t, 1, D, B, 1, &tables).unwrap(), 6);
    let naive = max_regret_naive(&t, 1, D).unwrap();
    let fast = max_regret_fast(&t, 1, D, &tables).unwrap();
    assert_eq!(naive.max_regret, fast.max_regret);
    assert!(naive.max_regret >= 6);
}

#[test]
fn tiny_trees() {
    let t = Tree::build(&[]).unwrap();
    let r = max_regret_naive(&t, 1, 0).unwrap();
    assert_eq!((r.max_regret, r.witness_center), (0, 0));
    let tables = preprocess_extremes(&t, 1).unwrap();
    assert_eq!(max_regret_fast(&t, 1, 0, &tables).unwrap().max_regret, 0);

    // One edge [1, 4]: the only scenarios are w = 1 and w = 4.
    let t = Tree::build(&[(0, 1, 1, 4)]).unwrap();
    let expected = [1, 4].iter().map(|&w| {
        let s = Scenario::new(&t, vec![w]).unwrap();
        let b = btime_all(&t, &s, 1);
        b[0] - b[0].min(b[1])
    });
    let expected = expected.max().unwrap();
    assert_eq!(max_regret_naive(&t, 1, 0).unwrap().max_regret, expected);
    let tables = preprocess_extremes(&t, 1).unwrap();
    assert_eq!(
        max_regret_fast(&t, 1, 0, &tables).unwrap().max_regret,
        expected
    );
}

#[test]
fn stale_tables() {
    let t = sample_tree();
    let tables = preprocess_extremes(&t, 1).unwrap();
    let other = Tree::build(&[(0, 1, 1, 4)]).unwrap();
    assert_eq!(
        max_regret_fast(&other, 1, 0, &tables),
        Err(Error::StaleTables)
    );
    assert_eq!(max_regret_fast(&t, 2, 0, &tables), Err(Error::StaleTables));
}

#[test]
fn tables_match_direct() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [2, 3, 9, 40, 120] {
        let t = random_tree(
            &TreeSpec {
                n,
                lo: 0,
                hi: 9,
                shape: Shape::Random,
            },
            &mut rng,
        )
        .unwrap();
        for rho in [0, 1, 3] {
            let tables = preprocess_extremes(&t, rho).unwrap();
            let hi = Scenario::all_hi(&t);
            let lo = Scenario::all_lo(&t);
            for v in 0..n {
                for &(u, _) in t.neighbors(v) {
                    assert_eq!(
                        tables.hi_branch(&t, u, v),
                        btime(&t, &hi, rho, u, Some(v)).unwrap()
                    );
                    assert_eq!(
                        tables.lo_branch(&t, u, v),
                        btime(&t, &lo, rho, u, Some(v)).unwrap()
                    );
                }
                let order = tables.sorted_neighbors(&t, v);
                let keys: Vec<_> = neighbor_keys(&t, &hi, rho, v, None)
                    .unwrap()
                    .into_iter()
                    .map(|p| p.0)
                    .collect();
                assert_eq!(order, keys.as_slice());
            }
        }
    }
}

fn extremal_max_regret(t: &Tree, rho: Weight, x: Vertex) -> Weight {
    let m = t.edges().len();
    (0..1u32 << m)
        .map(|mask| {
            let w = (0..m)
                .map(|e| {
                    if mask >> e & 1 == 1 {
                        t.interval(e).hi()
                    } else {
                        t.interval(e).lo()
                    }
                })
                .collect();
            let s = Scenario::new(t, w).unwrap();
            let b = btime_all(t, &s, rho);
            b[x] - b.iter().min().unwrap()
        })
        .max()
        .unwrap()
}

#[test]
fn naive_and_fast_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..150 {
        let n = 1 + round % 9;
        let t = random_tree(
            &TreeSpec {
                n,
                lo: 0,
                hi: 8,
                shape: Shape::Random,
            },
            &mut rng,
        )
        .unwrap();
        for rho in [0, 1, 2, 5] {
            let tables = preprocess_extremes(&t, rho).unwrap();
            for x in 0..n {
                let want = extremal_max_regret(&t, rho, x);
                let naive = max_regret_naive(&t, rho, x).unwrap();
                let fast = max_regret_fast(&t, rho, x, &tables).unwrap();
                assert_eq!(naive.max_regret, want, "naive n={n} rho={rho} x={x}");
                assert_eq!(fast.max_regret, want, "fast n={n} rho={rho} x={x}");
                for r in [&naive, &fast] {
                    let s = r.worst.materialize(&t, rho).unwrap();
                    assert_eq!(
                        relative_regret(&t, &s, rho, x, r.witness_center).unwrap(),
                        r.max_regret
                    );
                }
            }
        }
    }
}

#[test]
fn objective_bounds_regret() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for round in 0..60 {
        let n = 2 + round % 20;
        let t = random_tree(
            &TreeSpec {
                n,
                lo: 0,
                hi: 12,
                shape: Shape::Random,
            },
            &mut rng,
        )
        .unwrap();
        for rho in [0, 1, 4] {
            let tables = preprocess_extremes(&t, rho).unwrap();
            for x in 0..n {
                let naive = max_regret_naive(&t, rho, x).unwrap();
                let lo = Scenario::all_lo(&t);
                let mut best = relative_regret(&t, &lo, rho, x, 0).unwrap();
                for y in 0..n {
                    best = best.max(relative_regret(&t, &lo, rho, x, y).unwrap());
                }
                for v in (0..n).filter(|&v| v != x) {
                    let h = pivot_order(&t, rho, x, v).unwrap().len();
                    for j in 1..=h {
                        let obj = candidate_objective(&t, rho, x, v, j, &tables).unwrap();
                        assert!(obj <= naive.max_regret);
                        best = best.max(obj);
                    }
                }
                assert_eq!(best, naive.max_regret, "n={n} rho={rho} x={x}");
            }
        }
    }
}

#[test]
fn candidates_stay_extremal() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let t = random_tree(
        &TreeSpec {
            n: 25,
            lo: 0,
            hi: 9,
            shape: Shape::Random,
        },
        &mut rng,
    )
    .unwrap();
    for v in 1..25 {
        for j in 1..=pivot_order(&t, 2, 0, v).unwrap().len() {
            let s = beta_scenario(&t, 2, 0, v, j).unwrap();
            for (e, &w) in s.weights().iter().enumerate() {
                let iv = t.interval(e);
                assert!(w == iv.lo() || w == iv.hi());
            }
        }
    }
}

#[test]
fn fast_matches_naive_medium() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (i, shape) in [Shape::Random, Shape::Caterpillar, Shape::Star, Shape::Path]
        .into_iter()
        .enumerate()
    {
        let t = random_tree(
            &TreeSpec {
                n: 60 + 10 * i,
                lo: 0,
                hi: 30,
                shape,
            },
            &mut rng,
        )
        .unwrap();
        for rho in [0, 1, 2, 7] {
            let tables = preprocess_extremes(&t, rho).unwrap();
            for x in (0..t.n()).step_by(7) {
                let naive = max_regret_naive(&t, rho, x).unwrap();
                let fast = max_regret_fast(&t, rho, x, &tables).unwrap();
                assert_eq!(
                    naive.max_regret, fast.max_regret,
                    "{shape:?} rho={rho} x={x}"
                );
            }
        }
    }
}
