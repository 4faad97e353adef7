//! Brute-force references used as ground truth in tests.
//!
//! Everything here is written against [`Tree`] alone and stays deliberately
//! small-scale: each routine refuses inputs above its size guard.

use crate::error::{Error, Result};
use crate::tree::{Tree, Vertex, Weight};

const BTIME_LIMIT: usize = 8;
const REGRET_LIMIT: usize = 10;
const ENUM_LIMIT: usize = 24;

fn guard(t: &Tree, limit: usize) -> Result<()> {
    if t.n() > limit {
        return Err(Error::TooLarge { n: t.n(), limit });
    }
    Ok(())
}

/// Every scenario with each edge at one of its interval endpoints. Bit `e`
/// of the cursor puts edge `e` at its upper end.
#[derive(Debug, Clone)]
pub struct ExtremalEnumerator<'a> {
    tree: &'a Tree,
    cursor: u64,
    end: u64,
}

impl<'a> ExtremalEnumerator<'a> {
    pub fn new(tree: &'a Tree) -> Result<ExtremalEnumerator<'a>> {
        guard(tree, ENUM_LIMIT)?;
        Ok(ExtremalEnumerator {
            tree,
            cursor: 0,
            end: 1 << tree.edges().len(),
        })
    }
}

impl Iterator for ExtremalEnumerator<'_> {
    type Item = Vec<Weight>;

    fn next(&mut self) -> Option<Vec<Weight>> {
        if self.cursor == self.end {
            return None;
        }
        let mask = self.cursor;
        self.cursor += 1;
        Some(
            self.tree
                .edges()
                .iter()
                .enumerate()
                .map(|(e, edge)| {
                    if mask >> e & 1 == 1 {
                        edge.interval.hi()
                    } else {
                        edge.interval.lo()
                    }
                })
                .collect(),
        )
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.cursor) as usize;
        (left, Some(left))
    }
}

fn for_each_permutation(items: &mut Vec<Weight>, k: usize, visit: &mut impl FnMut(&[Weight])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        for_each_permutation(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Fastest finish of `v` over its side away from `from`, trying every
/// connection order at every vertex.
fn finish_by_permutation(
    t: &Tree,
    w: &[Weight],
    rho: Weight,
    v: Vertex,
    from: Option<Vertex>,
) -> Weight {
    let mut keys: Vec<Weight> = t
        .neighbors(v)
        .iter()
        .filter(|&&(u, _)| Some(u) != from)
        .map(|&(u, e)| w[e] + finish_by_permutation(t, w, rho, u, Some(v)))
        .collect();
    let mut best = Weight::MAX;
    for_each_permutation(&mut keys, 0, &mut |order| {
        let span = order
            .iter()
            .enumerate()
            .map(|(k, &key)| (k as Weight + 1) * rho + key)
            .max()
            .unwrap_or(0);
        best = best.min(span);
    });
    best
}

/// Broadcast time of `v` by exhaustive search over connection orders.
pub fn btime_bruteforce(t: &Tree, weights: &[Weight], rho: Weight, v: Vertex) -> Result<Weight> {
    guard(t, BTIME_LIMIT)?;
    t.check_vertex(v)?;
    Ok(finish_by_permutation(t, weights, rho, v, None))
}

/// Slowest-first greedy finish time, checked against the permutation search
/// in the test suite and used where permutations are too slow.
fn finish_greedy(t: &Tree, w: &[Weight], rho: Weight, v: Vertex, from: Option<Vertex>) -> Weight {
    let mut keys: Vec<Weight> = t
        .neighbors(v)
        .iter()
        .filter(|&&(u, _)| Some(u) != from)
        .map(|&(u, e)| w[e] + finish_greedy(t, w, rho, u, Some(v)))
        .collect();
    keys.sort_unstable_by(|a, b| b.cmp(a));
    keys.iter()
        .enumerate()
        .map(|(k, &key)| (k as Weight + 1) * rho + key)
        .max()
        .unwrap_or(0)
}

fn regret_under(t: &Tree, w: &[Weight], rho: Weight, x: Vertex) -> Weight {
    let own = finish_greedy(t, w, rho, x, None);
    let best = (0..t.n())
        .map(|y| finish_greedy(t, w, rho, y, None))
        .min()
        .unwrap_or(0);
    own - best
}

/// Maximum regret of `x` over every extremal scenario and every rival.
pub fn max_regret_bruteforce(t: &Tree, rho: Weight, x: Vertex) -> Result<Weight> {
    guard(t, REGRET_LIMIT)?;
    t.check_vertex(x)?;
    Ok(ExtremalEnumerator::new(t)?
        .map(|w| regret_under(t, &w, rho, x))
        .max()
        .unwrap_or(0))
}

/// Vertex of least maximum regret, lowest id on ties, with its value.
pub fn minmax_center_bruteforce(t: &Tree, rho: Weight) -> Result<(Vertex, Weight)> {
    guard(t, REGRET_LIMIT)?;
    let scenarios: Vec<_> = ExtremalEnumerator::new(t)?.collect();
    let mut best = (0, Weight::MAX);
    for x in 0..t.n() {
        let r = scenarios
            .iter()
            .map(|w| regret_under(t, w, rho, x))
            .max()
            .unwrap_or(0);
        if r < best.1 {
            best = (x, r);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_keys() {
        let t = Tree::build(&[(0, 1, 5, 5), (0, 2, 3, 3), (0, 3, 1, 1)]).unwrap();
        assert_eq!(btime_bruteforce(&t, &[5, 3, 1], 1, 0).unwrap(), 6);
    }

    #[test]
    fn trivial_cases() {
        let t = Tree::build(&[]).unwrap();
        assert_eq!(btime_bruteforce(&t, &[], 1, 0).unwrap(), 0);
        assert_eq!(max_regret_bruteforce(&t, 1, 0).unwrap(), 0);
        assert_eq!(minmax_center_bruteforce(&t, 1).unwrap(), (0, 0));
    }

    #[test]
    fn one_edge_by_hand() {
        // w = 1: times (2, 2); w = 4: times (5, 5). Both vertices tie.
        let t = Tree::build(&[(0, 1, 1, 4)]).unwrap();
        assert_eq!(max_regret_bruteforce(&t, 1, 0).unwrap(), 0);
    }

    #[test]
    fn symmetric_path() {
        let t = Tree::build(&[(0, 1, 2, 5), (1, 2, 2, 5)]).unwrap();
        assert_eq!(minmax_center_bruteforce(&t, 1).unwrap().0, 1);
    }

    #[test]
    fn enumerator_counts() {
        let t = Tree::build(&[(0, 1, 1, 2), (1, 2, 3, 4), (2, 3, 5, 6)]).unwrap();
        let all: Vec<_> = ExtremalEnumerator::new(&t).unwrap().collect();
        assert_eq!(all.len(), 8);
        let mut uniq = all.clone();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), 8);
        assert_eq!(all[0], vec![1, 3, 5]);
        assert_eq!(all[7], vec![2, 4, 6]);
    }

    #[test]
    fn guards() {
        let edges: Vec<_> = (1..11).map(|v| (v - 1, v, 1, 2)).collect();
        let t = Tree::build(&edges).unwrap();
        assert_eq!(
            btime_bruteforce(&t, &[1; 10], 1, 0),
            Err(Error::TooLarge { n: 11, limit: 8 })
        );
        assert_eq!(
            max_regret_bruteforce(&t, 1, 0),
            Err(Error::TooLarge { n: 11, limit: 10 })
        );
    }

    #[test]
    fn greedy_matches_permutations() {
        let t = Tree::build(&[
            (0, 1, 0, 9),
            (0, 2, 0, 9),
            (0, 3, 0, 9),
            (3, 4, 0, 9),
            (3, 5, 0, 9),
            (3, 6, 0, 9),
        ])
        .unwrap();
        for (i, w) in ExtremalEnumerator::new(&t).unwrap().enumerate().step_by(5) {
            for rho in [0, 1, 3] {
                for v in 0..t.n() {
                    assert_eq!(
                        finish_greedy(&t, &w, rho, v, None),
                        btime_bruteforce(&t, &w, rho, v).unwrap(),
                        "scenario {i}"
                    );
                }
            }
        }
    }
}
