//! Seeded instance generators.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::broadcast::Scenario;
use crate::error::{Error, Result};
use crate::tree::{Tree, Vertex, Weight};

/// Tree topology families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// Uniform over labelled trees (decoded from a random Prüfer sequence).
    Random,
    Path,
    Star,
    /// A spine path with the remaining vertices hung off it as leaves.
    Caterpillar,
}

impl std::str::FromStr for Shape {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "random" => Ok(Shape::Random),
            "path" => Ok(Shape::Path),
            "star" => Ok(Shape::Star),
            "caterpillar" => Ok(Shape::Caterpillar),
            other => Err(format!("unknown shape `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeSpec {
    pub n: usize,
    /// Every interval endpoint is drawn from `lo..=hi`.
    pub lo: Weight,
    pub hi: Weight,
    pub shape: Shape,
}

/// Decodes a Prüfer sequence over `0..seq.len() + 2` into its edge list.
pub fn prufer_edges(seq: &[Vertex]) -> Vec<(Vertex, Vertex)> {
    let n = seq.len() + 2;
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<Vertex>> = (0..n)
        .filter(|&v| degree[v] == 1)
        .map(std::cmp::Reverse)
        .collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &v in seq {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("a leaf always exists");
        edges.push((leaf.min(v), leaf.max(v)));
        degree[v] -= 1;
        if degree[v] == 1 {
            leaves.push(std::cmp::Reverse(v));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().expect("two leaves remain");
    let std::cmp::Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a.min(b), a.max(b)));
    edges
}

fn shape_edges<R: Rng>(n: usize, shape: Shape, rng: &mut R) -> Vec<(Vertex, Vertex)> {
    match shape {
        _ if n <= 1 => Vec::new(),
        Shape::Random if n == 2 => vec![(0, 1)],
        Shape::Random => {
            let seq: Vec<Vertex> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
            prufer_edges(&seq)
        }
        Shape::Path => (1..n).map(|v| (v - 1, v)).collect(),
        Shape::Star => (1..n).map(|v| (0, v)).collect(),
        Shape::Caterpillar => {
            let spine = n.div_ceil(2);
            let mut edges: Vec<_> = (1..spine).map(|v| (v - 1, v)).collect();
            edges.extend((spine..n).map(|v| ((v - spine) % spine, v)));
            edges
        }
    }
}

/// A seeded tree with intervals drawn so that `lo <= a <= b <= hi`.
pub fn random_tree<R: Rng>(spec: &TreeSpec, rng: &mut R) -> Result<Tree> {
    if spec.lo < 0 || spec.lo > spec.hi {
        return Err(Error::BadRange {
            lo: spec.lo,
            hi: spec.hi,
        });
    }
    let n = spec.n.max(1);
    let list: Vec<_> = shape_edges(n, spec.shape, rng)
        .into_iter()
        .map(|(u, v)| {
            let a = rng.gen_range(spec.lo..=spec.hi);
            let b = rng.gen_range(spec.lo..=spec.hi);
            (u, v, a.min(b), a.max(b))
        })
        .collect();
    Tree::with_vertex_count(n, &list)
}

/// Weights drawn uniformly inside each interval.
pub fn random_scenario<R: Rng>(t: &Tree, rng: &mut R) -> Scenario {
    Scenario::from_trusted(
        t.edges()
            .iter()
            .map(|e| rng.gen_range(e.interval.lo()..=e.interval.hi()))
            .collect(),
    )
}

/// Each edge independently at one of its two endpoints.
pub fn random_extremal_scenario<R: Rng>(t: &Tree, rng: &mut R) -> Scenario {
    Scenario::from_trusted(
        t.edges()
            .iter()
            .map(|e| {
                if rng.gen_bool(0.5) {
                    e.interval.hi()
                } else {
                    e.interval.lo()
                }
            })
            .collect(),
    )
}
