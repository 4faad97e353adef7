//! Worst-case scenarios and maximum regret of a single vertex.
//!
//! For a query vertex `x` and a pivot `v ≠ x`, the base scenario `α` puts
//! every edge on the path from `x` to `v` and every edge beyond `v` at its upper
//! end, everything else at its lower end. Candidate `β^j` additionally
//! drops the subtrees of all but the `j` slowest children of `v` (slowest by
//! `α` keys) to their lower ends. The maximum regret of `x` is attained by
//! one of these candidates or by the all-low scenario.
//!
//! [`max_regret_naive`] materializes every candidate; [`max_regret_fast`]
//! works from precomputed all-high and all-low branch times and sweeps each
//! pivot's candidates with [`SuccState`].

pub mod succ;

use serde::Serialize;

pub use succ::{sweep, SuccState};

use crate::broadcast::{btime, directed_times, neighbor_keys, DirectedTimes, Scenario};
use crate::buckets::{exclusion_times, sorted_time, Scratch};
use crate::error::{Error, Result};
use crate::tree::{EdgeId, Tree, Vertex, Weight};

/// A candidate worst-case scenario for query vertex `x`, kept as a tag.
///
/// `pivot == None` stands for the all-low scenario; otherwise the tag is
/// `β^j` at `pivot`, with `j` equal to the child count meaning `α` itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CandidateScenario {
    pub x: Vertex,
    pub pivot: Option<Vertex>,
    pub j: usize,
}

impl CandidateScenario {
    pub fn all_lo(x: Vertex) -> CandidateScenario {
        CandidateScenario {
            x,
            pivot: None,
            j: 0,
        }
    }

    /// Concrete weights for this candidate.
    pub fn materialize(&self, t: &Tree, rho: Weight) -> Result<Scenario> {
        match self.pivot {
            None => Ok(Scenario::all_lo(t)),
            Some(v) => beta_scenario(t, rho, self.x, v, self.j),
        }
    }
}

/// Maximum regret of one vertex with a witnessing scenario and center.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegretReport {
    pub vertex: Vertex,
    pub max_regret: Weight,
    pub worst: CandidateScenario,
    /// A broadcast center under the worst scenario.
    pub witness_center: Vertex,
}

/// The tree hung from the query vertex, with subtree intervals.
struct Hung {
    parent: Vec<Option<(Vertex, EdgeId)>>,
    preorder: Vec<Vertex>,
    depth: Vec<usize>,
    enter: Vec<usize>,
    exit: Vec<usize>,
}

impl Hung {
    fn new(t: &Tree, x: Vertex) -> Hung {
        let r = t.rooted(x);
        let n = t.n();
        let mut enter = vec![0; n];
        for (i, &v) in r.preorder.iter().enumerate() {
            enter[v] = i;
        }
        let mut size = vec![1; n];
        for &v in r.preorder.iter().rev() {
            if let Some((p, _)) = r.parent[v] {
                size[p] += size[v];
            }
        }
        let exit = (0..n).map(|v| enter[v] + size[v]).collect();
        Hung {
            parent: r.parent,
            preorder: r.preorder,
            depth: r.depth,
            enter,
            exit,
        }
    }

    /// `u` lies in the subtree of `v` (inclusive).
    #[inline]
    fn within(&self, u: Vertex, v: Vertex) -> bool {
        self.enter[v] <= self.enter[u] && self.enter[u] < self.exit[v]
    }

    fn parent_of(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v].map(|(p, _)| p)
    }

    /// The endpoint of `e` farther from the root.
    #[inline]
    fn lower_end(&self, t: &Tree, e: EdgeId) -> Vertex {
        let edge = t.edge(e);
        if self.depth[edge.u] > self.depth[edge.v] {
            edge.u
        } else {
            edge.v
        }
    }

    fn children<'a>(
        &'a self,
        t: &'a Tree,
        v: Vertex,
    ) -> impl Iterator<Item = (Vertex, EdgeId)> + 'a {
        let p = self.parent_of(v);
        t.neighbors(v)
            .iter()
            .copied()
            .filter(move |&(u, _)| Some(u) != p)
    }
}

fn check_pair(t: &Tree, x: Vertex, pivot: Vertex) -> Result<()> {
    t.check_vertex(x)?;
    t.check_vertex(pivot)?;
    if x == pivot {
        return Err(Error::SameVertex(x));
    }
    Ok(())
}

fn alpha_weights(t: &Tree, hung: &Hung, pivot: Vertex) -> Vec<Weight> {
    (0..t.edges().len())
        .map(|e| {
            let c = hung.lower_end(t, e);
            let on_path = hung.within(pivot, c);
            let beyond = c != pivot && hung.within(c, pivot);
            let iv = t.interval(e);
            if on_path || beyond {
                iv.hi()
            } else {
                iv.lo()
            }
        })
        .collect()
}

/// Base scenario for `(x, pivot)`.
pub fn alpha_scenario(t: &Tree, x: Vertex, pivot: Vertex) -> Result<Scenario> {
    check_pair(t, x, pivot)?;
    let hung = Hung::new(t, x);
    Ok(Scenario::from_trusted(alpha_weights(t, &hung, pivot)))
}

/// Children of `pivot` (hung from `x`) ordered by their `α` keys, largest
/// first, ties by id.
pub fn pivot_order(t: &Tree, rho: Weight, x: Vertex, pivot: Vertex) -> Result<Vec<Vertex>> {
    let alpha = alpha_scenario(t, x, pivot)?;
    let toward = t.step_toward(pivot, x)?;
    Ok(neighbor_keys(t, &alpha, rho, pivot, Some(toward))?
        .into_iter()
        .map(|(u, _)| u)
        .collect())
}

/// For every edge below `pivot`, the rank of the pivot child it hangs under.
fn child_ranks(t: &Tree, hung: &Hung, pivot: Vertex, order: &[Vertex]) -> Vec<usize> {
    let mut rank = vec![0; t.n()];
    for (i, &u) in order.iter().enumerate() {
        rank[u] = i + 1;
    }
    let lo = hung.enter[pivot] + 1;
    let hi = hung.exit[pivot];
    for &c in &hung.preorder[lo..hi] {
        let p = hung.parent_of(c).expect("below the pivot");
        if p != pivot {
            rank[c] = rank[p];
        }
    }
    let mut by_edge = vec![0; t.edges().len()];
    for (e, slot) in by_edge.iter_mut().enumerate() {
        let c = hung.lower_end(t, e);
        if c != pivot && hung.within(c, pivot) {
            *slot = rank[c];
        }
    }
    by_edge
}

fn beta_from(t: &Tree, alpha: &[Weight], ranks: &[usize], j: usize, out: &mut Vec<Weight>) {
    out.clear();
    out.extend(alpha.iter().enumerate().map(
        |(e, &w)| {
            if ranks[e] > j {
                t.interval(e).lo()
            } else {
                w
            }
        },
    ));
}

/// Candidate `β^j` for `(x, pivot)`; `j` runs over `1..=h` where `h` is the
/// pivot's child count away from `x`, and `β^h` is `α`.
pub fn beta_scenario(
    t: &Tree,
    rho: Weight,
    x: Vertex,
    pivot: Vertex,
    j: usize,
) -> Result<Scenario> {
    let order = pivot_order(t, rho, x, pivot)?;
    if j == 0 || j > order.len() {
        return Err(Error::IndexOutOfRange { j, h: order.len() });
    }
    let hung = Hung::new(t, x);
    let alpha = alpha_weights(t, &hung, pivot);
    let ranks = child_ranks(t, &hung, pivot, &order);
    let mut w = Vec::new();
    beta_from(t, &alpha, &ranks, j, &mut w);
    Ok(Scenario::from_trusted(w))
}

/// `btime(x, T) - btime(y, T)` under `s`.
pub fn relative_regret(
    t: &Tree,
    s: &Scenario,
    rho: Weight,
    x: Vertex,
    y: Vertex,
) -> Result<Weight> {
    Ok(btime(t, s, rho, x, None)? - btime(t, s, rho, y, None)?)
}

/// Regret of `x` against its best rival and the lowest-id center.
fn regret_of(totals: &[Weight], x: Vertex) -> (Weight, Vertex) {
    let (center, best) = totals
        .iter()
        .copied()
        .enumerate()
        .min_by_key(|&(v, b)| (b, v))
        .expect("nonempty tree");
    (totals[x] - best, center)
}

fn check_rho(rho: Weight) -> Result<()> {
    if rho < 0 {
        Err(Error::NegativeRho(rho))
    } else {
        Ok(())
    }
}

/// Maximum regret of `x` by evaluating every candidate scenario in full.
///
/// Candidates are visited pivot by pivot (ascending id, then `j`
/// ascending), with the all-low scenario last; the first maximizer wins.
pub fn max_regret_naive(t: &Tree, rho: Weight, x: Vertex) -> Result<RegretReport> {
    check_rho(rho)?;
    t.check_vertex(x)?;
    let hung = Hung::new(t, x);
    let mut best: Option<RegretReport> = None;
    let mut w = Vec::new();
    let offer = |worst: CandidateScenario, totals: &[Weight], best: &mut Option<RegretReport>| {
        let (r, center) = regret_of(totals, x);
        if best.as_ref().is_none_or(|b| r > b.max_regret) {
            *best = Some(RegretReport {
                vertex: x,
                max_regret: r,
                worst,
                witness_center: center,
            });
        }
    };
    for v in 0..t.n() {
        if v == x || hung.children(t, v).next().is_none() {
            continue;
        }
        let alpha = Scenario::from_trusted(alpha_weights(t, &hung, v));
        let toward = hung.parent_of(v).expect("not the root");
        let order: Vec<_> = neighbor_keys(t, &alpha, rho, v, Some(toward))?
            .into_iter()
            .map(|(u, _)| u)
            .collect();
        let ranks = child_ranks(t, &hung, v, &order);
        for j in 1..=order.len() {
            beta_from(t, alpha.weights(), &ranks, j, &mut w);
            let totals = directed_times(t, &w, rho).into_totals();
            offer(
                CandidateScenario {
                    x,
                    pivot: Some(v),
                    j,
                },
                &totals,
                &mut best,
            );
        }
    }
    let lo = Scenario::all_lo(t);
    let totals = directed_times(t, lo.weights(), rho).into_totals();
    offer(CandidateScenario::all_lo(x), &totals, &mut best);
    Ok(best.expect("the all-low candidate is always offered"))
}

/// All-high and all-low branch times for every directed edge, plus each
/// vertex's neighbors ordered by all-high key.
#[derive(Debug, Clone)]
pub struct ExtremeTables {
    fingerprint: u64,
    rho: Weight,
    hi: DirectedTimes,
    lo: DirectedTimes,
    /// Per slot range of `v`: neighbors of `v`, largest all-high key first.
    order: Vec<Vertex>,
}

impl ExtremeTables {
    /// All-high time of `at` over its side away from `excluded`.
    pub fn hi_branch(&self, t: &Tree, at: Vertex, excluded: Vertex) -> Weight {
        self.hi.branch(t, at, excluded)
    }

    /// All-low time of `at` over its side away from `excluded`.
    pub fn lo_branch(&self, t: &Tree, at: Vertex, excluded: Vertex) -> Weight {
        self.lo.branch(t, at, excluded)
    }

    pub fn hi_total(&self, v: Vertex) -> Weight {
        self.hi.total(v)
    }

    pub fn lo_total(&self, v: Vertex) -> Weight {
        self.lo.total(v)
    }

    /// Neighbors of `v` by all-high key, largest first, ties by id.
    pub fn sorted_neighbors(&self, t: &Tree, v: Vertex) -> &[Vertex] {
        &self.order[t.slots(v)]
    }

    pub fn rho(&self) -> Weight {
        self.rho
    }

    fn check(&self, t: &Tree, rho: Weight) -> Result<()> {
        if self.fingerprint != t.fingerprint() || self.rho != rho {
            return Err(Error::StaleTables);
        }
        Ok(())
    }
}

/// Builds [`ExtremeTables`] in `O(n log n)`.
pub fn preprocess_extremes(t: &Tree, rho: Weight) -> Result<ExtremeTables> {
    check_rho(rho)?;
    let hi_w = Scenario::all_hi(t);
    let lo_w = Scenario::all_lo(t);
    let hi = directed_times(t, hi_w.weights(), rho);
    let lo = directed_times(t, lo_w.weights(), rho);
    let mut order = Vec::with_capacity(t.slot_count());
    let mut keyed = Vec::new();
    for v in 0..t.n() {
        keyed.clear();
        keyed.extend(
            t.neighbors(v)
                .iter()
                .map(|&(u, e)| (u, hi_w.weight(e) + hi.branch(t, u, v))),
        );
        keyed.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        order.extend(keyed.iter().map(|&(u, _)| u));
    }
    Ok(ExtremeTables {
        fingerprint: t.fingerprint(),
        rho,
        hi,
        lo,
        order,
    })
}

/// `(high key, low key)` of every child of `v` away from `toward`, in
/// all-high key order.
fn child_pairs(
    t: &Tree,
    tables: &ExtremeTables,
    v: Vertex,
    toward: Vertex,
    out: &mut Vec<(Weight, Weight)>,
) {
    out.clear();
    for &u in tables.sorted_neighbors(t, v) {
        if u == toward {
            continue;
        }
        let e = t.edge_between(v, u).expect("neighbor");
        let iv = t.interval(e);
        out.push((
            iv.hi() + tables.hi_branch(t, u, v),
            iv.lo() + tables.lo_branch(t, u, v),
        ));
    }
}

/// `(high key, low key)` for each child of `pivot` away from `x`, in the
/// order the candidates use: the sequence [`SuccState`] sweeps.
pub fn pivot_key_pairs(
    t: &Tree,
    rho: Weight,
    x: Vertex,
    pivot: Vertex,
    tables: &ExtremeTables,
) -> Result<Vec<(Weight, Weight)>> {
    tables.check(t, rho)?;
    check_pair(t, x, pivot)?;
    let toward = t.step_toward(pivot, x)?;
    let mut pairs = Vec::new();
    child_pairs(t, tables, pivot, toward, &mut pairs);
    Ok(pairs)
}

/// The objective `d(x,v)·ρ + w(x,v) + btime(v, B⟨v,x⟩) - btime(v, T)` under
/// `β^j` at `pivot`. It never exceeds the true regret of `x` under that
/// candidate, and its maximum over all candidates is the maximum regret.
///
/// Evaluated directly from the tables and a materialized candidate, with no
/// sweeping.
pub fn candidate_objective(
    t: &Tree,
    rho: Weight,
    x: Vertex,
    pivot: Vertex,
    j: usize,
    tables: &ExtremeTables,
) -> Result<Weight> {
    tables.check(t, rho)?;
    check_pair(t, x, pivot)?;
    let toward = t.step_toward(pivot, x)?;
    let mut pairs = Vec::new();
    child_pairs(t, tables, pivot, toward, &mut pairs);
    if j == 0 || j > pairs.len() {
        return Err(Error::IndexOutOfRange { j, h: pairs.len() });
    }
    let beta = beta_scenario(t, rho, x, pivot, j)?;
    let path = t.path_info(x, pivot)?;
    let path_hi: Weight = path.edges.iter().map(|&e| t.interval(e).hi()).sum();
    let mut keys: Vec<_> = pairs
        .iter()
        .enumerate()
        .map(|(k, &(hi, lo))| if k < j { hi } else { lo })
        .collect();
    let inside = sorted_time(&mut keys.clone(), rho);
    let e = t.edge_between(pivot, toward).expect("neighbor");
    keys.push(t.interval(e).hi() + btime(t, &beta, rho, toward, Some(pivot))?);
    let whole = sorted_time(&mut keys, rho);
    Ok(path.hops as Weight * rho + path_hi + inside - whole)
}

/// Maximum regret of `x` from the tables, in `O(n log log n)`.
///
/// Per pivot, the sweep yields the pivot's time over its own side and its
/// time over the whole tree for every candidate at once; the side toward
/// `x` enters as one fixed key computed for all pivots in a single pass.
pub fn max_regret_fast(
    t: &Tree,
    rho: Weight,
    x: Vertex,
    tables: &ExtremeTables,
) -> Result<RegretReport> {
    check_rho(rho)?;
    tables.check(t, rho)?;
    t.check_vertex(x)?;
    let n = t.n();
    let hung = Hung::new(t, x);

    // toward[v]: btime of parent(v) over its side away from v, under any
    // candidate pivoted at v (path to x high, everything else low).
    let mut toward = vec![0; n];
    let mut path_hi = vec![0; n];
    let mut scratch = Scratch::default();
    let mut keys = Vec::new();
    let mut kids = Vec::new();
    let mut out = Vec::new();
    for &p in &hung.preorder {
        keys.clear();
        kids.clear();
        for (u, e) in hung.children(t, p) {
            keys.push(t.interval(e).lo() + tables.lo_branch(t, u, p));
            kids.push(u);
            path_hi[u] = path_hi[p] + t.interval(e).hi();
        }
        if kids.is_empty() {
            continue;
        }
        if let Some((_, e)) = hung.parent[p] {
            keys.push(t.interval(e).hi() + toward[p]);
        }
        exclusion_times(&keys, rho, &mut scratch, &mut out);
        for (i, &u) in kids.iter().enumerate() {
            toward[u] = out[i];
        }
    }

    let mut best: Option<(Weight, Vertex, usize)> = None;
    let mut pairs = Vec::new();
    let mut merged = Vec::new();
    for v in 0..n {
        let Some((p, e)) = hung.parent[v] else {
            continue;
        };
        child_pairs(t, tables, v, p, &mut pairs);
        if pairs.is_empty() {
            continue;
        }
        let mu = t.interval(e).hi() + toward[v];
        let at = pairs.partition_point(|&(hi, _)| hi >= mu);
        merged.clear();
        merged.extend_from_slice(&pairs[..at]);
        merged.push((mu, mu));
        merged.extend_from_slice(&pairs[at..]);
        let inside = sweep(&pairs, rho);
        let whole = sweep(&merged, rho);
        let base = hung.depth[v] as Weight * rho + path_hi[v];
        for j in 1..=pairs.len() {
            let jj = if j <= at { j } else { j + 1 };
            let obj = base + inside[j - 1] - whole[jj - 1];
            if best.is_none_or(|b| obj > b.0) {
                best = Some((obj, v, j));
            }
        }
    }

    let (lo_regret, lo_center) = regret_of(tables.lo.totals(), x);
    Ok(match best {
        Some((obj, v, j)) if obj >= lo_regret => RegretReport {
            vertex: x,
            max_regret: obj,
            worst: CandidateScenario {
                x,
                pivot: Some(v),
                j,
            },
            witness_center: v,
        },
        _ => RegretReport {
            vertex: x,
            max_regret: lo_regret,
            worst: CandidateScenario::all_lo(x),
            witness_center: lo_center,
        },
    })
}

#[cfg(test)]
mod tests;
