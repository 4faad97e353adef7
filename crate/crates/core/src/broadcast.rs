//! Postal-model broadcast times on a tree under one fixed scenario.
//!
//! Under the postal model a sender opens its `k`-th connection at time `k·ρ`
//! and the message then needs the edge weight to arrive, while earlier
//! transmissions continue in parallel. Every routine here is iterative so
//! that long paths do not exhaust the stack.

use serde::Serialize;

use crate::buckets::{exclusion_times, sorted_time, Scratch};
use crate::error::{Error, Result};
use crate::tree::{EdgeId, Tree, Vertex, Weight};

/// One concrete weight per edge, each inside its interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Scenario {
    weights: Vec<Weight>,
}

impl Scenario {
    pub fn new(t: &Tree, weights: Vec<Weight>) -> Result<Scenario> {
        if weights.len() != t.edges().len() {
            return Err(Error::ScenarioLength {
                expected: t.edges().len(),
                got: weights.len(),
            });
        }
        for (e, &w) in weights.iter().enumerate() {
            let iv = t.interval(e);
            if !iv.contains(w) {
                return Err(Error::WeightOutOfInterval {
                    edge: e,
                    weight: w,
                    lo: iv.lo(),
                    hi: iv.hi(),
                });
            }
        }
        Ok(Scenario { weights })
    }

    /// Every edge at its lower endpoint.
    pub fn all_lo(t: &Tree) -> Scenario {
        Scenario {
            weights: t.edges().iter().map(|e| e.interval.lo()).collect(),
        }
    }

    /// Every edge at its upper endpoint.
    pub fn all_hi(t: &Tree) -> Scenario {
        Scenario {
            weights: t.edges().iter().map(|e| e.interval.hi()).collect(),
        }
    }

    /// Internal constructor for weights already known to be in range.
    pub(crate) fn from_trusted(weights: Vec<Weight>) -> Scenario {
        Scenario { weights }
    }

    #[inline]
    pub fn weight(&self, e: EdgeId) -> Weight {
        self.weights[e]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    /// Total weight along the `x`-to-`y` path.
    pub fn path_weight(&self, t: &Tree, x: Vertex, y: Vertex) -> Result<Weight> {
        Ok(t.path_info(x, y)?
            .edges
            .iter()
            .map(|&e| self.weights[e])
            .sum())
    }
}

fn check_rho(rho: Weight) -> Result<()> {
    if rho < 0 {
        Err(Error::NegativeRho(rho))
    } else {
        Ok(())
    }
}

fn check_region(t: &Tree, v: Vertex, excluded: Option<Vertex>) -> Result<()> {
    t.check_vertex(v)?;
    if let Some(x) = excluded {
        t.check_vertex(x)?;
        if t.edge_between(v, x).is_none() {
            return Err(Error::NotNeighbor(v, x));
        }
    }
    Ok(())
}

/// Preorder of the region hung from `root` with `blocked` cut off, plus each
/// member's parent (`usize::MAX` for the root and for non-members).
fn hang(t: &Tree, root: Vertex, blocked: Option<Vertex>) -> (Vec<Vertex>, Vec<Vertex>) {
    let mut parent = vec![usize::MAX; t.n()];
    let mut order = Vec::new();
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        order.push(v);
        for &(u, _) in t.neighbors(v) {
            if u != parent[v] && Some(u) != blocked.filter(|_| v == root) {
                parent[u] = v;
                stack.push(u);
            }
        }
    }
    (order, parent)
}

/// Subtree broadcast times for every member of the hung region.
fn subtree_times(
    t: &Tree,
    s: &Scenario,
    rho: Weight,
    order: &[Vertex],
    parent: &[Vertex],
) -> Vec<Weight> {
    let mut down = vec![0; t.n()];
    let mut keys = Vec::new();
    for &v in order.iter().rev() {
        keys.clear();
        for &(u, e) in t.neighbors(v) {
            if parent[u] == v {
                keys.push(s.weight(e) + down[u]);
            }
        }
        down[v] = sorted_time(&mut keys, rho);
    }
    down
}

/// Broadcast time of `v` over the whole tree, or over the closed branch that
/// remains after cutting off the side containing the neighbor `excluded`.
pub fn btime(
    t: &Tree,
    s: &Scenario,
    rho: Weight,
    v: Vertex,
    excluded: Option<Vertex>,
) -> Result<Weight> {
    check_rho(rho)?;
    check_region(t, v, excluded)?;
    let (order, parent) = hang(t, v, excluded);
    Ok(subtree_times(t, s, rho, &order, &parent)[v])
}

/// Neighbors of `v` inside the region with their keys (edge weight plus the
/// neighbor's own broadcast time away from `v`), largest key first and ties
/// by vertex id.
pub fn neighbor_keys(
    t: &Tree,
    s: &Scenario,
    rho: Weight,
    v: Vertex,
    excluded: Option<Vertex>,
) -> Result<Vec<(Vertex, Weight)>> {
    check_rho(rho)?;
    check_region(t, v, excluded)?;
    let (order, parent) = hang(t, v, excluded);
    let down = subtree_times(t, s, rho, &order, &parent);
    let mut keys: Vec<_> = t
        .neighbors(v)
        .iter()
        .filter(|&&(u, _)| Some(u) != excluded)
        .map(|&(u, e)| (u, s.weight(e) + down[u]))
        .collect();
    keys.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(keys)
}

/// Broadcast times along every directed edge plus every whole-tree time.
#[derive(Debug, Clone)]
pub struct DirectedTimes {
    /// `far[slot(v, u)]` is the time for `u` to cover its side away from `v`.
    far: Vec<Weight>,
    total: Vec<Weight>,
}

impl DirectedTimes {
    /// Broadcast time of `at` over the closed branch left after cutting the
    /// neighbor `excluded` away.
    pub fn branch(&self, t: &Tree, at: Vertex, excluded: Vertex) -> Weight {
        self.far[t.slot_of(excluded, at).expect("adjacent vertices")]
    }

    /// Same as [`branch`](Self::branch), addressed by the slot of
    /// `(excluded, at)`.
    #[inline]
    pub fn by_slot(&self, slot: usize) -> Weight {
        self.far[slot]
    }

    pub fn total(&self, v: Vertex) -> Weight {
        self.total[v]
    }

    pub fn totals(&self) -> &[Weight] {
        &self.total
    }

    pub fn into_totals(self) -> Vec<Weight> {
        self.total
    }
}

/// Computes every directed branch time in two sweeps.
///
/// A downward pass from vertex 0 fills the child-side times. The upward pass
/// then visits vertices parent-first: with all neighbor keys of `v` known,
/// the bucket exclusion routine gives `v`'s time with any one neighbor's
/// side removed, which is exactly what each child needs for its parent key.
pub fn directed_times(t: &Tree, weights: &[Weight], rho: Weight) -> DirectedTimes {
    let n = t.n();
    let mut far = vec![0; t.slot_count()];
    let mut total = vec![0; n];
    if n == 1 {
        return DirectedTimes { far, total };
    }
    let rooted = t.rooted(0);
    let mut scratch = Scratch::default();
    let mut keys = Vec::new();
    let mut out = Vec::new();

    for &v in rooted.preorder.iter().rev() {
        let parent = rooted.parent[v].map(|(p, _)| p);
        keys.clear();
        for (slot, &(u, e)) in t.slots(v).zip(t.neighbors(v)) {
            if Some(u) != parent {
                keys.push(weights[e] + far[slot]);
            }
        }
        let down = crate::buckets::keys_time(&keys, rho, &mut scratch);
        if let Some(p) = parent {
            far[t.slot_of(p, v).expect("tree edge")] = down;
        }
    }

    for &v in &rooted.preorder {
        let parent = rooted.parent[v].map(|(p, _)| p);
        keys.clear();
        for (slot, &(_, e)) in t.slots(v).zip(t.neighbors(v)) {
            keys.push(weights[e] + far[slot]);
        }
        total[v] = exclusion_times(&keys, rho, &mut scratch, &mut out);
        for (i, &(u, _)) in t.neighbors(v).iter().enumerate() {
            if Some(u) != parent {
                far[t.slot_of(u, v).expect("tree edge")] = out[i];
            }
        }
    }
    DirectedTimes { far, total }
}

/// `btime(v, T)` for every vertex.
pub fn btime_all(t: &Tree, s: &Scenario, rho: Weight) -> Vec<Weight> {
    directed_times(t, s.weights(), rho).into_totals()
}

/// True when the vertices of `set` induce a star: connected, and with at most
/// one member adjacent to more than one other member.
pub fn induces_star(t: &Tree, set: &[Vertex]) -> bool {
    if set.len() <= 2 {
        return set.len() < 2 || t.edge_between(set[0], set[1]).is_some();
    }
    let mut member = vec![false; t.n()];
    for &v in set {
        member[v] = true;
    }
    let inner = |v: Vertex| t.neighbors(v).iter().filter(|&&(u, _)| member[u]).count();
    let edges: usize = set.iter().map(|&v| inner(v)).sum::<usize>() / 2;
    let hubs = set.iter().filter(|&&v| inner(v) > 1).count();
    edges == set.len() - 1 && hubs == 1
}

fn argmin_set(totals: &[Weight]) -> Vec<Vertex> {
    let best = totals.iter().copied().min().unwrap_or(0);
    (0..totals.len()).filter(|&v| totals[v] == best).collect()
}

/// Every vertex whose whole-tree broadcast time is minimum, ascending.
///
/// With `rho > 0` the result induces a star. With `rho == 0` a run of
/// zero-weight edges can make a longer plateau of centers.
pub fn broadcast_centers(t: &Tree, s: &Scenario, rho: Weight) -> Vec<Vertex> {
    let centers = argmin_set(&btime_all(t, s, rho));
    debug_assert!(rho == 0 || induces_star(t, &centers));
    centers
}

/// The hub of a star (lower id for a two-vertex star).
pub fn star_center(t: &Tree, set: &[Vertex]) -> Vertex {
    if set.len() <= 2 {
        return set[0];
    }
    let mut member = vec![false; t.n()];
    for &v in set {
        member[v] = true;
    }
    *set.iter()
        .find(|&&v| t.neighbors(v).iter().filter(|&&(u, _)| member[u]).count() > 1)
        .unwrap_or(&set[0])
}

/// A broadcast center `c` with `btime(c, B⟨c,u⟩) >= btime(u, B⟨u,c⟩)` for
/// every neighbor `u`.
///
/// Starts at the hub of the center star; if some neighbor's side is slower
/// than the hub's remaining side, that neighbor (lowest id first) is itself a
/// center and satisfies the condition.
pub fn prime_broadcast_center(t: &Tree, s: &Scenario, rho: Weight) -> Vertex {
    let dt = directed_times(t, s.weights(), rho);
    prime_from_times(t, &dt)
}

pub(crate) fn prime_from_times(t: &Tree, dt: &DirectedTimes) -> Vertex {
    let centers = argmin_set(dt.totals());
    let mut c = star_center(t, &centers);
    let mut from = usize::MAX;
    loop {
        let violator = t
            .slots(c)
            .zip(t.neighbors(c))
            .find(|&(slot, &(u, _))| u != from && dt.branch(t, c, u) < dt.by_slot(slot));
        match violator {
            Some((_, &(u, _))) => {
                from = c;
                c = u;
            }
            None => return c,
        }
    }
}

/// A concrete broadcast plan from one sender.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schedule {
    pub sender: Vertex,
    /// Position of each vertex among its informer's connections (1-based;
    /// 0 for the sender).
    pub connect_rank: Vec<usize>,
    pub informer: Vec<Option<Vertex>>,
    pub arrival: Vec<Weight>,
}

impl Schedule {
    pub fn makespan(&self) -> Weight {
        self.arrival.iter().copied().max().unwrap_or(0)
    }
}

/// The canonical optimal plan: each vertex, once informed, connects to its
/// children in nonincreasing key order (ties by id) without idling.
pub fn optimal_schedule(t: &Tree, s: &Scenario, rho: Weight, v: Vertex) -> Result<Schedule> {
    check_rho(rho)?;
    t.check_vertex(v)?;
    let n = t.n();
    let (order, parent) = hang(t, v, None);
    let down = subtree_times(t, s, rho, &order, &parent);
    let mut sched = Schedule {
        sender: v,
        connect_rank: vec![0; n],
        informer: vec![None; n],
        arrival: vec![0; n],
    };
    let mut kids = Vec::new();
    for &p in &order {
        kids.clear();
        kids.extend(
            t.neighbors(p)
                .iter()
                .filter(|&&(u, _)| parent[u] == p)
                .map(|&(u, e)| (u, s.weight(e) + down[u], s.weight(e))),
        );
        kids.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        for (k, &(c, _, w)) in kids.iter().enumerate() {
            sched.connect_rank[c] = k + 1;
            sched.informer[c] = Some(p);
            sched.arrival[c] = sched.arrival[p] + (k as Weight + 1) * rho + w;
        }
    }
    Ok(sched)
}
