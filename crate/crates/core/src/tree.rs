//! Trees with interval edge weights.
//!
//! Vertices are dense ids `0..n`, edges are dense ids `0..n-1` assigned in
//! input order. Adjacency is stored in compressed rows so that traversals
//! touch contiguous memory.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact edge weight / time unit. The connection latency uses the same unit.
pub type Weight = i64;
pub type Vertex = usize;
pub type EdgeId = usize;

/// Closed interval `[lo, hi]` of admissible weights for one edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightInterval {
    lo: Weight,
    hi: Weight,
}

impl WeightInterval {
    pub fn new(lo: Weight, hi: Weight) -> Result<Self> {
        if lo < 0 || lo > hi {
            return Err(Error::BadInterval { lo, hi });
        }
        Ok(WeightInterval { lo, hi })
    }

    /// Degenerate interval `[w, w]`.
    pub fn fixed(w: Weight) -> Result<Self> {
        Self::new(w, w)
    }

    #[inline]
    pub fn lo(&self) -> Weight {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> Weight {
        self.hi
    }

    pub fn contains(&self, w: Weight) -> bool {
        self.lo <= w && w <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
    pub interval: WeightInterval,
}

impl Edge {
    /// The endpoint of this edge that is not `w`.
    #[inline]
    pub fn other(&self, w: Vertex) -> Vertex {
        if self.u == w {
            self.v
        } else {
            self.u
        }
    }
}

/// An immutable tree whose edges carry weight intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    edges: Vec<Edge>,
    adj_start: Vec<usize>,
    adj: Vec<(Vertex, EdgeId)>,
}

/// Edge ids along the unique path between two vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathInfo {
    pub edges: Vec<EdgeId>,
    pub hops: usize,
}

/// A connected piece of the tree: either the whole tree (`excluded == None`)
/// or the closed branch at `root` that stays after cutting off the side
/// containing `excluded`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchView {
    pub root: Vertex,
    pub excluded: Option<Vertex>,
    /// Sorted member ids.
    pub members: Vec<Vertex>,
}

impl BranchView {
    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Parent pointers and a preorder for the tree hung from one root.
#[derive(Debug, Clone)]
pub struct Rooted {
    pub root: Vertex,
    /// `(parent, edge to parent)`; `None` for the root.
    pub parent: Vec<Option<(Vertex, EdgeId)>>,
    /// Parents precede children.
    pub preorder: Vec<Vertex>,
    pub depth: Vec<usize>,
}

impl Tree {
    /// Builds a tree from `(u, v, lo, hi)` tuples. The vertex count is one
    /// more than the largest id mentioned (a lone vertex for an empty list).
    pub fn build(edge_list: &[(Vertex, Vertex, Weight, Weight)]) -> Result<Tree> {
        let n = edge_list
            .iter()
            .map(|&(u, v, _, _)| u.max(v) + 1)
            .max()
            .unwrap_or(1);
        Self::with_vertex_count(n, edge_list)
    }

    /// Builds a tree on exactly `n` vertices.
    pub fn with_vertex_count(
        n: usize,
        edge_list: &[(Vertex, Vertex, Weight, Weight)],
    ) -> Result<Tree> {
        let n = n.max(1);
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(u, v, lo, hi) in edge_list {
            if u >= n {
                return Err(Error::UnknownVertex(u));
            }
            if v >= n {
                return Err(Error::UnknownVertex(v));
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            edges.push(Edge {
                u,
                v,
                interval: WeightInterval::new(lo, hi)?,
            });
        }

        // Union-find catches both cycles and parallel edges before the
        // edge-count test so the reported error names the offending edge.
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        let mut dsu: Vec<usize> = (0..n).collect();
        fn find(dsu: &mut [usize], mut x: usize) -> usize {
            while dsu[x] != x {
                dsu[x] = dsu[dsu[x]];
                x = dsu[x];
            }
            x
        }
        for e in &edges {
            let key = (e.u.min(e.v), e.u.max(e.v));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge(key.0, key.1));
            }
            let (ru, rv) = (find(&mut dsu, e.u), find(&mut dsu, e.v));
            if ru == rv {
                return Err(Error::CycleDetected(e.u, e.v));
            }
            dsu[ru] = rv;
        }
        if edges.len() != n - 1 {
            let r0 = find(&mut dsu, 0);
            let lost = (1..n).find(|&v| find(&mut dsu, v) != r0).unwrap_or(n - 1);
            return Err(Error::Disconnected(lost));
        }

        let mut degree = vec![0usize; n];
        for e in &edges {
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        let mut adj_start = Vec::with_capacity(n + 1);
        adj_start.push(0);
        for d in &degree {
            adj_start.push(adj_start.last().unwrap() + d);
        }
        let mut fill = adj_start.clone();
        let mut adj = vec![(0, 0); 2 * edges.len()];
        for (id, e) in edges.iter().enumerate() {
            adj[fill[e.u]] = (e.v, id);
            fill[e.u] += 1;
            adj[fill[e.v]] = (e.u, id);
            fill[e.v] += 1;
        }
        for v in 0..n {
            adj[adj_start[v]..adj_start[v + 1]].sort_unstable();
        }
        Ok(Tree {
            edges,
            adj_start,
            adj,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj_start.len() - 1
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    #[inline]
    pub fn interval(&self, e: EdgeId) -> WeightInterval {
        self.edges[e].interval
    }

    /// Neighbors of `v` with the connecting edge, sorted by neighbor id.
    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adj[self.adj_start[v]..self.adj_start[v + 1]]
    }

    /// Positions of `v`'s adjacency entries in a flat per-slot array of
    /// length `2 * (n - 1)`; slot `slots(v).start + i` is `neighbors(v)[i]`.
    #[inline]
    pub fn slots(&self, v: Vertex) -> std::ops::Range<usize> {
        self.adj_start[v]..self.adj_start[v + 1]
    }

    /// Slot of the directed pair `(v, u)`.
    pub fn slot_of(&self, v: Vertex, u: Vertex) -> Option<usize> {
        let nb = self.neighbors(v);
        nb.binary_search_by_key(&u, |&(w, _)| w)
            .ok()
            .map(|i| self.adj_start[v] + i)
    }

    pub fn slot_count(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.adj_start[v + 1] - self.adj_start[v]
    }

    pub fn edge_between(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        let nb = self.neighbors(u);
        nb.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| nb[i].1)
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// A cheap structural hash used to detect tables built for another tree.
    pub fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.n().hash(&mut h);
        self.edges.hash(&mut h);
        h.finish()
    }

    /// Hangs the tree from `root`.
    pub fn rooted(&self, root: Vertex) -> Rooted {
        let n = self.n();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut preorder = Vec::with_capacity(n);
        let mut stack = vec![root];
        let mut visited = vec![false; n];
        visited[root] = true;
        while let Some(v) = stack.pop() {
            preorder.push(v);
            for &(u, e) in self.neighbors(v).iter().rev() {
                if !visited[u] {
                    visited[u] = true;
                    parent[u] = Some((v, e));
                    depth[u] = depth[v] + 1;
                    stack.push(u);
                }
            }
        }
        Rooted {
            root,
            parent,
            preorder,
            depth,
        }
    }

    /// Edges along the `x`-to-`y` path, in order from `x`.
    pub fn path_info(&self, x: Vertex, y: Vertex) -> Result<PathInfo> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        if x == y {
            return Ok(PathInfo {
                edges: Vec::new(),
                hops: 0,
            });
        }
        let r = self.rooted(y);
        let mut edges = Vec::with_capacity(r.depth[x]);
        let mut cur = x;
        while let Some((p, e)) = r.parent[cur] {
            edges.push(e);
            cur = p;
        }
        let hops = edges.len();
        Ok(PathInfo { edges, hops })
    }

    /// The neighbor of `x` on the path toward `y`.
    pub fn step_toward(&self, x: Vertex, y: Vertex) -> Result<Vertex> {
        if x == y {
            return Err(Error::SameVertex(x));
        }
        let p = self.path_info(x, y)?;
        Ok(self.edges[p.edges[0]].other(x))
    }

    /// Vertices of the closed branch at `root` once the side containing
    /// `excluded` (a neighbor of `root`) is cut off; the whole tree when
    /// `excluded` is `None`.
    pub fn closed_branch(&self, root: Vertex, excluded: Option<Vertex>) -> Result<BranchView> {
        self.check_vertex(root)?;
        if let Some(x) = excluded {
            self.check_vertex(x)?;
            if self.edge_between(root, x).is_none() {
                return Err(Error::NotNeighbor(root, x));
            }
        }
        let mut members = self.collect_component(root, excluded);
        members.sort_unstable();
        Ok(BranchView {
            root,
            excluded,
            members,
        })
    }

    /// The open branch: the component of `T - root` containing `toward`.
    pub fn open_branch(&self, root: Vertex, toward: Vertex) -> Result<BranchView> {
        self.check_vertex(root)?;
        self.check_vertex(toward)?;
        if root == toward {
            return Err(Error::SameVertex(root));
        }
        let first = self.step_toward(root, toward)?;
        self.closed_branch(first, Some(root))
    }

    fn collect_component(&self, start: Vertex, blocked: Option<Vertex>) -> Vec<Vertex> {
        let mut out = vec![start];
        let mut stack = vec![(start, blocked)];
        while let Some((v, from)) = stack.pop() {
            for &(u, _) in self.neighbors(v) {
                if Some(u) != from {
                    out.push(u);
                    stack.push((u, Some(v)));
                }
            }
        }
        out
    }

    /// Size of the largest open branch at every vertex of the connected
    /// vertex set `mask` (entries outside the set are left at `usize::MAX`).
    pub fn max_branch_sizes(&self, mask: &[bool]) -> Vec<usize> {
        let n = self.n();
        let mut out = vec![usize::MAX; n];
        let Some(start) = (0..n).find(|&v| mask[v]) else {
            return out;
        };
        // Iterative DFS inside the mask.
        let mut parent = vec![usize::MAX; n];
        let mut order = Vec::new();
        let mut stack = vec![start];
        parent[start] = start;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(u, _) in self.neighbors(v) {
                if mask[u] && parent[u] == usize::MAX {
                    parent[u] = v;
                    stack.push(u);
                }
            }
        }
        let total = order.len();
        let mut size = vec![1usize; n];
        let mut biggest_child = vec![0usize; n];
        for &v in order.iter().rev() {
            if v != start {
                let p = parent[v];
                size[p] += size[v];
                biggest_child[p] = biggest_child[p].max(size[v]);
            }
        }
        for &v in &order {
            out[v] = biggest_child[v].max(total - size[v]);
        }
        out
    }

    /// Centroid of the connected vertex set `mask`, lowest id on ties.
    pub fn centroid_of(&self, mask: &[bool]) -> Vertex {
        let sizes = self.max_branch_sizes(mask);
        (0..self.n())
            .filter(|&v| mask[v])
            .min_by_key(|&v| (sizes[v], v))
            .unwrap_or(0)
    }

    /// Vertex whose largest open branch is smallest, lowest id on ties.
    pub fn centroid(&self) -> Vertex {
        self.centroid_of(&vec![true; self.n()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Tree {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v, 1, 1)).collect();
        Tree::build(&edges).unwrap()
    }

    #[test]
    fn builds_two_edge_tree() {
        let t = Tree::build(&[(0, 1, 2, 6), (1, 2, 1, 4)]).unwrap();
        assert_eq!(t.n(), 3);
        assert_eq!(t.interval(0), WeightInterval::new(2, 6).unwrap());
        assert_eq!(t.interval(1), WeightInterval::new(1, 4).unwrap());
        assert_eq!(t.degree(1), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            Tree::build(&[(0, 1, 1, 1), (1, 2, 1, 1), (2, 0, 1, 1)]),
            Err(Error::CycleDetected(2, 0))
        );
        assert_eq!(
            Tree::build(&[(0, 1, 5, 2)]),
            Err(Error::BadInterval { lo: 5, hi: 2 })
        );
        assert_eq!(
            Tree::build(&[(0, 1, -1, 2)]),
            Err(Error::BadInterval { lo: -1, hi: 2 })
        );
        assert_eq!(
            Tree::build(&[(0, 1, 1, 2), (1, 0, 1, 2)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert_eq!(
            Tree::build(&[(0, 1, 1, 2), (2, 3, 1, 2)]),
            Err(Error::Disconnected(2))
        );
        assert_eq!(Tree::build(&[(1, 1, 0, 0)]), Err(Error::SelfLoop(1)));
        assert_eq!(
            Tree::with_vertex_count(2, &[(0, 2, 0, 0)]),
            Err(Error::UnknownVertex(2))
        );
    }

    #[test]
    fn centroid_examples() {
        assert_eq!(path(3).centroid(), 1);
        assert_eq!(path(4).centroid(), 1);
        assert_eq!(path(1).centroid(), 0);
        let star = Tree::build(&[(0, 1, 0, 0), (0, 2, 0, 0), (0, 3, 0, 0)]).unwrap();
        assert_eq!(star.centroid(), 0);
    }

    #[test]
    fn path_queries() {
        let t = path(3);
        assert_eq!(
            t.path_info(1, 1).unwrap(),
            PathInfo {
                edges: vec![],
                hops: 0
            }
        );
        assert_eq!(
            t.path_info(0, 2).unwrap(),
            PathInfo {
                edges: vec![0, 1],
                hops: 2
            }
        );
        assert_eq!(t.path_info(2, 0).unwrap().edges, vec![1, 0]);
        assert_eq!(t.path_info(0, 9), Err(Error::UnknownVertex(9)));
    }

    #[test]
    fn branches() {
        let t = path(3);
        assert_eq!(t.open_branch(1, 2).unwrap().members, vec![2]);
        assert_eq!(t.closed_branch(1, Some(2)).unwrap().members, vec![0, 1]);
        assert_eq!(t.open_branch(0, 2).unwrap().members, vec![1, 2]);
        assert_eq!(t.open_branch(1, 1), Err(Error::SameVertex(1)));
        assert_eq!(t.closed_branch(0, Some(2)), Err(Error::NotNeighbor(0, 2)));
        let star = Tree::build(&[(0, 1, 0, 0), (0, 2, 0, 0), (0, 3, 0, 0), (0, 4, 0, 0)]).unwrap();
        assert_eq!(star.open_branch(0, 3).unwrap().members, vec![3]);
        assert_eq!(star.closed_branch(0, None).unwrap().len(), 5);
    }
}
