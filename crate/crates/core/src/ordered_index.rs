//! Van Emde Boas ordered set over `1..=U`.
//!
//! The recursion splits a `b`-bit key into high and low halves and stops at
//! 64-key bitmask leaves. Clusters are created on first touch, so an index
//! over a large universe costs memory proportional to what it holds.

use std::collections::HashMap;

use crate::error::{Error, Result};

const LEAF_BITS: u32 = 6;

#[derive(Debug, Clone)]
enum Node {
    Leaf(u64),
    Inner(Box<Inner>),
}

#[derive(Debug, Clone)]
struct Inner {
    low_bits: u32,
    min: Option<u64>,
    max: u64,
    summary: Node,
    clusters: HashMap<u64, Node>,
}

impl Node {
    fn new(bits: u32) -> Node {
        if bits <= LEAF_BITS {
            Node::Leaf(0)
        } else {
            let low_bits = bits / 2;
            Node::Inner(Box::new(Inner {
                low_bits,
                min: None,
                max: 0,
                summary: Node::new(bits - low_bits),
                clusters: HashMap::new(),
            }))
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            Node::Leaf(b) => *b == 0,
            Node::Inner(n) => n.min.is_none(),
        }
    }

    fn min(&self) -> Option<u64> {
        match self {
            Node::Leaf(0) => None,
            Node::Leaf(b) => Some(b.trailing_zeros() as u64),
            Node::Inner(n) => n.min,
        }
    }

    fn max(&self) -> Option<u64> {
        match self {
            Node::Leaf(0) => None,
            Node::Leaf(b) => Some(63 - b.leading_zeros() as u64),
            Node::Inner(n) => n.min.map(|_| n.max),
        }
    }

    fn contains(&self, x: u64) -> bool {
        match self {
            Node::Leaf(b) => b >> x & 1 == 1,
            Node::Inner(n) => {
                if n.min == Some(x) || (n.min.is_some() && n.max == x) {
                    return true;
                }
                let (h, l) = n.split(x);
                n.clusters.get(&h).is_some_and(|c| c.contains(l))
            }
        }
    }

    /// Returns whether `x` was absent.
    fn insert(&mut self, x: u64) -> bool {
        match self {
            Node::Leaf(b) => {
                let fresh = *b >> x & 1 == 0;
                *b |= 1 << x;
                fresh
            }
            Node::Inner(n) => n.insert(x),
        }
    }

    /// Removes `x`, which must be present.
    fn remove(&mut self, x: u64) {
        match self {
            Node::Leaf(b) => *b &= !(1 << x),
            Node::Inner(n) => n.remove(x),
        }
    }

    fn successor(&self, x: u64) -> Option<u64> {
        match self {
            Node::Leaf(b) => {
                let above = if x >= 63 { 0 } else { b & (!0u64 << (x + 1)) };
                (above != 0).then(|| above.trailing_zeros() as u64)
            }
            Node::Inner(n) => n.successor(x),
        }
    }

    fn predecessor(&self, x: u64) -> Option<u64> {
        match self {
            Node::Leaf(b) => {
                let below = b & ((1u64 << x) - 1);
                (below != 0).then(|| 63 - below.leading_zeros() as u64)
            }
            Node::Inner(n) => n.predecessor(x),
        }
    }
}

impl Inner {
    #[inline]
    fn split(&self, x: u64) -> (u64, u64) {
        (x >> self.low_bits, x & ((1 << self.low_bits) - 1))
    }

    #[inline]
    fn join(&self, h: u64, l: u64) -> u64 {
        h << self.low_bits | l
    }

    fn insert(&mut self, x: u64) -> bool {
        let Some(min) = self.min else {
            self.min = Some(x);
            self.max = x;
            return true;
        };
        if x == min {
            return false;
        }
        let mut x = x;
        if x < min {
            self.min = Some(x);
            x = min;
        }
        let (h, l) = self.split(x);
        let fresh = match self.clusters.get_mut(&h) {
            Some(c) => c.insert(l),
            None => {
                let mut c = Node::new(self.low_bits);
                c.insert(l);
                self.clusters.insert(h, c);
                self.summary.insert(h);
                true
            }
        };
        self.max = self.max.max(x);
        fresh
    }

    fn remove(&mut self, x: u64) {
        let min = self.min.expect("nonempty");
        if min == self.max {
            self.min = None;
            return;
        }
        let mut x = x;
        if x == min {
            let first = self.summary.min().expect("other members live in clusters");
            x = self.join(
                first,
                self.clusters[&first].min().expect("nonempty cluster"),
            );
            self.min = Some(x);
        }
        let (h, l) = self.split(x);
        let cluster = self.clusters.get_mut(&h).expect("member cluster");
        cluster.remove(l);
        if cluster.is_empty() {
            self.clusters.remove(&h);
            self.summary.remove(h);
            if x == self.max {
                self.max = match self.summary.max() {
                    None => self.min.expect("nonempty"),
                    Some(last) => {
                        self.join(last, self.clusters[&last].max().expect("nonempty cluster"))
                    }
                };
            }
        } else if x == self.max {
            let last = cluster.max().expect("nonempty cluster");
            self.max = self.join(h, last);
        }
    }

    fn successor(&self, x: u64) -> Option<u64> {
        let min = self.min?;
        if x < min {
            return Some(min);
        }
        let (h, l) = self.split(x);
        if let Some(c) = self.clusters.get(&h) {
            if c.max().is_some_and(|m| l < m) {
                return Some(self.join(h, c.successor(l)?));
            }
        }
        let next = self.summary.successor(h)?;
        Some(self.join(next, self.clusters[&next].min()?))
    }

    fn predecessor(&self, x: u64) -> Option<u64> {
        let min = self.min?;
        if x > self.max {
            return Some(self.max);
        }
        let (h, l) = self.split(x);
        if let Some(c) = self.clusters.get(&h) {
            if c.min().is_some_and(|m| l > m) {
                return Some(self.join(h, c.predecessor(l)?));
            }
        }
        match self.summary.predecessor(h) {
            Some(prev) => Some(self.join(prev, self.clusters[&prev].max()?)),
            None => (x > min).then_some(min),
        }
    }
}

/// Ordered set of integers in `1..=universe`.
#[derive(Debug, Clone)]
pub struct OrderedIndex {
    universe: usize,
    len: usize,
    root: Node,
}

impl OrderedIndex {
    pub fn new(universe: usize) -> OrderedIndex {
        let bits = (usize::BITS - universe.max(1).saturating_sub(1).leading_zeros()).max(LEAF_BITS);
        OrderedIndex {
            universe,
            len: 0,
            root: Node::new(bits),
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn key(&self, k: usize) -> Result<u64> {
        if (1..=self.universe).contains(&k) {
            Ok(k as u64 - 1)
        } else {
            Err(Error::OutOfUniverse {
                key: k,
                universe: self.universe,
            })
        }
    }

    /// Adds `k`; returns whether it was absent.
    pub fn insert(&mut self, k: usize) -> Result<bool> {
        let x = self.key(k)?;
        let fresh = self.root.insert(x);
        self.len += fresh as usize;
        Ok(fresh)
    }

    /// Removes `k`; returns whether it was present.
    pub fn delete(&mut self, k: usize) -> Result<bool> {
        let x = self.key(k)?;
        if !self.root.contains(x) {
            return Ok(false);
        }
        self.root.remove(x);
        self.len -= 1;
        Ok(true)
    }

    pub fn contains(&self, k: usize) -> Result<bool> {
        Ok(self.root.contains(self.key(k)?))
    }

    /// Smallest member greater than `k`.
    pub fn successor(&self, k: usize) -> Result<Option<usize>> {
        let x = self.key(k)?;
        Ok(self.root.successor(x).map(|y| y as usize + 1))
    }

    /// Largest member less than `k`.
    pub fn predecessor(&self, k: usize) -> Result<Option<usize>> {
        let x = self.key(k)?;
        Ok(self.root.predecessor(x).map(|y| y as usize + 1))
    }

    pub fn min(&self) -> Option<usize> {
        self.root.min().map(|y| y as usize + 1)
    }

    pub fn max(&self) -> Option<usize> {
        self.root.max().map(|y| y as usize + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    #[test]
    fn basics() {
        let mut ix = OrderedIndex::new(100);
        assert_eq!(ix.successor(5).unwrap(), None);
        assert!(ix.insert(3).unwrap());
        assert!(ix.insert(9).unwrap());
        assert!(!ix.insert(9).unwrap());
        assert_eq!(ix.successor(3).unwrap(), Some(9));
        assert_eq!(ix.predecessor(9).unwrap(), Some(3));
        assert_eq!(ix.min(), Some(3));
        assert!(ix.delete(3).unwrap());
        assert!(!ix.delete(3).unwrap());
        assert_eq!(ix.min(), Some(9));
        assert_eq!(ix.len(), 1);
        assert_eq!(
            ix.insert(0),
            Err(Error::OutOfUniverse {
                key: 0,
                universe: 100
            })
        );
        assert_eq!(
            ix.insert(101),
            Err(Error::OutOfUniverse {
                key: 101,
                universe: 100
            })
        );
    }

    #[test]
    fn leaf_edges() {
        let mut ix = OrderedIndex::new(64);
        ix.insert(1).unwrap();
        ix.insert(64).unwrap();
        assert_eq!(ix.successor(1).unwrap(), Some(64));
        assert_eq!(ix.successor(64).unwrap(), None);
        assert_eq!(ix.predecessor(1).unwrap(), None);
        assert_eq!(ix.predecessor(64).unwrap(), Some(1));
    }

    fn differential(universe: usize, ops: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ix = OrderedIndex::new(universe);
        let mut model = BTreeSet::new();
        for _ in 0..ops {
            let k = rng.gen_range(1..=universe);
            match rng.gen_range(0..5) {
                0 | 1 => assert_eq!(ix.insert(k).unwrap(), model.insert(k)),
                2 => assert_eq!(ix.delete(k).unwrap(), model.remove(&k)),
                3 => assert_eq!(
                    ix.successor(k).unwrap(),
                    model.range(k + 1..).next().copied()
                ),
                _ => assert_eq!(
                    ix.predecessor(k).unwrap(),
                    model.range(..k).next_back().copied()
                ),
            }
            assert_eq!(ix.min(), model.first().copied());
            assert_eq!(ix.max(), model.last().copied());
            assert_eq!(ix.len(), model.len());
        }
    }

    #[test]
    fn matches_btreeset() {
        for (i, &u) in [1usize, 2, 63, 64, 65, 200, 4096, 100_000]
            .iter()
            .enumerate()
        {
            differential(u, 20_000, i as u64);
        }
    }
}
