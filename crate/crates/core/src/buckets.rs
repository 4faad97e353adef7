//! Width-ρ bucket arrays over neighbor keys.
//!
//! A sender with neighbor keys `k_1 >= k_2 >= ... >= k_h` finishes at
//! `max_k (k·ρ + k_k)`. Grouping keys by their distance from the largest key
//! in windows of width ρ gives the same maximum without sorting: the last
//! vertex of bucket `ℓ` sits at position `acc(ℓ)`, and every other member of
//! the bucket is dominated by it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tree::{Vertex, Weight};

/// Bucket contents for one sender.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BucketArray {
    width: Weight,
    anchor: Weight,
    /// `buckets[ℓ - 1]` holds the members of bucket `ℓ`.
    buckets: Vec<Vec<Vertex>>,
    min_v: Vec<Option<Weight>>,
    acc: Vec<usize>,
}

/// 1-based bucket of `key` relative to `anchor`, or `None` once the key is
/// `h·ρ` or more below the anchor.
#[inline]
pub fn bucket_index(anchor: Weight, key: Weight, rho: Weight, h: usize) -> Option<usize> {
    debug_assert!(rho > 0 && key <= anchor);
    let l = ((anchor - key) / rho) as usize;
    (l < h).then_some(l + 1)
}

/// Groups `keys` into `h = keys.len()` buckets of width `rho`.
pub fn bucket_build(keys: &[(Vertex, Weight)], rho: Weight) -> Result<BucketArray> {
    if rho <= 0 {
        return Err(if rho == 0 {
            Error::ZeroRho
        } else {
            Error::NegativeRho(rho)
        });
    }
    let anchor = keys.iter().map(|&(_, k)| k).max().ok_or(Error::NoKeys)?;
    let h = keys.len();
    let mut buckets = vec![Vec::new(); h];
    let mut min_v: Vec<Option<Weight>> = vec![None; h];
    for &(v, k) in keys {
        if let Some(l) = bucket_index(anchor, k, rho, h) {
            buckets[l - 1].push(v);
            let m = &mut min_v[l - 1];
            *m = Some(m.map_or(k, |old| old.min(k)));
        }
    }
    let mut acc = Vec::with_capacity(h);
    let mut running = 0;
    for b in &buckets {
        running += b.len();
        acc.push(running);
    }
    Ok(BucketArray {
        width: rho,
        anchor,
        buckets,
        min_v,
        acc,
    })
}

/// Broadcast time recovered from the bucket summary.
pub fn btime_from_buckets(b: &BucketArray) -> Weight {
    b.btime()
}

impl BucketArray {
    pub fn width(&self) -> Weight {
        self.width
    }

    pub fn anchor(&self) -> Weight {
        self.anchor
    }

    /// Number of buckets (equal to the number of keys).
    pub fn len(&self) -> usize {
        self.buckets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    /// Members of bucket `l` (1-based).
    pub fn bucket(&self, l: usize) -> &[Vertex] {
        &self.buckets[l - 1]
    }

    pub fn min_v(&self, l: usize) -> Option<Weight> {
        self.min_v[l - 1]
    }

    pub fn acc(&self, l: usize) -> usize {
        self.acc[l - 1]
    }

    /// `min_v(l) + acc(l)·ρ`, or `None` for an empty bucket.
    pub fn value(&self, l: usize) -> Option<Weight> {
        self.min_v(l)
            .map(|m| m + self.acc(l) as Weight * self.width)
    }

    pub fn btime(&self) -> Weight {
        (1..=self.len())
            .filter_map(|l| self.value(l))
            .max()
            .unwrap_or(0)
    }
}

/// Reusable buffers for the allocation-free bucket routines.
#[derive(Debug, Default)]
pub(crate) struct Scratch {
    cnt: Vec<usize>,
    min1: Vec<Weight>,
    arg1: Vec<usize>,
    min2: Vec<Weight>,
    acc: Vec<usize>,
    value: Vec<Weight>,
    pre: Vec<Weight>,
    suf: Vec<Weight>,
    bucket_of: Vec<usize>,
    rest: Vec<Weight>,
}

const NONE: usize = usize::MAX;

/// Broadcast time of a sender whose neighbor keys are `keys`.
pub(crate) fn keys_time(keys: &[Weight], rho: Weight, s: &mut Scratch) -> Weight {
    let Some(&anchor) = keys.iter().max() else {
        return 0;
    };
    if rho == 0 {
        return anchor;
    }
    let h = keys.len();
    s.cnt.clear();
    s.cnt.resize(h, 0);
    s.min1.clear();
    s.min1.resize(h, Weight::MAX);
    for &k in keys {
        if let Some(l) = bucket_index(anchor, k, rho, h) {
            s.cnt[l - 1] += 1;
            s.min1[l - 1] = s.min1[l - 1].min(k);
        }
    }
    let mut acc = 0;
    let mut best = 0;
    for l in 0..h {
        acc += s.cnt[l];
        if s.cnt[l] > 0 {
            best = best.max(s.min1[l] + acc as Weight * rho);
        }
    }
    best
}

/// Writes into `out[i]` the broadcast time of the sender once key `i` is
/// removed, and returns the time with every key present.
///
/// For `ρ > 0` this uses one bucket pass: prefix maxima `π⁻` of the bucket
/// values, suffix maxima `π⁺` shifted down by one position, and the bucket
/// minimum that survives removing key `i` (`λ`).
pub(crate) fn exclusion_times(
    keys: &[Weight],
    rho: Weight,
    s: &mut Scratch,
    out: &mut Vec<Weight>,
) -> Weight {
    out.clear();
    let h = keys.len();
    let Some(&anchor) = keys.iter().max() else {
        return 0;
    };
    let anchor_count = keys.iter().filter(|&&k| k == anchor).count();
    if rho == 0 {
        let second = keys
            .iter()
            .enumerate()
            .filter(|&(_, &k)| k != anchor)
            .map(|(_, &k)| k)
            .max()
            .unwrap_or(0);
        for &k in keys {
            out.push(if k == anchor && anchor_count == 1 {
                second
            } else {
                anchor
            });
        }
        return anchor;
    }

    s.cnt.clear();
    s.cnt.resize(h, 0);
    s.min1.clear();
    s.min1.resize(h, Weight::MAX);
    s.arg1.clear();
    s.arg1.resize(h, NONE);
    s.min2.clear();
    s.min2.resize(h, Weight::MAX);
    s.bucket_of.clear();
    for (i, &k) in keys.iter().enumerate() {
        match bucket_index(anchor, k, rho, h) {
            Some(l) => {
                let b = l - 1;
                s.bucket_of.push(b);
                s.cnt[b] += 1;
                if k < s.min1[b] {
                    s.min2[b] = s.min1[b];
                    s.min1[b] = k;
                    s.arg1[b] = i;
                } else if k < s.min2[b] {
                    s.min2[b] = k;
                }
            }
            None => s.bucket_of.push(NONE),
        }
    }
    s.acc.clear();
    s.value.clear();
    let mut acc = 0;
    for b in 0..h {
        acc += s.cnt[b];
        s.acc.push(acc);
        s.value.push(if s.cnt[b] > 0 {
            s.min1[b] + acc as Weight * rho
        } else {
            Weight::MIN
        });
    }
    // pre[b] = max(0, value[t] for t < b); suf[b] = max(0, value[t] - ρ for t > b)
    s.pre.clear();
    let mut run = 0;
    for b in 0..h {
        s.pre.push(run);
        run = run.max(s.value[b]);
    }
    let total = run;
    s.suf.clear();
    s.suf.resize(h, 0);
    let mut run = 0;
    for b in (0..h).rev() {
        s.suf[b] = run;
        if s.cnt[b] > 0 {
            run = run.max(s.value[b] - rho);
        }
    }

    let mut anchor_index = NONE;
    for (i, &k) in keys.iter().enumerate() {
        let b = s.bucket_of[i];
        if k == anchor && anchor_count == 1 {
            // Removing the unique maximum moves every bucket boundary.
            anchor_index = i;
            out.push(0);
        } else if b == NONE {
            out.push(total);
        } else {
            let mut r = s.pre[b].max(s.suf[b]);
            if s.cnt[b] > 1 {
                let lambda = if s.arg1[b] == i { s.min2[b] } else { s.min1[b] };
                r = r.max(lambda + (s.acc[b] - 1) as Weight * rho);
            }
            out.push(r);
        }
    }
    if anchor_index != NONE {
        let mut rest = std::mem::take(&mut s.rest);
        rest.clear();
        rest.extend(
            keys.iter()
                .enumerate()
                .filter(|&(i, _)| i != anchor_index)
                .map(|(_, &k)| k),
        );
        out[anchor_index] = keys_time(&rest, rho, s);
        s.rest = rest;
    }
    total
}

/// Reference: sort nonincreasing and take `max_k (k·ρ + key_k)`.
pub(crate) fn sorted_time(keys: &mut [Weight], rho: Weight) -> Weight {
    keys.sort_unstable_by(|a, b| b.cmp(a));
    keys.iter()
        .enumerate()
        .map(|(i, &k)| (i as Weight + 1) * rho + k)
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sample_keys() {
        let b = bucket_build(&[(1, 13), (2, 12), (3, 7)], 1).unwrap();
        assert_eq!(b.bucket(1), &[1]);
        assert_eq!(b.bucket(2), &[2]);
        assert!(b.bucket(3).is_empty());
        assert_eq!((b.acc(1), b.acc(2), b.acc(3)), (1, 2, 2));
        assert_eq!(b.btime(), 14);
        assert_eq!(sorted_time(&mut [13, 12, 7], 1), 14);
    }

    #[test]
    fn degenerate_inputs() {
        let b = bucket_build(&[(4, 9)], 3).unwrap();
        assert_eq!(b.btime(), 12);
        let b = bucket_build(&[(0, 5), (1, 5), (2, 5), (3, 5)], 2).unwrap();
        assert_eq!(b.bucket(1).len(), 4);
        assert_eq!(b.btime(), 4 * 2 + 5);
        assert_eq!(bucket_build(&[(0, 1)], 0), Err(Error::ZeroRho));
        assert_eq!(bucket_build(&[], 1), Err(Error::NoKeys));
    }

    proptest! {
        #[test]
        fn buckets_match_sorting(keys in prop::collection::vec(0i64..40, 1..20), rho in 1i64..6) {
            let tagged: Vec<_> = keys.iter().copied().enumerate().collect();
            let b = bucket_build(&tagged, rho).unwrap();
            let mut sorted = keys.clone();
            prop_assert_eq!(b.btime(), sorted_time(&mut sorted, rho));
            prop_assert_eq!(keys_time(&keys, rho, &mut Scratch::default()), b.btime());
        }

        #[test]
        fn exclusion_matches_direct(keys in prop::collection::vec(0i64..30, 1..16), rho in 0i64..5) {
            let mut s = Scratch::default();
            let mut out = Vec::new();
            let total = exclusion_times(&keys, rho, &mut s, &mut out);
            prop_assert_eq!(total, sorted_time(&mut keys.clone(), rho));
            for i in 0..keys.len() {
                let mut rest: Vec<_> = keys.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &k)| k).collect();
                prop_assert_eq!(out[i], sorted_time(&mut rest, rho), "excluding {}", i);
            }
        }
    }
}
