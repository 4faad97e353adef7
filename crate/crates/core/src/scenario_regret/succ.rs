//! Incremental broadcast times across the candidate family at one pivot.
//!
//! The pivot's children come as pairs `(hi_key, lo_key)` ordered by
//! `hi_key`, largest first. Candidate `j` uses the high key for the first
//! `j` children and the low key for the rest. Going from `j + 1` to `j`
//! moves one child from bucket `τ_{j+1}` to bucket `ℓ̂`, so the sweep keeps
//! only what changes:
//!
//! * buckets left of `τ_j` never differ from the all-high state, so a prefix
//!   maximum of that state covers them;
//! * buckets right of `τ_j` are summarized by their suffix-maximum records,
//!   kept in an [`OrderedIndex`], each carrying `Δ`, the drift of its
//!   cumulative-count gap to the previous record against the all-high state.
//!
//! Each step touches `O(1)` records plus the ones it deletes, and every
//! record is inserted at most twice, so a pivot with `h` children costs
//! `O(h log log h)`.

use crate::buckets::bucket_index;
use crate::error::{Error, Result};
use crate::ordered_index::OrderedIndex;
use crate::tree::Weight;

/// Sweep state for `j = h′, h′ - 1, ..., 1`, where `h′` is the last child
/// whose high key still lands in a bucket.
#[derive(Debug, Clone)]
pub struct SuccState {
    rho: Weight,
    plus: Vec<Weight>,
    minus: Vec<Weight>,
    /// Bucket of each high key (`buckets + 1` when outside).
    tau: Vec<usize>,
    /// Bucket of each low key (`buckets + 1` when outside).
    hat: Vec<usize>,
    buckets: usize,
    last: usize,
    j: usize,
    /// All-high cumulative counts, `acc_hi[0] = 0`.
    acc_hi: Vec<usize>,
    cnt_hi: Vec<usize>,
    /// `pref_hi[ℓ]`: best all-high bucket value over buckets `1..=ℓ`.
    pref_hi: Vec<Weight>,
    /// First child (1-based) whose high key falls in each bucket.
    first_plus: Vec<usize>,
    min_minus: Vec<Weight>,
    cnt_minus: Vec<usize>,
    records: OrderedIndex,
    delta: Vec<i64>,
    #[cfg(test)]
    seen: std::collections::BTreeSet<&'static str>,
}

const EMPTY: Weight = Weight::MAX;

/// Records which case of the transition ran, for branch-coverage tests.
macro_rules! mark {
    ($st:ident, $tag:literal) => {{
        #[cfg(test)]
        $st.seen.insert($tag);
    }};
}

impl SuccState {
    /// Starts the sweep at `j = h′`. Pairs must be sorted by high key,
    /// largest first, with each low key at most its high key.
    pub fn new(pairs: &[(Weight, Weight)], rho: Weight) -> Result<SuccState> {
        if rho <= 0 {
            return Err(if rho == 0 {
                Error::ZeroRho
            } else {
                Error::NegativeRho(rho)
            });
        }
        if pairs.is_empty() {
            return Err(Error::NoKeys);
        }
        debug_assert!(pairs.windows(2).all(|w| w[0].0 >= w[1].0));
        debug_assert!(pairs.iter().all(|&(hi, lo)| lo <= hi));
        let h = pairs.len();
        let anchor = pairs[0].0;
        let place = |k: Weight| bucket_index(anchor, k, rho, h).unwrap_or(h + 1);
        let plus: Vec<_> = pairs.iter().map(|p| p.0).collect();
        let minus: Vec<_> = pairs.iter().map(|p| p.1).collect();
        let tau: Vec<_> = plus.iter().map(|&k| place(k)).collect();
        let hat: Vec<_> = minus.iter().map(|&k| place(k)).collect();
        let last = tau.iter().take_while(|&&t| t <= h).count();

        let mut cnt_hi = vec![0; h + 2];
        let mut min_hi = vec![EMPTY; h + 2];
        let mut first_plus = vec![0; h + 2];
        for (k, &t) in tau.iter().enumerate().take(last) {
            if cnt_hi[t] == 0 {
                first_plus[t] = k + 1;
            }
            cnt_hi[t] += 1;
            min_hi[t] = min_hi[t].min(plus[k]);
        }
        let mut acc_hi = vec![0; h + 2];
        let mut pref_hi = vec![Weight::MIN; h + 2];
        for l in 1..=h {
            acc_hi[l] = acc_hi[l - 1] + cnt_hi[l];
            let here = if cnt_hi[l] > 0 {
                min_hi[l] + acc_hi[l] as Weight * rho
            } else {
                Weight::MIN
            };
            pref_hi[l] = pref_hi[l - 1].max(here);
        }
        acc_hi[h + 1] = acc_hi[h];

        Ok(SuccState {
            rho,
            plus,
            minus,
            tau,
            hat,
            buckets: h,
            last,
            j: last,
            acc_hi,
            cnt_hi,
            pref_hi,
            first_plus,
            min_minus: vec![EMPTY; h + 2],
            cnt_minus: vec![0; h + 2],
            records: OrderedIndex::new(h),
            delta: vec![0; h + 2],
            #[cfg(test)]
            seen: Default::default(),
        })
    }

    /// Current candidate index.
    pub fn j(&self) -> usize {
        self.j
    }

    /// `h′`: candidates above it all share its result.
    pub fn last(&self) -> usize {
        self.last
    }

    /// Bucket of the `k`-th high key (1-based), `buckets + 1` when outside.
    pub fn tau_of(&self, k: usize) -> usize {
        self.tau[k - 1]
    }

    /// Bucket of the `k`-th low key (1-based), `buckets + 1` when outside.
    pub fn hat_of(&self, k: usize) -> usize {
        self.hat[k - 1]
    }

    /// `τ_j` for the current `j`.
    pub fn tau(&self) -> usize {
        self.tau[self.j - 1]
    }

    /// Current records right of `τ_j` with their `Δ`, ascending.
    pub fn succ(&self) -> Vec<(usize, i64)> {
        let mut out = Vec::with_capacity(self.records.len());
        let mut cur = self.records.min();
        while let Some(l) = cur {
            out.push((l, self.delta[l]));
            cur = self.records.successor(l).expect("in universe");
        }
        out
    }

    /// `min_v(ℓ) + acc_hi(ℓ)·ρ` for a bucket right of `τ_j`.
    #[inline]
    fn base(&self, l: usize) -> Weight {
        self.min_minus[l] + self.acc_hi[l] as Weight * self.rho
    }

    /// Broadcast time for the current candidate.
    pub fn time(&self) -> Weight {
        let rho = self.rho;
        let t = self.tau();
        let pred = self.pref_hi[t - 1];
        let cnt = self.j + 1 - self.first_plus[t] + self.cnt_minus[t];
        let acc_t = self.acc_hi[t - 1] + cnt;
        let here = self.plus[self.j - 1].min(self.min_minus[t]) + acc_t as Weight * rho;
        let succ = self.records.min().map_or(Weight::MIN, |s| {
            let acc_s =
                acc_t as i64 + self.acc_hi[s] as i64 - self.acc_hi[t] as i64 + self.delta[s];
            self.min_minus[s] + acc_s * rho
        });
        pred.max(here).max(succ)
    }

    /// Moves from candidate `j + 1` to `j`. Returns `false` at `j = 1`.
    pub fn step(&mut self) -> bool {
        if self.j <= 1 {
            return false;
        }
        let h = self.buckets;
        let rho = self.rho;
        let moved = self.j - 1;
        let a = self.tau[moved];
        let b = self.hat[moved];
        self.j -= 1;
        let new_tau = self.tau[self.j - 1];
        if b <= h {
            self.cnt_minus[b] += 1;
            self.min_minus[b] = self.min_minus[b].min(self.minus[moved]);
        }

        // `gap` ends up as c(a) - c(first record), where c(ℓ) is how far
        // acc(ℓ) has fallen below its all-high value.
        let gap = if a == b {
            mark!(self, "same bucket");
            self.records.min().map(|f| self.delta[f])
        } else {
            let below = if b <= h {
                self.records.predecessor(b).expect("in universe")
            } else {
                self.records.max()
            };
            let p = below.unwrap_or(a);
            let b_in = b <= h && self.records.contains(b).expect("in universe");
            let f1 = if b <= h {
                self.records.successor(b).expect("in universe")
            } else {
                None
            };

            // Stage 1 keeps every record beyond ℓ̂. Stage 2 settles ℓ̂ and
            // yields the nearest record at or after it, with c(p) - c(front).
            let front = if b <= h {
                let keeps = match f1 {
                    None => true,
                    Some(f) => {
                        let prev = if b_in { b } else { p };
                        let gap_acc =
                            self.acc_hi[f] as i64 - self.acc_hi[prev] as i64 + self.delta[f];
                        self.min_minus[b] >= self.min_minus[f] + gap_acc * rho
                    }
                };
                if keeps {
                    match (b_in, f1.is_some()) {
                        (true, _) => mark!(self, "target stays a record"),
                        (false, true) => mark!(self, "target becomes a record"),
                        (false, false) => mark!(self, "target becomes the last record"),
                    }
                    let spread = self.acc_hi[b] as i64 - self.acc_hi[p] as i64;
                    if let Some(f) = f1 {
                        if !b_in {
                            self.delta[f] += spread;
                        }
                    }
                    let d = if b_in { 1 + self.delta[b] } else { 1 - spread };
                    if !b_in {
                        self.records.insert(b).expect("in universe");
                    }
                    Some((b, d))
                } else {
                    if b_in {
                        mark!(self, "target stops being a record");
                        self.records.delete(b).expect("in universe");
                    } else {
                        mark!(self, "target stays dominated");
                    }
                    let f = f1.expect("a nonempty bucket with no later record is itself a record");
                    let d = 1 + self.delta[f] + if b_in { self.delta[b] } else { 0 };
                    Some((f, d))
                }
            } else {
                mark!(self, "target outside the buckets");
                None
            };

            // Stage 3: records strictly between τ_{j+1} and ℓ̂ all lost ρ;
            // the ones that now fall below `front` form a suffix.
            match front {
                Some((fb, mut d)) => {
                    let mut cur = p;
                    while cur != a {
                        if self.base(cur) >= self.base(fb) + d * rho {
                            mark!(self, "earlier record survives");
                            self.delta[fb] = d;
                            break;
                        }
                        mark!(self, "earlier record pruned");
                        let prev = self
                            .records
                            .predecessor(cur)
                            .expect("in universe")
                            .unwrap_or(a);
                        d += self.delta[cur];
                        self.records.delete(cur).expect("in universe");
                        cur = prev;
                    }
                    Some(if cur == a {
                        d
                    } else {
                        let first = self.records.min().expect("survivor present");
                        self.delta[first]
                    })
                }
                None => self.records.min().map(|f| self.delta[f]),
            }
        };

        // Stage 4: the window now starts at τ_j; bucket τ_{j+1} may join.
        let first = self.records.min();
        if new_tau < a {
            let rel = self.cnt_minus[a] as i64 - self.cnt_hi[a] as i64;
            let joins = self.cnt_minus[a] > 0
                && first.is_none_or(|f| {
                    self.base(a) >= self.base(f) + gap.expect("set with records") * rho
                });
            if joins {
                mark!(self, "source bucket joins");
                self.records.insert(a).expect("in universe");
                self.delta[a] = rel;
                if let Some(f) = first {
                    self.delta[f] = gap.expect("set with records");
                }
            } else if let Some(f) = first {
                mark!(self, "source bucket stays out");
                self.delta[f] = rel + gap.expect("set with records");
            }
        } else if let Some(f) = first {
            mark!(self, "window start unchanged");
            self.delta[f] = gap.expect("set with records");
        }
        true
    }
}

/// Broadcast time of every candidate: entry `j - 1` holds candidate `j`.
pub fn sweep(pairs: &[(Weight, Weight)], rho: Weight) -> Vec<Weight> {
    let h = pairs.len();
    if h == 0 {
        return Vec::new();
    }
    if rho == 0 {
        return vec![pairs[0].0; h];
    }
    let mut st = SuccState::new(pairs, rho).expect("validated input");
    let mut out = vec![0; h];
    let last = st.last();
    let top = st.time();
    for slot in out.iter_mut().skip(last - 1) {
        *slot = top;
    }
    while st.step() {
        out[st.j() - 1] = st.time();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::buckets::sorted_time;
    use proptest::prelude::*;

    fn direct(pairs: &[(Weight, Weight)], rho: Weight, j: usize) -> Weight {
        let mut keys: Vec<_> = pairs
            .iter()
            .enumerate()
            .map(|(k, &(hi, lo))| if k < j { hi } else { lo })
            .collect();
        sorted_time(&mut keys, rho)
    }

    fn pairs_from(raw: Vec<(Weight, Weight)>) -> Vec<(Weight, Weight)> {
        let mut p: Vec<_> = raw.into_iter().map(|(a, b)| (a.max(b), a.min(b))).collect();
        p.sort_by_key(|q| std::cmp::Reverse(q.0));
        p
    }

    #[test]
    fn sample_pivot() {
        // High keys 13, 12, 7 at the pivot; low keys after the reset.
        let pairs = [(13, 13), (12, 6), (7, 7)];
        let got = sweep(&pairs, 1);
        for j in 1..=3 {
            assert_eq!(got[j - 1], direct(&pairs, 1, j));
        }
    }

    /// Records above `τ_j` with their drift, straight from the definition.
    fn succ_by_definition(pairs: &[(Weight, Weight)], rho: Weight, j: usize) -> Vec<(usize, i64)> {
        let h = pairs.len();
        let anchor = pairs[0].0;
        let state = |jj: usize| {
            let mut cnt = vec![0i64; h + 2];
            let mut min = vec![Weight::MAX; h + 2];
            for (k, &(hi, lo)) in pairs.iter().enumerate() {
                let key = if k < jj { hi } else { lo };
                if let Some(l) = bucket_index(anchor, key, rho, h) {
                    cnt[l] += 1;
                    min[l] = min[l].min(key);
                }
            }
            let mut acc = vec![0i64; h + 2];
            for l in 1..=h {
                acc[l] = acc[l - 1] + cnt[l];
            }
            (cnt, min, acc)
        };
        let (cnt, min, acc) = state(j);
        let (_, _, top) = state(h);
        let tau = bucket_index(anchor, pairs[j - 1].0, rho, h).unwrap();
        let mut out = Vec::new();
        let mut best = Weight::MIN;
        for l in (tau + 1..=h).rev().filter(|&l| cnt[l] > 0) {
            let v = min[l] + acc[l] * rho;
            if v >= best {
                out.push(l);
            }
            best = best.max(v);
        }
        out.reverse();
        let mut prev = tau;
        out.into_iter()
            .map(|l| {
                let d = (acc[l] - acc[prev]) - (top[l] - top[prev]);
                prev = l;
                (l, d)
            })
            .collect()
    }

    #[test]
    fn every_transition_case_is_exercised() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..3000 {
            let h = rng.gen_range(1..14);
            let raw = (0..h)
                .map(|_| (rng.gen_range(0..16), rng.gen_range(0..16)))
                .collect();
            let pairs = pairs_from(raw);
            let rho = rng.gen_range(1..4);
            let mut st = SuccState::new(&pairs, rho).unwrap();
            loop {
                assert_eq!(
                    st.succ(),
                    succ_by_definition(&pairs, rho, st.j()),
                    "{pairs:?} rho={rho} j={}",
                    st.j()
                );
                if !st.step() {
                    break;
                }
            }
            seen.extend(st.seen.iter().copied());
        }
        let all = [
            "same bucket",
            "target stays a record",
            "target becomes a record",
            "target becomes the last record",
            "target stops being a record",
            "target stays dominated",
            "target outside the buckets",
            "earlier record survives",
            "earlier record pruned",
            "source bucket joins",
            "source bucket stays out",
            "window start unchanged",
        ];
        for case in all {
            assert!(seen.contains(case), "never ran: {case}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(SuccState::new(&[(1, 1)], 0), Err(Error::ZeroRho)));
        assert!(matches!(SuccState::new(&[], 1), Err(Error::NoKeys)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn sweep_matches_direct(raw in prop::collection::vec((0i64..60, 0i64..60), 1..24), rho in 0i64..7) {
            let pairs = pairs_from(raw);
            let got = sweep(&pairs, rho);
            for j in 1..=pairs.len() {
                prop_assert_eq!(got[j - 1], direct(&pairs, rho, j), "j = {}", j);
            }
        }

        #[test]
        fn sweep_matches_direct_tight(raw in prop::collection::vec((0i64..12, 0i64..12), 1..40), rho in 1i64..4) {
            let pairs = pairs_from(raw);
            let got = sweep(&pairs, rho);
            for j in 1..=pairs.len() {
                prop_assert_eq!(got[j - 1], direct(&pairs, rho, j), "j = {}", j);
            }
        }
    }
}
