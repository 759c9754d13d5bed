//! Sparse difference encoding of the left-minimal co-occurrence counts.
//!
//! Every minimal co-occurrence `[l_i, r_i]` adds `+1` at length `len(l_i, r_i)` and
//! `-1` at `len(l_i, r_{i+1})`, where `r_{mu+1} = n + 1`. Summing those contributions
//! per length gives `delta(w) = lmco(w) - lmco(w - 1)`; only lengths with a non-zero
//! sum are kept.

use std::collections::HashMap;

use ahash::RandomState;
use serde::{Deserialize, Serialize};

use crate::scanner::{MinimalCooccurrence, DEFAULT_SEED};

/// The non-zero entries of `delta` with their prefix sums.
///
/// `f[j]` is `lmco(z[j])` and `w[j]` is the running sum of `z[i] * delta[i]`, both
/// 0-based here.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DeltaEncoding {
    pub n: u64,
    pub z: Vec<u64>,
    pub delta: Vec<i64>,
    pub f: Vec<i64>,
    pub w: Vec<i64>,
    /// End of the first minimal co-occurrence; `None` when there is none.
    pub r1: Option<u64>,
}

impl DeltaEncoding {
    /// Builds the encoding from sorted `(key, delta)` entries, computing both prefix sums.
    pub fn from_sorted(n: u64, entries: &[(u64, i64)], r1: Option<u64>) -> Self {
        let mut enc = DeltaEncoding {
            n,
            r1,
            ..Default::default()
        };
        let (mut f, mut w) = (0i64, 0i64);
        for &(key, d) in entries {
            f += d;
            w += key as i64 * d;
            enc.z.push(key);
            enc.delta.push(d);
            enc.f.push(f);
            enc.w.push(w);
        }
        enc
    }

    /// `d`, the number of non-zero entries.
    pub fn d(&self) -> usize {
        self.z.len()
    }

    /// Checks the structural invariants: matching lengths, strictly increasing keys in
    /// `[2, n]`, non-zero deltas, non-negative `f`, and prefix sums that reproduce
    /// `f` and `w` from `delta`.
    pub fn check(&self) -> Result<(), String> {
        let d = self.z.len();
        if self.delta.len() != d || self.f.len() != d || self.w.len() != d {
            return Err("array lengths differ".into());
        }
        if self.z.windows(2).any(|p| p[0] >= p[1]) {
            return Err("keys not strictly increasing".into());
        }
        if let (Some(&lo), Some(&hi)) = (self.z.first(), self.z.last()) {
            if lo < 2 || hi > self.n {
                return Err(format!("keys outside [2, {}]", self.n));
            }
        }
        if self.r1.is_none() && d > 0 {
            return Err("entries present without a first minimal co-occurrence".into());
        }
        let (mut f, mut w) = (0i64, 0i64);
        for j in 0..d {
            if self.delta[j] == 0 {
                return Err(format!("zero delta at key {}", self.z[j]));
            }
            f += self.delta[j];
            w += self.z[j] as i64 * self.delta[j];
            if f != self.f[j] || w != self.w[j] {
                return Err(format!("prefix sums disagree at key {}", self.z[j]));
            }
            if f < 0 {
                return Err(format!("negative lmco at key {}", self.z[j]));
            }
        }
        Ok(())
    }

    /// Logical size in 64-bit words: four per entry plus the scalar fields.
    pub fn words(&self) -> usize {
        4 * self.z.len() + 2
    }
}

/// Accumulates contributions from a stream of minimal co-occurrences.
///
/// Only the previous minimal co-occurrence is retained, so memory stays `O(d)`.
#[derive(Debug, Clone)]
pub struct DeltaBuilder {
    counts: HashMap<u64, i64, RandomState>,
    prev: Option<MinimalCooccurrence>,
    r1: Option<u64>,
    mu: u64,
}

impl Default for DeltaBuilder {
    fn default() -> Self {
        Self::with_seed(DEFAULT_SEED)
    }
}

impl DeltaBuilder {
    pub fn with_seed(seed: u64) -> Self {
        DeltaBuilder {
            counts: HashMap::with_hasher(RandomState::with_seeds(!seed, seed, seed.rotate_right(23), seed ^ 0xa5a5)),
            prev: None,
            r1: None,
            mu: 0,
        }
    }

    fn add(&mut self, len: u64, v: i64) {
        *self.counts.entry(len).or_insert(0) += v;
    }

    /// Feeds the next minimal co-occurrence (in end order).
    pub fn push(&mut self, m: MinimalCooccurrence) {
        if let Some(p) = self.prev {
            self.add(p.len() as u64, 1);
            self.add((m.end - p.start + 1) as u64, -1);
        } else {
            self.r1 = Some(m.end as u64);
        }
        self.prev = Some(m);
        self.mu += 1;
    }

    /// Minimal co-occurrences fed so far, `mu`.
    pub fn minimal_count(&self) -> u64 {
        self.mu
    }

    /// Closes the stream for a string of length `n`.
    pub fn finish(mut self, n: u64) -> DeltaEncoding {
        if let Some(p) = self.prev {
            self.add(p.len() as u64, 1);
            // r_{mu+1} = n + 1; a key beyond n is dropped below.
            self.add(n + 2 - p.start as u64, -1);
        }
        let entries: Vec<(u64, i64)> = self
            .counts
            .into_iter()
            .filter(|&(k, v)| v != 0 && (2..=n).contains(&k))
            .collect();
        let sorted = sort_entries(entries, n);
        DeltaEncoding::from_sorted(n, &sorted, self.r1)
    }
}

/// Builds the encoding from an already materialized list of minimal co-occurrences.
pub fn build_delta(mins: &[MinimalCooccurrence], n: u64) -> DeltaEncoding {
    let mut b = DeltaBuilder::default();
    for &m in mins {
        b.push(m);
    }
    b.finish(n)
}

/// Which sorting routine orders the `delta` entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SortPath {
    Comparison,
    Radix,
}

/// Radix sort pays off once `d >= n / log2 n`; below that a comparison sort is `O(n)`.
pub fn select_sort_path(d: usize, n: u64) -> SortPath {
    if n < 4 {
        return SortPath::Comparison;
    }
    let threshold = n as f64 / (n as f64).log2();
    if d as f64 >= threshold {
        SortPath::Radix
    } else {
        SortPath::Comparison
    }
}

/// Sorts entries with distinct keys by key, choosing the path from `d` and `n`.
pub fn sort_entries(pairs: Vec<(u64, i64)>, n: u64) -> Vec<(u64, i64)> {
    let path = select_sort_path(pairs.len(), n);
    sort_entries_with(pairs, n, path)
}

pub fn sort_entries_with(mut pairs: Vec<(u64, i64)>, n: u64, path: SortPath) -> Vec<(u64, i64)> {
    match path {
        SortPath::Comparison => {
            pairs.sort_by_key(|&(k, _)| k);
            pairs
        }
        SortPath::Radix => radix_sort(pairs, n),
    }
}

/// Two-level bucket sort: high half of the bits first, then the low half inside each
/// bucket. Uses `O(sqrt n)` counters.
fn radix_sort(pairs: Vec<(u64, i64)>, n: u64) -> Vec<(u64, i64)> {
    if pairs.len() < 2 {
        return pairs;
    }
    let max_key = pairs.iter().map(|p| p.0).max().unwrap_or(0).max(n).max(1);
    let bits = 64 - max_key.leading_zeros();
    let low_bits = bits.div_ceil(2);
    let low_mask = (1u64 << low_bits) - 1;
    let high_buckets = 1usize << (bits - low_bits);
    let low_buckets = 1usize << low_bits;

    let mut by_high = vec![(0u64, 0i64); pairs.len()];
    let mut starts = vec![0usize; high_buckets + 1];
    for &(k, _) in &pairs {
        starts[(k >> low_bits) as usize + 1] += 1;
    }
    for b in 0..high_buckets {
        starts[b + 1] += starts[b];
    }
    let mut fill = starts.clone();
    for p in pairs {
        let b = (p.0 >> low_bits) as usize;
        by_high[fill[b]] = p;
        fill[b] += 1;
    }

    let mut out = vec![(0u64, 0i64); by_high.len()];
    let mut counts = vec![0usize; low_buckets + 1];
    for b in 0..high_buckets {
        let (lo, hi) = (starts[b], starts[b + 1]);
        if hi - lo < 2 {
            out[lo..hi].copy_from_slice(&by_high[lo..hi]);
            continue;
        }
        counts.iter_mut().for_each(|c| *c = 0);
        for &(k, _) in &by_high[lo..hi] {
            counts[(k & low_mask) as usize + 1] += 1;
        }
        for i in 0..low_buckets {
            counts[i + 1] += counts[i];
        }
        for &p in &by_high[lo..hi] {
            let slot = &mut counts[(p.0 & low_mask) as usize];
            out[lo + *slot] = p;
            *slot += 1;
        }
    }
    out
}
