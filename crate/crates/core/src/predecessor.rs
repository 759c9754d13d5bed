//! Static predecessor search over the sorted key set of a [`DeltaEncoding`].
//!
//! [`DeltaEncoding`]: crate::delta::DeltaEncoding

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Binary search over the whole key array.
    Baseline,
    /// Keys split by their high bits; a rank-indexed bitmap finds the bucket and a
    /// binary search over at most `sqrt(n)` keys finishes the query.
    #[default]
    Bucketed,
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "baseline" => Ok(Variant::Baseline),
            "bucketed" => Ok(Variant::Bucketed),
            other => Err(format!("unknown predecessor variant {other:?}")),
        }
    }
}

/// Answer to a predecessor query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Predecessor {
    pub key: u64,
    /// Number of keys `<= x`; the key itself sits at `rank - 1`.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Buckets {
    shift: u32,
    /// One bit per high-bits bucket, set when the bucket holds a key.
    occupied: Vec<u64>,
    /// Occupied buckets before each bitmap word.
    word_rank: Vec<u32>,
    /// Offset of each occupied bucket in the key array, plus a final `d`.
    starts: Vec<u32>,
}

impl Buckets {
    fn build(keys: &[u64], n: u64) -> Self {
        let bits = 64 - n.max(1).leading_zeros();
        let high_bits = bits.div_ceil(2);
        let shift = bits - high_bits;
        let buckets = 1usize << high_bits;
        let mut occupied = vec![0u64; buckets.div_ceil(64)];
        let mut starts = Vec::new();
        let mut last = None;
        for (i, &k) in keys.iter().enumerate() {
            let b = (k >> shift) as usize;
            if last != Some(b) {
                occupied[b / 64] |= 1 << (b % 64);
                starts.push(i as u32);
                last = Some(b);
            }
        }
        starts.push(keys.len() as u32);
        let mut word_rank = Vec::with_capacity(occupied.len());
        let mut acc = 0u32;
        for w in &occupied {
            word_rank.push(acc);
            acc += w.count_ones();
        }
        Buckets {
            shift,
            occupied,
            word_rank,
            starts,
        }
    }

    /// Number of keys `<= x`, for `x` already clamped to the universe.
    fn rank(&self, keys: &[u64], x: u64) -> usize {
        let b = (x >> self.shift) as usize;
        let (word, bit) = (b / 64, b % 64);
        let below = self.occupied[word] & ((1u64 << bit) - 1);
        let r = (self.word_rank[word] + below.count_ones()) as usize;
        let lo = self.starts[r] as usize;
        if self.occupied[word] & (1 << bit) != 0 {
            let hi = self.starts[r + 1] as usize;
            lo + keys[lo..hi].partition_point(|&k| k <= x)
        } else {
            lo
        }
    }

    fn words(&self) -> usize {
        1 + self.occupied.len() + self.word_rank.len().div_ceil(2) + self.starts.len().div_ceil(2)
    }
}

/// Immutable predecessor structure over keys in `[2, n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredecessorMap {
    keys: Vec<u64>,
    n: u64,
    buckets: Option<Buckets>,
}

impl PredecessorMap {
    /// Builds over strictly increasing `keys`, each within `[2, n]`.
    pub fn build(keys: &[u64], n: u64, variant: Variant) -> Result<Self> {
        let bad = |reason: String| Error::InvalidKeys { bound: n, reason };
        if let Some(p) = keys.windows(2).find(|p| p[0] >= p[1]) {
            return Err(bad(format!("{} followed by {}", p[0], p[1])));
        }
        if let (Some(&lo), Some(&hi)) = (keys.first(), keys.last()) {
            if lo < 2 {
                return Err(bad(format!("key {lo} below 2")));
            }
            if hi > n {
                return Err(bad(format!("key {hi} above universe bound")));
            }
        }
        if keys.len() > u32::MAX as usize {
            return Err(bad("too many keys".into()));
        }
        let buckets = match variant {
            Variant::Baseline => None,
            Variant::Bucketed => Some(Buckets::build(keys, n)),
        };
        Ok(PredecessorMap {
            keys: keys.to_vec(),
            n,
            buckets,
        })
    }

    pub fn variant(&self) -> Variant {
        if self.buckets.is_some() {
            Variant::Bucketed
        } else {
            Variant::Baseline
        }
    }

    pub fn keys(&self) -> &[u64] {
        &self.keys
    }

    pub fn universe_bound(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Largest key `<= x`. Queries above `n` behave like `n`.
    pub fn pred(&self, x: u64) -> Option<Predecessor> {
        let first = *self.keys.first()?;
        if x < first {
            return None;
        }
        let x = x.min(self.n);
        let rank = match &self.buckets {
            Some(b) => b.rank(&self.keys, x),
            None => self.keys.partition_point(|&k| k <= x),
        };
        (rank > 0).then(|| Predecessor {
            key: self.keys[rank - 1],
            rank,
        })
    }

    /// Logical size in 64-bit words.
    pub fn words(&self) -> usize {
        2 + self.keys.len() + self.buckets.as_ref().map_or(0, Buckets::words)
    }
}
