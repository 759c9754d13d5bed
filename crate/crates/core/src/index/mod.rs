//! The co-occurrence index: a difference encoding plus a predecessor structure over
//! its keys.
//!
//! With `F` the prefix sums of `delta` and `W` the prefix sums of `z * delta`, and
//! `p` the predecessor of `w` among the keys:
//!
//! * `lmco(w) = F[p]`
//! * `co(w) = (w + 1) * F[p] - W[p] - max(w - r1, 0)`
//!
//! Both cost one predecessor query.

mod format;

pub use format::{FORMAT_VERSION, MAGIC};

use crate::delta::{DeltaBuilder, DeltaEncoding};
use crate::error::{FormatError, Result};
use crate::predecessor::{PredecessorMap, Variant};
use crate::scanner::{QueryProfile, Scanner, DEFAULT_SEED};
use crate::text::{token_digest, TokenId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexOptions {
    /// Seeds the hash tables used during the build. Has no effect on answers.
    pub seed: u64,
    pub variant: Variant,
}

impl Default for IndexOptions {
    fn default() -> Self {
        IndexOptions {
            seed: DEFAULT_SEED,
            variant: Variant::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMeta {
    pub n: u64,
    pub q: u64,
    /// Number of minimal co-occurrences.
    pub mu: u64,
    /// SHA-256 of the token sequence the index was built from.
    pub digest: [u8; 32],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CooccurrenceIndex {
    enc: DeltaEncoding,
    pmap: PredecessorMap,
    meta: IndexMeta,
}

impl CooccurrenceIndex {
    /// Builds from raw query members; fails when fewer than two are distinct.
    pub fn build(tokens: &[TokenId], members: &[TokenId], options: IndexOptions) -> Result<Self> {
        let profile = QueryProfile::with_seed(members.iter().copied(), options.seed)?;
        Ok(Self::from_profile(tokens, &profile, options))
    }

    /// Single pass over `tokens`: scanner output feeds the delta builder directly.
    pub fn from_profile(tokens: &[TokenId], profile: &QueryProfile, options: IndexOptions) -> Self {
        let mut scanner = Scanner::new(profile);
        let mut builder = DeltaBuilder::with_seed(options.seed);
        for &t in tokens {
            if let Some(m) = scanner.push(t) {
                builder.push(m);
            }
        }
        let mu = builder.minimal_count();
        let enc = builder.finish(tokens.len() as u64);
        let meta = IndexMeta {
            n: enc.n,
            q: profile.q() as u64,
            mu,
            digest: token_digest(tokens),
        };
        Self::from_parts(enc, meta, options.variant).expect("builder emits valid keys")
    }

    /// Assembles an index from an encoding; validates the encoding first.
    pub fn from_parts(enc: DeltaEncoding, meta: IndexMeta, variant: Variant) -> Result<Self> {
        enc.check().map_err(FormatError::Inconsistent)?;
        if meta.n != enc.n {
            return Err(FormatError::Inconsistent("metadata length differs from encoding".into()).into());
        }
        let pmap = PredecessorMap::build(&enc.z, enc.n, variant)?;
        Ok(CooccurrenceIndex { enc, pmap, meta })
    }

    /// Same index with a different predecessor variant.
    pub fn with_variant(&self, variant: Variant) -> Self {
        let pmap = PredecessorMap::build(&self.enc.z, self.enc.n, variant).expect("keys already validated");
        CooccurrenceIndex {
            enc: self.enc.clone(),
            pmap,
            meta: self.meta.clone(),
        }
    }

    pub fn encoding(&self) -> &DeltaEncoding {
        &self.enc
    }

    pub fn meta(&self) -> &IndexMeta {
        &self.meta
    }

    pub fn variant(&self) -> Variant {
        self.pmap.variant()
    }

    pub fn n(&self) -> u64 {
        self.meta.n
    }

    pub fn q(&self) -> u64 {
        self.meta.q
    }

    pub fn mu(&self) -> u64 {
        self.meta.mu
    }

    pub fn d(&self) -> usize {
        self.enc.d()
    }

    pub fn r1(&self) -> Option<u64> {
        self.enc.r1
    }

    /// Whether `tokens` is the sequence this index was built from.
    pub fn matches_input(&self, tokens: &[TokenId]) -> bool {
        tokens.len() as u64 == self.meta.n && token_digest(tokens) == self.meta.digest
    }

    /// Number of left-minimal co-occurrences of length `w`.
    pub fn lmco(&self, w: u64) -> u64 {
        if w > self.meta.n {
            return 0;
        }
        match self.pmap.pred(w) {
            Some(p) => self.enc.f[p.rank - 1] as u64,
            None => 0,
        }
    }

    /// Number of length-`w` windows containing every query member.
    pub fn co(&self, w: u64) -> u64 {
        if w < 1 || w > self.meta.n {
            return 0;
        }
        let (Some(r1), Some(p)) = (self.enc.r1, self.pmap.pred(w)) else {
            return 0;
        };
        let j = p.rank - 1;
        let w = w as i64;
        let count = (w + 1) * self.enc.f[j] - self.enc.w[j] - (w - r1 as i64).max(0);
        debug_assert!(count >= 0);
        count as u64
    }

    /// `delta(w)`, zero off the key set.
    pub fn delta(&self, w: u64) -> i64 {
        match self.pmap.pred(w) {
            Some(p) if p.key == w => self.enc.delta[p.rank - 1],
            _ => 0,
        }
    }

    /// `co(1..=n)` in one sweep; entry `i` holds `co(i + 1)`.
    pub fn full_table(&self) -> Vec<u64> {
        self.sweep().map(|(_, co)| co).collect()
    }

    /// `lmco(1..=n)`; entry `i` holds `lmco(i + 1)`.
    pub fn lmco_table(&self) -> Vec<u64> {
        self.sweep().map(|(lmco, _)| lmco).collect()
    }

    /// Walks `w = 1..=n` keeping a running `lmco(w)` and running `sum lmco(2..=w)`.
    fn sweep(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        let r1 = self.enc.r1.map(|r| r as i64);
        let mut next = 0usize;
        let mut lmco = 0i64;
        let mut total = 0i64;
        (1..=self.meta.n).map(move |w| {
            if next < self.enc.z.len() && self.enc.z[next] == w {
                lmco += self.enc.delta[next];
                next += 1;
            }
            total += lmco;
            let co = match r1 {
                Some(r1) => total - (w as i64 - r1).max(0),
                None => 0,
            };
            (lmco as u64, co as u64)
        })
    }

    /// Logical resident size in 64-bit words.
    pub fn words(&self) -> usize {
        self.enc.words() + self.pmap.words() + 3 + 4
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn toks(s: &str) -> Vec<TokenId> {
        s.bytes().map(TokenId::from).collect()
    }

    fn example() -> CooccurrenceIndex {
        CooccurrenceIndex::build(&toks("----BC-ACCB--"), &toks("ABC"), IndexOptions::default()).unwrap()
    }

    #[test]
    fn worked_example_shape() {
        let idx = example();
        assert_eq!((idx.d(), idx.r1(), idx.n(), idx.q(), idx.mu()), (2, Some(8), 13, 3, 2));
    }

    #[test]
    fn worked_example_queries() {
        let idx = example();
        assert_eq!(idx.co(3), 0);
        assert_eq!(idx.co(4), 2);
        assert_eq!(idx.co(8), 6);
        assert_eq!(idx.co(10), 4);
        assert_eq!(idx.lmco(5), 2);
        assert_eq!(idx.lmco(3), 0);
        assert_eq!(idx.lmco(8), 0);
        assert_eq!(idx.lmco(1), 0);
    }

    #[test]
    fn worked_example_table() {
        // brute-force counts per window length
        assert_eq!(example().full_table(), vec![0, 0, 0, 2, 4, 6, 6, 6, 5, 4, 3, 2, 1]);
        assert_eq!(example().lmco_table(), vec![0, 0, 0, 2, 2, 2, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn out_of_range_lengths_are_zero() {
        let idx = example();
        for w in [0, 14, 15, 1_000_000_000, u64::MAX] {
            assert_eq!(idx.co(w), 0);
            assert_eq!(idx.lmco(w), 0);
        }
    }

    #[test]
    fn absent_member() {
        let idx = CooccurrenceIndex::build(&toks("AAAA"), &toks("AB"), IndexOptions::default()).unwrap();
        assert_eq!(idx.d(), 0);
        assert_eq!(idx.r1(), None);
        assert_eq!(idx.full_table(), vec![0; 4]);
        assert!((0..8).all(|w| idx.co(w) == 0 && idx.lmco(w) == 0));
    }

    #[test]
    fn two_letters() {
        let idx = CooccurrenceIndex::build(&toks("AB"), &toks("AB"), IndexOptions::default()).unwrap();
        assert_eq!(idx.full_table(), vec![0, 1]);
        assert_eq!(idx.co(2), 1);
    }

    #[test]
    fn empty_input() {
        let idx = CooccurrenceIndex::build(&[], &toks("AB"), IndexOptions::default()).unwrap();
        assert_eq!((idx.n(), idx.d()), (0, 0));
        assert!(idx.full_table().is_empty());
    }

    #[test]
    fn single_member_query_rejected() {
        assert!(matches!(
            CooccurrenceIndex::build(&toks("AB"), &toks("AAA"), IndexOptions::default()),
            Err(Error::InvalidQuery(1))
        ));
    }

    #[test]
    fn delta_lookup() {
        let idx = example();
        assert_eq!(idx.delta(4), 2);
        assert_eq!(idx.delta(7), -2);
        assert_eq!(idx.delta(5), 0);
        assert_eq!(idx.delta(0), 0);
    }

    #[test]
    fn digest_identifies_input() {
        let idx = example();
        assert!(idx.matches_input(&toks("----BC-ACCB--")));
        assert!(!idx.matches_input(&toks("----BC-ACCB-A")));
    }

    #[test]
    fn variants_answer_alike() {
        let idx = example();
        let base = idx.with_variant(Variant::Baseline);
        for w in 0..20 {
            assert_eq!(idx.co(w), base.co(w));
            assert_eq!(idx.lmco(w), base.lmco(w));
        }
    }
}
