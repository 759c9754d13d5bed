//! Generators for adversarial inputs whose difference encoding is known in advance.
//!
//! * Increment gadget `G_i`: `A`, `i - 2` fillers, `B`, then `u` fillers. A run of
//!   `c` copies of `G_e` sets `delta(e) = c` and touches nothing else in `[2, u]`.
//! * Predecessor instance: runs of increment gadgets chosen so that
//!   `lmco(x)` is the predecessor of `x` in a given set.
//! * Set encoding: blocks `R_j` of length `3k*alpha` over `k` query symbols, placing
//!   a `+1` in `delta` at each element of a set of even lengths.
//!
//! Every generator returns a [`Rendered`] instance carrying its own vocabulary and
//! query set. [`verify_claims`] checks a built index against what the construction
//! promises.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{CooccurrenceIndex, IndexOptions};
use crate::text::TokenId;

/// Reserved filler symbol, never a query member.
pub const FILLER: &str = "$";

const FILLER_ID: TokenId = 0;
const A_ID: TokenId = 1;
const B_ID: TokenId = 2;

/// A generated token sequence with names for its ids and the matching query set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub tokens: Vec<TokenId>,
    pub vocab: Vec<String>,
    pub query: Vec<TokenId>,
}

impl Rendered {
    fn increment_alphabet(tokens: Vec<TokenId>) -> Self {
        Rendered {
            tokens,
            vocab: vec![FILLER.into(), "A".into(), "B".into()],
            query: vec![A_ID, B_ID],
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn query_words(&self) -> Vec<&str> {
        self.query.iter().map(|&t| self.vocab[t as usize].as_str()).collect()
    }

    /// Whitespace-separated token text, one gadget symbol per token.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.tokens.len() * 2);
        for (i, &t) in self.tokens.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&self.vocab[t as usize]);
        }
        out
    }

    pub fn build_index(&self, options: IndexOptions) -> CooccurrenceIndex {
        CooccurrenceIndex::build(&self.tokens, &self.query, options).expect("gadget query sets have q >= 2")
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidGadget(msg.into())
}

fn check_sorted_distinct(values: &[u64], lo: u64, hi: u64, what: &str) -> Result<()> {
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid(format!("{what} must be strictly increasing")));
    }
    if let Some(v) = values.iter().find(|&&v| v < lo || v > hi) {
        return Err(invalid(format!("{what} element {v} outside [{lo}, {hi}]")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncrementGadgetSpec {
    pub u: u64,
    pub i: u64,
}

fn push_increment(out: &mut Vec<TokenId>, u: u64, i: u64) {
    out.push(A_ID);
    out.extend(std::iter::repeat_n(FILLER_ID, (i - 2) as usize));
    out.push(B_ID);
    out.extend(std::iter::repeat_n(FILLER_ID, u as usize));
}

/// `G_i` for universe bound `u`; length `i + u`.
pub fn render_increment(spec: &IncrementGadgetSpec) -> Result<Rendered> {
    if spec.i < 2 || spec.i > spec.u {
        return Err(invalid(format!("gadget parameter {} outside [2, {}]", spec.i, spec.u)));
    }
    let mut tokens = Vec::with_capacity((spec.i + spec.u) as usize);
    push_increment(&mut tokens, spec.u, spec.i);
    Ok(Rendered::increment_alphabet(tokens))
}

/// `c_1` copies of `G_{e_1}`, then `c_2` copies of `G_{e_2}`, and so on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetConcatSpec {
    pub u: u64,
    pub e: Vec<u64>,
    pub c: Vec<u64>,
}

impl GadgetConcatSpec {
    pub fn validate(&self) -> Result<()> {
        if self.e.len() != self.c.len() {
            return Err(invalid("E and c differ in length"));
        }
        check_sorted_distinct(&self.e, 2, self.u, "E")?;
        if self.c.contains(&0) {
            return Err(invalid("every count must be positive"));
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.e.len()
    }

    /// Total number of gadgets, `C`.
    pub fn gadget_count(&self) -> u64 {
        self.c.iter().sum()
    }
}

pub fn render_concat(spec: &GadgetConcatSpec) -> Result<Rendered> {
    spec.validate()?;
    let len: u64 = spec.e.iter().zip(&spec.c).map(|(e, c)| (e + spec.u) * c).sum();
    let mut tokens = Vec::with_capacity(len as usize);
    for (&e, &c) in spec.e.iter().zip(&spec.c) {
        for _ in 0..c {
            push_increment(&mut tokens, spec.u, e);
        }
    }
    Ok(Rendered::increment_alphabet(tokens))
}

/// A set `X` of keys in `[2, u]`, encoded so that `lmco(x)` is the predecessor of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredecessorInstanceSpec {
    pub u: u64,
    pub x: Vec<u64>,
}

impl PredecessorInstanceSpec {
    /// The equivalent concatenation: `x_1` copies of `G_{x_1}`, then `x_i - x_{i-1}`
    /// copies of `G_{x_i}`.
    pub fn as_concat(&self) -> Result<GadgetConcatSpec> {
        check_sorted_distinct(&self.x, 2, self.u, "X")?;
        let c = self
            .x
            .iter()
            .scan(0, |prev, &x| {
                let c = x - *prev;
                *prev = x;
                Some(c)
            })
            .collect();
        Ok(GadgetConcatSpec {
            u: self.u,
            e: self.x.clone(),
            c,
        })
    }

    /// Largest element of `X` that is `<= x`, or 0.
    pub fn predecessor(&self, x: u64) -> u64 {
        let i = self.x.partition_point(|&v| v <= x);
        if i == 0 {
            0
        } else {
            self.x[i - 1]
        }
    }
}

pub fn render_predecessor_instance(spec: &PredecessorInstanceSpec) -> Result<Rendered> {
    render_concat(&spec.as_concat()?)
}

/// A set `T` of even lengths in `{k+1, ..., k*alpha}` encoded over `k` query symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetEncodingSpec {
    pub k: u64,
    pub alpha: u64,
    pub t: Vec<u64>,
}

impl SetEncodingSpec {
    pub fn validate(&self) -> Result<()> {
        if self.k < 3 {
            return Err(invalid(format!("k = {} must be at least 3", self.k)));
        }
        if self.alpha < self.k {
            return Err(invalid(format!("alpha = {} must be at least k = {}", self.alpha, self.k)));
        }
        check_sorted_distinct(&self.t, self.k + 1, self.k * self.alpha, "T")?;
        if let Some(v) = self.t.iter().find(|&&v| v % 2 != 0) {
            return Err(invalid(format!("T element {v} is odd")));
        }
        Ok(())
    }

    /// The even lengths the encoding speaks about, `V`.
    pub fn universe(&self) -> impl Iterator<Item = u64> {
        let lo = self.k + 1;
        (lo + lo % 2..=self.k * self.alpha).step_by(2)
    }

    /// `T` padded to a multiple of `k - 1` with the smallest even values above `k*alpha`.
    pub fn padded(&self) -> Vec<u64> {
        let block = (self.k - 1) as usize;
        let mut out = self.t.clone();
        let missing = (block - out.len() % block) % block;
        let first = self.k * self.alpha + 1;
        let first_even = first + first % 2;
        out.extend((0..missing as u64).map(|i| first_even + 2 * i));
        out
    }

    /// `T` split into ascending blocks of `k - 1` elements.
    pub fn blocks(&self) -> Vec<Vec<u64>> {
        self.padded().chunks((self.k - 1) as usize).map(<[u64]>::to_vec).collect()
    }

    pub fn block_len(&self) -> u64 {
        3 * self.k * self.alpha
    }
}

/// Concatenation of one `R_j` per block. `R_j` starts with `C_1 ... C_k`, repeats
/// `C_i` at 1-based offset `i + e_i` for the block's `i`-th smallest element `e_i`,
/// and is filler elsewhere.
pub fn render_set_encoding(spec: &SetEncodingSpec) -> Result<Rendered> {
    spec.validate()?;
    let k = spec.k as usize;
    let block_len = spec.block_len() as usize;
    let blocks = spec.blocks();
    let mut tokens = vec![FILLER_ID; blocks.len() * block_len];
    for (j, block) in blocks.iter().enumerate() {
        let r = &mut tokens[j * block_len..(j + 1) * block_len];
        for (c, slot) in r.iter_mut().take(k).enumerate() {
            *slot = c as TokenId + 1;
        }
        for (i, &e) in block.iter().enumerate() {
            // 1-based symbol i+1 at 1-based offset (i+1) + e
            r[i + e as usize] = i as TokenId + 1;
        }
    }
    let mut vocab = vec![FILLER.to_owned()];
    vocab.extend((1..=k).map(|i| format!("C{i}")));
    Ok(Rendered {
        tokens,
        vocab,
        query: (1..=k as TokenId).collect(),
    })
}

/// A generator family with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum GadgetFamily {
    Increment(IncrementGadgetSpec),
    Concat(GadgetConcatSpec),
    Predecessor(PredecessorInstanceSpec),
    Set(SetEncodingSpec),
}

impl GadgetFamily {
    pub fn render(&self) -> Result<Rendered> {
        match self {
            GadgetFamily::Increment(s) => render_increment(s),
            GadgetFamily::Concat(s) => render_concat(s),
            GadgetFamily::Predecessor(s) => render_predecessor_instance(s),
            GadgetFamily::Set(s) => render_set_encoding(s),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GadgetFamily::Increment(_) => "increment",
            GadgetFamily::Concat(_) => "concat",
            GadgetFamily::Predecessor(_) => "predecessor",
            GadgetFamily::Set(_) => "set",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub checks: Vec<ClaimCheck>,
}

impl ClaimReport {
    fn record(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(ClaimCheck {
            name: name.to_owned(),
            passed,
            detail,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClaimCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ClaimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{mark} {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

fn first_mismatch(mut it: impl Iterator<Item = (u64, i64, i64)>) -> Option<(u64, i64, i64)> {
    it.find(|&(_, got, want)| got != want)
}

fn check_concat(report: &mut ClaimReport, spec: &GadgetConcatSpec, index: &CooccurrenceIndex) {
    let expected = |e: u64| spec.e.binary_search(&e).map_or(0, |i| spec.c[i] as i64);
    let miss = first_mismatch((2..=spec.u).map(|e| (e, index.delta(e), expected(e))));
    report.record(
        "delta-values",
        miss.is_none(),
        match miss {
            None => format!("delta(e_i) = c_i on E and 0 elsewhere in [2, {}]", spec.u),
            Some((e, got, want)) => format!("delta({e}) = {got}, expected {want}"),
        },
    );
    let (m, d) = (spec.m(), index.d());
    report.record("d-bounds", m <= d && d <= 8 * m, format!("m = {m}, d = {d}, 8m = {}", 8 * m));
}

/// Checks the properties a construction guarantees against an index built from it.
pub fn verify_claims(family: &GadgetFamily, index: &CooccurrenceIndex) -> ClaimReport {
    let mut report = ClaimReport::default();
    let n = index.n();
    match family {
        GadgetFamily::Increment(s) => {
            let ok = n == s.i + s.u;
            report.record("length", ok, format!("n = {n}, i + u = {}", s.i + s.u));
            let got = index.delta(s.i);
            report.record("delta-value", got == 1, format!("delta({}) = {got}", s.i));
        }
        GadgetFamily::Concat(s) => {
            check_concat(&mut report, s, index);
            let bound = 2 * s.u * s.gadget_count();
            report.record("length-bound", n <= bound, format!("n = {n}, 2uC = {bound}"));
        }
        GadgetFamily::Predecessor(s) => {
            match s.as_concat() {
                Ok(concat) => check_concat(&mut report, &concat, index),
                Err(e) => report.record("spec", false, e.to_string()),
            }
            let bound = 2 * s.u * s.u;
            report.record("length-bound", n <= bound, format!("n = {n}, 2u^2 = {bound}"));
            let miss = first_mismatch(
                (2..=s.u.min(n)).map(|x| (x, index.lmco(x) as i64, s.predecessor(x) as i64)),
            );
            report.record(
                "lmco-is-predecessor",
                miss.is_none(),
                match miss {
                    None => format!("lmco(x) = pred_X(x) for x in [2, {}]", s.u.min(n)),
                    Some((x, got, want)) => format!("lmco({x}) = {got}, predecessor is {want}"),
                },
            );
        }
        GadgetFamily::Set(s) => {
            let members: std::collections::BTreeSet<u64> = s.t.iter().copied().collect();
            let miss = first_mismatch(
                s.universe()
                    .map(|i| (i, index.delta(i), i64::from(members.contains(&i)))),
            );
            report.record(
                "membership",
                miss.is_none(),
                match miss {
                    None => format!("delta(i) = 1 exactly on T within V = even [{}, {}]", s.k + 1, s.k * s.alpha),
                    Some((i, got, want)) => format!("delta({i}) = {got}, expected {want}"),
                },
            );
            let expect_n = s.blocks().len() as u64 * s.block_len();
            report.record("length", n == expect_n, format!("n = {n}, blocks * 3k*alpha = {expect_n}"));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_lmco;

    fn text(r: &Rendered) -> String {
        r.to_text().replace(' ', "")
    }

    #[test]
    fn increment_gadgets() {
        let g = render_increment(&IncrementGadgetSpec { u: 5, i: 3 }).unwrap();
        assert_eq!(text(&g), "A$B$$$$$");
        let g = render_increment(&IncrementGadgetSpec { u: 5, i: 2 }).unwrap();
        assert_eq!(text(&g), "AB$$$$$");
        assert!(render_increment(&IncrementGadgetSpec { u: 3, i: 4 }).is_err());
        assert!(render_increment(&IncrementGadgetSpec { u: 3, i: 1 }).is_err());
    }

    #[test]
    fn two_copies_of_g3() {
        let spec = GadgetConcatSpec { u: 5, e: vec![3], c: vec![2] };
        let r = render_concat(&spec).unwrap();
        assert_eq!(text(&r), "A$B$$$$$A$B$$$$$");
        let idx = r.build_index(IndexOptions::default());
        assert_eq!(idx.delta(3), 2);
        assert!(verify_claims(&GadgetFamily::Concat(spec), &idx).passed());
    }

    #[test]
    fn concat_matches_oracle_differences() {
        let spec = GadgetConcatSpec { u: 6, e: vec![2, 5], c: vec![1, 3] };
        let r = render_concat(&spec).unwrap();
        let oracle = oracle_lmco(&r.tokens, &r.query);
        assert_eq!(oracle.delta(2), 1);
        assert_eq!(oracle.delta(5), 3);
        for e in [3, 4, 6] {
            assert_eq!(oracle.delta(e), 0);
        }
        assert!(r.len() as u64 <= 2 * 6 * 4);
        let report = verify_claims(&GadgetFamily::Concat(spec), &r.build_index(IndexOptions::default()));
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn concat_rejects_bad_specs() {
        let bad = [
            GadgetConcatSpec { u: 6, e: vec![5, 2], c: vec![1, 1] },
            GadgetConcatSpec { u: 6, e: vec![2, 7], c: vec![1, 1] },
            GadgetConcatSpec { u: 6, e: vec![2], c: vec![0] },
            GadgetConcatSpec { u: 6, e: vec![2], c: vec![1, 2] },
            GadgetConcatSpec { u: 6, e: vec![1], c: vec![1] },
        ];
        for spec in bad {
            assert!(render_concat(&spec).is_err(), "{spec:?}");
        }
        let empty = GadgetConcatSpec { u: 6, e: vec![], c: vec![] };
        assert!(render_concat(&empty).unwrap().is_empty());
    }

    #[test]
    fn predecessor_small() {
        let spec = PredecessorInstanceSpec { u: 4, x: vec![2, 4] };
        let r = render_predecessor_instance(&spec).unwrap();
        // G_2 G_2 G_4 G_4
        assert_eq!(text(&r), "AB$$$$AB$$$$A$$B$$$$A$$B$$$$");
        let idx = r.build_index(IndexOptions::default());
        assert_eq!(idx.lmco(2), 2);
        assert_eq!(idx.lmco(3), 2);
        assert_eq!(idx.lmco(4), 4);
        let oracle = oracle_lmco(&r.tokens, &r.query);
        assert_eq!((oracle.lmco(3), oracle.lmco(4)), (2, 4));
        assert!(verify_claims(&GadgetFamily::Predecessor(spec), &idx).passed());
    }

    #[test]
    fn predecessor_single_and_empty() {
        let r = render_predecessor_instance(&PredecessorInstanceSpec { u: 3, x: vec![2] }).unwrap();
        assert_eq!(r.build_index(IndexOptions::default()).lmco(2), 2);
        let r = render_predecessor_instance(&PredecessorInstanceSpec { u: 3, x: vec![] }).unwrap();
        assert!(r.is_empty());
        let idx = r.build_index(IndexOptions::default());
        assert!((0..5).all(|w| idx.lmco(w) == 0));
    }

    #[test]
    fn set_encoding_single_block() {
        let spec = SetEncodingSpec { k: 3, alpha: 4, t: vec![4, 8] };
        let r = render_set_encoding(&spec).unwrap();
        assert_eq!(r.len(), 36);
        assert_eq!(&r.tokens[..3], &[1, 2, 3]);
        // C1 at 1-based 1 + 4, C2 at 2 + 8
        assert_eq!(r.tokens[4], 1);
        assert_eq!(r.tokens[9], 2);
        assert_eq!(r.tokens.iter().filter(|&&t| t != FILLER_ID).count(), 5);
        let oracle = oracle_lmco(&r.tokens, &r.query);
        assert_eq!((oracle.delta(4), oracle.delta(8)), (1, 1));
        for i in [6, 10, 12] {
            assert_eq!(oracle.delta(i), 0);
        }
        let idx = r.build_index(IndexOptions::default());
        assert!(verify_claims(&GadgetFamily::Set(spec), &idx).passed());
    }

    #[test]
    fn set_encoding_edge_cases() {
        let empty = SetEncodingSpec { k: 3, alpha: 4, t: vec![] };
        let r = render_set_encoding(&empty).unwrap();
        assert!(r.is_empty());
        let idx = r.build_index(IndexOptions::default());
        assert!(verify_claims(&GadgetFamily::Set(empty), &idx).passed());

        assert!(render_set_encoding(&SetEncodingSpec { k: 3, alpha: 4, t: vec![5] }).is_err());
        assert!(render_set_encoding(&SetEncodingSpec { k: 3, alpha: 4, t: vec![14] }).is_err());
        assert!(render_set_encoding(&SetEncodingSpec { k: 3, alpha: 2, t: vec![] }).is_err());
        assert!(render_set_encoding(&SetEncodingSpec { k: 2, alpha: 4, t: vec![] }).is_err());
    }

    #[test]
    fn padding_uses_smallest_even_values_above_k_alpha() {
        let spec = SetEncodingSpec { k: 4, alpha: 5, t: vec![6] };
        assert_eq!(spec.padded(), vec![6, 22, 24]);
        let spec = SetEncodingSpec { k: 3, alpha: 5, t: vec![6, 8, 10] };
        assert_eq!(spec.blocks(), vec![vec![6, 8], vec![10, 16]]);
        let r = render_set_encoding(&spec).unwrap();
        let idx = r.build_index(IndexOptions::default());
        assert!(verify_claims(&GadgetFamily::Set(spec), &idx).passed());
    }

    #[test]
    fn universe_is_even_values() {
        let spec = SetEncodingSpec { k: 3, alpha: 4, t: vec![] };
        assert_eq!(spec.universe().collect::<Vec<_>>(), vec![4, 6, 8, 10, 12]);
        let spec = SetEncodingSpec { k: 4, alpha: 4, t: vec![] };
        assert_eq!(spec.universe().collect::<Vec<_>>(), vec![6, 8, 10, 12, 14, 16]);
    }

    #[test]
    fn verify_reports_failures() {
        let spec = GadgetConcatSpec { u: 6, e: vec![2, 5], c: vec![1, 3] };
        let other = render_concat(&GadgetConcatSpec { u: 6, e: vec![2, 5], c: vec![1, 2] }).unwrap();
        let report = verify_claims(&GadgetFamily::Concat(spec), &other.build_index(IndexOptions::default()));
        assert!(!report.passed());
        assert_eq!(report.failures().next().unwrap().name, "delta-values");
    }

    #[test]
    fn family_serializes_with_tag() {
        let fam = GadgetFamily::Set(SetEncodingSpec { k: 3, alpha: 4, t: vec![4, 8] });
        let json = serde_json::to_string(&fam).unwrap();
        assert!(json.contains("\"family\":\"set\""));
        assert_eq!(serde_json::from_str::<GadgetFamily>(&json).unwrap(), fam);
    }
}
