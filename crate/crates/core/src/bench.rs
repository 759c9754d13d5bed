//! Benchmark harness: build time, index size, query latency, and the ratio
//! `d / sqrt(n q)` over random and adversarial corpora.
//!
//! Timings use the monotonic clock; the first build of each row is a discarded warmup
//! and the median of the remaining repetitions is reported. Sizes are the index's own
//! logical word count, not allocator statistics.

use std::hint::black_box;
use std::time::{Duration, Instant};

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::gadgets::{render_concat, GadgetConcatSpec};
use crate::index::{CooccurrenceIndex, IndexOptions};
use crate::predecessor::Variant;
use crate::text::TokenId;

/// One input to benchmark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CorpusSpec {
    /// `n` symbols drawn from `alphabet` symbols with Zipf exponent `skew`
    /// (0 is uniform). The query set is the `q` most likely symbols.
    Random {
        n: usize,
        alphabet: usize,
        q: usize,
        skew: f64,
    },
    Concat(GadgetConcatSpec),
    /// Caller-supplied tokens, e.g. a file.
    Tokens {
        name: String,
        tokens: Vec<TokenId>,
        query: Vec<TokenId>,
    },
}

impl CorpusSpec {
    pub fn label(&self) -> String {
        match self {
            CorpusSpec::Random { n, alphabet, q, skew } => format!("random(n={n},sigma={alphabet},q={q},skew={skew})"),
            CorpusSpec::Concat(s) => format!("concat(u={},m={},C={})", s.u, s.m(), s.gadget_count()),
            CorpusSpec::Tokens { name, .. } => name.clone(),
        }
    }

    fn materialize(&self, rng: &mut ChaCha8Rng) -> Result<(Vec<TokenId>, Vec<TokenId>), String> {
        match self {
            CorpusSpec::Random { n, alphabet, q, skew } => {
                if *alphabet < *q || *q < 2 {
                    return Err(format!("need 2 <= q <= alphabet, got q={q}, alphabet={alphabet}"));
                }
                let weights: Vec<f64> = (1..=*alphabet).map(|r| (r as f64).powf(-skew)).collect();
                let dist = WeightedIndex::new(&weights).map_err(|e| e.to_string())?;
                let tokens = (0..*n).map(|_| dist.sample(rng) as TokenId).collect();
                Ok((tokens, (0..*q as TokenId).collect()))
            }
            CorpusSpec::Concat(spec) => {
                let r = render_concat(spec).map_err(|e| e.to_string())?;
                Ok((r.tokens, r.query))
            }
            CorpusSpec::Tokens { tokens, query, .. } => Ok((tokens.clone(), query.clone())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    /// Timed builds per row, after one warmup.
    pub reps: usize,
    /// Random `w` values timed per query kind.
    pub queries: usize,
    pub seed: u64,
    pub variants: Vec<Variant>,
    /// Run rows on separate threads. Timings are then unreliable.
    pub parallel: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            reps: 5,
            queries: 1000,
            seed: 1,
            variants: vec![Variant::Baseline, Variant::Bucketed],
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub corpus: String,
    pub variant: Option<Variant>,
    pub n: u64,
    pub q: u64,
    pub mu: u64,
    pub d: u64,
    pub sqrt_nq: f64,
    pub d_over_sqrt_nq: f64,
    pub build_ns: u64,
    pub index_bytes: u64,
    pub co_median_ns: u64,
    pub co_p99_ns: u64,
    pub lmco_median_ns: u64,
    pub lmco_p99_ns: u64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub rows: usize,
    pub failed_rows: usize,
    pub max_d_over_sqrt_nq: f64,
    pub max_ratio_corpus: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub summary: BenchSummary,
}

impl BenchReport {
    fn from_rows(rows: Vec<BenchRow>) -> Self {
        let mut summary = BenchSummary {
            rows: rows.len(),
            failed_rows: rows.iter().filter(|r| r.error.is_some()).count(),
            ..Default::default()
        };
        for r in rows.iter().filter(|r| r.error.is_none()) {
            if r.d_over_sqrt_nq > summary.max_d_over_sqrt_nq || summary.max_ratio_corpus.is_none() {
                summary.max_d_over_sqrt_nq = r.d_over_sqrt_nq;
                summary.max_ratio_corpus = Some(r.corpus.clone());
            }
        }
        BenchReport { rows, summary }
    }

    /// One JSON object per row, then the summary.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&serde_json::to_string(r).expect("rows serialize"));
            out.push('\n');
        }
        out.push_str(&serde_json::to_string(&self.summary).expect("summary serializes"));
        out.push('\n');
        out
    }

    /// `build_ns(2n) / build_ns(n)` for every pair of successful rows that share a
    /// corpus shape and variant and differ only by doubling `n`.
    pub fn doubling_ratios(&self) -> Vec<(u64, f64)> {
        let shape = |r: &BenchRow| r.corpus.split_once(',').map(|(_, rest)| rest.to_owned());
        let ok: Vec<&BenchRow> = self.rows.iter().filter(|r| r.error.is_none() && r.build_ns > 0).collect();
        let mut out = Vec::new();
        for a in &ok {
            for b in &ok {
                if b.n == 2 * a.n && a.variant == b.variant && shape(a).is_some() && shape(a) == shape(b) {
                    out.push((a.n, b.build_ns as f64 / a.build_ns as f64));
                }
            }
        }
        out
    }
}

fn median(v: &mut [u64]) -> u64 {
    if v.is_empty() {
        return 0;
    }
    v.sort_unstable();
    v[v.len() / 2]
}

fn percentile(v: &mut [u64], p: f64) -> u64 {
    if v.is_empty() {
        return 0;
    }
    v.sort_unstable();
    let i = ((v.len() as f64 * p).ceil() as usize).clamp(1, v.len()) - 1;
    v[i]
}

fn nanos(d: Duration) -> u64 {
    d.as_nanos().min(u64::MAX as u128) as u64
}

fn time_queries(rng: &mut ChaCha8Rng, n: u64, count: usize, f: impl Fn(u64) -> u64) -> (u64, u64) {
    if n == 0 || count == 0 {
        return (0, 0);
    }
    let mut samples: Vec<u64> = (0..count)
        .map(|_| {
            let w = rng.gen_range(0..=n);
            let t = Instant::now();
            black_box(f(black_box(w)));
            nanos(t.elapsed())
        })
        .collect();
    (median(&mut samples), percentile(&mut samples, 0.99))
}

fn run_row(spec: &CorpusSpec, variant: Variant, config: &BenchConfig, row_seed: u64) -> BenchRow {
    let mut rng = ChaCha8Rng::seed_from_u64(row_seed);
    let mut row = BenchRow {
        corpus: spec.label(),
        variant: Some(variant),
        ..Default::default()
    };
    let (tokens, query) = match spec.materialize(&mut rng) {
        Ok(v) => v,
        Err(e) => {
            row.error = Some(e);
            return row;
        }
    };
    let options = IndexOptions {
        seed: config.seed,
        variant,
    };
    let mut build_times = Vec::with_capacity(config.reps);
    let mut index = None;
    for rep in 0..=config.reps.max(1) {
        let t = Instant::now();
        match CooccurrenceIndex::build(&tokens, &query, options) {
            Ok(idx) => {
                if rep > 0 {
                    build_times.push(nanos(t.elapsed()));
                }
                index = Some(idx);
            }
            Err(e) => {
                row.error = Some(e.to_string());
                return row;
            }
        }
    }
    let index = index.expect("at least one build ran");
    row.n = index.n();
    row.q = index.q();
    row.mu = index.mu();
    row.d = index.d() as u64;
    row.sqrt_nq = ((row.n * row.q) as f64).sqrt();
    row.d_over_sqrt_nq = if row.sqrt_nq > 0.0 { row.d as f64 / row.sqrt_nq } else { 0.0 };
    row.build_ns = median(&mut build_times);
    row.index_bytes = 8 * index.words() as u64;
    (row.co_median_ns, row.co_p99_ns) = time_queries(&mut rng, row.n, config.queries, |w| index.co(w));
    (row.lmco_median_ns, row.lmco_p99_ns) = time_queries(&mut rng, row.n, config.queries, |w| index.lmco(w));
    if row.n == 0 {
        row.build_ns = 0;
        row.index_bytes = 0;
    }
    row
}

/// Runs every corpus under every configured variant. Given the same seed, everything
/// except the timing columns is reproducible.
pub fn run_suite(corpora: &[CorpusSpec], config: &BenchConfig) -> BenchReport {
    let jobs: Vec<(usize, &CorpusSpec, Variant)> = corpora
        .iter()
        .enumerate()
        .flat_map(|(i, c)| config.variants.iter().map(move |&v| (i, c, v)))
        .collect();
    let row_seed = |i: usize| config.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i as u64);
    let rows = if config.parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = jobs
                .iter()
                .map(|&(i, c, v)| s.spawn(move || run_row(c, v, config, row_seed(i))))
                .collect();
            handles.into_iter().map(|h| h.join().expect("bench row panicked")).collect()
        })
    } else {
        jobs.iter().map(|&(i, c, v)| run_row(c, v, config, row_seed(i))).collect()
    };
    BenchReport::from_rows(rows)
}

/// Default suite: uniform and skewed random strings at the given sizes plus one
/// concatenation gadget.
pub fn default_corpora(sizes: &[usize], alphabet: usize, q: usize) -> Vec<CorpusSpec> {
    let mut out = Vec::new();
    for &skew in &[0.0, 1.0] {
        for &n in sizes {
            out.push(CorpusSpec::Random { n, alphabet, q, skew });
        }
    }
    out.push(CorpusSpec::Concat(GadgetConcatSpec {
        u: 1000,
        e: (0..100).map(|i| 10 + 9 * i).collect(),
        c: vec![10; 100],
    }));
    out
}
