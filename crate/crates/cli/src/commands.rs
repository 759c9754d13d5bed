use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use cooc::bench::{default_corpora, run_suite, BenchConfig, CorpusSpec};
use cooc::gadgets::{
    GadgetConcatSpec, GadgetFamily, IncrementGadgetSpec, PredecessorInstanceSpec, SetEncodingSpec,
};
use cooc::oracle::oracle_lmco;
use cooc::{CooccurrenceIndex, Corpus, IndexOptions, InputMode, QueryProfile, TokenId, Variant};
use serde_json::json;

use crate::error::CliError;
use crate::{Format, GenFamily, InputArgs};

type Result<T> = std::result::Result<T, CliError>;

fn stdout_err(e: io::Error) -> CliError {
    CliError::io("<stdout>", e)
}

struct Loaded {
    corpus: Corpus,
    query: Vec<TokenId>,
}

fn read_query_symbols(args: &InputArgs) -> Result<Vec<String>> {
    let symbols: Vec<String> = match (&args.query, &args.query_file) {
        (Some(inline), _) => inline.split_whitespace().map(str::to_owned).collect(),
        (None, Some(path)) => fs::read_to_string(path)
            .map_err(|e| CliError::io(path, e))?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_owned)
            .collect(),
        (None, None) => return Err(CliError::Usage("one of --query or --query-file is required".into())),
    };
    Ok(symbols)
}

fn load_input(args: &InputArgs) -> Result<Loaded> {
    let path = args
        .input
        .as_ref()
        .ok_or_else(|| CliError::Usage("--input is required".into()))?;
    let symbols = read_query_symbols(args)?;
    let raw = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let mode: InputMode = args.mode.into();
    let mut corpus = Corpus::parse(&raw, mode)
        .map_err(|e| CliError::io(path, io::Error::new(io::ErrorKind::InvalidData, e)))?;
    let mut query = Vec::with_capacity(symbols.len());
    for s in &symbols {
        match corpus.resolve(s) {
            Some(id) => query.push(id),
            None => {
                return Err(CliError::InvalidQuery(format!(
                    "{s:?} is not a single byte (use --mode token for multi-byte symbols)"
                )))
            }
        }
    }
    QueryProfile::new(query.iter().copied()).map_err(|e| CliError::InvalidQuery(e.to_string()))?;
    Ok(Loaded { corpus, query })
}

fn load_index(path: &Path, variant: Variant) -> Result<CooccurrenceIndex> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    CooccurrenceIndex::from_bytes_with(&bytes, variant).map_err(|source| CliError::CorruptIndex {
        path: path.to_owned(),
        source,
    })
}

fn sqrt_nq(idx: &CooccurrenceIndex) -> f64 {
    ((idx.n() * idx.q()) as f64).sqrt()
}

pub fn build(args: &InputArgs, index_path: &Path, seed: u64, format: Format) -> Result<()> {
    let loaded = load_input(args)?;
    let start = Instant::now();
    let options = IndexOptions {
        seed,
        ..Default::default()
    };
    let idx = CooccurrenceIndex::build(loaded.corpus.tokens(), &loaded.query, options)
        .map_err(|e| CliError::InvalidQuery(e.to_string()))?;
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    fs::write(index_path, idx.to_bytes()).map_err(|e| CliError::io(index_path, e))?;

    let mut out = io::stdout().lock();
    match format {
        Format::Text => writeln!(
            out,
            "n={} q={} mu={} d={} sqrt_nq={:.3} build_ms={:.3} seed={} index={}",
            idx.n(),
            idx.q(),
            idx.mu(),
            idx.d(),
            sqrt_nq(&idx),
            build_ms,
            seed,
            index_path.display()
        ),
        Format::Jsonl => writeln!(
            out,
            "{}",
            json!({
                "n": idx.n(), "q": idx.q(), "mu": idx.mu(), "d": idx.d(),
                "sqrt_nq": sqrt_nq(&idx), "build_ms": build_ms, "seed": seed,
                "index": index_path.display().to_string(),
            })
        ),
    }
    .map_err(stdout_err)
}

pub fn query(index_path: &Path, variant: Variant, ws: &[u64], format: Format) -> Result<()> {
    let idx = load_index(index_path, variant)?;
    let mut out = BufWriter::new(io::stdout().lock());
    for &w in ws {
        let (co, lmco) = (idx.co(w), idx.lmco(w));
        match format {
            Format::Text => writeln!(out, "w={w} co={co} lmco={lmco}"),
            Format::Jsonl => writeln!(out, "{}", json!({ "w": w, "co": co, "lmco": lmco })),
        }
        .map_err(stdout_err)?;
    }
    out.flush().map_err(stdout_err)
}

pub fn table(index_path: Option<&Path>, with_lmco: bool, oracle: bool, args: &InputArgs, format: Format) -> Result<()> {
    let (co, lmco) = if oracle {
        let loaded = load_input(args)?;
        let r = oracle_lmco(loaded.corpus.tokens(), &loaded.query);
        (r.co_table[1..].to_vec(), r.lmco_table[1..].to_vec())
    } else {
        let path = index_path.ok_or_else(|| CliError::Usage("--index is required".into()))?;
        let idx = load_index(path, Variant::default())?;
        (idx.full_table(), if with_lmco { idx.lmco_table() } else { Vec::new() })
    };
    let mut out = BufWriter::new(io::stdout().lock());
    for (i, &c) in co.iter().enumerate() {
        let w = i + 1;
        match (format, with_lmco) {
            (Format::Text, false) => writeln!(out, "{w}\t{c}"),
            (Format::Text, true) => writeln!(out, "{w}\t{c}\t{}", lmco[i]),
            (Format::Jsonl, false) => writeln!(out, "{}", json!({ "w": w, "co": c })),
            (Format::Jsonl, true) => writeln!(out, "{}", json!({ "w": w, "co": c, "lmco": lmco[i] })),
        }
        .map_err(stdout_err)?;
    }
    out.flush().map_err(stdout_err)
}

fn family_of(g: &GenFamily) -> GadgetFamily {
    match g.clone() {
        GenFamily::Increment { u, i } => GadgetFamily::Increment(IncrementGadgetSpec { u, i }),
        GenFamily::Concat { u, e, c } => GadgetFamily::Concat(GadgetConcatSpec { u, e, c }),
        GenFamily::Pred { u, x } => GadgetFamily::Predecessor(PredecessorInstanceSpec { u, x }),
        GenFamily::Set { k, alpha, t } => GadgetFamily::Set(SetEncodingSpec { k, alpha, t }),
    }
}

/// `corpus.txt` -> `corpus.txt.json`
pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn gen(g: &GenFamily, output: Option<&Path>, format: Format) -> Result<()> {
    let family = family_of(g);
    let rendered = family.render().map_err(|e| CliError::Usage(e.to_string()))?;
    let text = rendered.to_text();
    let sidecar = json!({
        "spec": family,
        "n": rendered.len(),
        "mode": "token",
        "query": rendered.query_words(),
    });
    let mut out = io::stdout().lock();
    match output {
        Some(path) => {
            fs::write(path, format!("{text}\n")).map_err(|e| CliError::io(path, e))?;
            let side = sidecar_path(path);
            let body = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
            fs::write(&side, body).map_err(|e| CliError::io(&side, e))?;
            match format {
                Format::Text => writeln!(
                    out,
                    "family={} n={} query={} output={} sidecar={}",
                    family.name(),
                    rendered.len(),
                    rendered.query_words().join(","),
                    path.display(),
                    side.display()
                ),
                Format::Jsonl => writeln!(out, "{sidecar}"),
            }
        }
        None => writeln!(out, "{text}"),
    }
    .map_err(stdout_err)
}

pub fn stats(index_path: Option<&Path>, args: &InputArgs, format: Format) -> Result<()> {
    let idx = match index_path {
        Some(p) => load_index(p, Variant::default())?,
        None => {
            let loaded = load_input(args)?;
            CooccurrenceIndex::build(loaded.corpus.tokens(), &loaded.query, IndexOptions::default())
                .map_err(|e| CliError::InvalidQuery(e.to_string()))?
        }
    };
    let root = sqrt_nq(&idx);
    let ratio = if root > 0.0 { idx.d() as f64 / root } else { 0.0 };
    let r1 = idx.r1();
    let mut out = io::stdout().lock();
    match format {
        Format::Text => writeln!(
            out,
            "n={} q={} mu={} d={} r1={} sqrt_nq={root:.3} d_over_sqrt_nq={ratio:.4} words={} bytes={}",
            idx.n(),
            idx.q(),
            idx.mu(),
            idx.d(),
            r1.map_or("none".to_owned(), |r| r.to_string()),
            idx.words(),
            8 * idx.words()
        ),
        Format::Jsonl => writeln!(
            out,
            "{}",
            json!({
                "n": idx.n(), "q": idx.q(), "mu": idx.mu(), "d": idx.d(), "r1": r1,
                "sqrt_nq": root, "d_over_sqrt_nq": ratio,
                "words": idx.words(), "bytes": 8 * idx.words(),
            })
        ),
    }
    .map_err(stdout_err)
}

pub fn bench(
    sizes: &[usize],
    alphabet: usize,
    q: usize,
    config: &BenchConfig,
    args: &InputArgs,
    report_path: Option<&Path>,
    format: Format,
) -> Result<()> {
    let mut corpora = default_corpora(sizes, alphabet, q);
    if let Some(input) = &args.input {
        let loaded = load_input(args)?;
        corpora.push(CorpusSpec::Tokens {
            name: input.display().to_string(),
            tokens: loaded.corpus.tokens().to_vec(),
            query: loaded.query,
        });
    }
    let report = run_suite(&corpora, config);
    let jsonl = report.to_jsonl();
    if let Some(path) = report_path {
        fs::write(path, &jsonl).map_err(|e| CliError::io(path, e))?;
    }
    let mut out = BufWriter::new(io::stdout().lock());
    match format {
        Format::Jsonl if report_path.is_none() => write!(out, "{jsonl}"),
        _ => {
            writeln!(
                out,
                "{:<44} {:>8} {:>9} {:>3} {:>8} {:>6} {:>8} {:>11} {:>10} {:>8} {:>8}",
                "corpus", "variant", "n", "q", "mu", "d", "d/√nq", "build_ms", "bytes", "co_ns", "lmco_ns"
            )
            .map_err(stdout_err)?;
            for r in &report.rows {
                if let Some(e) = &r.error {
                    writeln!(out, "{:<44} error: {e}", r.corpus).map_err(stdout_err)?;
                    continue;
                }
                writeln!(
                    out,
                    "{:<44} {:>8} {:>9} {:>3} {:>8} {:>6} {:>8.4} {:>11.3} {:>10} {:>8} {:>8}",
                    r.corpus,
                    r.variant.map_or("-", |v| if v == Variant::Baseline { "baseline" } else { "bucketed" }),
                    r.n,
                    r.q,
                    r.mu,
                    r.d,
                    r.d_over_sqrt_nq,
                    r.build_ns as f64 / 1e6,
                    r.index_bytes,
                    r.co_median_ns,
                    r.lmco_median_ns
                )
                .map_err(stdout_err)?;
            }
            writeln!(
                out,
                "rows={} failed={} max_d_over_sqrt_nq={:.4}",
                report.summary.rows, report.summary.failed_rows, report.summary.max_d_over_sqrt_nq
            )
        }
    }
    .map_err(stdout_err)?;
    out.flush().map_err(stdout_err)
}
