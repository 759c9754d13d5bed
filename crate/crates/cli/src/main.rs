mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cooc::{InputMode, Variant};

#[derive(Parser, Debug)]
#[command(name = "cooc", version, about = "Build and query compact co-occurrence indexes")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Byte,
    Token,
}

impl From<ModeArg> for InputMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Byte => InputMode::Byte,
            ModeArg::Token => InputMode::Token,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Baseline,
    Bucketed,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Baseline => Variant::Baseline,
            VariantArg::Bucketed => Variant::Bucketed,
        }
    }
}

/// Where the string and the query set come from.
#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Input file: raw bytes in byte mode, whitespace-separated tokens in token mode.
    #[arg(long)]
    input: Option<PathBuf>,

    /// Query members, whitespace-separated.
    #[arg(long, conflicts_with = "query_file")]
    query: Option<String>,

    /// Query members, one per line.
    #[arg(long)]
    query_file: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = ModeArg::Byte)]
    mode: ModeArg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an index and write it to disk.
    Build {
        #[command(flatten)]
        input: InputArgs,
        /// Output index path.
        #[arg(long)]
        index: PathBuf,
        /// Seed for the build-time hash tables.
        #[arg(long, default_value_t = cooc::scanner::DEFAULT_SEED)]
        seed: u64,
    },
    /// Answer co and lmco for each window length.
    Query {
        #[arg(long)]
        index: PathBuf,
        #[arg(long, value_enum, default_value_t = VariantArg::Bucketed)]
        variant: VariantArg,
        /// Window lengths.
        #[arg(required = true)]
        w: Vec<u64>,
    },
    /// Dump co(w) for every w in 1..=n.
    Table {
        #[arg(long, required_unless_present = "oracle")]
        index: Option<PathBuf>,
        /// Also emit lmco(w).
        #[arg(long)]
        lmco: bool,
        /// Compute the table by brute force from --input/--query instead.
        #[arg(long, hide = true)]
        oracle: bool,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Generate an adversarial corpus and a JSON sidecar describing it.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
        /// Token file to write; the sidecar goes next to it with a `.json` suffix.
        #[arg(long, short, global = true)]
        output: Option<PathBuf>,
    },
    /// Print size statistics for an index, or for the index of an input.
    Stats {
        #[arg(long)]
        index: Option<PathBuf>,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Run the benchmark suite.
    Bench {
        /// Random-string sizes.
        #[arg(long, value_delimiter = ',', default_value = "100000,200000,400000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        alphabet: usize,
        #[arg(long, default_value_t = 3)]
        q: usize,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 1000)]
        queries: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Run rows concurrently (timings become unreliable).
        #[arg(long)]
        parallel: bool,
        /// Also benchmark --input with --query.
        #[command(flatten)]
        input: InputArgs,
        /// Write the json-lines report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum GenFamily {
    /// A single increment gadget G_i.
    Increment {
        #[arg(long)]
        u: u64,
        #[arg(long)]
        i: u64,
    },
    /// c_1 copies of G_{e_1}, c_2 copies of G_{e_2}, ...
    Concat {
        #[arg(long)]
        u: u64,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        e: Vec<u64>,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        c: Vec<u64>,
    },
    /// Instance whose lmco answers predecessor queries on X.
    Pred {
        #[arg(long)]
        u: u64,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        x: Vec<u64>,
    },
    /// Set-encoding blocks over k query symbols.
    Set {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        alpha: u64,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        t: Vec<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build { input, index, seed } => commands::build(&input, &index, seed, cli.format),
        Command::Query { index, variant, w } => commands::query(&index, variant.into(), &w, cli.format),
        Command::Table {
            index,
            lmco,
            oracle,
            input,
        } => commands::table(index.as_deref(), lmco, oracle, &input, cli.format),
        Command::Gen { family, output } => commands::gen(&family, output.as_deref(), cli.format),
        Command::Stats { index, input } => commands::stats(index.as_deref(), &input, cli.format),
        Command::Bench {
            sizes,
            alphabet,
            q,
            reps,
            queries,
            seed,
            parallel,
            input,
            report,
        } => {
            let config = cooc::bench::BenchConfig {
                reps,
                queries,
                seed,
                parallel,
                ..Default::default()
            };
            commands::bench(&sizes, alphabet, q, &config, &input, report.as_deref(), cli.format)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cooc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
