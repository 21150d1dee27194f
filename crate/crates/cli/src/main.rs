mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mathcrawl_core::domains::SortBy;
use mathcrawl_core::OutputFormat;

/// Extract, filter and deduplicate mathematical text from web archives.
#[derive(Debug, Parser)]
#[command(name = "mathcrawl", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct GlobalOpts {
    /// Pipeline configuration file (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Run seed; overrides the configured one.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, value_name = "N")]
    pub workers: Option<usize>,
    /// Output directory for `run`, model file for the training commands,
    /// report file elsewhere.
    #[arg(long, short = 'o', global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Stop after this many HTML records.
    #[arg(long, global = true, value_name = "N")]
    pub limit: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full pipeline over the configured shards.
    Run,
    /// Extract one HTML file and print the text.
    Extract(ExtractArgs),
    /// Train the MathScore classifier from WARC shards.
    TrainMathscore(TrainMathscoreArgs),
    /// Train a Kneser-Ney language model and write it as ARPA.
    TrainLm(TrainLmArgs),
    /// Train a language identifier from one text file per language.
    TrainLangid(TrainLangidArgs),
    /// Cluster fingerprint sidecars and report near-duplicates.
    Dedup(DedupArgs),
    /// Tabulate output records by registrable domain.
    ReportDomains(ReportArgs),
    /// Show the longest documents and the most common domains.
    Inspect(InspectArgs),
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// HTML file to extract.
    pub html: PathBuf,
    /// Pin the output format (plain or markdown) instead of drawing it.
    #[arg(long)]
    pub format: Option<OutputFormat>,
    /// URL used for the per-document seed; defaults to the file path.
    #[arg(long)]
    pub url: Option<String>,
    /// Print the whole extraction, spans included, as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifierArgs {
    #[arg(long, default_value_t = 5)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.5)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = 21)]
    pub hash_bits: u32,
    /// Word n-gram orders to hash, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub ngram_orders: Vec<u32>,
}

#[derive(Debug, Args)]
pub struct TrainMathscoreArgs {
    /// WARC shards to extract training pages from.
    #[arg(required = true)]
    pub shards: Vec<PathBuf>,
    #[command(flatten)]
    pub classifier: ClassifierArgs,
}

#[derive(Debug, Args)]
pub struct TrainLmArgs {
    /// Plain-text training files, one sentence per line.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, default_value_t = 5)]
    pub order: usize,
    /// Map words seen once to <unk> before counting.
    #[arg(long)]
    pub unk_hapax: bool,
}

#[derive(Debug, Args)]
pub struct TrainLangidArgs {
    /// A language code and its training file, as CODE=PATH. Repeatable.
    #[arg(long = "lang", value_name = "CODE=PATH", required = true, value_parser = parse_lang)]
    pub langs: Vec<(String, PathBuf)>,
    #[command(flatten)]
    pub classifier: ClassifierArgs,
}

fn parse_lang(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((code, path)) if !code.is_empty() && !path.is_empty() => Ok((code.to_owned(), PathBuf::from(path))),
        _ => Err(format!("expected CODE=PATH, got {s:?}")),
    }
}

#[derive(Debug, Args)]
pub struct DedupArgs {
    /// Fingerprint sidecar files. Earlier files win within a cluster.
    #[arg(required = true)]
    pub sidecars: Vec<PathBuf>,
    #[arg(long, default_value_t = mathcrawl_core::dedup::DEFAULT_MAX_DISTANCE)]
    pub max_distance: u32,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Output directory of a run, or a single records file.
    pub records: PathBuf,
    /// Rank by document count (docs) or character count (chars).
    #[arg(long, default_value = "docs")]
    pub by: SortBy,
    #[arg(long, default_value_t = 20)]
    pub top: usize,
    /// Write every domain as TSV instead of the table.
    #[arg(long)]
    pub tsv: bool,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    pub records: PathBuf,
    /// How many of the longest documents to show.
    #[arg(long, default_value_t = 5)]
    pub longest: usize,
    /// How many domains to list.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Characters of each long document to print.
    #[arg(long, default_value_t = 400)]
    pub preview: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MATHCRAWL_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let g = &cli.global;
    let result = match &cli.command {
        Command::Run => commands::run(g),
        Command::Extract(a) => commands::extract(g, a),
        Command::TrainMathscore(a) => commands::train_mathscore(g, a),
        Command::TrainLm(a) => commands::train_lm(g, a),
        Command::TrainLangid(a) => commands::train_langid(g, a),
        Command::Dedup(a) => commands::dedup(g, a),
        Command::ReportDomains(a) => commands::report_domains(g, a),
        Command::Inspect(a) => commands::inspect(g, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
