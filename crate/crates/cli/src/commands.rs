use std::fs;
use std::io::{self, Write};
use std::path::Path;

use chrono::DateTime;
use mathcrawl_core::classifier::{build_mathscore_corpus, labeled_lines, train_with_report};
use mathcrawl_core::dedup::{dedup_corpus, load_sidecar, DedupEntry};
use mathcrawl_core::domains::{aggregate_domains, to_table, to_tsv, SortBy, SuffixList};
use mathcrawl_core::lm::{self, lm_sentences};
use mathcrawl_core::pipeline::{extract_shard, read_record_file, read_records};
use mathcrawl_core::warc::decode_bytes;
use mathcrawl_core::{
    Error, KeywordList, LabeledExample, LmConfig, OutputRecord, Pipeline, PipelineConfig, TrainConfig,
};

use crate::{
    ClassifierArgs, DedupArgs, ExtractArgs, GlobalOpts, InspectArgs, ReportArgs, TrainLangidArgs, TrainLmArgs,
    TrainMathscoreArgs,
};

/// A message and the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    /// Anything that goes wrong while reading configuration or models.
    fn setup(e: Error) -> Self {
        Self {
            code: 2,
            message: e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Open { .. } | Error::Io(_) => 3,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self {
            code: 3,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn load_config(g: &GlobalOpts) -> Result<Option<PipelineConfig>, Failure> {
    g.config.as_deref().map(PipelineConfig::load).transpose().map_err(Failure::setup)
}

fn require_output<'a>(g: &'a GlobalOpts, what: &str) -> Result<&'a Path, Failure> {
    g.output
        .as_deref()
        .ok_or_else(|| Failure::usage(format!("{what} needs --output PATH")))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|source| {
        Error::Open {
            path: path.to_owned(),
            source,
        }
        .into()
    })
}

/// Write to `--output` when given, standard output otherwise.
fn emit(g: &GlobalOpts, text: &str) -> CmdResult {
    match &g.output {
        Some(path) => fs::write(path, text).map_err(|source| {
            Error::Open {
                path: path.clone(),
                source,
            }
            .into()
        }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn run(g: &GlobalOpts) -> CmdResult {
    let mut cfg = load_config(g)?.ok_or_else(|| Failure::usage("run needs --config PATH"))?;
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    if let Some(workers) = g.workers {
        cfg.workers = workers;
    }
    if let Some(output) = &g.output {
        cfg.output_dir = output.clone();
    }
    if g.limit.is_some() {
        cfg.limit = g.limit;
    }
    let pipeline = Pipeline::new(cfg).map_err(Failure::setup)?;
    let summary = pipeline.run()?;

    let mut report = format!("{:<14}{:>10}{:>10}{:>10}{:>8}\n", "stage", "in", "out", "dropped", "errors");
    for s in &summary.stages {
        let name = serde_json::to_value(s.stage).ok();
        let name = name.as_ref().and_then(|v| v.as_str()).unwrap_or("?");
        report.push_str(&format!(
            "{name:<14}{:>10}{:>10}{:>10}{:>8}\n",
            s.input,
            s.output,
            s.dropped(),
            s.errors
        ));
    }
    report.push_str(&format!(
        "{} records written to {}\n",
        summary.records_written,
        pipeline.config().output_dir.display()
    ));
    eprint!("{report}");
    Ok(())
}

pub fn extract(g: &GlobalOpts, a: &ExtractArgs) -> CmdResult {
    let mut options = load_config(g)?.map(|c| c.extraction).unwrap_or_default();
    if a.format.is_some() {
        options.format = a.format;
    }
    let extractor = options.extractor().map_err(Failure::setup)?;
    let bytes = fs::read(&a.html).map_err(|source| Error::Open {
        path: a.html.clone(),
        source,
    })?;
    let html = decode_bytes(&bytes, None);
    let url = a.url.clone().unwrap_or_else(|| format!("file://{}", a.html.display()));
    let params = options.params_for(g.seed.unwrap_or(0), &url);
    let doc = extractor.extract(&html, &url, DateTime::UNIX_EPOCH, params);
    if a.json {
        let mut json = serde_json::to_string_pretty(&doc).map_err(|e| Failure::usage(e.to_string()))?;
        json.push('\n');
        emit(g, &json)
    } else {
        let mut text = doc.text;
        if !text.ends_with('\n') {
            text.push('\n');
        }
        emit(g, &text)
    }
}

fn train_config(g: &GlobalOpts, c: &ClassifierArgs) -> TrainConfig {
    TrainConfig {
        epochs: c.epochs,
        learning_rate: c.learning_rate,
        seed: g.seed.unwrap_or(0),
        hash_bits: c.hash_bits,
        ngram_orders: c.ngram_orders.clone(),
    }
}

fn train_and_save(g: &GlobalOpts, c: &ClassifierArgs, examples: &[LabeledExample], out: &Path) -> CmdResult {
    let (model, report) = train_with_report(examples, &train_config(g, c))?;
    model.save(out)?;
    let loss = report.epoch_losses.last().copied().unwrap_or(f64::NAN);
    eprintln!(
        "trained on {} examples, classes {:?}, final loss {loss:.4}; wrote {}",
        examples.len(),
        model.class_names(),
        out.display()
    );
    Ok(())
}

pub fn train_mathscore(g: &GlobalOpts, a: &TrainMathscoreArgs) -> CmdResult {
    let out = require_output(g, "train-mathscore")?;
    let cfg = load_config(g)?;
    let options = cfg.as_ref().map(|c| c.extraction.clone()).unwrap_or_default();
    let symbols = match &cfg {
        Some(c) => KeywordList::load(c.prefilter.keywords.as_deref(), c.prefilter.latex_symbols.as_deref())
            .map_err(Failure::setup)?
            .symbols()
            .to_vec(),
        None => KeywordList::default().symbols().to_vec(),
    };
    let extractor = options.extractor().map_err(Failure::setup)?;
    let seed = g.seed.or(cfg.as_ref().map(|c| c.seed)).unwrap_or(0);
    let mut docs = Vec::new();
    for shard in &a.shards {
        docs.extend(extract_shard(shard, &extractor, &options, seed)?);
    }
    let examples = build_mathscore_corpus(&docs, &symbols)?;
    train_and_save(g, &a.classifier, &examples, out)
}

pub fn train_langid(g: &GlobalOpts, a: &TrainLangidArgs) -> CmdResult {
    let out = require_output(g, "train-langid")?;
    let mut examples = Vec::new();
    for (code, path) in &a.langs {
        examples.extend(labeled_lines(code, &read_text(path)?));
    }
    train_and_save(g, &a.classifier, &examples, out)
}

pub fn train_lm(g: &GlobalOpts, a: &TrainLmArgs) -> CmdResult {
    let out = require_output(g, "train-lm")?;
    let mut sentences = Vec::new();
    for path in &a.inputs {
        sentences.extend(lm_sentences(&read_text(path)?));
    }
    let config = LmConfig {
        order: a.order,
        unk_hapax: a.unk_hapax,
        ..LmConfig::default()
    };
    let model = lm::train_lm(&sentences, &config)?;
    model.save_arpa(out)?;
    eprintln!(
        "trained order-{} model on {} sentences, {} words in vocabulary; wrote {}",
        model.order(),
        sentences.len(),
        model.vocab().len(),
        out.display()
    );
    Ok(())
}

pub fn dedup(g: &GlobalOpts, a: &DedupArgs) -> CmdResult {
    let mut fingerprints = Vec::new();
    for path in &a.sidecars {
        fingerprints.extend(load_sidecar(path)?);
    }
    // Input position stands in for fetch time so earlier files win.
    let entries: Vec<DedupEntry> = fingerprints
        .iter()
        .enumerate()
        .map(|(i, fp)| DedupEntry {
            bits: fp.bits,
            fetch_time: DateTime::from_timestamp(i as i64, 0).unwrap_or_default(),
            url: fp.doc_id.clone(),
        })
        .collect();
    let outcome = dedup_corpus(&entries, a.max_distance);
    let mut report = String::from("cluster\tdoc_id\tfingerprint\tkept\n");
    for cluster in &outcome.clusters {
        for &m in &cluster.members {
            report.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                cluster.id,
                fingerprints[m].doc_id,
                fingerprints[m].hex(),
                outcome.keep[m]
            ));
        }
    }
    eprintln!(
        "{} fingerprints, {} clusters, {} near-duplicates dropped",
        fingerprints.len(),
        outcome.clusters.len(),
        fingerprints.len() - outcome.kept()
    );
    emit(g, &report)
}

fn load_records(path: &Path) -> Result<Vec<OutputRecord>, Failure> {
    let records = if path.is_dir() {
        read_records(path)?
    } else {
        read_record_file(path)?
    };
    Ok(records)
}

fn domain_input(records: &[OutputRecord]) -> Vec<(String, u64)> {
    records
        .iter()
        .map(|r| (r.url.clone(), r.text.chars().count() as u64))
        .collect()
}

pub fn report_domains(g: &GlobalOpts, a: &ReportArgs) -> CmdResult {
    let records = load_records(&a.records)?;
    let stats = aggregate_domains(&domain_input(&records), &SuffixList::default(), a.by);
    let text = if a.tsv { to_tsv(&stats) } else { to_table(&stats, a.by, a.top) };
    emit(g, &text)
}

pub fn inspect(g: &GlobalOpts, a: &InspectArgs) -> CmdResult {
    let records = load_records(&a.records)?;
    let mut order: Vec<(usize, usize)> = records.iter().enumerate().map(|(i, r)| (r.text.chars().count(), i)).collect();
    order.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));

    let mut out = format!("{} documents\n\nLongest documents\n", records.len());
    for (rank, &(chars, i)) in order.iter().take(a.longest).enumerate() {
        let r = &records[i];
        let preview: String = r.text.chars().take(a.preview).collect();
        out.push_str(&format!("\n#{} {} ({chars} characters)\n{preview}\n", rank + 1, r.url));
        if chars > a.preview {
            out.push_str("[...]\n");
        }
    }
    let stats = aggregate_domains(&domain_input(&records), &SuffixList::default(), SortBy::Docs);
    out.push_str("\nMost common domains\n");
    out.push_str(&to_table(&stats, SortBy::Docs, a.top));
    emit(g, &out)
}
