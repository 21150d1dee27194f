//! Orchestration of the full run over WARC shards.
//!
//! Every shard is read in batches; each batch is processed in parallel
//! through prefilter, extraction and the quality gates, with results
//! collected in input order. Near-duplicate removal and the domain rules then
//! run once over all survivors of the run, and one JSONL file per shard is
//! written. Because results are gathered in input order and every random
//! choice is seeded from the document URL, the output bytes do not depend on
//! the worker count.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use chrono::{DateTime, Utc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::ClassifierModel;
use crate::content::{document_seed, ContentExtractor, ExtractionParams, OutputFormat};
use crate::dedup::{self, DedupEntry, Fingerprint, DEFAULT_MAX_DISTANCE};
use crate::domains::{apply_domain_rules, SuffixList, UrlRule};
use crate::error::{Error, Result};
use crate::filter::{apply_filters, FilterConfig, FilterScores, Verdict};
use crate::lm::NgramModel;
use crate::math::SpanKind;
use crate::prefilter::{prefilter_page, CountingScorer, KeywordList, DEFAULT_THRESHOLD};
use crate::resources::{self, load_list, parse_list};
use crate::warc::{decode_html, open_shard, ArchiveRecord, ShardStats};

pub const PIPELINE_VERSION: &str = concat!("mathcrawl-", env!("CARGO_PKG_VERSION"));
pub const SUMMARY_FILE: &str = "summary.json";
pub const TIMING_FILE: &str = "timing.json";
pub const CLUSTERS_FILE: &str = "dedup_clusters.tsv";
const BATCH: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelPaths {
    pub mathscore: PathBuf,
    pub langid: PathBuf,
    /// ARPA file.
    pub lm: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PrefilterOptions {
    pub threshold: f64,
    /// One keyword per line; the bundled list when absent.
    pub keywords: Option<PathBuf>,
    pub latex_symbols: Option<PathBuf>,
}

impl Default for PrefilterOptions {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_THRESHOLD,
            keywords: None,
            latex_symbols: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExtractionOptions {
    pub markdown_probability: f64,
    /// Pin the output format instead of drawing it per document.
    pub format: Option<OutputFormat>,
    /// Pin the boilerplate trigger count instead of drawing it.
    pub boilerplate_trigger_count: Option<u32>,
    pub boilerplate_phrases: Option<PathBuf>,
    pub class_blocklist: Option<PathBuf>,
}

impl Default for ExtractionOptions {
    fn default() -> Self {
        Self {
            markdown_probability: 0.5,
            format: None,
            boilerplate_trigger_count: None,
            boilerplate_phrases: None,
            class_blocklist: None,
        }
    }
}

impl ExtractionOptions {
    pub fn params_for(&self, run_seed: u64, url: &str) -> ExtractionParams {
        let seed = document_seed(run_seed, url);
        let mut params = ExtractionParams::from_seed(seed, self.markdown_probability);
        if let Some(format) = self.format {
            params.format = format;
        }
        if let Some(trigger) = self.boilerplate_trigger_count {
            params.boilerplate_trigger_count = trigger.max(1);
        }
        params
    }

    /// The content extractor with any configured list overrides applied.
    pub fn extractor(&self) -> Result<ContentExtractor> {
        let mut extractor = ContentExtractor::default();
        if let Some(path) = &self.boilerplate_phrases {
            extractor.phrases = load_list(path)?.into_iter().map(|p| p.to_lowercase()).collect();
        }
        if let Some(path) = &self.class_blocklist {
            extractor.dom.blocklist = load_list(path)?;
        }
        Ok(extractor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DedupOptions {
    pub enabled: bool,
    pub max_distance: u32,
    /// Fingerprint sidecars from earlier runs. Documents near any of them
    /// are dropped.
    pub prior_sidecars: Vec<PathBuf>,
}

impl Default for DedupOptions {
    fn default() -> Self {
        Self {
            enabled: true,
            max_distance: DEFAULT_MAX_DISTANCE,
            prior_sidecars: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DomainOptions {
    pub blacklist: Option<PathBuf>,
    pub url_rules: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub shards: Vec<PathBuf>,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    /// Zero means one per available core.
    #[serde(default = "one")]
    pub workers: usize,
    /// Stop after this many HTML documents.
    #[serde(default)]
    pub limit: Option<u64>,
    pub models: ModelPaths,
    #[serde(default)]
    pub prefilter: PrefilterOptions,
    #[serde(default)]
    pub extraction: ExtractionOptions,
    #[serde(default)]
    pub filter: FilterConfig,
    #[serde(default)]
    pub dedup: DedupOptions,
    #[serde(default)]
    pub domains: DomainOptions,
}

fn one() -> usize {
    1
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Read a TOML config; relative paths inside it are taken relative to
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Open {
            path: path.to_owned(),
            source,
        })?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        self.shards.iter_mut().for_each(fix);
        fix(&mut self.output_dir);
        fix(&mut self.models.mathscore);
        fix(&mut self.models.langid);
        fix(&mut self.models.lm);
        for p in [
            &mut self.prefilter.keywords,
            &mut self.prefilter.latex_symbols,
            &mut self.extraction.boilerplate_phrases,
            &mut self.extraction.class_blocklist,
            &mut self.domains.blacklist,
            &mut self.domains.url_rules,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
        self.dedup.prior_sidecars.iter_mut().for_each(fix);
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(0.0..=1.0).contains(&self.extraction.markdown_probability) {
            return bad(format!(
                "markdown_probability {} is outside [0, 1]",
                self.extraction.markdown_probability
            ));
        }
        if self.dedup.max_distance > 64 {
            return bad(format!("dedup max_distance {} exceeds 64", self.dedup.max_distance));
        }
        let mut stems = HashSet::new();
        for shard in &self.shards {
            if !stems.insert(output_stem(shard)) {
                return bad(format!("two shards map to the output name {:?}", output_stem(shard)));
            }
        }
        Ok(())
    }
}

/// The three models the pipeline scores with.
pub struct Models {
    pub mathscore: ClassifierModel,
    pub langid: ClassifierModel,
    pub lm: NgramModel,
}

impl Models {
    pub fn load(paths: &ModelPaths) -> Result<Self> {
        Ok(Self {
            mathscore: ClassifierModel::load(&paths.mathscore)?,
            langid: ClassifierModel::load(&paths.langid)?,
            lm: NgramModel::load_arpa(&paths.lm)?,
        })
    }
}

/// One surviving document, as written to the output files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub text: String,
    pub url: String,
    pub fetch_time: DateTime<Utc>,
    pub warc_record_id: String,
    pub params: ExtractionParams,
    pub kind_counts: BTreeMap<SpanKind, usize>,
    pub scores: FilterScores,
    /// SimHash as 16 hex digits.
    pub fingerprint: String,
    pub pipeline_version: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Ingest,
    Prefilter,
    Extract,
    Filter,
    Dedup,
    DomainRules,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Ingest,
        Stage::Prefilter,
        Stage::Extract,
        Stage::Filter,
        Stage::Dedup,
        Stage::DomainRules,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounts {
    pub stage: Stage,
    pub input: u64,
    pub output: u64,
    pub drops: BTreeMap<String, u64>,
    pub errors: u64,
}

impl StageCounts {
    fn new(stage: Stage) -> Self {
        Self {
            stage,
            input: 0,
            output: 0,
            drops: BTreeMap::new(),
            errors: 0,
        }
    }

    pub fn dropped(&self) -> u64 {
        self.drops.values().sum()
    }

    /// input = output + drops + errors
    pub fn is_conserved(&self) -> bool {
        self.input == self.output + self.dropped() + self.errors
    }

    fn drop(&mut self, reason: &str) {
        *self.drops.entry(reason.to_owned()).or_insert(0) += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShardSummary {
    pub shard: PathBuf,
    pub output: PathBuf,
    pub reader: ShardStats,
    pub records_written: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub pipeline_version: String,
    pub config: PipelineConfig,
    pub shards: Vec<ShardSummary>,
    pub stages: Vec<StageCounts>,
    /// How often the prefilter fell through to the classifier.
    pub prefilter_scorer_calls: u64,
    pub prefilter_tiers: BTreeMap<String, u64>,
    pub dedup_clusters: u64,
    pub records_written: u64,
}

impl RunSummary {
    pub fn stage(&self, stage: Stage) -> &StageCounts {
        self.stages.iter().find(|s| s.stage == stage).expect("every stage is reported")
    }

    pub fn is_conserved(&self) -> bool {
        self.stages.iter().all(StageCounts::is_conserved)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_seconds: f64,
    /// Summed over documents, so parallel stages can exceed wall time.
    pub stage_seconds: BTreeMap<String, f64>,
}

/// What became of one document in the per-document stages.
#[derive(Debug, Clone, PartialEq)]
pub enum DocFate {
    Prefiltered,
    EmptyText,
    Filtered(Verdict),
    Survived(Box<OutputRecord>),
    Failed(Stage),
}

#[derive(Debug, Default)]
struct DocTiming([Duration; 3]);

fn guarded<T>(f: impl FnOnce() -> T) -> Option<T> {
    panic::catch_unwind(AssertUnwindSafe(f)).ok()
}

fn timed<T>(slot: &mut Duration, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    *slot += start.elapsed();
    out
}

/// Drops the `.warc`, `.gz` and similar suffixes: `a.warc.gz` → `a`.
pub fn output_stem(shard: &Path) -> String {
    let name = shard.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let mut stem = name.as_str();
    for ext in [".gz", ".warc", ".arc"] {
        stem = stem.strip_suffix(ext).unwrap_or(stem);
    }
    if stem.is_empty() {
        "shard".to_owned()
    } else {
        stem.to_owned()
    }
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Kept => "kept",
        Verdict::RejectedLanguage => "language",
        Verdict::RejectedMathscore => "mathscore",
        Verdict::RejectedPerplexity => "perplexity",
        Verdict::RejectedRule => "rule",
    }
}

pub struct Pipeline {
    cfg: PipelineConfig,
    models: Models,
    keywords: KeywordList,
    extractor: ContentExtractor,
    suffixes: SuffixList,
    blacklist: Vec<String>,
    url_rules: Vec<UrlRule>,
    prior: Vec<Fingerprint>,
}

struct ShardWork {
    summary: ShardSummary,
    survivors: Vec<OutputRecord>,
}

impl Pipeline {
    /// Load every model and list the config names. Nothing is written.
    pub fn new(cfg: PipelineConfig) -> Result<Self> {
        let models = Models::load(&cfg.models)?;
        Self::with_models(cfg, models)
    }

    pub fn with_models(cfg: PipelineConfig, models: Models) -> Result<Self> {
        cfg.validate()?;
        let keywords = KeywordList::load(cfg.prefilter.keywords.as_deref(), cfg.prefilter.latex_symbols.as_deref())?;
        let extractor = cfg.extraction.extractor()?;
        let blacklist = match &cfg.domains.blacklist {
            Some(path) => load_list(path)?,
            None => parse_list(resources::DOMAIN_BLACKLIST),
        };
        let url_rules = match &cfg.domains.url_rules {
            Some(path) => UrlRule::parse_list(&fs::read_to_string(path).map_err(|source| Error::Open {
                path: path.clone(),
                source,
            })?)?,
            None => UrlRule::defaults(),
        };
        let mut prior = Vec::new();
        for path in &cfg.dedup.prior_sidecars {
            prior.extend(dedup::load_sidecar(path)?);
        }
        Ok(Self {
            cfg,
            models,
            keywords,
            extractor,
            suffixes: SuffixList::default(),
            blacklist,
            url_rules,
            prior,
        })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    /// Prefilter, extract and filter one page. Panics in any stage are
    /// caught and reported as [`DocFate::Failed`].
    pub fn process_record(&self, record: &ArchiveRecord, scorer: &CountingScorer<'_, ClassifierModel>) -> DocFate {
        self.process_timed(record, scorer, &mut DocTiming::default()).0
    }

    fn process_timed(
        &self,
        record: &ArchiveRecord,
        scorer: &CountingScorer<'_, ClassifierModel>,
        timing: &mut DocTiming,
    ) -> (DocFate, Option<&'static str>) {
        let [t_pre, t_ext, t_filter] = &mut timing.0;
        let Some((html, decision)) = timed(t_pre, || {
            guarded(|| {
                let html = decode_html(record);
                let decision = prefilter_page(&html, &self.keywords, scorer, self.cfg.prefilter.threshold);
                (html, decision)
            })
        }) else {
            return (DocFate::Failed(Stage::Prefilter), None);
        };
        let tier = tier_name(decision.tier);
        if !decision.keep {
            return (DocFate::Prefiltered, Some(tier));
        }
        let params = self.cfg.extraction.params_for(self.cfg.seed, &record.url);
        let Some(doc) = timed(t_ext, || {
            guarded(|| self.extractor.extract(&html, &record.url, record.fetch_time, params))
        }) else {
            return (DocFate::Failed(Stage::Extract), Some(tier));
        };
        if doc.text.trim().is_empty() {
            return (DocFate::EmptyText, Some(tier));
        }
        let Some((scores, fingerprint)) = timed(t_filter, || {
            guarded(|| {
                let scores = apply_filters(
                    &doc,
                    &self.models.langid,
                    &self.models.mathscore,
                    &self.models.lm,
                    &self.cfg.filter,
                );
                let fingerprint = dedup::simhash(&doc.text, doc.url.clone());
                (scores, fingerprint)
            })
        }) else {
            return (DocFate::Failed(Stage::Filter), Some(tier));
        };
        if scores.verdict != Verdict::Kept {
            return (DocFate::Filtered(scores.verdict), Some(tier));
        }
        let record = OutputRecord {
            kind_counts: doc.kind_counts,
            text: doc.text,
            url: doc.url,
            fetch_time: doc.fetch_time,
            warc_record_id: record.record_id.clone(),
            params: doc.params,
            scores,
            fingerprint: fingerprint.hex(),
            pipeline_version: PIPELINE_VERSION.to_owned(),
        };
        (DocFate::Survived(Box::new(record)), Some(tier))
    }

    /// Run the whole pipeline and write its outputs.
    pub fn run(&self) -> Result<RunSummary> {
        let started = Instant::now();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.cfg.workers)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {} workers: {e}", self.cfg.workers)))?;
        let scorer = CountingScorer::new(&self.models.mathscore);
        let mut stages: BTreeMap<Stage, StageCounts> = Stage::ALL.iter().map(|&s| (s, StageCounts::new(s))).collect();
        let mut tiers: BTreeMap<String, u64> = BTreeMap::new();
        let mut stage_time = [Duration::ZERO; 3];
        let mut budget = self.cfg.limit;
        let mut work = Vec::with_capacity(self.cfg.shards.len());

        for shard in &self.cfg.shards {
            let mut reader = open_shard(shard)?;
            let mut survivors = Vec::new();
            loop {
                let mut batch = Vec::with_capacity(BATCH);
                while batch.len() < BATCH && budget != Some(0) {
                    match reader.next() {
                        Some(record) => batch.push(record?),
                        None => break,
                    }
                    if let Some(b) = budget.as_mut() {
                        *b -= 1;
                    }
                }
                if batch.is_empty() {
                    break;
                }
                let results: Vec<(DocFate, Option<&'static str>, DocTiming)> = pool.install(|| {
                    batch
                        .par_iter()
                        .map(|record| {
                            let mut timing = DocTiming::default();
                            let (fate, tier) = self.process_timed(record, &scorer, &mut timing);
                            (fate, tier, timing)
                        })
                        .collect()
                });
                for (fate, tier, timing) in results {
                    for (acc, t) in stage_time.iter_mut().zip(timing.0) {
                        *acc += t;
                    }
                    if let Some(tier) = tier {
                        *tiers.entry(tier.to_owned()).or_insert(0) += 1;
                    }
                    tally(&mut stages, fate, &mut survivors);
                }
            }
            let reader_stats = reader.stats();
            let ingest = stages.get_mut(&Stage::Ingest).expect("stage present");
            ingest.input += reader_stats.responses;
            ingest.output += reader_stats.yielded;
            *ingest.drops.entry("non_html".into()).or_insert(0) += reader_stats.skipped_non_html;
            let unread = reader_stats.responses - reader_stats.yielded - reader_stats.skipped_non_html;
            if unread > 0 {
                *ingest.drops.entry("limit".into()).or_insert(0) += unread;
            }
            work.push(ShardWork {
                summary: ShardSummary {
                    shard: shard.clone(),
                    output: PathBuf::from(format!("{}.jsonl", output_stem(shard))),
                    reader: reader_stats,
                    records_written: 0,
                },
                survivors,
            });
        }

        let dedup_start = Instant::now();
        let clusters = self.global_dedup(&mut work, stages.get_mut(&Stage::Dedup).expect("stage present"));
        let dedup_time = dedup_start.elapsed();
        let rules_start = Instant::now();
        self.domain_rules(&mut work, stages.get_mut(&Stage::DomainRules).expect("stage present"));
        let rules_time = rules_start.elapsed();

        let summary = RunSummary {
            pipeline_version: PIPELINE_VERSION.to_owned(),
            config: self.cfg.clone(),
            records_written: work.iter().map(|w| w.survivors.len() as u64).sum(),
            shards: work
                .iter()
                .map(|w| ShardSummary {
                    records_written: w.survivors.len() as u64,
                    ..w.summary.clone()
                })
                .collect(),
            stages: stages.into_values().collect(),
            prefilter_scorer_calls: scorer.calls(),
            prefilter_tiers: tiers,
            dedup_clusters: clusters.len() as u64,
        };
        debug_assert!(summary.is_conserved());
        self.write_outputs(&work, &summary, &clusters)?;

        let mut timing = Timing {
            total_seconds: started.elapsed().as_secs_f64(),
            ..Timing::default()
        };
        for (name, d) in [
            ("prefilter", stage_time[0]),
            ("extract", stage_time[1]),
            ("filter", stage_time[2]),
            ("dedup", dedup_time),
            ("domain_rules", rules_time),
        ] {
            timing.stage_seconds.insert(name.to_owned(), d.as_secs_f64());
        }
        write_json(&self.cfg.output_dir.join(TIMING_FILE), &timing)?;
        Ok(summary)
    }

    /// Returns `(cluster id, url, kept)` rows for clusters with a member
    /// from this run.
    fn global_dedup(&self, work: &mut [ShardWork], counts: &mut StageCounts) -> Vec<(usize, String, bool)> {
        let total: usize = work.iter().map(|w| w.survivors.len()).sum();
        counts.input += total as u64;
        if !self.cfg.dedup.enabled {
            counts.output += total as u64;
            return Vec::new();
        }
        let mut entries: Vec<DedupEntry> = self
            .prior
            .iter()
            .map(|fp| DedupEntry {
                bits: fp.bits,
                fetch_time: DateTime::<Utc>::MIN_UTC,
                url: fp.doc_id.clone(),
            })
            .collect();
        let offset = entries.len();
        for w in work.iter() {
            for r in &w.survivors {
                entries.push(DedupEntry {
                    bits: u64::from_str_radix(&r.fingerprint, 16).expect("fingerprints are written as hex"),
                    fetch_time: r.fetch_time,
                    url: r.url.clone(),
                });
            }
        }
        let outcome = dedup::dedup_corpus(&entries, self.cfg.dedup.max_distance);
        let mut rows = Vec::new();
        for cluster in &outcome.clusters {
            if cluster.members.iter().all(|&m| m < offset) {
                continue;
            }
            for &m in &cluster.members {
                rows.push((cluster.id, entries[m].url.clone(), outcome.keep[m]));
            }
        }
        let mut index = offset;
        for w in work.iter_mut() {
            let before = std::mem::take(&mut w.survivors);
            for r in before {
                if outcome.keep[index] {
                    w.survivors.push(r);
                    counts.output += 1;
                } else {
                    counts.drop("near_duplicate");
                }
                index += 1;
            }
        }
        rows
    }

    fn domain_rules(&self, work: &mut [ShardWork], counts: &mut StageCounts) {
        for w in work.iter_mut() {
            let urls: Vec<&str> = w.survivors.iter().map(|r| r.url.as_str()).collect();
            let outcome = apply_domain_rules(&urls, &self.blacklist, &self.url_rules, &self.suffixes);
            counts.input += urls.len() as u64;
            for (label, n) in &outcome.counters {
                if *n > 0 {
                    *counts.drops.entry(label.clone()).or_insert(0) += n;
                }
            }
            let mut keep = outcome.keep.into_iter();
            w.survivors.retain(|_| keep.next().unwrap_or(false));
            counts.output += w.survivors.len() as u64;
        }
    }

    fn write_outputs(&self, work: &[ShardWork], summary: &RunSummary, clusters: &[(usize, String, bool)]) -> Result<()> {
        let dir = &self.cfg.output_dir;
        fs::create_dir_all(dir).map_err(|source| Error::Open {
            path: dir.clone(),
            source,
        })?;
        for w in work {
            let stem = output_stem(&w.summary.shard);
            write_atomic(&dir.join(&w.summary.output), |out| {
                for r in &w.survivors {
                    serde_json::to_writer(&mut *out, r).map_err(std::io::Error::from)?;
                    out.write_all(b"\n")?;
                }
                Ok(())
            })?;
            let fingerprints: Vec<Fingerprint> = w
                .survivors
                .iter()
                .map(|r| Fingerprint {
                    bits: u64::from_str_radix(&r.fingerprint, 16).expect("fingerprints are written as hex"),
                    doc_id: r.url.clone(),
                })
                .collect();
            write_atomic(&dir.join(format!("{stem}.fingerprints.tsv")), |out| {
                dedup::write_sidecar(out, &fingerprints).map_err(|e| std::io::Error::other(e.to_string()))
            })?;
        }
        write_atomic(&dir.join(CLUSTERS_FILE), |out| {
            writeln!(out, "cluster\turl\tkept")?;
            for (id, url, kept) in clusters {
                writeln!(out, "{id}\t{url}\t{kept}")?;
            }
            Ok(())
        })?;
        write_json(&dir.join(SUMMARY_FILE), summary)
    }
}

fn tier_name(tier: crate::prefilter::Tier) -> &'static str {
    use crate::prefilter::Tier;
    match tier {
        Tier::Keyword => "keyword",
        Tier::LatexSymbol => "latex_symbol",
        Tier::Classifier => "classifier",
        Tier::Rejected => "rejected",
    }
}

fn tally(stages: &mut BTreeMap<Stage, StageCounts>, fate: DocFate, survivors: &mut Vec<OutputRecord>) {
    enum End {
        Pass,
        Drop(&'static str),
        Error,
    }
    const PRE: &[Stage] = &[Stage::Prefilter];
    const EXT: &[Stage] = &[Stage::Prefilter, Stage::Extract];
    const ALL: &[Stage] = &[Stage::Prefilter, Stage::Extract, Stage::Filter];
    let (path, end) = match fate {
        DocFate::Failed(Stage::Prefilter) => (PRE, End::Error),
        DocFate::Prefiltered => (PRE, End::Drop("not_math")),
        DocFate::Failed(Stage::Extract) => (EXT, End::Error),
        DocFate::EmptyText => (EXT, End::Drop("empty_text")),
        DocFate::Failed(_) => (ALL, End::Error),
        DocFate::Filtered(v) => (ALL, End::Drop(verdict_name(v))),
        DocFate::Survived(record) => {
            survivors.push(*record);
            (ALL, End::Pass)
        }
    };
    for (i, stage) in path.iter().enumerate() {
        let counts = stages.get_mut(stage).expect("stage present");
        counts.input += 1;
        if i + 1 < path.len() {
            counts.output += 1;
            continue;
        }
        match end {
            End::Pass => counts.output += 1,
            End::Drop(reason) => counts.drop(reason),
            End::Error => counts.errors += 1,
        }
    }
}

fn write_atomic(path: &Path, fill: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>) -> Result<()> {
    let tmp = path.with_extension("partial");
    let io_err = |source| Error::Open {
        path: path.to_owned(),
        source,
    };
    let file = fs::File::create(&tmp).map_err(io_err)?;
    let mut out = BufWriter::new(file);
    fill(&mut out).map_err(io_err)?;
    out.into_inner().map_err(|e| io_err(e.into_error()))?.sync_all().map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_atomic(path, |out| {
        serde_json::to_writer_pretty(&mut *out, value).map_err(std::io::Error::from)?;
        out.write_all(b"\n")
    })
}

/// Extract every HTML page of a shard, in archive order. Used to build
/// MathScore training data.
pub fn extract_shard(
    path: &Path,
    extractor: &ContentExtractor,
    options: &ExtractionOptions,
    run_seed: u64,
) -> Result<Vec<crate::content::ExtractedDoc>> {
    let records = open_shard(path)?.collect::<Result<Vec<_>>>()?;
    Ok(records
        .par_iter()
        .filter_map(|record| {
            let params = options.params_for(run_seed, &record.url);
            guarded(|| extractor.extract(&decode_html(record), &record.url, record.fetch_time, params))
        })
        .collect())
}

/// Every record in the `*.jsonl` files of `dir`, files in name order.
pub fn read_records(dir: &Path) -> Result<Vec<OutputRecord>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|source| Error::Open {
            path: dir.to_owned(),
            source,
        })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
        .collect();
    files.sort();
    let mut records = Vec::new();
    for path in files {
        records.extend(read_record_file(&path)?);
    }
    Ok(records)
}

pub fn read_record_file(path: &Path) -> Result<Vec<OutputRecord>> {
    let file = fs::File::open(path).map_err(|source| Error::Open {
        path: path.to_owned(),
        source,
    })?;
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line)
            .map_err(|e| Error::Config(format!("{}:{}: {e}", path.display(), i + 1)))?;
        records.push(record);
    }
    Ok(records)
}
