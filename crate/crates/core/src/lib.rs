//! Math-aware extraction and filtering of web-archive HTML.
//!
//! The pipeline stages, in order: [`prefilter`] decides whether a page is
//! worth extracting, [`math`] pulls LaTeX out of the markup, [`content`]
//! turns the rest into clean text, [`filter`] applies language, MathScore
//! and perplexity gates, [`dedup`] drops near-duplicates and [`domains`]
//! applies blacklists and reports. [`pipeline`] runs them over WARC shards.

pub mod classifier;
pub mod content;
pub mod dedup;
pub mod domains;
pub mod error;
pub mod filter;
pub mod hash;
pub mod lm;
pub mod markup;
pub mod math;
pub mod pipeline;
pub mod prefilter;
pub mod resources;
pub mod warc;

pub use error::{Error, Result};
pub use classifier::{ClassifierModel, LabeledExample, TrainConfig};
pub use content::{ContentExtractor, ExtractedDoc, ExtractionParams, OutputFormat};
pub use dedup::Fingerprint;
pub use domains::DomainStats;
pub use filter::{FilterConfig, FilterScores, Verdict};
pub use lm::{LmConfig, NgramModel};
pub use pipeline::{OutputRecord, Pipeline, PipelineConfig, RunSummary};
pub use prefilter::{KeywordList, PrefilterDecision, Tier};
pub use math::{Detection, MathExtraction, MathExtractor, MathJaxConfig, MathSpan, SpanKind};
pub use warc::{decode_html, open_shard, ArchiveRecord, ShardReader, ShardStats};
