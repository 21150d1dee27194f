//! From placeholder-bearing HTML to clean main-content text.

pub mod dom;
mod lines;
mod main_text;

use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::hash::{mix64, stable_hash};
use crate::math::dollars::strip_delimited;
use crate::math::{Detection, MathExtraction, MathExtractor, MathSpan, SpanKind};
use crate::resources::{self, parse_list};

pub use dom::{Annotation, DomRules, Element, Node};
pub use lines::process_lines;
pub use main_text::{extract_main_text, MAX_LINK_DENSITY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Plain,
    Markdown,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "plain" | "text" => Ok(OutputFormat::Plain),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(format!("unknown format {other:?} (expected plain or markdown)")),
        }
    }
}

/// Randomized knobs of one document's extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionParams {
    pub format: OutputFormat,
    pub boilerplate_trigger_count: u32,
    pub rng_seed: u64,
}

impl ExtractionParams {
    /// Markdown with probability `markdown_probability`, trigger count
    /// uniform over {1, 2}; fully determined by `seed`.
    pub fn from_seed(seed: u64, markdown_probability: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let format = if rng.gen_bool(markdown_probability.clamp(0.0, 1.0)) {
            OutputFormat::Markdown
        } else {
            OutputFormat::Plain
        };
        Self {
            format,
            boilerplate_trigger_count: rng.gen_range(1..=2),
            rng_seed: seed,
        }
    }

    pub fn fixed(format: OutputFormat, boilerplate_trigger_count: u32) -> Self {
        Self {
            format,
            boilerplate_trigger_count: boilerplate_trigger_count.max(1),
            rng_seed: 0,
        }
    }
}

/// Per-document seed derived from the run seed and the document URL, so a
/// document's parameters do not depend on processing order.
pub fn document_seed(run_seed: u64, url: &str) -> u64 {
    mix64(run_seed ^ stable_hash(url.as_bytes()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineKind {
    Text,
    ListItem,
    Header(u8),
    Code,
    Table,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub kind: LineKind,
    pub text: String,
}

impl Line {
    pub fn text(text: impl Into<String>) -> Self {
        Self {
            kind: LineKind::Text,
            text: text.into(),
        }
    }

    pub fn header(level: u8, text: impl Into<String>) -> Self {
        Self {
            kind: LineKind::Header(level),
            text: text.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractedDoc {
    pub text: String,
    pub spans: Vec<MathSpan>,
    pub url: String,
    pub fetch_time: DateTime<Utc>,
    pub params: ExtractionParams,
    pub kind_counts: BTreeMap<SpanKind, usize>,
    pub mathjax: Detection,
    /// The page had a MathJax configuration whose delimiters were unreadable.
    pub mathjax_config_error: bool,
}

impl ExtractedDoc {
    /// Text with every `$…$` and `$$…$$` formula removed.
    pub fn text_without_math(&self) -> String {
        strip_delimited(&self.text)
    }

    pub fn has_latex(&self) -> bool {
        !self.spans.is_empty()
    }
}

pub fn kind_counts(spans: &[MathSpan]) -> BTreeMap<SpanKind, usize> {
    let mut counts = BTreeMap::new();
    for span in spans {
        *counts.entry(span.kind).or_insert(0) += 1;
    }
    counts
}

/// Math extraction, DOM cleanup, main-content selection and line
/// processing, configured once and shared across documents.
#[derive(Debug, Clone)]
pub struct ContentExtractor {
    pub math: MathExtractor,
    pub dom: DomRules,
    pub phrases: Vec<String>,
}

impl Default for ContentExtractor {
    fn default() -> Self {
        Self {
            math: MathExtractor::default(),
            dom: DomRules {
                blocklist: parse_list(resources::CLASS_BLOCKLIST),
            },
            phrases: lowercase(parse_list(resources::BOILERPLATE_PHRASES)),
        }
    }
}

fn lowercase(list: Vec<String>) -> Vec<String> {
    list.into_iter().map(|p| p.to_lowercase()).collect()
}

impl ContentExtractor {
    pub fn new(math: MathExtractor, blocklist: Vec<String>, phrases: Vec<String>) -> Self {
        Self {
            math,
            dom: DomRules { blocklist },
            phrases: lowercase(phrases),
        }
    }

    pub fn extract(&self, html: &str, url: &str, fetch_time: DateTime<Utc>, params: ExtractionParams) -> ExtractedDoc {
        let config = self.math.detect_mathjax(html);
        let extraction = self.math.extract_math(html, &config);
        let mut doc = self.extract_from(&extraction, url, fetch_time, params);
        doc.mathjax = config.detected;
        doc.mathjax_config_error = config.config_error;
        doc
    }

    /// Continue from an existing math extraction.
    pub fn extract_from(
        &self,
        extraction: &MathExtraction,
        url: &str,
        fetch_time: DateTime<Utc>,
        params: ExtractionParams,
    ) -> ExtractedDoc {
        let tree = self.dom.process_dom(&extraction.html);
        let lines = extract_main_text(&tree, params.format);
        let (text, spans) = process_lines(&lines, &extraction.spans, &params, &self.phrases);
        if spans.len() != extraction.spans.len() {
            log::debug!(
                "{url}: {} of {} formulas did not reach the output",
                extraction.spans.len() - spans.len(),
                extraction.spans.len()
            );
        }
        ExtractedDoc {
            text,
            kind_counts: kind_counts(&spans),
            spans,
            url: url.to_owned(),
            fetch_time,
            params,
            mathjax: Detection::None,
            mathjax_config_error: false,
        }
    }
}
