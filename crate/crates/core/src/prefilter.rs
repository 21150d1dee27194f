//! Cheap, high-recall cascade run before full extraction: literal keywords,
//! then popular LaTeX commands in the rough page text, then a classifier.

use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::classifier::{ClassifierModel, MATH_LABEL};
use crate::error::{Error, Result};
use crate::markup::rough_text;
use crate::resources::{self, first_command, load_list, parse_list};

pub const DEFAULT_THRESHOLD: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Keyword,
    LatexSymbol,
    Classifier,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefilterDecision {
    pub keep: bool,
    pub tier: Tier,
    pub matched_term: Option<String>,
}

impl PrefilterDecision {
    fn keep(tier: Tier, term: Option<&str>) -> Self {
        Self {
            keep: true,
            tier,
            matched_term: term.map(str::to_owned),
        }
    }

    fn rejected() -> Self {
        Self {
            keep: false,
            tier: Tier::Rejected,
            matched_term: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeywordList {
    terms: Vec<String>,
    symbols: Vec<String>,
}

impl Default for KeywordList {
    fn default() -> Self {
        Self {
            terms: parse_list(resources::MATH_KEYWORDS),
            symbols: resources::default_latex_symbols(),
        }
    }
}

impl KeywordList {
    pub fn new(terms: Vec<String>, symbols: Vec<String>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Config("keyword list is empty".into()));
        }
        if let Some(bad) = symbols.iter().find(|s| !s.starts_with('\\') || s.len() < 2) {
            return Err(Error::Config(format!("symbol {bad:?} does not start with a backslash")));
        }
        Ok(Self { terms, symbols })
    }

    /// Load either list from a file, falling back to the bundled default.
    pub fn load(terms: Option<&Path>, symbols: Option<&Path>) -> Result<Self> {
        let defaults = Self::default();
        let terms = match terms {
            Some(p) => load_list(p)?,
            None => defaults.terms,
        };
        let symbols = match symbols {
            Some(p) => load_list(p)?,
            None => defaults.symbols,
        };
        Self::new(terms, symbols)
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn with_term(mut self, term: impl Into<String>) -> Self {
        self.terms.push(term.into());
        self
    }
}

/// Anything that can give a probability that rough page text is math.
pub trait MathScorer: Sync {
    fn math_probability(&self, text: &str) -> f64;
}

impl MathScorer for ClassifierModel {
    fn math_probability(&self, text: &str) -> f64 {
        self.probability_of(text, MATH_LABEL).unwrap_or(0.0)
    }
}

/// Wraps a scorer and counts how often it is consulted.
pub struct CountingScorer<'a, S: ?Sized> {
    inner: &'a S,
    calls: AtomicU64,
}

impl<'a, S: MathScorer + ?Sized> CountingScorer<'a, S> {
    pub fn new(inner: &'a S) -> Self {
        Self {
            inner,
            calls: AtomicU64::new(0),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

impl<S: MathScorer + ?Sized> MathScorer for CountingScorer<'_, S> {
    fn math_probability(&self, text: &str) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.math_probability(text)
    }
}

/// Run the cascade, stopping at the first tier that keeps the page.
pub fn prefilter_page(html: &str, keywords: &KeywordList, scorer: &dyn MathScorer, threshold: f64) -> PrefilterDecision {
    if html.is_empty() {
        return PrefilterDecision::rejected();
    }
    if let Some(term) = keywords.terms.iter().find(|t| html.contains(t.as_str())) {
        return PrefilterDecision::keep(Tier::Keyword, Some(term));
    }
    let text = rough_text(html);
    if html.as_bytes().contains(&b'\\') {
        if let Some(symbol) = first_command(&text, &keywords.symbols) {
            return PrefilterDecision::keep(Tier::LatexSymbol, Some(symbol));
        }
    }
    if scorer.math_probability(&text) >= threshold {
        return PrefilterDecision::keep(Tier::Classifier, None);
    }
    PrefilterDecision::rejected()
}
