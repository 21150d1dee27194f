//! Quality gates applied after extraction: language, MathScore, perplexity,
//! and optional character-level rules. The first failing gate decides.

use serde::{Deserialize, Serialize};

use crate::classifier::{strip_latex, ClassifierModel, MATH_LABEL};
use crate::content::ExtractedDoc;
use crate::lm::NgramModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RuleFilters {
    pub enabled: bool,
    /// Reject when more than this share of non-space characters is neither
    /// a letter nor a digit.
    pub max_symbol_ratio: f64,
    pub min_mean_word_len: f64,
    pub max_mean_word_len: f64,
}

impl Default for RuleFilters {
    fn default() -> Self {
        Self {
            enabled: false,
            max_symbol_ratio: 0.5,
            min_mean_word_len: 2.0,
            max_mean_word_len: 12.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterConfig {
    pub english_label: String,
    pub lang_min: f64,
    pub math_with_latex: f64,
    pub math_without_latex: f64,
    pub ppl_max: f64,
    pub rules: RuleFilters,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            english_label: "en".into(),
            lang_min: 0.65,
            math_with_latex: 0.17,
            math_without_latex: 0.8,
            ppl_max: 15_000.0,
            rules: RuleFilters::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Kept,
    RejectedLanguage,
    RejectedMathscore,
    RejectedPerplexity,
    RejectedRule,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterScores {
    pub lang: String,
    pub lang_prob: f64,
    pub math_score: f64,
    /// `None` when the document has no scoreable tokens.
    pub perplexity: Option<f64>,
    pub has_latex: bool,
    pub verdict: Verdict,
}

/// The scores a decision is made from, separated from the models that
/// produce them.
#[derive(Debug, Clone, PartialEq)]
pub struct GateInputs<'a> {
    pub lang: &'a str,
    pub lang_prob: f64,
    pub math_score: f64,
    pub has_latex: bool,
    pub perplexity: Option<f64>,
}

/// Apply the gates in order to precomputed scores.
pub fn decide(inputs: &GateInputs<'_>, cfg: &FilterConfig) -> Verdict {
    if inputs.lang != cfg.english_label || inputs.lang_prob < cfg.lang_min {
        return Verdict::RejectedLanguage;
    }
    let threshold = if inputs.has_latex {
        cfg.math_with_latex
    } else {
        cfg.math_without_latex
    };
    if inputs.math_score <= threshold {
        return Verdict::RejectedMathscore;
    }
    match inputs.perplexity {
        Some(ppl) if ppl <= cfg.ppl_max => Verdict::Kept,
        _ => Verdict::RejectedPerplexity,
    }
}

/// Share of non-space characters that are not alphanumeric, and the mean
/// word length, of `text`.
pub fn character_stats(text: &str) -> (f64, f64) {
    let mut visible = 0usize;
    let mut symbols = 0usize;
    for c in text.chars().filter(|c| !c.is_whitespace()) {
        visible += 1;
        if !c.is_alphanumeric() {
            symbols += 1;
        }
    }
    let words: Vec<&str> = text.split_whitespace().collect();
    let ratio = if visible == 0 { 0.0 } else { symbols as f64 / visible as f64 };
    let mean = if words.is_empty() {
        0.0
    } else {
        words.iter().map(|w| w.chars().count()).sum::<usize>() as f64 / words.len() as f64
    };
    (ratio, mean)
}

fn rule_rejects(prose: &str, rules: &RuleFilters) -> bool {
    if !rules.enabled {
        return false;
    }
    let (ratio, mean) = character_stats(prose);
    ratio > rules.max_symbol_ratio || mean < rules.min_mean_word_len || mean > rules.max_mean_word_len
}

/// Score a document with all three models and decide its fate.
pub fn apply_filters(
    doc: &ExtractedDoc,
    lang_model: &ClassifierModel,
    math_model: &ClassifierModel,
    lm: &NgramModel,
    cfg: &FilterConfig,
) -> FilterScores {
    let has_latex = doc.has_latex();
    let no_math = doc.text_without_math();
    let prose = strip_latex(&doc.text);
    if doc.text.trim().is_empty() {
        return FilterScores {
            lang: "unknown".into(),
            lang_prob: 0.0,
            math_score: 0.0,
            perplexity: None,
            has_latex,
            verdict: Verdict::RejectedLanguage,
        };
    }
    let (lang, lang_prob) = lang_model.top(&no_math);
    let math_score = math_model.probability_of(&prose, MATH_LABEL).unwrap_or(0.0);
    let perplexity = lm.perplexity(&doc.text).ok();
    let mut verdict = decide(
        &GateInputs {
            lang: &lang,
            lang_prob,
            math_score,
            has_latex,
            perplexity,
        },
        cfg,
    );
    if verdict == Verdict::Kept && rule_rejects(&prose, &cfg.rules) {
        verdict = Verdict::RejectedRule;
    }
    FilterScores {
        lang,
        lang_prob,
        math_score,
        perplexity,
        has_latex,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs(math_score: f64, has_latex: bool, ppl: f64) -> GateInputs<'static> {
        GateInputs {
            lang: "en",
            lang_prob: 0.9,
            math_score,
            has_latex,
            perplexity: Some(ppl),
        }
    }

    #[test]
    fn documented_examples() {
        let cfg = FilterConfig::default();
        assert_eq!(decide(&inputs(0.30, true, 900.0), &cfg), Verdict::Kept);
        assert_eq!(decide(&inputs(0.30, false, 900.0), &cfg), Verdict::RejectedMathscore);
        assert_eq!(decide(&inputs(0.95, false, 20_000.0), &cfg), Verdict::RejectedPerplexity);
    }

    #[test]
    fn language_failure_wins() {
        let cfg = FilterConfig::default();
        let mut i = inputs(0.95, true, 20_000.0);
        i.lang = "fr";
        assert_eq!(decide(&i, &cfg), Verdict::RejectedLanguage);
        let mut i = inputs(0.95, true, 100.0);
        i.lang_prob = 0.64;
        assert_eq!(decide(&i, &cfg), Verdict::RejectedLanguage);
        i.lang_prob = 0.65;
        assert_eq!(decide(&i, &cfg), Verdict::Kept);
    }

    #[test]
    fn missing_perplexity_is_rejected() {
        let mut i = inputs(0.95, true, 1.0);
        i.perplexity = None;
        assert_eq!(decide(&i, &FilterConfig::default()), Verdict::RejectedPerplexity);
    }

    #[test]
    fn character_rules() {
        let (ratio, mean) = character_stats("ab cd!!");
        assert!((ratio - 2.0 / 6.0).abs() < 1e-12);
        assert!((mean - 3.0).abs() < 1e-12);
        let rules = RuleFilters {
            enabled: true,
            ..RuleFilters::default()
        };
        assert!(rule_rejects("#### $$$ %%%", &rules));
        assert!(!rule_rejects("a perfectly ordinary sentence", &rules));
        assert!(!rule_rejects("#### $$$ %%%", &RuleFilters::default()));
    }
}
