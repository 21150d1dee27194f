//! Table of gate decisions around the MathScore and perplexity thresholds.

use mathcrawl_core::filter::{decide, GateInputs};
use mathcrawl_core::{FilterConfig, Verdict};

pub struct Row {
    pub has_latex: bool,
    pub math_score: f64,
    pub perplexity: Option<f64>,
    pub expected: Verdict,
}

const fn row(has_latex: bool, math_score: f64, perplexity: Option<f64>, expected: Verdict) -> Row {
    Row {
        has_latex,
        math_score,
        perplexity,
        expected,
    }
}

const OK_PPL: Option<f64> = Some(100.0);

pub const ROWS: &[Row] = &[
    // With LaTeX the MathScore gate is 0.17, strictly exceeded.
    row(true, 0.17, OK_PPL, Verdict::RejectedMathscore),
    row(true, 0.170_000_001, OK_PPL, Verdict::Kept),
    row(true, 0.169_999_999, OK_PPL, Verdict::RejectedMathscore),
    row(true, 0.0, OK_PPL, Verdict::RejectedMathscore),
    row(true, 0.5, OK_PPL, Verdict::Kept),
    // Without LaTeX it is 0.8.
    row(false, 0.8, OK_PPL, Verdict::RejectedMathscore),
    row(false, 0.800_000_001, OK_PPL, Verdict::Kept),
    row(false, 0.5, OK_PPL, Verdict::RejectedMathscore),
    row(false, 1.0, OK_PPL, Verdict::Kept),
    // Perplexity passes up to and including 15,000.
    row(true, 0.9, Some(15_000.0), Verdict::Kept),
    row(true, 0.9, Some(15_000.000_001), Verdict::RejectedPerplexity),
    row(true, 0.9, Some(14_999.999), Verdict::Kept),
    row(false, 0.9, Some(15_001.0), Verdict::RejectedPerplexity),
    row(true, 0.9, None, Verdict::RejectedPerplexity),
    // MathScore is checked before perplexity.
    row(true, 0.1, Some(20_000.0), Verdict::RejectedMathscore),
];

pub fn inputs(r: &Row) -> GateInputs<'static> {
    GateInputs {
        lang: "en",
        lang_prob: 0.99,
        math_score: r.math_score,
        has_latex: r.has_latex,
        perplexity: r.perplexity,
    }
}

/// Run every row through the default configuration. Returns the count.
pub fn check_rows() -> Result<usize, String> {
    let cfg = FilterConfig::default();
    if (cfg.math_with_latex, cfg.math_without_latex, cfg.ppl_max) != (0.17, 0.8, 15_000.0) {
        return Err(format!(
            "defaults are {}/{}/{}",
            cfg.math_with_latex, cfg.math_without_latex, cfg.ppl_max
        ));
    }
    for (i, r) in ROWS.iter().enumerate() {
        let got = decide(&inputs(r), &cfg);
        if got != r.expected {
            return Err(format!("row {i}: expected {:?}, got {got:?}", r.expected));
        }
    }
    Ok(ROWS.len())
}
