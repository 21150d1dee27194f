//! Loading of the checked-in fixture corpus.

use std::collections::BTreeMap;
use std::path::PathBuf;

use mathcrawl_core::{MathExtractor, MathSpan};
use serde::Deserialize;

pub fn dir(sub: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(sub)
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct ExpectedSpan {
    pub kind: String,
    pub latex: String,
    pub display: bool,
}

impl ExpectedSpan {
    pub fn of(span: &MathSpan) -> Self {
        Self {
            kind: span.kind.as_str().to_owned(),
            latex: span.latex.clone(),
            display: span.display,
        }
    }
}

pub struct GoldenCase {
    pub name: String,
    pub html: String,
    pub expected: Vec<ExpectedSpan>,
}

pub fn golden_cases() -> Vec<GoldenCase> {
    let root = dir("golden");
    let text = std::fs::read_to_string(root.join("expected.json")).expect("expected.json");
    let expected: BTreeMap<String, Vec<ExpectedSpan>> = serde_json::from_str(&text).expect("valid expected.json");
    expected
        .into_iter()
        .map(|(name, expected)| GoldenCase {
            html: std::fs::read_to_string(root.join(format!("{name}.html"))).expect("fixture html"),
            name,
            expected,
        })
        .collect()
}

/// Spans found by math extraction alone, in document order.
pub fn extract_spans(extractor: &MathExtractor, html: &str) -> Vec<MathSpan> {
    let config = extractor.detect_mathjax(html);
    extractor.extract_math(html, &config).spans
}

/// Extract every golden page under several run seeds and check that each
/// formula found by math extraction survives into the text. Returns the
/// number of formulas checked.
pub fn check_no_formula_lost(seeds: u64) -> Result<usize, String> {
    use mathcrawl_core::content::document_seed;
    use mathcrawl_core::{ContentExtractor, ExtractionParams};

    let content = ContentExtractor::default();
    let mut checked = 0;
    for case in golden_cases() {
        let mut before: Vec<String> = extract_spans(&content.math, &case.html).iter().map(|s| s.delimited()).collect();
        before.sort();
        for run_seed in 0..seeds {
            let url = format!("https://notes.example.org/{}", case.name);
            let params = ExtractionParams::from_seed(document_seed(run_seed, &url), 0.5);
            let doc = content.extract(&case.html, &url, chrono::DateTime::UNIX_EPOCH, params);
            let mut after: Vec<String> = doc.spans.iter().map(|s| s.delimited()).collect();
            after.sort();
            if after != before {
                return Err(format!("{} with {params:?}: spans {after:?}, expected {before:?}", case.name));
            }
            if let Some(missing) = after.iter().find(|f| !doc.text.contains(f.as_str())) {
                return Err(format!("{}: {missing} missing from\n{}", case.name, doc.text));
            }
            checked += after.len();
        }
    }
    Ok(checked)
}

/// Compare every golden page against its expected spans.
pub fn check_golden() -> Result<usize, String> {
    let extractor = MathExtractor::default();
    let cases = golden_cases();
    let failures: Vec<String> = cases
        .iter()
        .filter_map(|case| {
            let got: Vec<ExpectedSpan> = extract_spans(&extractor, &case.html).iter().map(ExpectedSpan::of).collect();
            (got != case.expected).then(|| format!("{}:\n  got  {:?}\n  want {:?}", case.name, got, case.expected))
        })
        .collect();
    if failures.is_empty() {
        Ok(cases.len())
    } else {
        Err(failures.join("\n"))
    }
}
