use std::sync::OnceLock;

use regex::Regex;

use super::LabeledExample;
use crate::content::ExtractedDoc;
use crate::error::{Error, Result};
use crate::math::dollars::strip_delimited;
use crate::resources::contains_command;

pub const MATH_LABEL: &str = "math";
pub const OTHER_LABEL: &str = "other";

fn command_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\\[A-Za-z]+\*?").expect("valid regex"))
}

/// Remove every delimited formula and any stray backslash command, leaving
/// only the prose around the math.
pub fn strip_latex(text: &str) -> String {
    let prose = strip_delimited(text);
    let prose = command_regex().replace_all(&prose, " ");
    prose
        .lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join("\n")
}

/// Label each document by whether its formulas use any of `commands`, then
/// strip all LaTeX so the classifier only sees the surrounding words.
/// Documents with nothing left after stripping are skipped.
pub fn build_mathscore_corpus(docs: &[ExtractedDoc], commands: &[String]) -> Result<Vec<LabeledExample>> {
    if commands.is_empty() {
        return Err(Error::InvalidArgument("command list is empty".into()));
    }
    Ok(docs
        .iter()
        .filter_map(|doc| {
            let positive = doc
                .spans
                .iter()
                .any(|s| commands.iter().any(|c| contains_command(&s.latex, c)));
            let text = strip_latex(&doc.text);
            if text.trim().is_empty() {
                return None;
            }
            let label = if positive { MATH_LABEL } else { OTHER_LABEL };
            Some(LabeledExample::new(text, label))
        })
        .collect())
}

/// One example per non-empty line, all with the same label.
pub fn labeled_lines(label: &str, text: &str) -> Vec<LabeledExample> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| LabeledExample::new(l, label))
        .collect()
}

#[cfg(test)]
mod tests {
    use chrono::Utc;

    use super::*;
    use crate::content::{ExtractionParams, OutputFormat};
    use crate::math::{MathSpan, SpanKind};
    use crate::resources::default_latex_symbols;

    fn doc(text: &str, latex: &[(&str, bool)]) -> ExtractedDoc {
        let spans = latex
            .iter()
            .map(|(l, display)| MathSpan {
                latex: l.to_string(),
                display: *display,
                kind: SpanKind::MathjaxInline,
                origin: 0..0,
                placeholder: String::new(),
            })
            .collect::<Vec<_>>();
        ExtractedDoc {
            text: text.into(),
            kind_counts: crate::content::kind_counts(&spans),
            spans,
            url: "http://x.example/".into(),
            fetch_time: Utc::now(),
            params: ExtractionParams::fixed(OutputFormat::Plain, 1),
            mathjax: crate::math::Detection::None,
            mathjax_config_error: false,
        }
    }

    #[test]
    fn positive_and_stripped() {
        let docs = [doc(r"We compute $\frac{a}{b}$ here.", &[(r"\frac{a}{b}", false)])];
        let out = build_mathscore_corpus(&docs, &default_latex_symbols()).unwrap();
        assert_eq!(out[0].label, MATH_LABEL);
        assert!(!out[0].text.contains(r"\frac"));
        assert_eq!(out[0].text, "We compute here.");
    }

    #[test]
    fn negative_unchanged() {
        let docs = [doc("Plain words only.", &[])];
        let out = build_mathscore_corpus(&docs, &default_latex_symbols()).unwrap();
        assert_eq!(out, vec![LabeledExample::new("Plain words only.", OTHER_LABEL)]);
    }

    #[test]
    fn math_only_doc_excluded() {
        let docs = [doc(r"$$\int_0^1 x\,dx$$", &[(r"\int_0^1 x\,dx", true)])];
        assert!(build_mathscore_corpus(&docs, &default_latex_symbols()).unwrap().is_empty());
    }

    #[test]
    fn formulas_without_listed_commands_are_negative() {
        let docs = [doc("Let $x+1$ be given.", &[("x+1", false)])];
        let out = build_mathscore_corpus(&docs, &default_latex_symbols()).unwrap();
        assert_eq!(out[0].label, OTHER_LABEL);
    }

    #[test]
    fn empty_command_list_rejected() {
        assert!(build_mathscore_corpus(&[], &[]).is_err());
    }
}
