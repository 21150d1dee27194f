//! Locating LaTeX in HTML, across every encoding seen on the web, and
//! swapping each formula for an opaque placeholder before the DOM is touched.

mod detect;
pub mod dollars;
mod extract;
mod mathml;

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

pub use detect::detect_mathjax_with;
pub use extract::{find_placeholders, MathExtraction, MathExtractor, RenderService, PLACEHOLDER_LEN, PLACEHOLDER_PREFIX};
pub use mathml::mathml_to_latex;

/// Where a formula was found. One variant per encoding family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpanKind {
    MathjaxInline,
    MathjaxDisplay,
    ScriptTag,
    AnnotationTag,
    Mathml,
    ImgUrl,
    ImgAlt,
    AlttextClass,
    MathContainer,
    EnvEquation,
    EnvAlign,
    WordpressPlugin,
}

impl SpanKind {
    pub const ALL: [SpanKind; 12] = [
        SpanKind::MathjaxInline,
        SpanKind::MathjaxDisplay,
        SpanKind::ScriptTag,
        SpanKind::AnnotationTag,
        SpanKind::Mathml,
        SpanKind::ImgUrl,
        SpanKind::ImgAlt,
        SpanKind::AlttextClass,
        SpanKind::MathContainer,
        SpanKind::EnvEquation,
        SpanKind::EnvAlign,
        SpanKind::WordpressPlugin,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SpanKind::MathjaxInline => "mathjax_inline",
            SpanKind::MathjaxDisplay => "mathjax_display",
            SpanKind::ScriptTag => "script_tag",
            SpanKind::AnnotationTag => "annotation_tag",
            SpanKind::Mathml => "mathml",
            SpanKind::ImgUrl => "img_url",
            SpanKind::ImgAlt => "img_alt",
            SpanKind::AlttextClass => "alttext_class",
            SpanKind::MathContainer => "math_container",
            SpanKind::EnvEquation => "env_equation",
            SpanKind::EnvAlign => "env_align",
            SpanKind::WordpressPlugin => "wordpress_plugin",
        }
    }
}

impl fmt::Display for SpanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MathSpan {
    pub latex: String,
    pub display: bool,
    pub kind: SpanKind,
    /// Byte range of the formula's encoding in the source HTML.
    pub origin: Range<usize>,
    /// Sentinel that stands in for the formula in rewritten HTML.
    pub placeholder: String,
}

impl MathSpan {
    /// `$latex$` or `$$latex$$`.
    pub fn delimited(&self) -> String {
        if self.display {
            format!("$${}$$", self.latex)
        } else {
            format!("${}$", self.latex)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Detection {
    ScriptImport,
    SymbolHeuristic,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MathJaxConfig {
    pub inline_delims: Vec<(String, String)>,
    pub display_delims: Vec<(String, String)>,
    pub detected: Detection,
    /// A configuration call was present but its delimiter arrays could not
    /// be read; defaults were used.
    pub config_error: bool,
}

impl MathJaxConfig {
    pub fn with_detection(detected: Detection) -> Self {
        Self {
            inline_delims: DEFAULT_INLINE
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            display_delims: DEFAULT_DISPLAY
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            detected,
            config_error: false,
        }
    }

    pub fn add_inline(&mut self, open: &str, close: &str) {
        push_unique(&mut self.inline_delims, open, close);
    }

    pub fn add_display(&mut self, open: &str, close: &str) {
        push_unique(&mut self.display_delims, open, close);
    }
}

fn push_unique(list: &mut Vec<(String, String)>, open: &str, close: &str) {
    if open.is_empty() || close.is_empty() {
        return;
    }
    if !list.iter().any(|(a, b)| a == open && b == close) {
        list.push((open.to_owned(), close.to_owned()));
    }
}

pub const DEFAULT_INLINE: &[(&str, &str)] = &[
    ("$", "$"),
    ("\\(", "\\)"),
    ("[itex]", "[/itex]"),
    ("[latex]", "[/latex]"),
];

pub const DEFAULT_DISPLAY: &[(&str, &str)] = &[
    ("$$", "$$"),
    ("\\[", "\\]"),
    ("[tex]", "[/tex]"),
    ("[math]", "[/math]"),
];
