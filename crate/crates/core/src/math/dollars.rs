//! Dollar-sign conventions for extracted text.
//!
//! A backslash always escapes the character after it, so `\\` is a literal
//! backslash pair and `\$` a literal dollar. Every other `$` delimits math:
//! `$$…$$` for display and `$…$` for inline formulas.

use std::ops::Range;

/// A formula found in delimited text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelimitedMath {
    pub latex: String,
    pub display: bool,
    /// Byte range including the delimiters.
    pub range: Range<usize>,
}

/// Prefix every unescaped `$` with a backslash.
pub fn escape_dollars(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 4);
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => {
                out.push('\\');
                if let Some(next) = chars.next() {
                    out.push(next);
                }
            }
            '$' => out.push_str("\\$"),
            _ => out.push(c),
        }
    }
    out
}

/// True when `text` ends in a backslash that escapes nothing.
pub fn ends_with_lone_backslash(text: &str) -> bool {
    text.bytes().rev().take_while(|&b| b == b'\\').count() % 2 == 1
}

/// Number of `$` characters that are not escaped.
pub fn count_unescaped(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut n = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => i += 2,
            b'$' => {
                n += 1;
                i += 1;
            }
            _ => i += 1,
        }
    }
    n
}

fn next_unescaped(bytes: &[u8], mut i: usize, double: bool) -> Option<usize> {
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => i += 2,
            b'$' if !double => return Some(i),
            b'$' if bytes.get(i + 1) == Some(&b'$') => return Some(i),
            _ => i += 1,
        }
    }
    None
}

/// Every delimited formula in `text`, left to right. A dangling opener is
/// treated as literal text.
pub fn scan_delimited(text: &str) -> Vec<DelimitedMath> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while let Some(open) = next_unescaped(bytes, i, false) {
        let display = bytes.get(open + 1) == Some(&b'$');
        let body_start = open + if display { 2 } else { 1 };
        match next_unescaped(bytes, body_start, display) {
            Some(close) if close > body_start => {
                let end = close + if display { 2 } else { 1 };
                out.push(DelimitedMath {
                    latex: text[body_start..close].to_owned(),
                    display,
                    range: open..end,
                });
                i = end;
            }
            _ => i = body_start,
        }
    }
    out
}

/// `text` with every delimited formula removed.
pub fn strip_delimited(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut last = 0;
    for span in scan_delimited(text) {
        out.push_str(&text[last..span.range.start]);
        last = span.range.end;
    }
    out.push_str(&text[last..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escaping() {
        assert_eq!(escape_dollars("It costs $5 today"), r"It costs \$5 today");
        assert_eq!(escape_dollars(r"already \$5"), r"already \$5");
        assert_eq!(escape_dollars(r"pair \\$"), r"pair \\\$");
    }

    #[test]
    fn scanning() {
        let spans = scan_delimited(r"a $x^2$ and $$\sum$$ plus \$3 and $a$$b$");
        let latex: Vec<(&str, bool)> = spans.iter().map(|s| (s.latex.as_str(), s.display)).collect();
        assert_eq!(latex, vec![("x^2", false), (r"\sum", true), ("a", false), ("b", false)]);
        assert_eq!(scan_delimited(r"$a\\$").len(), 1);
        assert_eq!(scan_delimited(r"$a\$").len(), 0);
    }

    #[test]
    fn stripping() {
        assert_eq!(strip_delimited(r"keep $x$ this \$ too"), r"keep  this \$ too");
        assert_eq!(count_unescaped(r"$a$ \$ $$b$$"), 6);
        assert!(ends_with_lone_backslash(r"a\"));
        assert!(!ends_with_lone_backslash(r"a\\"));
    }
}
