use std::sync::OnceLock;

use regex::Regex;

use super::{Detection, MathJaxConfig};
use crate::markup;
use crate::resources;

fn delimiter_key_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r#"["']?\b(inlineMath|displayMath)["']?\s*:\s*"#).expect("valid regex")
    })
}

/// Decide whether a page should be treated as running MathJax and collect
/// the delimiters its configuration declares.
pub fn detect_mathjax_with(html: &str, symbols: &[String]) -> MathJaxConfig {
    let detected = if contains_ignore_ascii_case(html, "mathjax") {
        Detection::ScriptImport
    } else if html.contains('\\') && resources::first_command(&markup::rough_text(html), symbols).is_some() {
        Detection::SymbolHeuristic
    } else {
        Detection::None
    };
    let mut config = MathJaxConfig::with_detection(detected);
    if detected == Detection::ScriptImport {
        read_configured_delimiters(html, &mut config);
    }
    config
}

fn read_configured_delimiters(html: &str, config: &mut MathJaxConfig) {
    for caps in delimiter_key_regex().captures_iter(html) {
        let whole = caps.get(0).expect("match");
        let display = &caps[1] == "displayMath";
        match parse_pair_array(&html[whole.end()..]) {
            Some(pairs) => {
                for (open, close) in pairs {
                    if display {
                        config.add_display(&open, &close);
                    } else {
                        config.add_inline(&open, &close);
                    }
                }
            }
            None => {
                log::debug!("unreadable MathJax {} array", &caps[1]);
                config.config_error = true;
            }
        }
    }
}

/// Parse a JavaScript literal of the form `[['a','b'], ["c","d"]]`.
fn parse_pair_array(src: &str) -> Option<Vec<(String, String)>> {
    let mut p = JsCursor { s: src.as_bytes(), i: 0 };
    p.expect(b'[')?;
    let mut pairs = Vec::new();
    loop {
        p.skip_ws();
        match p.peek()? {
            b']' => return Some(pairs),
            b',' => {
                p.i += 1;
            }
            b'[' => {
                p.i += 1;
                let open = p.string()?;
                p.expect(b',')?;
                let close = p.string()?;
                p.expect(b']')?;
                pairs.push((open, close));
            }
            _ => return None,
        }
    }
}

struct JsCursor<'a> {
    s: &'a [u8],
    i: usize,
}

impl JsCursor<'_> {
    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.i).copied()
    }

    fn expect(&mut self, b: u8) -> Option<()> {
        self.skip_ws();
        (self.peek()? == b).then(|| self.i += 1)
    }

    fn string(&mut self) -> Option<String> {
        self.skip_ws();
        let quote = self.peek()?;
        if quote != b'\'' && quote != b'"' {
            return None;
        }
        self.i += 1;
        let mut out = Vec::new();
        loop {
            let b = self.peek()?;
            self.i += 1;
            match b {
                b'\\' => {
                    let esc = self.peek()?;
                    self.i += 1;
                    out.push(match esc {
                        b'n' => b'\n',
                        b't' => b'\t',
                        other => other,
                    });
                }
                b'\n' => return None,
                _ if b == quote => break,
                _ => out.push(b),
            }
        }
        String::from_utf8(out).ok()
    }
}

fn contains_ignore_ascii_case(haystack: &str, needle: &str) -> bool {
    let needle = needle.as_bytes();
    haystack
        .as_bytes()
        .windows(needle.len())
        .any(|w| w.eq_ignore_ascii_case(needle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::default_latex_symbols;

    fn detect(html: &str) -> MathJaxConfig {
        detect_mathjax_with(html, &default_latex_symbols())
    }

    fn has(list: &[(String, String)], open: &str, close: &str) -> bool {
        list.iter().any(|(a, b)| a == open && b == close)
    }

    #[test]
    fn script_import_with_config() {
        let html = r#"<script type="text/x-mathjax-config">
            MathJax.Hub.Config({tex2jax: {inlineMath: [['$','$'],['\\(','\\)']],
                                          displayMath: [["@@","@@"]]}});
            </script><script src="https://cdn.example/MathJax.js"></script>"#;
        let config = detect(html);
        assert_eq!(config.detected, Detection::ScriptImport);
        assert!(has(&config.inline_delims, "$", "$"));
        assert!(has(&config.inline_delims, "\\(", "\\)"));
        assert!(has(&config.display_delims, "@@", "@@"));
        assert!(has(&config.display_delims, "$$", "$$"), "defaults are kept");
        assert!(!config.config_error);
    }

    #[test]
    fn custom_inline_delimiters_are_appended() {
        let html = r#"<script>window.MathJax = { tex: { inlineMath: [['%%', '%%']] } };</script>"#;
        let config = detect(html);
        assert_eq!(config.inline_delims.last().unwrap(), &("%%".to_string(), "%%".to_string()));
        assert!(has(&config.inline_delims, "$", "$"));
    }

    #[test]
    fn absent() {
        let config = detect("<p>Let $E=mc^2$ hold.</p>");
        assert_eq!(config.detected, Detection::None);
    }

    #[test]
    fn symbol_heuristic() {
        let config = detect(r"<p>we have \alpha + \beta here</p>");
        assert_eq!(config.detected, Detection::SymbolHeuristic);
    }

    #[test]
    fn symbols_inside_scripts_do_not_count() {
        let config = detect(r"<script>var s = '\alpha';</script><p>plain</p>");
        assert_eq!(config.detected, Detection::None);
    }

    #[test]
    fn broken_config_falls_back_to_defaults() {
        let config = detect("<script>MathJax.Hub.Config({tex2jax: {inlineMath: [['$', $]]}})</script>");
        assert!(config.config_error);
        assert_eq!(config.inline_delims, MathJaxConfig::with_detection(Detection::ScriptImport).inline_delims);
    }
}
