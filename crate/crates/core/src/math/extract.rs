use std::ops::Range;

use url::Url;

use super::{mathml_to_latex, Detection, MathJaxConfig, MathSpan, SpanKind};
use crate::hash::{mix64, stable_hash};
use crate::markup::{self, decode_entities, matching_end, Tag, Token};
use crate::resources;

/// Every placeholder is this prefix followed by 16 lowercase hex digits.
pub const PLACEHOLDER_PREFIX: &str = "OWMPH";
pub const PLACEHOLDER_LEN: usize = PLACEHOLDER_PREFIX.len() + 16;

/// Longest formula accepted between single dollar signs.
const MAX_INLINE_DOLLAR_CHARS: usize = 500;

const ENVIRONMENTS: &[(&str, SpanKind)] = &[
    ("equation", SpanKind::EnvEquation),
    ("equation*", SpanKind::EnvEquation),
    ("align", SpanKind::EnvAlign),
    ("align*", SpanKind::EnvAlign),
];

/// A host that renders LaTeX from an image URL.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderService {
    pub host: String,
    /// Query parameter holding the formula; `None` means the whole query.
    pub param: Option<String>,
}

impl RenderService {
    pub fn parse_list(text: &str) -> Vec<RenderService> {
        resources::parse_list(text)
            .into_iter()
            .map(|line| {
                let mut parts = line.split_whitespace();
                RenderService {
                    host: parts.next().unwrap_or_default().to_ascii_lowercase(),
                    param: parts.next().map(str::to_owned),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct MathExtractor {
    symbols: Vec<String>,
    services: Vec<RenderService>,
}

impl Default for MathExtractor {
    fn default() -> Self {
        Self::new(
            resources::default_latex_symbols(),
            RenderService::parse_list(resources::RENDER_SERVICES),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MathExtraction {
    /// Source HTML with every formula replaced by its placeholder.
    pub html: String,
    /// In document order.
    pub spans: Vec<MathSpan>,
}

struct Found {
    origin: Range<usize>,
    latex: String,
    display: bool,
    kind: SpanKind,
}

#[derive(Default)]
struct Context {
    head: usize,
    skip: usize,
}

impl Context {
    fn enter(&mut self, tag: &Tag) {
        if tag.is_void() {
            return;
        }
        match tag.name.as_str() {
            "head" => self.head += 1,
            "body" => self.head = 0,
            "pre" | "code" | "noscript" | "kbd" | "samp" => self.skip += 1,
            _ => {}
        }
    }

    fn leave(&mut self, name: &str) {
        match name {
            "head" => self.head = self.head.saturating_sub(1),
            "pre" | "code" | "noscript" | "kbd" | "samp" => self.skip = self.skip.saturating_sub(1),
            _ => {}
        }
    }
}

impl MathExtractor {
    pub fn new(symbols: Vec<String>, services: Vec<RenderService>) -> Self {
        Self { symbols, services }
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn detect_mathjax(&self, html: &str) -> MathJaxConfig {
        super::detect_mathjax_with(html, &self.symbols)
    }

    /// Find every formula and replace it with a unique placeholder.
    pub fn extract_math(&self, html: &str, config: &MathJaxConfig) -> MathExtraction {
        let tokens = markup::tokenize(html);
        let delimiters = ordered_delimiters(config);
        let mut found = Vec::new();
        let mut ctx = Context::default();
        let mut i = 0;
        while i < tokens.len() {
            match &tokens[i] {
                Token::Start(tag) => {
                    if tag.name == "body" {
                        ctx.head = 0;
                    }
                    if ctx.head == 0 {
                        if let Some((span, end)) = self.element_span(html, &tokens, i) {
                            found.push(span);
                            i = end + 1;
                            continue;
                        }
                    }
                    ctx.enter(tag);
                }
                Token::End { name, .. } => ctx.leave(name),
                Token::Text { range, raw: false } if ctx.head == 0 && ctx.skip == 0 => {
                    scan_text(html, range.clone(), &delimiters, &mut found);
                }
                _ => {}
            }
            i += 1;
        }
        splice(html, found)
    }

    fn element_span(&self, html: &str, tokens: &[Token], i: usize) -> Option<(Found, usize)> {
        let Token::Start(tag) = &tokens[i] else {
            return None;
        };
        let whole = |end: usize| tag.range.start..tokens[end].range().end;
        match tag.name.as_str() {
            "script" => {
                let kind = tag.attr("type")?.to_ascii_lowercase();
                if !kind.starts_with("math/") {
                    return None;
                }
                let end = matching_end(tokens, i)?;
                let latex = clean_latex(&markup::inner_text(html, &tokens[i + 1..end]))?;
                let display = kind.contains("mode=display");
                Some((span_at(whole(end), latex, display, SpanKind::ScriptTag), end))
            }
            "math" => {
                let end = matching_end(tokens, i)?;
                let tree = markup::build_tree(html, &tokens[i..=end])?;
                let display = tag.attr("display").is_some_and(|d| d.eq_ignore_ascii_case("block"))
                    || tag.attr("mode").is_some_and(|d| d.eq_ignore_ascii_case("display"));
                let (latex, kind) = if let Some(tex) = tex_annotation(&tree).and_then(|t| clean_latex(&t)) {
                    (tex, SpanKind::AnnotationTag)
                } else if let Some(alt) = tag.attr("alttext").and_then(|a| clean_latex(&a)) {
                    (alt, SpanKind::AlttextClass)
                } else {
                    (clean_latex(&mathml_to_latex(&tree))?, SpanKind::Mathml)
                };
                Some((span_at(whole(end), latex, display, kind), end))
            }
            "img" => {
                let (latex, kind) = self.image_formula(tag)?;
                let latex = clean_latex(&latex)?;
                let end = matching_end(tokens, i).unwrap_or(i);
                Some((span_at(whole(end), latex, false, kind), end))
            }
            _ if tag.has_class("tex") => {
                let alt = tag.attr("alttext").or_else(|| tag.attr("alt"))?;
                let latex = clean_latex(&alt)?;
                let end = matching_end(tokens, i).unwrap_or(i);
                Some((span_at(whole(end), latex, false, SpanKind::AlttextClass), end))
            }
            _ if tag.has_class("math-container") => {
                let end = matching_end(tokens, i)?;
                let text = markup::inner_text(html, &tokens[i + 1..end]);
                let (body, display) = strip_delimiters(text.trim());
                let latex = clean_latex(body)?;
                Some((span_at(whole(end), latex, display, SpanKind::MathContainer), end))
            }
            _ => None,
        }
    }

    fn image_formula(&self, tag: &Tag) -> Option<(String, SpanKind)> {
        if let Some(src) = tag.attr("src") {
            let base = Url::parse("http://localhost/").expect("static url");
            if let Ok(url) = base.join(src.trim()) {
                let host = url.host_str().unwrap_or_default().to_ascii_lowercase();
                if let Some(service) = self.services.iter().find(|s| s.host == host) {
                    let formula = match &service.param {
                        Some(param) => query_param(&url, param),
                        None => url.query().map(percent_decode),
                    };
                    if let Some(formula) = formula.filter(|f| !f.trim().is_empty()) {
                        return Some((formula, SpanKind::ImgUrl));
                    }
                }
                if url.path().ends_with("latex.php") {
                    if let Some(formula) = query_param(&url, "latex") {
                        return Some((formula, SpanKind::WordpressPlugin));
                    }
                }
            }
        }
        if tag.has_class("tex") {
            if let Some(alt) = tag.attr("alttext").or_else(|| tag.attr("alt")) {
                return Some((alt.into_owned(), SpanKind::AlttextClass));
            }
        }
        let alt = tag.attr("alt")?;
        let alt = alt.trim();
        let (body, _) = strip_delimiters(alt);
        let delimited = body.len() < alt.len();
        (delimited || has_command(body)).then(|| (body.to_owned(), SpanKind::ImgAlt))
    }
}

fn span_at(origin: Range<usize>, latex: String, display: bool, kind: SpanKind) -> Found {
    Found {
        origin,
        latex,
        display,
        kind,
    }
}

fn tex_annotation(tree: &markup::Element) -> Option<String> {
    if tree.name == "annotation"
        && tree
            .attr("encoding")
            .is_some_and(|e| e.to_ascii_lowercase().contains("tex"))
    {
        return Some(tree.text());
    }
    tree.child_elements().find_map(tex_annotation)
}

fn query_param(url: &Url, name: &str) -> Option<String> {
    url.query_pairs()
        .find(|(k, _)| k == name)
        .map(|(_, v)| v.into_owned())
}

/// Percent-decoding without the form rule that turns `+` into a space:
/// in a LaTeX query `+` is an operator.
fn percent_decode(query: &str) -> String {
    let bytes = query.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' && i + 2 < bytes.len() {
            let hex = std::str::from_utf8(&bytes[i + 1..i + 3]).ok();
            if let Some(v) = hex.and_then(|h| u8::from_str_radix(h, 16).ok()) {
                out.push(v);
                i += 3;
                continue;
            }
        }
        out.push(bytes[i]);
        i += 1;
    }
    String::from_utf8_lossy(&out).into_owned()
}

fn has_command(s: &str) -> bool {
    let b = s.as_bytes();
    b.windows(2).any(|w| w[0] == b'\\' && w[1].is_ascii_alphabetic())
}

/// Strip one layer of `$…$`, `$$…$$`, `\(…\)` or `\[…\]`.
fn strip_delimiters(s: &str) -> (&str, bool) {
    for (open, close, display) in [("$$", "$$", true), ("\\[", "\\]", true), ("\\(", "\\)", false), ("$", "$", false)] {
        if s.len() >= open.len() + close.len() && s.starts_with(open) && s.ends_with(close) {
            return (&s[open.len()..s.len() - close.len()], display);
        }
    }
    (s, false)
}

/// Trim, drop empties, and escape bare dollar signs so a formula can always
/// be re-delimited with `$`.
fn clean_latex(raw: &str) -> Option<String> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return None;
    }
    let mut out = super::dollars::escape_dollars(trimmed);
    if super::dollars::ends_with_lone_backslash(&out) {
        // `\ ` is a control space; trimming must not leave a dangling escape.
        out.push(' ');
    }
    Some(out)
}

struct Delimiter {
    open: String,
    close: String,
    display: bool,
}

fn ordered_delimiters(config: &MathJaxConfig) -> Vec<Delimiter> {
    if config.detected == Detection::None {
        return Vec::new();
    }
    let mut all: Vec<Delimiter> = config
        .display_delims
        .iter()
        .map(|(o, c)| (o, c, true))
        .chain(config.inline_delims.iter().map(|(o, c)| (o, c, false)))
        .map(|(o, c, display)| Delimiter {
            open: o.clone(),
            close: c.clone(),
            display,
        })
        .collect();
    // Longest opener first; stable, so display pairs win ties.
    all.sort_by_key(|d| std::cmp::Reverse(d.open.len()));
    all
}

fn scan_text(html: &str, range: Range<usize>, delimiters: &[Delimiter], found: &mut Vec<Found>) {
    let text = &html[range.clone()];
    let base = range.start;
    let bytes = text.as_bytes();
    let mut p = 0;
    'outer: while p < bytes.len() {
        if bytes[p] == b'\\' && bytes.get(p + 1) == Some(&b'$') {
            p += 2;
            continue;
        }
        if text[p..].starts_with("\\begin{") {
            if let Some((end, kind)) = environment_end(text, p) {
                if let Some(latex) = clean_latex(&decode_entities(&text[p..end])) {
                    found.push(span_at(base + p..base + end, latex, true, kind));
                    p = end;
                    continue;
                }
            }
        }
        for delim in delimiters {
            if !text[p..].starts_with(delim.open.as_str()) {
                continue;
            }
            let body_start = p + delim.open.len();
            let Some(close) = find_close(text, body_start, &delim.close) else {
                continue;
            };
            let body = &text[body_start..close];
            if !acceptable(body, delim) {
                continue;
            }
            let Some(latex) = clean_latex(&decode_entities(body)) else {
                continue;
            };
            let end = close + delim.close.len();
            let kind = if delim.display {
                SpanKind::MathjaxDisplay
            } else {
                SpanKind::MathjaxInline
            };
            found.push(span_at(base + p..base + end, latex, delim.display, kind));
            p = end;
            continue 'outer;
        }
        p += text[p..].chars().next().map_or(1, char::len_utf8);
    }
}

fn environment_end(text: &str, p: usize) -> Option<(usize, SpanKind)> {
    let rest = &text[p + "\\begin{".len()..];
    let name_end = rest.find('}')?;
    let name = &rest[..name_end];
    let kind = ENVIRONMENTS.iter().find(|(n, _)| *n == name)?.1;
    let close = format!("\\end{{{name}}}");
    let body_start = p + "\\begin{".len() + name_end + 1;
    let end = text[body_start..].find(&close)? + body_start + close.len();
    Some((end, kind))
}

/// Next unescaped occurrence of `close` at or after `from`.
fn find_close(text: &str, from: usize, close: &str) -> Option<usize> {
    let mut at = from;
    loop {
        let pos = text[at..].find(close)? + at;
        let escaped = close.starts_with('$') && pos > 0 && text.as_bytes()[pos - 1] == b'\\';
        if !escaped {
            return Some(pos);
        }
        at = pos + close.len();
    }
}

fn acceptable(body: &str, delim: &Delimiter) -> bool {
    if body.trim().is_empty() || body.contains(super::PLACEHOLDER_PREFIX) {
        return false;
    }
    if delim.open == "$" {
        return !body.contains('\n') && body.chars().count() <= MAX_INLINE_DOLLAR_CHARS;
    }
    true
}

fn placeholder(nonce: u64, index: usize, salt: u64) -> String {
    let bits = mix64(nonce ^ mix64(index as u64 + 1) ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    format!("{PLACEHOLDER_PREFIX}{bits:016x}")
}

fn splice(html: &str, found: Vec<Found>) -> MathExtraction {
    let nonce = stable_hash(html.as_bytes());
    let mut out = String::with_capacity(html.len());
    let mut spans = Vec::with_capacity(found.len());
    let mut last = 0;
    let mut salt = 0u64;
    for (index, f) in found.into_iter().enumerate() {
        let mut token = placeholder(nonce, index, salt);
        while html.contains(&token) || spans.iter().any(|s: &MathSpan| s.placeholder == token) {
            salt += 1;
            token = placeholder(nonce, index, salt);
        }
        out.push_str(&html[last..f.origin.start]);
        out.push_str(&token);
        last = f.origin.end;
        spans.push(MathSpan {
            latex: f.latex,
            display: f.display,
            kind: f.kind,
            origin: f.origin,
            placeholder: token,
        });
    }
    out.push_str(&html[last..]);
    MathExtraction { html: out, spans }
}

/// Placeholder tokens present in `text`, in order.
pub fn find_placeholders(text: &str) -> impl Iterator<Item = (usize, &str)> + '_ {
    text.match_indices(PLACEHOLDER_PREFIX).filter_map(move |(at, _)| {
        let candidate = text.get(at..at + PLACEHOLDER_LEN)?;
        candidate[PLACEHOLDER_PREFIX.len()..]
            .bytes()
            .all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b))
            .then_some((at, candidate))
    })
}
