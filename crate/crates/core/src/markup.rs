//! Lenient HTML tokenizer that keeps source byte offsets.
//!
//! Math extraction has to rewrite the original markup in place, so it works
//! on tokens that know where they came from rather than on a parsed DOM.
//! The same tokens also give the cheap "rough" plain text used by the
//! prefilter, and a tiny element tree for MathML subtrees.

use std::borrow::Cow;
use std::ops::Range;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Text {
        range: Range<usize>,
        /// Content of `<script>`, `<style>`, `<textarea>` or `<title>`.
        raw: bool,
    },
    Start(Tag),
    End {
        name: String,
        range: Range<usize>,
    },
    /// Comments, doctypes, processing instructions.
    Other {
        range: Range<usize>,
    },
}

impl Token {
    pub fn range(&self) -> Range<usize> {
        match self {
            Token::Text { range, .. } | Token::End { range, .. } | Token::Other { range } => {
                range.clone()
            }
            Token::Start(tag) => tag.range.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tag {
    pub name: String,
    /// Attribute names lowercased; values still entity-encoded.
    pub attrs: Vec<(String, String)>,
    pub self_closing: bool,
    pub range: Range<usize>,
}

impl Tag {
    pub fn attr(&self, name: &str) -> Option<Cow<'_, str>> {
        self.attrs
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| decode_entities(v))
    }

    pub fn has_class(&self, class: &str) -> bool {
        self.attr("class")
            .is_some_and(|c| c.split_ascii_whitespace().any(|t| t.eq_ignore_ascii_case(class)))
    }

    pub fn is_void(&self) -> bool {
        self.self_closing || is_void_element(&self.name)
    }
}

pub fn is_void_element(name: &str) -> bool {
    matches!(
        name,
        "area" | "base" | "br" | "col" | "embed" | "hr" | "img" | "input" | "link" | "meta"
            | "param" | "source" | "track" | "wbr"
    )
}

fn is_raw_text_element(name: &str) -> bool {
    matches!(name, "script" | "style" | "textarea" | "title")
}

pub fn decode_entities(s: &str) -> Cow<'_, str> {
    if s.contains('&') {
        html_escape::decode_html_entities(s)
    } else {
        Cow::Borrowed(s)
    }
}

pub fn tokenize(html: &str) -> Vec<Token> {
    let bytes = html.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    let mut text_start = 0;

    let flush_text = |tokens: &mut Vec<Token>, start: usize, end: usize| {
        if end > start {
            tokens.push(Token::Text {
                range: start..end,
                raw: false,
            });
        }
    };

    while pos < bytes.len() {
        if bytes[pos] != b'<' {
            pos += memchr(b'<', &bytes[pos..]).unwrap_or(bytes.len() - pos);
            continue;
        }
        let rest = &bytes[pos..];
        if rest.starts_with(b"<!--") {
            flush_text(&mut tokens, text_start, pos);
            let end = find(&bytes[pos + 4..], b"-->").map_or(bytes.len(), |i| pos + 4 + i + 3);
            tokens.push(Token::Other { range: pos..end });
            pos = end;
            text_start = pos;
        } else if rest.starts_with(b"<!") || rest.starts_with(b"<?") {
            flush_text(&mut tokens, text_start, pos);
            let end = memchr(b'>', rest).map_or(bytes.len(), |i| pos + i + 1);
            tokens.push(Token::Other { range: pos..end });
            pos = end;
            text_start = pos;
        } else if rest.len() > 2 && rest[1] == b'/' && rest[2].is_ascii_alphabetic() {
            flush_text(&mut tokens, text_start, pos);
            let name_end = pos + 2 + name_len(&rest[2..]);
            let end = memchr(b'>', &bytes[name_end..]).map_or(bytes.len(), |i| name_end + i + 1);
            tokens.push(Token::End {
                name: html[pos + 2..name_end].to_ascii_lowercase(),
                range: pos..end,
            });
            pos = end;
            text_start = pos;
        } else if rest.len() > 1 && rest[1].is_ascii_alphabetic() {
            flush_text(&mut tokens, text_start, pos);
            let tag = parse_start_tag(html, pos);
            pos = tag.range.end;
            text_start = pos;
            let raw = is_raw_text_element(&tag.name) && !tag.self_closing;
            let name = tag.name.clone();
            tokens.push(Token::Start(tag));
            if raw {
                let close = find_end_tag(bytes, pos, &name).unwrap_or(bytes.len());
                if close > pos {
                    tokens.push(Token::Text {
                        range: pos..close,
                        raw: true,
                    });
                }
                pos = close;
                text_start = pos;
            }
        } else {
            pos += 1;
        }
    }
    flush_text(&mut tokens, text_start, bytes.len());
    tokens
}

fn name_len(bytes: &[u8]) -> usize {
    bytes
        .iter()
        .position(|&b| b.is_ascii_whitespace() || b == b'>' || b == b'/')
        .unwrap_or(bytes.len())
}

fn parse_start_tag(html: &str, start: usize) -> Tag {
    let bytes = html.as_bytes();
    let name_end = start + 1 + name_len(&bytes[start + 1..]);
    let name = html[start + 1..name_end].to_ascii_lowercase();
    let mut attrs = Vec::new();
    let mut i = name_end;
    let mut self_closing = false;
    loop {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i >= bytes.len() {
            break;
        }
        match bytes[i] {
            b'>' => {
                i += 1;
                break;
            }
            b'/' => {
                i += 1;
                if bytes.get(i) == Some(&b'>') {
                    self_closing = true;
                }
                continue;
            }
            _ => {}
        }
        let attr_start = i;
        while i < bytes.len()
            && !bytes[i].is_ascii_whitespace()
            && !matches!(bytes[i], b'=' | b'>')
            && !(bytes[i] == b'/' && bytes.get(i + 1) == Some(&b'>'))
        {
            i += 1;
        }
        let attr_name = html[attr_start..i].to_ascii_lowercase();
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        let mut value = String::new();
        if bytes.get(i) == Some(&b'=') {
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            match bytes.get(i) {
                Some(&q @ (b'"' | b'\'')) => {
                    let vstart = i + 1;
                    let vend = memchr(q, &bytes[vstart..]).map_or(bytes.len(), |e| vstart + e);
                    value = html[vstart..vend].to_owned();
                    i = (vend + 1).min(bytes.len());
                }
                Some(_) => {
                    let vstart = i;
                    while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'>' {
                        i += 1;
                    }
                    value = html[vstart..i].to_owned();
                }
                None => {}
            }
        }
        if !attr_name.is_empty() {
            attrs.push((attr_name, value));
        } else if i == attr_start {
            i += 1;
        }
    }
    Tag {
        name,
        attrs,
        self_closing,
        range: start..i.min(bytes.len()),
    }
}

/// Offset of the `</name` that closes a raw-text element opened before `from`.
fn find_end_tag(bytes: &[u8], from: usize, name: &str) -> Option<usize> {
    let mut i = from;
    while let Some(off) = find(&bytes[i..], b"</") {
        let at = i + off;
        let candidate = &bytes[at + 2..];
        if candidate.len() >= name.len()
            && candidate[..name.len()].eq_ignore_ascii_case(name.as_bytes())
            && candidate
                .get(name.len())
                .is_none_or(|b| b.is_ascii_whitespace() || *b == b'>' || *b == b'/')
        {
            return Some(at);
        }
        i = at + 2;
    }
    None
}

fn memchr(needle: u8, haystack: &[u8]) -> Option<usize> {
    haystack.iter().position(|&b| b == needle)
}

fn find(haystack: &[u8], needle: &[u8]) -> Option<usize> {
    if needle.len() > haystack.len() {
        return None;
    }
    haystack.windows(needle.len()).position(|w| w == needle)
}

/// Index of the end token matching the start tag at `start`, honouring
/// nesting of same-named elements. `None` for void or unclosed elements.
pub fn matching_end(tokens: &[Token], start: usize) -> Option<usize> {
    let Token::Start(open) = &tokens[start] else {
        return None;
    };
    if open.is_void() {
        return None;
    }
    let mut depth = 0usize;
    for (i, token) in tokens.iter().enumerate().skip(start + 1) {
        match token {
            Token::Start(tag) if tag.name == open.name && !tag.is_void() => depth += 1,
            Token::End { name, .. } if *name == open.name => {
                if depth == 0 {
                    return Some(i);
                }
                depth -= 1;
            }
            _ => {}
        }
    }
    None
}

/// Decoded text of the tokens in `range`, tags dropped.
pub fn inner_text(html: &str, tokens: &[Token]) -> String {
    let mut out = String::new();
    for token in tokens {
        if let Token::Text { range, .. } = token {
            out.push_str(&decode_entities(&html[range.clone()]));
        }
    }
    out
}

/// Tags stripped, entities decoded, script and style bodies dropped. No
/// boilerplate removal.
pub fn rough_text(html: &str) -> String {
    let tokens = tokenize(html);
    let mut out = String::with_capacity(html.len() / 2);
    let mut skip = false;
    for token in &tokens {
        match token {
            Token::Start(tag) => {
                skip = matches!(tag.name.as_str(), "script" | "style");
                out.push(' ');
            }
            Token::End { .. } => out.push(' '),
            Token::Text { range, raw } => {
                if !(*raw && skip) {
                    out.push_str(&decode_entities(&html[range.clone()]));
                }
            }
            Token::Other { .. } => {}
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Element(Element),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element {
    pub name: String,
    pub attrs: Vec<(String, String)>,
    pub children: Vec<Node>,
}

impl Element {
    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        collect_text(&self.children, &mut out);
        out
    }

    pub fn child_elements(&self) -> impl Iterator<Item = &Element> {
        self.children.iter().filter_map(|n| match n {
            Node::Element(e) => Some(e),
            Node::Text(_) => None,
        })
    }
}

fn collect_text(nodes: &[Node], out: &mut String) {
    for node in nodes {
        match node {
            Node::Text(t) => out.push_str(t),
            Node::Element(e) => collect_text(&e.children, out),
        }
    }
}

/// Build an element tree from a token slice whose first token is a start
/// tag. Mismatched end tags close up to the nearest open element of that name
/// or are ignored; names are compared without namespace prefixes (`m:mi`).
pub fn build_tree(html: &str, tokens: &[Token]) -> Option<Element> {
    let mut stack: Vec<Element> = Vec::new();
    let mut root: Option<Element> = None;
    for token in tokens {
        match token {
            Token::Start(tag) => {
                let element = Element {
                    name: local_name(&tag.name).to_owned(),
                    attrs: tag
                        .attrs
                        .iter()
                        .map(|(k, v)| (k.clone(), decode_entities(v).into_owned()))
                        .collect(),
                    children: Vec::new(),
                };
                if tag.is_void() {
                    match stack.last_mut() {
                        Some(parent) => parent.children.push(Node::Element(element)),
                        None => return Some(element),
                    }
                } else {
                    stack.push(element);
                }
            }
            Token::End { name, .. } => {
                let name = local_name(name);
                if let Some(pos) = stack.iter().rposition(|e| e.name == name) {
                    while stack.len() > pos {
                        let done = stack.pop().expect("non-empty stack");
                        match stack.last_mut() {
                            Some(parent) => parent.children.push(Node::Element(done)),
                            None => root = Some(done),
                        }
                    }
                    if root.is_some() {
                        break;
                    }
                }
            }
            Token::Text { range, .. } => {
                if let Some(parent) = stack.last_mut() {
                    parent
                        .children
                        .push(Node::Text(decode_entities(&html[range.clone()]).into_owned()));
                }
            }
            Token::Other { .. } => {}
        }
    }
    while let Some(done) = stack.pop() {
        match stack.last_mut() {
            Some(parent) => parent.children.push(Node::Element(done)),
            None => root = Some(done),
        }
    }
    root
}

fn local_name(name: &str) -> &str {
    name.rsplit(':').next().unwrap_or(name)
}
