//! Main-content selection by block text density, then serialization to
//! lines in plain or Markdown form.

use super::dom::{Annotation, Element, Node};
use super::{Line, LineKind, OutputFormat};
use crate::math::PLACEHOLDER_PREFIX;

/// Blocks with a larger share of characters inside links are boilerplate.
pub const MAX_LINK_DENSITY: f64 = 0.25;
/// Blocks below this many characters per tag are treated as furniture.
const MIN_CHARS_PER_TAG: f64 = 10.0;
/// Blocks at least this long anchor the main-content region.
const ANCHOR_CHARS: usize = 80;

const BLOCK_TAGS: &[&str] = &[
    "address", "article", "blockquote", "body", "caption", "center", "dd", "details", "dialog",
    "div", "dl", "dt", "fieldset", "figcaption", "figure", "form", "h1", "h2", "h3", "h4", "h5",
    "h6", "header", "hgroup", "html", "li", "main", "ol", "p", "pre", "section", "summary",
    "table", "tbody", "td", "tfoot", "th", "thead", "tr", "ul",
];

#[derive(Debug, Clone, PartialEq)]
enum Body {
    Text(String),
    Code(String),
    Table(Vec<Vec<String>>),
}

#[derive(Debug, Clone)]
struct Block {
    kind: LineKind,
    body: Body,
    chars: usize,
    link_chars: usize,
    tags: usize,
    /// Indices of the block elements enclosing this block, outermost first.
    path: Vec<usize>,
    placeholder: bool,
}

impl Block {
    fn link_density(&self) -> f64 {
        if self.chars == 0 {
            0.0
        } else {
            self.link_chars as f64 / self.chars as f64
        }
    }

    fn is_content(&self) -> bool {
        if self.placeholder {
            return true;
        }
        if self.chars == 0 || self.link_density() > MAX_LINK_DENSITY {
            return false;
        }
        match self.kind {
            LineKind::Header(_) | LineKind::Code | LineKind::Table => true,
            _ => self.chars as f64 / self.tags as f64 >= MIN_CHARS_PER_TAG,
        }
    }
}

#[derive(Default)]
struct Inline {
    text: String,
    link_chars: usize,
    tags: usize,
}

struct Walker {
    blocks: Vec<Block>,
    path: Vec<usize>,
    next_id: usize,
    current: Inline,
    list_item: bool,
}

impl Walker {
    fn flush(&mut self) {
        let inline = std::mem::take(&mut self.current);
        let text = collapse_ws(&inline.text);
        if text.is_empty() {
            return;
        }
        let kind = if self.list_item { LineKind::ListItem } else { LineKind::Text };
        self.push(kind, Body::Text(text), inline.link_chars, inline.tags + 1);
    }

    fn push(&mut self, kind: LineKind, body: Body, link_chars: usize, tags: usize) {
        let (chars, placeholder) = match &body {
            Body::Text(t) | Body::Code(t) => (t.chars().count(), t.contains(PLACEHOLDER_PREFIX)),
            Body::Table(rows) => {
                let all: String = rows.iter().flatten().map(String::as_str).collect();
                (all.chars().count(), all.contains(PLACEHOLDER_PREFIX))
            }
        };
        self.blocks.push(Block {
            kind,
            body,
            chars,
            link_chars,
            tags: tags.max(1),
            path: self.path.clone(),
            placeholder,
        });
    }

    fn walk(&mut self, el: &Element, in_link: bool) {
        match el.annotation {
            Some(Annotation::Code) if el.name == "pre" => {
                self.flush();
                let code = el.text();
                let code = code.trim_matches('\n').to_owned();
                if !code.trim().is_empty() {
                    self.push(LineKind::Code, Body::Code(code), 0, 1);
                }
                return;
            }
            Some(Annotation::Table) if is_data_table(el) => {
                self.flush();
                let rows = table_rows(el);
                if !rows.is_empty() {
                    let (link_chars, tags) = link_stats(el);
                    self.push(LineKind::Table, Body::Table(rows), link_chars, tags);
                }
                return;
            }
            Some(Annotation::Header(level)) => {
                self.flush();
                let text = collapse_ws(&el.text());
                if !text.is_empty() {
                    let (link_chars, _) = link_stats(el);
                    self.push(LineKind::Header(level), Body::Text(text), link_chars, 1);
                }
                return;
            }
            _ => {}
        }
        if el.name == "br" || el.name == "hr" {
            self.flush();
            return;
        }
        let is_block = BLOCK_TAGS.contains(&el.name.as_str());
        let saved_list = self.list_item;
        if is_block {
            self.flush();
            self.path.push(self.next_id);
            self.next_id += 1;
            if el.name == "li" {
                self.list_item = true;
            } else if matches!(el.name.as_str(), "ul" | "ol" | "div" | "p" | "section" | "article") {
                self.list_item = false;
            }
        } else {
            self.current.tags += 1;
        }
        let in_link = in_link || el.name == "a";
        for child in &el.children {
            match child {
                Node::Text(t) => {
                    if in_link {
                        self.current.link_chars += t.chars().filter(|c| !c.is_whitespace()).count();
                    }
                    self.current.text.push_str(t);
                }
                Node::Element(e) => self.walk(e, in_link),
            }
        }
        if is_block {
            self.flush();
            self.path.pop();
            self.list_item = saved_list;
        }
    }
}

fn link_stats(el: &Element) -> (usize, usize) {
    fn go(el: &Element, in_link: bool, links: &mut usize, tags: &mut usize) {
        *tags += 1;
        let in_link = in_link || el.name == "a";
        for child in &el.children {
            match child {
                Node::Text(t) if in_link => *links += t.chars().filter(|c| !c.is_whitespace()).count(),
                Node::Text(_) => {}
                Node::Element(e) => go(e, in_link, links, tags),
            }
        }
    }
    let (mut links, mut tags) = (0, 0);
    go(el, false, &mut links, &mut tags);
    (links, tags)
}

/// Tables used for page layout hold paragraphs, lists or other tables and
/// are walked like any other container.
fn is_data_table(table: &Element) -> bool {
    fn has_structure(el: &Element) -> bool {
        el.children.iter().any(|c| match c {
            Node::Element(e) => {
                matches!(
                    e.name.as_str(),
                    "table" | "p" | "div" | "ul" | "ol" | "pre" | "blockquote" | "h1" | "h2" | "h3" | "h4" | "h5" | "h6"
                ) || has_structure(e)
            }
            Node::Text(_) => false,
        })
    }
    !has_structure(table)
}

fn table_rows(table: &Element) -> Vec<Vec<String>> {
    fn rows<'a>(el: &'a Element, out: &mut Vec<&'a Element>) {
        for child in &el.children {
            if let Node::Element(e) = child {
                if e.name == "tr" {
                    out.push(e);
                } else {
                    rows(e, out);
                }
            }
        }
    }
    let mut trs = Vec::new();
    rows(table, &mut trs);
    trs.into_iter()
        .map(|tr| {
            tr.children
                .iter()
                .filter_map(|c| match c {
                    Node::Element(e) if e.name == "td" || e.name == "th" => Some(collapse_ws(&e.text())),
                    _ => None,
                })
                .collect::<Vec<_>>()
        })
        .filter(|cells| cells.iter().any(|c| !c.is_empty()))
        .collect()
}

pub(crate) fn collapse_ws(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Choose the main-content blocks of a cleaned tree and serialize them.
pub fn extract_main_text(tree: &Element, format: OutputFormat) -> Vec<Line> {
    let mut walker = Walker {
        blocks: Vec::new(),
        path: Vec::new(),
        next_id: 0,
        current: Inline::default(),
        list_item: false,
    };
    walker.walk(tree, false);
    walker.flush();
    let blocks = walker.blocks;

    let content: Vec<bool> = blocks.iter().map(Block::is_content).collect();
    // Long prose blocks anchor the region; placeholder blocks are kept
    // regardless, so they only anchor when nothing else can.
    let mut anchors: Vec<&Block> = blocks
        .iter()
        .zip(&content)
        .filter(|(b, &c)| c && !b.placeholder && b.chars >= ANCHOR_CHARS)
        .map(|(b, _)| b)
        .collect();
    if anchors.is_empty() {
        anchors = blocks
            .iter()
            .zip(&content)
            .filter(|(b, &c)| c && matches!(b.kind, LineKind::Text | LineKind::ListItem))
            .map(|(b, _)| b)
            .collect();
    }
    let mut region: Option<Vec<usize>> = None;
    for block in anchors {
        region = Some(match region {
            // The container of the anchor, not the anchor itself.
            None => block.path[..block.path.len().saturating_sub(1)].to_vec(),
            Some(r) => {
                let n = common_prefix(&r, &block.path);
                r[..n].to_vec()
            }
        });
    }
    let Some(region) = region else {
        return blocks
            .iter()
            .filter(|b| b.placeholder)
            .flat_map(|b| serialize(b, format))
            .collect();
    };

    blocks
        .iter()
        .zip(&content)
        .filter(|(b, &c)| b.placeholder || (c && b.path.starts_with(&region)))
        .flat_map(|(b, _)| serialize(b, format))
        .collect()
}

fn serialize(block: &Block, format: OutputFormat) -> Vec<Line> {
    let line = |kind: LineKind, text: String| Line { kind, text };
    match (&block.body, format) {
        (Body::Text(t), OutputFormat::Markdown) => vec![match block.kind {
            LineKind::Header(level) => line(block.kind, format!("{} {t}", "#".repeat(level as usize))),
            LineKind::ListItem => line(block.kind, format!("- {t}")),
            kind => line(kind, t.clone()),
        }],
        (Body::Text(t), OutputFormat::Plain) => vec![line(block.kind, t.clone())],
        (Body::Code(code), OutputFormat::Plain) => code.lines().map(|l| line(LineKind::Code, l.to_owned())).collect(),
        (Body::Code(code), OutputFormat::Markdown) => {
            let mut out = vec![line(LineKind::Code, "```".into())];
            out.extend(code.lines().map(|l| line(LineKind::Code, l.to_owned())));
            out.push(line(LineKind::Code, "```".into()));
            out
        }
        (Body::Table(rows), OutputFormat::Plain) => rows.iter().map(|r| line(LineKind::Table, r.join("\t"))).collect(),
        (Body::Table(rows), OutputFormat::Markdown) => {
            let width = rows.iter().map(Vec::len).max().unwrap_or(1).max(1);
            let render = |cells: &[String]| {
                let mut padded: Vec<String> = cells.iter().map(|c| c.replace('|', "\\|")).collect();
                padded.resize(width, String::new());
                format!("| {} |", padded.join(" | "))
            };
            let mut out = vec![line(LineKind::Table, render(&rows[0]))];
            out.push(line(LineKind::Table, format!("|{}", " --- |".repeat(width))));
            out.extend(rows[1..].iter().map(|r| line(LineKind::Table, render(r))));
            out
        }
    }
}
