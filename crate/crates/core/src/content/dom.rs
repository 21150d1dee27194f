//! Owned DOM built from an HTML5 parse, and the cleanup passes run on it
//! before main-content selection.

use scraper::Html;
use serde::{Deserialize, Serialize};

use crate::math::PLACEHOLDER_PREFIX;

/// Beyond this depth children are attached to the deepest kept ancestor.
const MAX_DEPTH: usize = 256;

/// Minimum run of adjacent link-only siblings treated as a link cluster.
pub const LINK_CLUSTER_MIN: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Annotation {
    Code,
    Table,
    Header(u8),
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
    pub annotation: Option<Annotation>,
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
        self.collect_text(&mut out);
        out
    }

    fn collect_text(&self, out: &mut String) {
        for child in &self.children {
            match child {
                Node::Text(t) => out.push_str(t),
                Node::Element(e) => e.collect_text(out),
            }
        }
    }

    pub fn contains_placeholder(&self) -> bool {
        self.children.iter().any(|c| match c {
            Node::Text(t) => t.contains(PLACEHOLDER_PREFIX),
            Node::Element(e) => e.contains_placeholder(),
        })
    }

    /// Depth-first search for the first element named `name`.
    pub fn find(&self, name: &str) -> Option<&Element> {
        if self.name == name {
            return Some(self);
        }
        self.children.iter().find_map(|c| match c {
            Node::Element(e) => e.find(name),
            Node::Text(_) => None,
        })
    }
}

/// Parse with an error-tolerant HTML5 parser and return the `<body>` (or the
/// document root when there is none). Comments and doctypes are dropped.
pub fn parse(html: &str) -> Element {
    let doc = Html::parse_document(html);
    let mut root = Element {
        name: "#document".into(),
        ..Element::default()
    };
    for child in doc.tree.root().children() {
        convert(child, &mut root, 0);
    }
    match root.find("body") {
        Some(body) => body.clone(),
        None => root,
    }
}

fn convert(node: ego_tree::NodeRef<'_, scraper::Node>, parent: &mut Element, depth: usize) {
    match node.value() {
        scraper::Node::Text(text) => push_text(parent, &text.text),
        scraper::Node::Element(el) => {
            if depth >= MAX_DEPTH {
                for child in node.children() {
                    convert(child, parent, depth);
                }
                return;
            }
            let mut element = Element {
                name: el.name().to_ascii_lowercase(),
                attrs: el
                    .attrs()
                    .map(|(k, v)| (k.to_ascii_lowercase(), v.to_owned()))
                    .collect(),
                children: Vec::new(),
                annotation: None,
            };
            for child in node.children() {
                convert(child, &mut element, depth + 1);
            }
            parent.children.push(Node::Element(element));
        }
        _ => {}
    }
}

fn push_text(parent: &mut Element, text: &str) {
    if let Some(Node::Text(last)) = parent.children.last_mut() {
        last.push_str(text);
    } else {
        parent.children.push(Node::Text(text.to_owned()));
    }
}

#[derive(Debug, Clone)]
pub struct DomRules {
    /// Class and id words that mark page furniture.
    pub blocklist: Vec<String>,
}

const DROPPED_TAGS: &[&str] = &[
    "head", "script", "style", "noscript", "template", "iframe", "svg", "canvas", "button",
    "select", "option", "input", "textarea", "nav", "footer", "aside", "object", "embed",
    "audio", "video", "map",
];

impl DomRules {
    /// Parse and clean: invisible elements, blocklisted classes and ids,
    /// buttons and link clusters go; code, tables and headers are annotated.
    /// Elements holding a math placeholder are never removed.
    pub fn process_dom(&self, html: &str) -> Element {
        let mut root = parse(html);
        self.clean(&mut root);
        root
    }

    pub fn clean(&self, root: &mut Element) {
        self.clean_children(root);
        annotate(root);
    }

    fn clean_children(&self, el: &mut Element) {
        el.children.retain(|child| match child {
            Node::Element(e) => e.contains_placeholder() || !self.should_drop(e),
            Node::Text(_) => true,
        });
        remove_link_clusters(el);
        for child in &mut el.children {
            if let Node::Element(e) = child {
                self.clean_children(e);
            }
        }
    }

    fn should_drop(&self, el: &Element) -> bool {
        DROPPED_TAGS.contains(&el.name.as_str()) || is_hidden(el) || self.is_blocklisted(el)
    }

    fn is_blocklisted(&self, el: &Element) -> bool {
        let role = el.attr("role").unwrap_or_default();
        if matches!(role, "navigation" | "banner" | "contentinfo" | "button" | "complementary") {
            return true;
        }
        let id = el.attr("id").unwrap_or_default();
        let class = el.attr("class").unwrap_or_default();
        class
            .split_ascii_whitespace()
            .chain(std::iter::once(id))
            .filter(|t| !t.is_empty())
            .any(|token| self.blocklist.iter().any(|entry| word_match(token, entry)))
    }
}

/// `entry` matches `token` as a whole word, where `-`, `_` and case changes
/// separate words: "site-footer" and "footerLinks" both match "footer".
fn word_match(token: &str, entry: &str) -> bool {
    let token = token.to_ascii_lowercase();
    let mut from = 0;
    while let Some(pos) = token[from..].find(entry) {
        let start = from + pos;
        let end = start + entry.len();
        let before_ok = start == 0 || matches!(token.as_bytes()[start - 1], b'-' | b'_');
        let after_ok = end == token.len() || matches!(token.as_bytes()[end], b'-' | b'_');
        if before_ok && after_ok {
            return true;
        }
        from = start + 1;
    }
    false
}

fn is_hidden(el: &Element) -> bool {
    if el.attr("hidden").is_some() || el.attr("aria-hidden").is_some_and(|v| v.eq_ignore_ascii_case("true")) {
        return true;
    }
    let Some(style) = el.attr("style") else {
        return false;
    };
    let compact: String = style
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_ascii_lowercase();
    compact.contains("display:none") || compact.contains("visibility:hidden")
}

fn is_link_only(node: &Node) -> bool {
    match node {
        Node::Text(_) => false,
        Node::Element(e) if e.name == "a" => true,
        Node::Element(e) => {
            let mut links = 0;
            let mut outside = false;
            scan_links(e, &mut links, &mut outside);
            links == 1 && !outside
        }
    }
}

fn scan_links(el: &Element, links: &mut usize, outside: &mut bool) {
    for child in &el.children {
        match child {
            Node::Text(t) => *outside |= t.chars().any(char::is_alphanumeric),
            Node::Element(e) if e.name == "a" => *links += 1,
            Node::Element(e) => scan_links(e, links, outside),
        }
    }
}

fn is_separator(node: &Node) -> bool {
    matches!(node, Node::Text(t) if !t.chars().any(char::is_alphanumeric))
}

/// Drop runs of `LINK_CLUSTER_MIN` or more link-only siblings separated by
/// nothing but whitespace or punctuation.
fn remove_link_clusters(el: &mut Element) {
    let n = el.children.len();
    let mut remove = vec![false; n];
    let mut i = 0;
    while i < n {
        if !is_link_only(&el.children[i]) {
            i += 1;
            continue;
        }
        let start = i;
        let mut links = 0;
        let mut last_link = i;
        let mut j = i;
        while j < n {
            let child = &el.children[j];
            if is_link_only(child) {
                links += 1;
                last_link = j;
            } else if !is_separator(child) {
                break;
            }
            j += 1;
        }
        let protected = el.children[start..=last_link].iter().any(|c| match c {
            Node::Element(e) => e.contains_placeholder(),
            Node::Text(t) => t.contains(PLACEHOLDER_PREFIX),
        });
        if links >= LINK_CLUSTER_MIN && !protected {
            remove[start..=last_link].iter_mut().for_each(|r| *r = true);
        }
        i = last_link + 1;
    }
    if remove.iter().any(|&r| r) {
        let mut idx = 0;
        el.children.retain(|_| {
            let keep = !remove[idx];
            idx += 1;
            keep
        });
    }
}

fn annotate(el: &mut Element) {
    el.annotation = match el.name.as_str() {
        "pre" | "code" => Some(Annotation::Code),
        "table" => Some(Annotation::Table),
        "h1" | "h2" | "h3" | "h4" | "h5" | "h6" => Some(Annotation::Header(el.name.as_bytes()[1] - b'0')),
        _ => None,
    };
    for child in &mut el.children {
        if let Node::Element(e) = child {
            annotate(e);
        }
    }
}
