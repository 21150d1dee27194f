//! Bundled default lists and the plain-text list format they share: one
//! entry per line, blank lines ignored, lines starting with `#` are comments.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const MATH_KEYWORDS: &str = include_str!("../data/math_keywords.txt");
pub const LATEX_SYMBOLS: &str = include_str!("../data/latex_symbols.txt");
pub const RENDER_SERVICES: &str = include_str!("../data/render_services.txt");
pub const BOILERPLATE_PHRASES: &str = include_str!("../data/boilerplate_phrases.txt");
pub const CLASS_BLOCKLIST: &str = include_str!("../data/class_blocklist.txt");
pub const URL_RULES: &str = include_str!("../data/url_rules.txt");
pub const DOMAIN_BLACKLIST: &str = include_str!("../data/domain_blacklist.txt");
pub const PUBLIC_SUFFIXES: &str = include_str!("../data/public_suffixes.txt");

pub fn parse_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect()
}

pub fn load_list(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Open {
        path: path.to_owned(),
        source,
    })?;
    Ok(parse_list(&text))
}

/// The shared top-100 LaTeX command list.
pub fn default_latex_symbols() -> Vec<String> {
    parse_list(LATEX_SYMBOLS)
}

/// True when `command` (e.g. `\in`) occurs in `text` as a whole command,
/// i.e. not followed by another ASCII letter (`\in` must not match `\int`).
pub fn contains_command(text: &str, command: &str) -> bool {
    let bytes = text.as_bytes();
    let mut from = 0;
    while let Some(pos) = text[from..].find(command) {
        let end = from + pos + command.len();
        if bytes.get(end).is_none_or(|b| !b.is_ascii_alphabetic()) {
            return true;
        }
        from = from + pos + 1;
    }
    false
}

/// First command of `commands` found in `text`, in list order.
pub fn first_command<'a>(text: &str, commands: &'a [String]) -> Option<&'a str> {
    if !text.contains('\\') {
        return None;
    }
    commands
        .iter()
        .find(|c| contains_command(text, c))
        .map(String::as_str)
}
