//! Domain-level statistics and domain/URL drop rules.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use url::Url;

use crate::error::{Error, Result};
use crate::resources::{self, parse_list};

pub const INVALID_DOMAIN: &str = "<invalid>";

/// Registrable-domain lookup against a public-suffix snapshot supporting
/// plain, wildcard (`*.x`) and exception (`!a.x`) rules.
#[derive(Debug, Clone)]
pub struct SuffixList {
    rules: HashSet<String>,
    wildcards: HashSet<String>,
    exceptions: HashSet<String>,
}

impl Default for SuffixList {
    fn default() -> Self {
        Self::parse(resources::PUBLIC_SUFFIXES)
    }
}

impl SuffixList {
    pub fn parse(text: &str) -> Self {
        let mut list = SuffixList {
            rules: HashSet::new(),
            wildcards: HashSet::new(),
            exceptions: HashSet::new(),
        };
        for rule in parse_list(text) {
            let rule = rule.to_ascii_lowercase();
            if let Some(rest) = rule.strip_prefix("*.") {
                list.wildcards.insert(rest.to_owned());
            } else if let Some(rest) = rule.strip_prefix('!') {
                list.exceptions.insert(rest.to_owned());
            } else {
                list.rules.insert(rule);
            }
        }
        list
    }

    /// Number of trailing labels forming the public suffix of `labels`.
    fn suffix_len(&self, labels: &[&str]) -> usize {
        let n = labels.len();
        let mut best = 1;
        for k in 1..=n {
            let candidate = labels[n - k..].join(".");
            if self.exceptions.contains(&candidate) {
                return k - 1;
            }
            if self.rules.contains(&candidate) {
                best = best.max(k);
            }
            if k < n && self.wildcards.contains(&candidate) {
                best = best.max(k + 1);
            }
        }
        best
    }

    /// `math.stackexchange.com` → `stackexchange.com`. IP addresses and
    /// hosts that are themselves public suffixes come back unchanged.
    pub fn registrable_domain(&self, host: &str) -> String {
        let host = host.trim_end_matches('.').to_ascii_lowercase();
        if host.parse::<std::net::IpAddr>().is_ok() || host.starts_with('[') {
            return host;
        }
        let labels: Vec<&str> = host.split('.').filter(|l| !l.is_empty()).collect();
        if labels.is_empty() {
            return host;
        }
        let suffix = self.suffix_len(&labels).max(1);
        if labels.len() <= suffix {
            return labels.join(".");
        }
        labels[labels.len() - suffix - 1..].join(".")
    }

    /// Registrable domain of a URL, or `<invalid>`.
    pub fn domain_of(&self, url: &str) -> String {
        match Url::parse(url).ok().and_then(|u| u.host_str().map(str::to_owned)) {
            Some(host) => self.registrable_domain(&host),
            None => INVALID_DOMAIN.to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainStats {
    pub domain: String,
    pub doc_count: u64,
    pub char_count: u64,
    pub share_docs: f64,
    pub share_chars: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SortBy {
    Docs,
    Chars,
}

impl std::str::FromStr for SortBy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "docs" | "documents" => Ok(SortBy::Docs),
            "chars" | "characters" => Ok(SortBy::Chars),
            other => Err(format!("unknown sort key {other:?} (expected docs or chars)")),
        }
    }
}

/// Group `(url, character count)` pairs by registrable domain, sorted
/// descending by the chosen count with ties broken by domain name.
pub fn aggregate_domains(docs: &[(String, u64)], suffixes: &SuffixList, by: SortBy) -> Vec<DomainStats> {
    let counts: BTreeMap<String, (u64, u64)> = docs
        .par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<String, (u64, u64)>, (url, chars)| {
            let entry = acc.entry(suffixes.domain_of(url)).or_insert((0, 0));
            entry.0 += 1;
            entry.1 += chars;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (domain, (d, c)) in b {
                let entry = a.entry(domain).or_insert((0, 0));
                entry.0 += d;
                entry.1 += c;
            }
            a
        });
    let total_docs: u64 = counts.values().map(|v| v.0).sum();
    let total_chars: u64 = counts.values().map(|v| v.1).sum();
    let share = |x: u64, total: u64| if total == 0 { 0.0 } else { x as f64 / total as f64 };
    let mut stats: Vec<DomainStats> = counts
        .into_iter()
        .map(|(domain, (doc_count, char_count))| DomainStats {
            share_docs: share(doc_count, total_docs),
            share_chars: share(char_count, total_chars),
            domain,
            doc_count,
            char_count,
        })
        .collect();
    stats.sort_by(|a, b| {
        let key = |s: &DomainStats| match by {
            SortBy::Docs => (s.doc_count, s.char_count),
            SortBy::Chars => (s.char_count, s.doc_count),
        };
        key(b).cmp(&key(a)).then_with(|| a.domain.cmp(&b.domain))
    });
    stats
}

/// Fraction of all documents or characters held by the first `k` rows.
/// Expects `stats` sorted by the same key.
pub fn top_k_share(stats: &[DomainStats], k: usize, by: SortBy) -> f64 {
    stats
        .iter()
        .take(k)
        .map(|s| match by {
            SortBy::Docs => s.share_docs,
            SortBy::Chars => s.share_chars,
        })
        .sum()
}

pub fn to_tsv(stats: &[DomainStats]) -> String {
    let mut out = String::from("domain\tdoc_count\tchar_count\tshare_docs\tshare_chars\n");
    for s in stats {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{:.6}\t{:.6}",
            s.domain, s.doc_count, s.char_count, s.share_docs, s.share_chars
        );
    }
    out
}

fn thousands(n: u64) -> String {
    let digits = n.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

/// Three-column aligned table: domain, count with thousands separators,
/// percentage with two decimals.
pub fn to_table(stats: &[DomainStats], by: SortBy, top: usize) -> String {
    let (count_title, share_title) = match by {
        SortBy::Docs => ("# Documents", "% Documents"),
        SortBy::Chars => ("# Characters", "% Characters"),
    };
    let rows: Vec<(String, String, String)> = stats
        .iter()
        .take(top)
        .map(|s| {
            let (count, share) = match by {
                SortBy::Docs => (s.doc_count, s.share_docs),
                SortBy::Chars => (s.char_count, s.share_chars),
            };
            (s.domain.clone(), thousands(count), format!("{:.2}%", share * 100.0))
        })
        .collect();
    let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max("Domain".len());
    let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(count_title.len());
    let w2 = rows.iter().map(|r| r.2.len()).max().unwrap_or(0).max(share_title.len());
    let mut out = String::new();
    let _ = writeln!(out, "{:<w0$}  {:>w1$}  {:>w2$}", "Domain", count_title, share_title);
    let _ = writeln!(out, "{}  {}  {}", "-".repeat(w0), "-".repeat(w1), "-".repeat(w2));
    for (d, c, p) in rows {
        let _ = writeln!(out, "{d:<w0$}  {c:>w1$}  {p:>w2$}");
    }
    out
}

/// Drop URLs on matching domains whose path and query contain a pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UrlRule {
    /// `None` matches every domain.
    pub domain: Option<String>,
    pub pattern: String,
}

impl UrlRule {
    pub fn parse_list(text: &str) -> Result<Vec<UrlRule>> {
        parse_list(text)
            .into_iter()
            .map(|line| {
                let (domain, pattern) = line
                    .split_once('\t')
                    .ok_or_else(|| Error::Config(format!("URL rule {line:?} needs domain<TAB>pattern")))?;
                let domain = domain.trim();
                Ok(UrlRule {
                    domain: (domain != "*").then(|| domain.to_ascii_lowercase()),
                    pattern: pattern.trim().to_owned(),
                })
            })
            .collect()
    }

    pub fn defaults() -> Vec<UrlRule> {
        Self::parse_list(resources::URL_RULES).expect("bundled URL rules are well formed")
    }

    /// Counter name for documents this rule drops.
    pub fn label(&self) -> String {
        match &self.domain {
            None => self.pattern.clone(),
            Some(d) => format!("{d}:{}", self.pattern),
        }
    }

    fn matches(&self, host: &str, path_and_query: &str) -> bool {
        self.domain.as_deref().is_none_or(|d| host_in(host, d)) && path_and_query.contains(&self.pattern)
    }
}

fn host_in(host: &str, domain: &str) -> bool {
    host == domain || host.strip_suffix(domain).is_some_and(|rest| rest.ends_with('.'))
}

pub const BLACKLIST_COUNTER: &str = "blacklist";

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RuleOutcome {
    /// Parallel to the input.
    pub keep: Vec<bool>,
    /// Parallel to the input: the counter that claimed each dropped URL.
    pub dropped_by: Vec<Option<String>>,
    pub counters: BTreeMap<String, u64>,
}

impl RuleOutcome {
    pub fn kept(&self) -> usize {
        self.keep.iter().filter(|&&k| k).count()
    }
}

/// Apply the blacklist first, then URL rules in order; each dropped URL is
/// charged to exactly one counter.
pub fn apply_domain_rules(urls: &[&str], blacklist: &[String], rules: &[UrlRule], suffixes: &SuffixList) -> RuleOutcome {
    let blacklist: Vec<String> = blacklist.iter().map(|d| d.to_ascii_lowercase()).collect();
    let mut outcome = RuleOutcome::default();
    for label in rules.iter().map(UrlRule::label) {
        outcome.counters.entry(label).or_insert(0);
    }
    if !blacklist.is_empty() {
        outcome.counters.insert(BLACKLIST_COUNTER.into(), 0);
    }
    for url in urls {
        let parsed = Url::parse(url).ok();
        let host = parsed
            .as_ref()
            .and_then(|u| u.host_str())
            .map(|h| h.trim_end_matches('.').to_ascii_lowercase())
            .unwrap_or_default();
        let domain = suffixes.registrable_domain(&host);
        let claimed = if blacklist.iter().any(|b| *b == domain || host_in(&host, b)) {
            Some(BLACKLIST_COUNTER.to_owned())
        } else {
            let path_and_query = parsed
                .as_ref()
                .map(|u| match u.query() {
                    Some(q) => format!("{}?{q}", u.path()),
                    None => u.path().to_owned(),
                })
                .unwrap_or_else(|| (*url).to_owned());
            rules
                .iter()
                .find(|r| r.matches(&host, &path_and_query))
                .map(UrlRule::label)
        };
        if let Some(label) = &claimed {
            *outcome.counters.entry(label.clone()).or_insert(0) += 1;
        }
        outcome.keep.push(claimed.is_none());
        outcome.dropped_by.push(claimed);
    }
    outcome
}
