use std::collections::HashMap;

use super::{ExtractionParams, Line, LineKind};
use crate::math::dollars::{ends_with_lone_backslash, escape_dollars};
use crate::math::{find_placeholders, MathSpan};

/// Final text assembly: boilerplate lines and empty headers go, formulas are
/// reinflated, stray dollars escaped and blank runs collapsed.
///
/// Returns the text together with the spans in the order they were written.
pub fn process_lines(
    lines: &[Line],
    spans: &[MathSpan],
    params: &ExtractionParams,
    phrases: &[String],
) -> (String, Vec<MathSpan>) {
    let trigger = params.boilerplate_trigger_count.max(1) as usize;
    let kept: Vec<&Line> = lines
        .iter()
        .filter(|line| !is_boilerplate(line, phrases, trigger))
        .collect();
    let kept = drop_empty_headers(kept);

    let by_token: HashMap<&str, &MathSpan> = spans.iter().map(|s| (s.placeholder.as_str(), s)).collect();
    let mut out_lines = Vec::new();
    let mut used = Vec::new();
    for line in kept {
        reinflate(line, &by_token, &mut out_lines, &mut used);
    }
    let text = collapse_blank_runs(&out_lines);
    (text, used)
}

fn has_placeholder(text: &str) -> bool {
    find_placeholders(text).next().is_some()
}

fn is_boilerplate(line: &Line, phrases: &[String], trigger: usize) -> bool {
    if line.kind == LineKind::Code || has_placeholder(&line.text) {
        return false;
    }
    let lower = line.text.to_lowercase();
    phrases.iter().filter(|p| lower.contains(p.as_str())).count() >= trigger
}

fn drop_empty_headers(lines: Vec<&Line>) -> Vec<&Line> {
    let mut keep = vec![true; lines.len()];
    for (i, line) in lines.iter().enumerate() {
        if !matches!(line.kind, LineKind::Header(_)) || has_placeholder(&line.text) {
            continue;
        }
        let next = lines[i + 1..].iter().find(|l| !l.text.trim().is_empty());
        if next.is_none_or(|l| matches!(l.kind, LineKind::Header(_))) {
            keep[i] = false;
        }
    }
    lines
        .into_iter()
        .zip(keep)
        .filter_map(|(l, k)| k.then_some(l))
        .collect()
}

fn push_text(current: &mut String, segment: &str) {
    current.push_str(&escape_dollars(segment));
}

fn reinflate(line: &Line, spans: &HashMap<&str, &MathSpan>, out: &mut Vec<String>, used: &mut Vec<MathSpan>) {
    let text = &line.text;
    // Splitting a table row would break the table, so display math stays put.
    let split_display = line.kind != LineKind::Table;
    let mut current = String::new();
    let mut last = 0;
    let mut after_display = false;
    for (pos, token) in find_placeholders(text) {
        let mut segment = &text[last..pos];
        last = pos + token.len();
        if after_display {
            segment = segment.trim_start();
        }
        let Some(span) = spans.get(token) else {
            push_text(&mut current, segment);
            continue;
        };
        used.push((*span).clone());
        if span.display && split_display {
            push_text(&mut current, segment.trim_end());
            if !current.trim().is_empty() {
                out.push(std::mem::take(&mut current));
            }
            current.clear();
            out.push(span.delimited());
            after_display = true;
            continue;
        }
        after_display = false;
        push_text(&mut current, segment);
        if ends_with_lone_backslash(&current) {
            current.push(' ');
        }
        current.push_str(&span.delimited());
    }
    let mut tail = &text[last..];
    if after_display {
        tail = tail.trim_start();
    }
    push_text(&mut current, tail);
    if !(after_display && current.is_empty()) {
        out.push(current);
    }
}

fn collapse_blank_runs(lines: &[String]) -> String {
    let mut out: Vec<&str> = Vec::with_capacity(lines.len());
    let mut blanks = 0;
    for line in lines {
        if line.trim().is_empty() {
            blanks += 1;
            if blanks > 2 {
                continue;
            }
            out.push("");
        } else {
            blanks = 0;
            out.push(line);
        }
    }
    while out.last().is_some_and(|l| l.is_empty()) {
        out.pop();
    }
    let start = out.iter().take_while(|l| l.is_empty()).count();
    out[start..].join("\n")
}
