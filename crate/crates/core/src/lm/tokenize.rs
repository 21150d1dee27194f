/// Tokens used for language-model training and scoring.
///
/// Lowercased, split on whitespace, stripped of surrounding punctuation;
/// digit runs become `<num>` and backslash commands stay whole.
pub fn lm_tokens(line: &str) -> Vec<String> {
    line.split_whitespace().filter_map(normalize_word).collect()
}

/// One token list per non-empty line.
pub fn lm_sentences(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(lm_tokens)
        .filter(|tokens| !tokens.is_empty())
        .collect()
}

fn normalize_word(word: &str) -> Option<String> {
    let lower = word.to_lowercase();
    let start = lower.trim_start_matches(|c: char| (c.is_ascii_punctuation() && c != '\\') || is_unicode_punct(c));
    let trimmed = if start.starts_with('\\') {
        // Braces close a command's arguments; only sentence punctuation goes.
        start.trim_end_matches(['.', ',', ';', ':', '!', '?', '$', '"', '\''])
    } else {
        start.trim_end_matches(|c: char| c.is_ascii_punctuation() || is_unicode_punct(c))
    };
    if trimmed.is_empty() || trimmed == "\\" {
        return None;
    }
    let mut out = String::with_capacity(trimmed.len());
    let mut in_digits = false;
    for c in trimmed.chars() {
        if c.is_ascii_digit() {
            if !in_digits {
                out.push_str("<num>");
                in_digits = true;
            }
        } else {
            in_digits = false;
            out.push(c);
        }
    }
    Some(out)
}

fn is_unicode_punct(c: char) -> bool {
    matches!(
        c,
        '“' | '”' | '‘' | '’' | '«' | '»' | '…' | '–' | '—' | '¿' | '¡' | '·'
    )
}
