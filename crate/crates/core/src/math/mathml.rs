//! Presentation MathML to LaTeX.

use crate::markup::Element;

/// Convert a `<math>` element to LaTeX. Unknown elements contribute the
/// concatenation of their children, so the worst case is lossy but never
/// fails.
pub fn mathml_to_latex(math: &Element) -> String {
    convert(math).trim().to_owned()
}

fn convert(el: &Element) -> String {
    let kids: Vec<&Element> = el.child_elements().collect();
    let arg = |i: usize| kids.get(i).map(|k| convert(k)).unwrap_or_default();
    match el.name.as_str() {
        "mi" | "mn" => token_text(el),
        "mo" => token_text(el)
            .chars()
            .filter(|c| !('\u{2061}'..='\u{2064}').contains(c))
            .collect(),
        "ms" => format!("\\text{{\"{}\"}}", token_text(el)),
        "mtext" => {
            let text = token_text(el);
            if text.is_empty() {
                String::new()
            } else {
                format!("\\text{{{text}}}")
            }
        }
        "mspace" => " ".to_owned(),
        "mfrac" => format!("\\frac{{{}}}{{{}}}", arg(0), arg(1)),
        "msqrt" => format!("\\sqrt{{{}}}", concat(&kids)),
        "mroot" => format!("\\sqrt[{}]{{{}}}", arg(1), arg(0)),
        "msup" => format!("{}^{{{}}}", base(&arg(0)), arg(1)),
        "msub" => format!("{}_{{{}}}", base(&arg(0)), arg(1)),
        "msubsup" => format!("{}_{{{}}}^{{{}}}", base(&arg(0)), arg(1), arg(2)),
        "mover" => format!("\\overset{{{}}}{{{}}}", arg(1), arg(0)),
        "munder" => format!("\\underset{{{}}}{{{}}}", arg(1), arg(0)),
        "munderover" => format!(
            "\\overset{{{}}}{{\\underset{{{}}}{{{}}}}}",
            arg(2),
            arg(1),
            arg(0)
        ),
        "mfenced" => fenced(el, &kids),
        "mtable" => table(&kids),
        "mtr" | "mlabeledtr" => kids.iter().map(|k| convert(k)).collect::<Vec<_>>().join(" & "),
        "semantics" => kids.first().map(|k| convert(k)).unwrap_or_default(),
        "annotation" | "annotation-xml" | "mphantom" | "none" | "mprescripts" => String::new(),
        _ => concat(&kids),
    }
}

fn token_text(el: &Element) -> String {
    el.text().trim().to_owned()
}

fn concat(kids: &[&Element]) -> String {
    let mut out = String::new();
    for kid in kids {
        let piece = convert(kid);
        if needs_separator(&out, &piece) {
            out.push(' ');
        }
        out.push_str(&piece);
    }
    out
}

/// A control word followed by a letter would merge into another command.
fn needs_separator(prev: &str, next: &str) -> bool {
    let Some(first) = next.chars().next() else {
        return false;
    };
    if !first.is_ascii_alphabetic() {
        return false;
    }
    let word_len = prev
        .bytes()
        .rev()
        .take_while(u8::is_ascii_alphabetic)
        .count();
    word_len > 0
        && (prev.len() - word_len)
            .checked_sub(1)
            .is_some_and(|i| prev.as_bytes()[i] == b'\\')
}

fn base(latex: &str) -> String {
    let single_char = latex.chars().count() == 1;
    let single_command = latex.starts_with('\\')
        && latex.len() > 1
        && latex[1..].bytes().all(|b| b.is_ascii_alphabetic());
    if single_char || single_command {
        latex.to_owned()
    } else {
        format!("{{{latex}}}")
    }
}

fn fence(delim: &str) -> String {
    match delim {
        "{" => "\\{".to_owned(),
        "}" => "\\}".to_owned(),
        other => other.to_owned(),
    }
}

fn fenced(el: &Element, kids: &[&Element]) -> String {
    let open = fence(el.attr("open").unwrap_or("("));
    let close = fence(el.attr("close").unwrap_or(")"));
    let separators: Vec<char> = el
        .attr("separators")
        .unwrap_or(",")
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    let mut out = format!("\\left{open}");
    if open.is_empty() {
        out.push('.');
    }
    for (i, kid) in kids.iter().enumerate() {
        if i > 0 {
            if let Some(sep) = separators.get(i - 1).or(separators.last()) {
                out.push(*sep);
            }
        }
        out.push_str(&convert(kid));
    }
    out.push_str("\\right");
    out.push_str(if close.is_empty() { "." } else { &close });
    out
}

fn table(rows: &[&Element]) -> String {
    let columns = rows
        .iter()
        .map(|r| r.child_elements().count())
        .max()
        .unwrap_or(0)
        .max(1);
    let body = rows
        .iter()
        .map(|r| convert(r))
        .collect::<Vec<_>>()
        .join(" \\\\ ");
    format!("\\begin{{array}}{{{}}}{}\\end{{array}}", "c".repeat(columns), body)
}
