//! ARPA text format: `\data\` header with per-order counts, one
//! `\N-grams:` section per order, `\end\` trailer.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::{Entry, NgramModel, BOS, BOS_ID, EOS, EOS_ID, MAX_ORDER, UNK, UNK_ID};
use crate::error::{Error, Result};

fn arpa_err(line: usize, message: impl Into<String>) -> Error {
    Error::Arpa {
        line,
        message: message.into(),
    }
}

impl NgramModel {
    pub fn write_arpa<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "\\data\\")?;
        for n in 1..=self.order {
            writeln!(w, "ngram {n}={}", self.ngram_count(n))?;
        }
        for n in 1..=self.order {
            writeln!(w)?;
            writeln!(w, "\\{n}-grams:")?;
            for (words, prob, backoff) in self.ngrams(n) {
                if n < self.order {
                    writeln!(w, "{prob}\t{}\t{backoff}", words.join(" "))?;
                } else {
                    writeln!(w, "{prob}\t{}", words.join(" "))?;
                }
            }
        }
        writeln!(w)?;
        writeln!(w, "\\end\\")?;
        w.flush()?;
        Ok(())
    }

    pub fn read_arpa<R: BufRead>(reader: R) -> Result<Self> {
        let mut declared: Vec<usize> = Vec::new();
        let mut section: Option<usize> = None;
        let mut in_data = false;
        let mut ended = false;
        let mut vocab: Vec<String> = vec![UNK.into(), BOS.into(), EOS.into()];
        let mut index: HashMap<String, u32> = vocab.iter().cloned().zip(0..).collect();
        let mut seen_special = [false; 3];
        let mut tables: Vec<HashMap<Vec<u32>, Entry>> = Vec::new();

        for (i, line) in reader.lines().enumerate() {
            let lineno = i + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() || ended {
                continue;
            }
            if line == "\\data\\" {
                in_data = true;
                continue;
            }
            if line == "\\end\\" {
                ended = true;
                continue;
            }
            if let Some(rest) = line.strip_prefix('\\').and_then(|l| l.strip_suffix("-grams:")) {
                let n: usize = rest.parse().map_err(|_| arpa_err(lineno, "bad section header"))?;
                if n == 0 || n > declared.len() {
                    return Err(arpa_err(lineno, format!("section for undeclared order {n}")));
                }
                section = Some(n);
                in_data = false;
                continue;
            }
            if in_data {
                let spec = line
                    .strip_prefix("ngram ")
                    .ok_or_else(|| arpa_err(lineno, "expected `ngram N=count`"))?;
                let (n, count) = spec.split_once('=').ok_or_else(|| arpa_err(lineno, "expected `=`"))?;
                let n: usize = n.trim().parse().map_err(|_| arpa_err(lineno, "bad order"))?;
                let count: usize = count.trim().parse().map_err(|_| arpa_err(lineno, "bad count"))?;
                if n != declared.len() + 1 || n > MAX_ORDER {
                    return Err(arpa_err(lineno, format!("unexpected order {n}")));
                }
                declared.push(count);
                tables.push(HashMap::with_capacity(count));
                continue;
            }
            let n = section.ok_or_else(|| arpa_err(lineno, "entry outside any section"))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != n + 1 && fields.len() != n + 2 {
                return Err(arpa_err(lineno, format!("expected {n} words")));
            }
            let prob: f64 = fields[0].parse().map_err(|_| arpa_err(lineno, "bad probability"))?;
            let backoff: f64 = match fields.get(n + 1) {
                Some(b) => b.parse().map_err(|_| arpa_err(lineno, "bad backoff"))?,
                None => 0.0,
            };
            let mut gram = Vec::with_capacity(n);
            for word in &fields[1..=n] {
                let id = match index.get(*word) {
                    Some(&id) => id,
                    None if n == 1 => {
                        vocab.push((*word).to_owned());
                        index.insert((*word).to_owned(), (vocab.len() - 1) as u32);
                        (vocab.len() - 1) as u32
                    }
                    None => return Err(arpa_err(lineno, format!("word {word:?} missing from unigrams"))),
                };
                gram.push(id);
            }
            if n == 1 && gram[0] <= EOS_ID {
                seen_special[gram[0] as usize] = true;
            }
            tables[n - 1].insert(gram, Entry { prob, backoff });
        }

        if declared.is_empty() {
            return Err(arpa_err(0, "missing \\data\\ header"));
        }
        for (n, (&count, table)) in declared.iter().zip(&tables).enumerate() {
            if count != table.len() {
                return Err(arpa_err(0, format!("order {} declares {count} entries but has {}", n + 1, table.len())));
            }
        }
        for (id, name) in [(UNK_ID, UNK), (BOS_ID, BOS), (EOS_ID, EOS)] {
            if !seen_special[id as usize] {
                return Err(arpa_err(0, format!("unigram {name} missing")));
            }
        }
        Ok(NgramModel {
            order: declared.len(),
            vocab,
            index,
            tables,
            discounts: Vec::new(),
        })
    }
}
