//! Brute-force interpolated modified Kneser–Ney, computed straight from the
//! definitions by scanning the corpus for every quantity. Slow, simple and
//! independent of the library's table-building code.

use std::collections::BTreeSet;

pub struct KnOracle {
    sentences: Vec<Vec<String>>,
    order: usize,
    fallback: f64,
    vocab_size: usize,
    discounts: Vec<[f64; 3]>,
}

const BOS: &str = "<s>";
const EOS: &str = "</s>";

impl KnOracle {
    pub fn new(corpus: &[Vec<String>], order: usize, fallback: f64) -> Self {
        let sentences: Vec<Vec<String>> = corpus
            .iter()
            .filter(|s| !s.is_empty())
            .map(|s| {
                let mut padded = vec![BOS.to_string()];
                padded.extend(s.iter().cloned());
                padded.push(EOS.to_string());
                padded
            })
            .collect();
        let words: BTreeSet<&str> = corpus.iter().flatten().map(String::as_str).collect();
        // Observed words plus </s> and <unk>.
        let vocab_size = words.len() + 2;
        let mut oracle = KnOracle {
            sentences,
            order,
            fallback,
            vocab_size,
            discounts: Vec::new(),
        };
        oracle.discounts = (1..=order).map(|n| oracle.discounts_for(n)).collect();
        oracle
    }

    fn occurrences(&self, gram: &[&str]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (si, s) in self.sentences.iter().enumerate() {
            if s.len() < gram.len() {
                continue;
            }
            for start in 0..=s.len() - gram.len() {
                if s[start..start + gram.len()].iter().zip(gram).all(|(a, b)| a == b) {
                    out.push((si, start));
                }
            }
        }
        out
    }

    fn adjusted(&self, gram: &[&str]) -> u64 {
        let occ = self.occurrences(gram);
        if gram.len() == self.order || gram[0] == BOS {
            return occ.len() as u64;
        }
        let before: BTreeSet<&str> = occ
            .iter()
            .filter(|&&(_, start)| start > 0)
            .map(|&(si, start)| self.sentences[si][start - 1].as_str())
            .collect();
        before.len() as u64
    }

    fn distinct_grams(&self, n: usize) -> BTreeSet<Vec<&str>> {
        let mut grams = BTreeSet::new();
        for s in &self.sentences {
            if s.len() < n {
                continue;
            }
            for w in s.windows(n) {
                if n == 1 && w[0] == BOS {
                    continue;
                }
                grams.insert(w.iter().map(String::as_str).collect());
            }
        }
        grams
    }

    fn discounts_for(&self, n: usize) -> [f64; 3] {
        let mut t = [0f64; 5];
        for g in self.distinct_grams(n) {
            let a = self.adjusted(&g) as usize;
            if (1..=4).contains(&a) {
                t[a] += 1.0;
            }
        }
        if t[1] == 0.0 || t[2] == 0.0 || t[3] == 0.0 {
            return [self.fallback; 3];
        }
        let y = t[1] / (t[1] + 2.0 * t[2]);
        let d = [
            1.0 - 2.0 * y * t[2] / t[1],
            2.0 - 3.0 * y * t[3] / t[2],
            3.0 - 4.0 * y * t[4] / t[3],
        ];
        if d.iter().enumerate().all(|(k, &x)| x > 0.0 && x <= (k + 1) as f64) {
            d
        } else {
            [self.fallback; 3]
        }
    }

    fn discount(&self, n: usize, count: u64) -> f64 {
        match count {
            0 => 0.0,
            1 => self.discounts[n - 1][0],
            2 => self.discounts[n - 1][1],
            _ => self.discounts[n - 1][2],
        }
    }

    /// P(word | context). Out-of-vocabulary words should be passed as
    /// `<unk>`.
    pub fn prob(&self, context: &[&str], word: &str) -> f64 {
        let keep = context.len().min(self.order - 1);
        let context = &context[context.len() - keep..];
        let n = context.len() + 1;
        let extensions: Vec<Vec<&str>> = self
            .distinct_grams(n)
            .into_iter()
            .filter(|g| g[..n - 1] == *context)
            .collect();
        let lower = if context.is_empty() {
            1.0 / self.vocab_size as f64
        } else {
            self.prob(&context[1..], word)
        };
        if extensions.is_empty() {
            return lower;
        }
        let mut total = 0.0;
        let mut mass = 0.0;
        let mut own = 0.0;
        for g in &extensions {
            let a = self.adjusted(g);
            total += a as f64;
            mass += self.discount(n, a);
            if g[n - 1] == word {
                own = a as f64 - self.discount(n, a);
            }
        }
        own / total + mass / total * lower
    }
}
