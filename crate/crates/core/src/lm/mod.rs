//! Interpolated modified Kneser–Ney n-gram language model.
//!
//! Probabilities are stored in backoff form (as in ARPA files): every
//! observed n-gram carries its interpolated log10 probability and, when it
//! is itself a context, the log10 weight applied when backing off from it.

mod arpa;
mod tokenize;

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

pub use tokenize::{lm_sentences, lm_tokens};

pub const UNK: &str = "<unk>";
pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";

const UNK_ID: u32 = 0;
const BOS_ID: u32 = 1;
const EOS_ID: u32 = 2;

/// log10 probability written for `<s>`, which is never predicted.
pub const BOS_LOG_PROB: f64 = -99.0;

pub const MAX_ORDER: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct LmConfig {
    pub order: usize,
    /// Replace words seen once with `<unk>` before counting.
    pub unk_hapax: bool,
    /// Discount used at an order whose count-of-counts cannot support the
    /// modified estimate.
    pub fallback_discount: f64,
}

impl Default for LmConfig {
    fn default() -> Self {
        Self {
            order: 5,
            unk_hapax: false,
            fallback_discount: 0.75,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Entry {
    pub prob: f64,
    pub backoff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NgramModel {
    order: usize,
    vocab: Vec<String>,
    index: HashMap<String, u32>,
    /// `tables[n - 1]` holds the n-grams.
    tables: Vec<HashMap<Vec<u32>, Entry>>,
    /// `[D1, D2, D3+]` per order; empty for imported models.
    discounts: Vec<[f64; 3]>,
}

type Counts = HashMap<Vec<u32>, u64>;

/// Modified Kneser–Ney discounts from counts of counts, or `None` when the
/// statistics are too thin for the estimate to be meaningful.
pub fn modified_discounts(count_of_counts: [u64; 4]) -> Option<[f64; 3]> {
    let [n1, n2, n3, n4] = count_of_counts.map(|c| c as f64);
    if n1 == 0.0 || n2 == 0.0 || n3 == 0.0 {
        return None;
    }
    let y = n1 / (n1 + 2.0 * n2);
    let d = [1.0 - 2.0 * y * n2 / n1, 2.0 - 3.0 * y * n3 / n2, 3.0 - 4.0 * y * n4 / n3];
    let in_range = d.iter().enumerate().all(|(k, &dk)| dk > 0.0 && dk <= (k + 1) as f64);
    in_range.then_some(d)
}

fn discount_for(d: &[f64; 3], count: u64) -> f64 {
    match count {
        0 => 0.0,
        1 => d[0],
        2 => d[1],
        _ => d[2],
    }
}

pub fn train_lm(sentences: &[Vec<String>], config: &LmConfig) -> Result<NgramModel> {
    let order = config.order;
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(Error::InvalidArgument(format!("order must be in 1..={MAX_ORDER}, got {order}")));
    }
    if sentences.iter().all(|s| s.is_empty()) {
        return Err(Error::InvalidArgument("training corpus has no sentences".into()));
    }
    if !(config.fallback_discount > 0.0 && config.fallback_discount <= 1.0) {
        return Err(Error::InvalidArgument("fallback discount must be in (0, 1]".into()));
    }

    let hapax: HashMap<&str, u64> = if config.unk_hapax {
        let mut freq = HashMap::new();
        for word in sentences.iter().flatten() {
            *freq.entry(word.as_str()).or_insert(0u64) += 1;
        }
        freq
    } else {
        HashMap::new()
    };

    let mut vocab: Vec<String> = vec![UNK.into(), BOS.into(), EOS.into()];
    let mut index: HashMap<String, u32> = vocab.iter().cloned().zip(0..).collect();
    let mut padded: Vec<Vec<u32>> = Vec::with_capacity(sentences.len());
    for sentence in sentences.iter().filter(|s| !s.is_empty()) {
        let mut ids = Vec::with_capacity(sentence.len() + 2);
        ids.push(BOS_ID);
        for word in sentence {
            let id = if hapax.get(word.as_str()) == Some(&1) || word == BOS || word == EOS {
                UNK_ID
            } else {
                *index.entry(word.clone()).or_insert_with(|| {
                    vocab.push(word.clone());
                    (vocab.len() - 1) as u32
                })
            };
            ids.push(id);
        }
        ids.push(EOS_ID);
        padded.push(ids);
    }

    // Raw counts of every n-gram up to the model order.
    let mut raw: Vec<Counts> = vec![HashMap::new(); order];
    for ids in &padded {
        for n in 1..=order {
            for gram in ids.windows(n) {
                *raw[n - 1].entry(gram.to_vec()).or_insert(0) += 1;
            }
        }
    }

    // Adjusted counts: raw at the top order and for n-grams anchored at <s>,
    // otherwise the number of distinct left extensions.
    let mut adjusted: Vec<Counts> = Vec::with_capacity(order);
    for n in 1..=order {
        if n == order {
            adjusted.push(raw[n - 1].clone());
            continue;
        }
        let mut a: Counts = HashMap::with_capacity(raw[n - 1].len());
        for gram in raw[n].keys() {
            *a.entry(gram[1..].to_vec()).or_insert(0) += 1;
        }
        for (gram, &count) in &raw[n - 1] {
            if gram[0] == BOS_ID {
                a.insert(gram.clone(), count);
            }
        }
        adjusted.push(a);
    }
    // <s> is context only, never an event.
    adjusted[0].remove(&vec![BOS_ID]);

    let mut discounts = Vec::with_capacity(order);
    for (n, a) in adjusted.iter().enumerate() {
        let mut coc = [0u64; 4];
        for &count in a.values() {
            if (1..=4).contains(&count) {
                coc[count as usize - 1] += 1;
            }
        }
        let d = modified_discounts(coc).unwrap_or_else(|| {
            log::warn!(
                "order {}: count-of-counts {coc:?} cannot support modified discounts, using {}",
                n + 1,
                config.fallback_discount
            );
            [config.fallback_discount; 3]
        });
        discounts.push(d);
    }

    // Per-context totals and discount mass, per order. Mass is built from
    // integer tallies so the result does not depend on hash iteration order.
    let mut context_stats: Vec<HashMap<Vec<u32>, (u64, f64)>> = Vec::with_capacity(order);
    for (n, a) in adjusted.iter().enumerate() {
        let mut tallies: HashMap<Vec<u32>, (u64, [u64; 3])> = HashMap::new();
        for (gram, &count) in a {
            let entry = tallies.entry(gram[..n].to_vec()).or_insert((0, [0; 3]));
            entry.0 += count;
            if count > 0 {
                entry.1[(count.min(3) - 1) as usize] += 1;
            }
        }
        let d = &discounts[n];
        context_stats.push(
            tallies
                .into_iter()
                .map(|(ctx, (total, k))| (ctx, (total, d[0] * k[0] as f64 + d[1] * k[1] as f64 + d[2] * k[2] as f64)))
                .collect(),
        );
    }

    let predictable = (vocab.len() - 1) as f64;
    let mut tables: Vec<HashMap<Vec<u32>, Entry>> = Vec::with_capacity(order);
    for n in 1..=order {
        let mut table: HashMap<Vec<u32>, Entry> = HashMap::with_capacity(adjusted[n - 1].len());
        let grams: Vec<Vec<u32>> = if n == 1 {
            (0..vocab.len() as u32).filter(|&id| id != BOS_ID).map(|id| vec![id]).collect()
        } else {
            adjusted[n - 1].keys().cloned().collect()
        };
        for gram in grams {
            let context = &gram[..n - 1];
            let count = adjusted[n - 1].get(&gram).copied().unwrap_or(0);
            let (total, mass) = context_stats[n - 1][context];
            let lower = if n == 1 {
                1.0 / predictable
            } else {
                10f64.powf(tables[n - 2][&gram[1..]].prob)
            };
            let prob = (count as f64 - discount_for(&discounts[n - 1], count)) / total as f64
                + mass / total as f64 * lower;
            table.insert(gram, Entry { prob: prob.log10(), backoff: 0.0 });
        }
        if n == 1 {
            table.insert(vec![BOS_ID], Entry { prob: BOS_LOG_PROB, backoff: 0.0 });
        }
        tables.push(table);
    }
    // Backoff weight of a context is the discount mass it reserves.
    for n in 1..order {
        for (context, &(total, mass)) in &context_stats[n] {
            if let Some(entry) = tables[n - 1].get_mut(context) {
                entry.backoff = (mass / total as f64).log10();
            }
        }
    }

    Ok(NgramModel {
        order,
        vocab,
        index,
        tables,
        discounts,
    })
}

/// Train on raw text: one sentence per non-empty line.
pub fn train_lm_on_text(text: &str, config: &LmConfig) -> Result<NgramModel> {
    train_lm(&lm_sentences(text), config)
}

impl NgramModel {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    /// Words that can be predicted: the vocabulary minus `<s>`.
    pub fn predictable_words(&self) -> impl Iterator<Item = &str> {
        self.vocab.iter().map(String::as_str).filter(|w| *w != BOS)
    }

    pub fn discounts(&self) -> &[[f64; 3]] {
        &self.discounts
    }

    pub fn ngram_count(&self, n: usize) -> usize {
        self.tables.get(n.wrapping_sub(1)).map_or(0, HashMap::len)
    }

    pub fn id(&self, word: &str) -> u32 {
        self.index.get(word).copied().unwrap_or(UNK_ID)
    }

    /// Stored n-grams of one order as `(words, log10 prob, log10 backoff)`,
    /// sorted for stable output.
    pub fn ngrams(&self, n: usize) -> Vec<(Vec<&str>, f64, f64)> {
        let mut rows: Vec<_> = self.tables[n - 1]
            .iter()
            .map(|(gram, e)| (gram.iter().map(|&id| self.vocab[id as usize].as_str()).collect::<Vec<_>>(), e.prob, e.backoff))
            .collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        rows
    }

    /// log10 P(word | context), backing off through shorter contexts.
    /// Only the last `order - 1` context words are used.
    pub fn log10_prob(&self, context: &[&str], word: &str) -> f64 {
        let ids: Vec<u32> = context.iter().map(|w| self.id(w)).collect();
        self.log10_prob_ids(&ids, self.id(word))
    }

    fn log10_prob_ids(&self, context: &[u32], word: u32) -> f64 {
        let keep = context.len().min(self.order - 1);
        let mut context = &context[context.len() - keep..];
        let mut backoff = 0.0;
        let mut key = Vec::with_capacity(self.order);
        loop {
            key.clear();
            key.extend_from_slice(context);
            key.push(word);
            if let Some(entry) = self.tables[context.len()].get(&key) {
                return backoff + entry.prob;
            }
            if context.is_empty() {
                // Only reachable for ids outside the vocabulary.
                return backoff + self.tables[0][&vec![UNK_ID]].prob;
            }
            if let Some(entry) = self.tables[context.len() - 1].get(context) {
                backoff += entry.backoff;
            }
            context = &context[1..];
        }
    }

    /// Total log10 probability of one tokenized sentence, including `</s>`,
    /// and the number of scored events.
    pub fn sentence_log10(&self, tokens: &[String]) -> (f64, usize) {
        let mut history: Vec<u32> = vec![BOS_ID];
        let mut total = 0.0;
        for token in tokens {
            let id = self.id(token);
            total += self.log10_prob_ids(&history, id);
            history.push(id);
        }
        total += self.log10_prob_ids(&history, EOS_ID);
        (total, tokens.len() + 1)
    }

    /// Per-token perplexity of `text`, one sentence per non-empty line.
    pub fn perplexity(&self, text: &str) -> Result<f64> {
        self.perplexity_of_sentences(&lm_sentences(text))
    }

    pub fn perplexity_of_sentences(&self, sentences: &[Vec<String>]) -> Result<f64> {
        let mut total = 0.0;
        let mut events = 0usize;
        for sentence in sentences.iter().filter(|s| !s.is_empty()) {
            let (lp, n) = self.sentence_log10(sentence);
            total += lp;
            events += n;
        }
        if events == 0 {
            return Err(Error::EmptyDocument);
        }
        Ok(10f64.powf(-total / events as f64))
    }

    pub fn save_arpa(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|source| Error::Open {
            path: path.to_path_buf(),
            source,
        })?;
        let mut writer = std::io::BufWriter::new(file);
        self.write_arpa(&mut writer)?;
        Ok(())
    }

    pub fn load_arpa(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|source| Error::Open {
            path: path.to_path_buf(),
            source,
        })?;
        Self::read_arpa(std::io::BufReader::new(file))
    }
}
