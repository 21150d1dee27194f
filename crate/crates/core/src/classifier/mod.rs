//! Linear softmax classifier over hashed unigram and bigram features.
//!
//! Each document becomes a sparse bag of n-gram buckets normalised by its
//! token count (so the representation is the average of its feature
//! one-hots), scored by a `buckets × classes` weight matrix. Trained with
//! shuffled SGD and a linearly decaying learning rate.

mod corpus;
mod io;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hash::stable_hash;

pub use corpus::{build_mathscore_corpus, labeled_lines, strip_latex, MATH_LABEL, OTHER_LABEL};
pub use io::MAGIC;

pub const DEFAULT_HASH_BITS: u32 = 21;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledExample {
    pub text: String,
    pub label: String,
}

impl LabeledExample {
    pub fn new(text: impl Into<String>, label: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            label: label.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierModel {
    hash_bits: u32,
    ngram_orders: Vec<u32>,
    /// Row-major `[bucket][class]`.
    weights: Vec<f32>,
    class_names: Vec<String>,
}

/// Sparse, L1-normalised feature vector: `(bucket, weight)` pairs sorted by
/// bucket with duplicates merged.
pub type Features = Vec<(u32, f64)>;

impl ClassifierModel {
    /// An all-zero model.
    pub fn zeros(hash_bits: u32, ngram_orders: Vec<u32>, class_names: Vec<String>) -> Result<Self> {
        validate_shape(hash_bits, &ngram_orders, &class_names)?;
        let buckets = 1usize << hash_bits;
        Ok(Self {
            hash_bits,
            ngram_orders,
            weights: vec![0.0; buckets * class_names.len()],
            class_names,
        })
    }

    pub(crate) fn from_parts(
        hash_bits: u32,
        ngram_orders: Vec<u32>,
        class_names: Vec<String>,
        weights: Vec<f32>,
    ) -> Result<Self> {
        validate_shape(hash_bits, &ngram_orders, &class_names)?;
        let expected = (1usize << hash_bits) * class_names.len();
        if weights.len() != expected {
            return Err(Error::ModelFormat(format!(
                "weight matrix has {} entries, expected {expected}",
                weights.len()
            )));
        }
        Ok(Self {
            hash_bits,
            ngram_orders,
            weights,
            class_names,
        })
    }

    pub fn hash_bits(&self) -> u32 {
        self.hash_bits
    }

    pub fn buckets(&self) -> usize {
        1 << self.hash_bits
    }

    pub fn ngram_orders(&self) -> &[u32] {
        &self.ngram_orders
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn weights(&self) -> &[f32] {
        &self.weights
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.class_names.iter().position(|c| c == name)
    }

    pub fn features(&self, text: &str) -> Features {
        featurize(text, self.hash_bits, &self.ngram_orders)
    }

    /// Class probabilities in `class_names` order.
    pub fn probabilities(&self, text: &str) -> Vec<f64> {
        let features = self.features(text);
        let classes = self.class_names.len();
        let mut logits = vec![0.0f64; classes];
        for &(bucket, x) in &features {
            let row = &self.weights[bucket as usize * classes..][..classes];
            for (logit, &w) in logits.iter_mut().zip(row) {
                *logit += x * f64::from(w);
            }
        }
        softmax(&logits)
    }

    /// Probability per class name. Empty text gives the uniform distribution.
    pub fn predict(&self, text: &str) -> Vec<(String, f64)> {
        self.class_names
            .iter()
            .cloned()
            .zip(self.probabilities(text))
            .collect()
    }

    pub fn probability_of(&self, text: &str, class: &str) -> Option<f64> {
        let index = self.class_index(class)?;
        Some(self.probabilities(text)[index])
    }

    /// Most probable class and its probability.
    pub fn top(&self, text: &str) -> (String, f64) {
        let probs = self.probabilities(text);
        let (index, p) = probs
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &p)| if p > best.1 { (i, p) } else { best });
        (self.class_names[index].clone(), p)
    }
}

fn validate_shape(hash_bits: u32, orders: &[u32], class_names: &[String]) -> Result<()> {
    if !(1..=28).contains(&hash_bits) {
        return Err(Error::ModelFormat(format!("hash bits {hash_bits} out of range 1..=28")));
    }
    if orders.is_empty() || orders.iter().any(|&o| o == 0 || o > 5) {
        return Err(Error::ModelFormat(format!("invalid n-gram orders {orders:?}")));
    }
    if class_names.len() < 2 {
        return Err(Error::DegenerateLabels(class_names.len()));
    }
    let mut sorted = class_names.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != class_names.len() {
        return Err(Error::ModelFormat("duplicate class names".into()));
    }
    Ok(())
}

/// Lowercased whitespace tokens with surrounding punctuation removed.
pub fn tokens(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|t| t.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase())
        .filter(|t| !t.is_empty())
        .collect()
}

pub fn featurize(text: &str, hash_bits: u32, orders: &[u32]) -> Features {
    let toks = tokens(text);
    let mask = (1u64 << hash_bits) - 1;
    let mut buckets: Vec<u32> = Vec::with_capacity(toks.len() * orders.len());
    let mut gram = String::new();
    for &order in orders {
        let n = order as usize;
        for window in toks.windows(n) {
            gram.clear();
            for (i, t) in window.iter().enumerate() {
                if i > 0 {
                    gram.push(' ');
                }
                gram.push_str(t);
            }
            buckets.push((stable_hash(gram.as_bytes()) & mask) as u32);
        }
    }
    if buckets.is_empty() {
        return Vec::new();
    }
    let total = buckets.len() as f64;
    buckets.sort_unstable();
    let mut out: Features = Vec::new();
    for b in buckets {
        match out.last_mut() {
            Some((last, count)) if *last == b => *count += 1.0,
            _ => out.push((b, 1.0)),
        }
    }
    for (_, x) in &mut out {
        *x /= total;
    }
    out
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Cross-entropy of one example under dense `f64` weights, with its gradient
/// as sparse `(flat weight index, value)` pairs.
pub fn loss_and_gradient(
    weights: &[f64],
    classes: usize,
    features: &[(u32, f64)],
    label: usize,
) -> (f64, Vec<(usize, f64)>) {
    let probs = softmax(&logits(weights, classes, features));
    let loss = -probs[label].max(f64::MIN_POSITIVE).ln();
    let mut grad = Vec::with_capacity(features.len() * classes);
    for &(bucket, x) in features {
        for (c, &p) in probs.iter().enumerate() {
            let target = if c == label { 1.0 } else { 0.0 };
            grad.push((bucket as usize * classes + c, x * (p - target)));
        }
    }
    (loss, grad)
}

fn logits(weights: &[f64], classes: usize, features: &[(u32, f64)]) -> Vec<f64> {
    let mut out = vec![0.0; classes];
    for &(bucket, x) in features {
        let row = &weights[bucket as usize * classes..][..classes];
        for (l, w) in out.iter_mut().zip(row) {
            *l += x * w;
        }
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub hash_bits: u32,
    pub ngram_orders: Vec<u32>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 5,
            learning_rate: 0.5,
            seed: 0,
            hash_bits: DEFAULT_HASH_BITS,
            ngram_orders: vec![1, 2],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainReport {
    /// Mean training cross-entropy after each epoch.
    pub epoch_losses: Vec<f64>,
}

pub fn train(examples: &[LabeledExample], config: &TrainConfig) -> Result<ClassifierModel> {
    train_with_report(examples, config).map(|(model, _)| model)
}

pub fn train_with_report(
    examples: &[LabeledExample],
    config: &TrainConfig,
) -> Result<(ClassifierModel, TrainReport)> {
    if config.epochs == 0 {
        return Err(Error::InvalidArgument("epochs must be at least 1".into()));
    }
    if config.learning_rate.is_nan() || config.learning_rate <= 0.0 {
        return Err(Error::InvalidArgument("learning rate must be positive".into()));
    }
    let mut class_names: Vec<String> = examples.iter().map(|e| e.label.clone()).collect();
    class_names.sort();
    class_names.dedup();
    if class_names.len() < 2 {
        return Err(Error::DegenerateLabels(class_names.len()));
    }
    validate_shape(config.hash_bits, &config.ngram_orders, &class_names)?;
    let classes = class_names.len();
    let data: Vec<(Features, usize)> = examples
        .iter()
        .map(|e| {
            let label = class_names.binary_search(&e.label).expect("label collected above");
            (featurize(&e.text, config.hash_bits, &config.ngram_orders), label)
        })
        .collect();

    let mut weights = vec![0.0f64; (1usize << config.hash_bits) * classes];
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let total_steps = (config.epochs * data.len()).max(1) as f64;
    let mut step = 0usize;
    let mut report = TrainReport::default();
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let lr = config.learning_rate * (1.0 - step as f64 / total_steps);
            step += 1;
            let (features, label) = &data[i];
            // Count-normalized features have a squared norm near 1/n, so a raw
            // step would shrink with document length. Dividing by the norm
            // keeps the effective step independent of length and stable
            // for rates below 2.
            let norm: f64 = features.iter().map(|&(_, x)| x * x).sum();
            if norm == 0.0 {
                continue;
            }
            let (_, grad) = loss_and_gradient(&weights, classes, features, *label);
            for (index, g) in grad {
                weights[index] -= lr / norm * g;
            }
        }
        let loss = data
            .iter()
            .map(|(f, l)| loss_and_gradient(&weights, classes, f, *l).0)
            .sum::<f64>()
            / data.len().max(1) as f64;
        report.epoch_losses.push(loss);
    }
    let model = ClassifierModel {
        hash_bits: config.hash_bits,
        ngram_orders: config.ngram_orders.clone(),
        weights: weights.into_iter().map(|w| w as f32).collect(),
        class_names,
    };
    Ok((model, report))
}
