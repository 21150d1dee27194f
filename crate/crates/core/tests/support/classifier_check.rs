//! Independent checks of the linear classifier: finite-difference
//! gradients, a separable corpus and the probability simplex.

use mathcrawl_core::classifier::{loss_and_gradient, train, train_with_report};
use mathcrawl_core::{ClassifierModel, LabeledExample, TrainConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STEP: f64 = 1e-5;

/// Relative error with a floor on the denominator, so that gradients that
/// are zero analytically are compared in absolute terms.
fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-4)
}

/// Compare the analytic gradient of one random model and example against
/// central finite differences over every weight. Returns the worst
/// relative error.
pub fn gradient_check(seed: u64) -> Result<f64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let buckets = rng.gen_range(2..12usize);
    let classes = rng.gen_range(2..5usize);
    let weights: Vec<f64> = (0..buckets * classes).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let mut features: Vec<(u32, f64)> = Vec::new();
    for b in 0..buckets as u32 {
        if rng.gen_bool(0.6) {
            features.push((b, rng.gen_range(0.05..1.0)));
        }
    }
    if features.is_empty() {
        features.push((0, 1.0));
    }
    let total: f64 = features.iter().map(|f| f.1).sum();
    features.iter_mut().for_each(|f| f.1 /= total);
    let label = rng.gen_range(0..classes);

    let (_, sparse) = loss_and_gradient(&weights, classes, &features, label);
    let mut analytic = vec![0.0; weights.len()];
    for (i, g) in sparse {
        analytic[i] += g;
    }
    let mut worst: f64 = 0.0;
    let mut probe = weights.clone();
    for i in 0..weights.len() {
        probe[i] = weights[i] + STEP;
        let up = loss_and_gradient(&probe, classes, &features, label).0;
        probe[i] = weights[i] - STEP;
        let down = loss_and_gradient(&probe, classes, &features, label).0;
        probe[i] = weights[i];
        let numeric = (up - down) / (2.0 * STEP);
        let err = relative_error(analytic[i], numeric);
        if err > 1e-5 {
            return Err(format!("seed {seed} weight {i}: analytic {} numeric {numeric}", analytic[i]));
        }
        worst = worst.max(err);
    }
    Ok(worst)
}

pub const MATH_WORDS: [&str; 3] = ["theorem", "integral", "polynomial"];
pub const OTHER_WORDS: [&str; 3] = ["recipe", "weather", "football"];

/// 200 documents drawn from two disjoint vocabularies.
pub fn separable_corpus(seed: u64) -> Vec<LabeledExample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..200)
        .map(|i| {
            let (vocab, label) = if i % 2 == 0 { (&MATH_WORDS, "math") } else { (&OTHER_WORDS, "other") };
            let len = rng.gen_range(1..12);
            let words: Vec<&str> = (0..len).map(|_| vocab[rng.gen_range(0..3)]).collect();
            LabeledExample::new(words.join(" "), label)
        })
        .collect()
}

pub fn small_config() -> TrainConfig {
    TrainConfig {
        hash_bits: 16,
        ..TrainConfig::default()
    }
}

/// Train on the separable corpus with default epochs. Returns the training
/// accuracy, failing if the epoch losses ever increase.
pub fn separable_accuracy(seed: u64) -> Result<f64, String> {
    let corpus = separable_corpus(seed);
    let (model, report) = train_with_report(&corpus, &small_config()).map_err(|e| e.to_string())?;
    if let Some(w) = report.epoch_losses.windows(2).find(|w| w[1] > w[0]) {
        return Err(format!("loss went up: {} -> {}", w[0], w[1]));
    }
    let correct = corpus.iter().filter(|e| model.top(&e.text).0 == e.label).count();
    Ok(correct as f64 / corpus.len() as f64)
}

pub fn trained_three_class_model() -> ClassifierModel {
    let mut corpus = separable_corpus(1);
    corpus.extend((0..50).map(|i| LabeledExample::new(format!("garden tulip {i}"), "garden")));
    train(&corpus, &small_config()).unwrap()
}

/// Random text: words from both vocabularies, noise and unicode.
pub fn random_text(rng: &mut ChaCha8Rng) -> String {
    const POOL: [&str; 12] = [
        "theorem", "integral", "recipe", "weather", "tulip", "∫", "λ", "x^2", "the", "!!", "ünïcode", "42",
    ];
    let len = rng.gen_range(0..30);
    (0..len).map(|_| POOL[rng.gen_range(0..POOL.len())]).collect::<Vec<_>>().join(" ")
}

/// Check `count` random inputs sum to one within 1e-9 with every
/// probability in [0, 1].
pub fn simplex_check(model: &ClassifierModel, count: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let text = random_text(&mut rng);
        let probs = model.probabilities(&text);
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 || probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(format!("{text:?} gives {probs:?}"));
        }
    }
    Ok(())
}
