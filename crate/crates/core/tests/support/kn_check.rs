//! Comparison of a trained model against the brute-force oracle.

use mathcrawl_core::lm::{train_lm, LmConfig, NgramModel, BOS, UNK};

use super::kn_oracle::KnOracle;

/// Every context of length `0..=max_len` over `alphabet`.
pub fn contexts<'a>(alphabet: &[&'a str], max_len: usize) -> Vec<Vec<&'a str>> {
    let mut all = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for ctx in &frontier {
            for &a in alphabet {
                let mut c: Vec<&str> = ctx.clone();
                c.push(a);
                next.push(c);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

/// Checks every `P(w | ctx)` against the oracle to `1e-9` and that each
/// context's distribution sums to one within `1e-6`. Returns the number of
/// probabilities compared.
pub fn compare(model: &NgramModel, oracle: &KnOracle, alphabet: &[&str], order: usize) -> Result<usize, String> {
    let mut ctx_alphabet: Vec<&str> = alphabet.to_vec();
    ctx_alphabet.push(BOS);
    let mut words: Vec<&str> = model.predictable_words().collect();
    words.push("never-seen");
    let mut compared = 0;
    for ctx in contexts(&ctx_alphabet, order.saturating_sub(1)) {
        let mut sum = 0.0;
        for &w in &words {
            let got = 10f64.powf(model.log10_prob(&ctx, w));
            let oracle_word = if model.vocab().iter().any(|v| v == w) { w } else { UNK };
            let want = oracle.prob(&ctx, oracle_word);
            if (got - want).abs() >= 1e-9 {
                return Err(format!("ctx {ctx:?} word {w}: model {got} oracle {want}"));
            }
            compared += 1;
            if w != "never-seen" {
                sum += got;
            }
        }
        if (sum - 1.0).abs() >= 1e-6 {
            return Err(format!("ctx {ctx:?} sums to {sum}"));
        }
    }
    Ok(compared)
}

/// Train at `order` and compare.
pub fn check_corpus(corpus: &[Vec<String>], alphabet: &[&str], order: usize) -> Result<usize, String> {
    let config = LmConfig {
        order,
        ..LmConfig::default()
    };
    let model = train_lm(corpus, &config).map_err(|e| e.to_string())?;
    let oracle = KnOracle::new(corpus, order, config.fallback_discount);
    compare(&model, &oracle, alphabet, order).map_err(|e| format!("corpus {corpus:?} order {order}: {e}"))
}

/// Every single-sentence corpus over `alphabet` with 1 to `max_len` tokens.
pub fn exhaustive_corpora(alphabet: &[&str], max_len: usize) -> Vec<Vec<Vec<String>>> {
    contexts(alphabet, max_len)
        .into_iter()
        .filter(|s| !s.is_empty())
        .map(|s| vec![s.into_iter().map(str::to_owned).collect()])
        .collect()
}
