//! Models trained from the fixture corpora, cached per test binary.

use std::sync::OnceLock;

use mathcrawl_core::classifier::{build_mathscore_corpus, labeled_lines, train};
use mathcrawl_core::lm::{lm_sentences, train_lm};
use mathcrawl_core::pipeline::{extract_shard, ExtractionOptions, Models};
use mathcrawl_core::resources::default_latex_symbols;
use mathcrawl_core::{ClassifierModel, ContentExtractor, LmConfig, NgramModel, TrainConfig};

use super::fixtures::dir;

pub const LANGUAGES: [&str; 4] = ["en", "fr", "de", "es"];

pub fn classifier_config() -> TrainConfig {
    TrainConfig {
        epochs: 10,
        hash_bits: 18,
        ..TrainConfig::default()
    }
}

pub fn langid() -> ClassifierModel {
    let mut examples = Vec::new();
    for lang in LANGUAGES {
        let text = std::fs::read_to_string(dir("langid").join(format!("{lang}.txt"))).unwrap();
        examples.extend(labeled_lines(lang, &text));
    }
    train(&examples, &classifier_config()).unwrap()
}

pub fn mathscore() -> ClassifierModel {
    let docs = extract_shard(
        &dir("mathscore").join("corpus.warc.gz"),
        &ContentExtractor::default(),
        &ExtractionOptions::default(),
        0,
    )
    .unwrap();
    let examples = build_mathscore_corpus(&docs, &default_latex_symbols()).unwrap();
    train(&examples, &classifier_config()).unwrap()
}

pub fn lm() -> NgramModel {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/lm/math_prose.txt")).unwrap();
    train_lm(&lm_sentences(&text), &LmConfig::default()).unwrap()
}

struct Cached {
    langid: ClassifierModel,
    mathscore: ClassifierModel,
    lm: NgramModel,
}

fn cached() -> &'static Cached {
    static MODELS: OnceLock<Cached> = OnceLock::new();
    MODELS.get_or_init(|| Cached {
        langid: langid(),
        mathscore: mathscore(),
        lm: lm(),
    })
}

/// A fresh copy of the fixture models.
pub fn fixture_models() -> Models {
    let c = cached();
    Models {
        mathscore: c.mathscore.clone(),
        langid: c.langid.clone(),
        lm: c.lm.clone(),
    }
}
