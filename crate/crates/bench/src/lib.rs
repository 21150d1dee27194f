//! Inputs shared by the benchmarks: fixture pages and a MathScore model
//! trained on the fixture corpus.

use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use mathcrawl_core::classifier::{build_mathscore_corpus, train};
use mathcrawl_core::pipeline::{extract_shard, ExtractionOptions};
use mathcrawl_core::resources::default_latex_symbols;
use mathcrawl_core::{decode_html, open_shard, ClassifierModel, ContentExtractor, TrainConfig};

pub struct Page {
    pub url: String,
    pub fetch_time: DateTime<Utc>,
    pub html: String,
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

pub fn shards() -> [PathBuf; 2] {
    let f = fixtures();
    [f.join("shard/fixture-20.warc.gz"), f.join("mathscore/corpus.warc.gz")]
}

/// Every HTML page in the fixture shards.
pub fn pages() -> Vec<Page> {
    shards()
        .iter()
        .flat_map(|shard| open_shard(shard).expect("fixture shard opens"))
        .map(|r| {
            let r = r.expect("fixture record parses");
            Page {
                html: decode_html(&r),
                url: r.url,
                fetch_time: r.fetch_time,
            }
        })
        .collect()
}

pub fn mathscore_model() -> ClassifierModel {
    let docs = extract_shard(
        &fixtures().join("mathscore/corpus.warc.gz"),
        &ContentExtractor::default(),
        &ExtractionOptions::default(),
        0,
    )
    .expect("fixture corpus extracts");
    let examples = build_mathscore_corpus(&docs, &default_latex_symbols()).expect("corpus has both labels");
    let config = TrainConfig {
        epochs: 10,
        hash_bits: 18,
        ..TrainConfig::default()
    };
    train(&examples, &config).expect("training succeeds")
}
