use criterion::{criterion_group, criterion_main, Criterion, Throughput};
use mathcrawl_core::content::document_seed;
use mathcrawl_core::dedup::simhash;
use mathcrawl_core::prefilter::{prefilter_page, DEFAULT_THRESHOLD};
use mathcrawl_core::{ContentExtractor, ExtractionParams, KeywordList, MathExtractor};
use mathcrawl_bench::{mathscore_model, pages};

fn prefilter_and_extract(c: &mut Criterion) {
    let pages = pages();
    let model = mathscore_model();
    let keywords = KeywordList::default();
    let extractor = ContentExtractor::default();

    let mut group = c.benchmark_group("pages");
    group.throughput(Throughput::Elements(pages.len() as u64));
    group.bench_function("prefilter", |b| {
        b.iter(|| {
            pages
                .iter()
                .filter(|p| prefilter_page(&p.html, &keywords, &model, DEFAULT_THRESHOLD).keep)
                .count()
        })
    });
    group.bench_function("math_extract", |b| {
        let math = MathExtractor::default();
        b.iter(|| {
            pages
                .iter()
                .map(|p| math.extract_math(&p.html, &math.detect_mathjax(&p.html)).spans.len())
                .sum::<usize>()
        })
    });
    group.bench_function("prefilter_then_extract", |b| {
        b.iter(|| {
            let mut chars = 0;
            for p in &pages {
                if prefilter_page(&p.html, &keywords, &model, DEFAULT_THRESHOLD).keep {
                    let params = ExtractionParams::from_seed(document_seed(0, &p.url), 0.5);
                    chars += extractor.extract(&p.html, &p.url, p.fetch_time, params).text.len();
                }
            }
            chars
        })
    });
    group.finish();

    let texts: Vec<String> = pages
        .iter()
        .map(|p| extractor.extract(&p.html, &p.url, p.fetch_time, ExtractionParams::from_seed(1, 0.5)).text)
        .collect();
    let mut group = c.benchmark_group("documents");
    group.throughput(Throughput::Elements(texts.len() as u64));
    group.bench_function("simhash", |b| {
        b.iter(|| texts.iter().map(|t| simhash(t, "").bits).fold(0u64, |a, x| a ^ x))
    });
    group.finish();
}

criterion_group!(benches, prefilter_and_extract);
criterion_main!(benches);
