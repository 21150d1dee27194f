mod support;

use chrono::{DateTime, Utc};
use mathcrawl_core::content::document_seed;
use mathcrawl_core::math::dollars::{count_unescaped, scan_delimited};
use mathcrawl_core::{ContentExtractor, ExtractionParams, OutputFormat};
use proptest::prelude::*;
use support::fixtures::golden_cases;

fn page() -> impl Strategy<Value = String> {
    let block = prop_oneof![
        "[A-Za-z][A-Za-z ,.]{10,80}".prop_map(|t| format!("<p>{t}</p>")),
        // Prices and stray backslashes are prose, not math.
        ("[A-Za-z ]{5,30}", 1u32..500).prop_map(|(t, n)| format!("<p>{t} costs ${n} or \\ so</p>")),
        "[a-z0-9+=^_ ]{1,12}".prop_map(|t| format!("<p>Consider $x{t}$ here.</p>")),
        "[a-z0-9+=^_ ]{1,12}".prop_map(|t| format!("<p>$$y{t}$$</p>")),
        "[A-Za-z ]{3,20}".prop_map(|t| format!("<h2>{t}</h2>")),
        "[A-Za-z ]{3,20}".prop_map(|t| format!("<ul><li>{t}</li><li>{t} again</li></ul>")),
        "[A-Za-z ]{3,20}".prop_map(|t| format!("<div class=\"sidebar\"><a href=\"/x\">{t}</a></div>")),
    ];
    prop::collection::vec(block, 1..10).prop_map(|blocks| {
        format!(
            "<html><head><script src=\"mathjax.js\"></script></head><body><main>{}</main></body></html>",
            blocks.concat()
        )
    })
}

fn when() -> DateTime<Utc> {
    DateTime::from_timestamp(1_700_000_000, 0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn same_input_same_output(html in page(), seed in any::<u64>()) {
        let extractor = ContentExtractor::default();
        let params = ExtractionParams::from_seed(seed, 0.5);
        let a = extractor.extract(&html, "https://a.example/p", when(), params);
        let b = extractor.extract(&html, "https://a.example/p", when(), params);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn unescaped_dollars_pair_up(html in page(), seed in any::<u64>()) {
        let doc = ContentExtractor::default().extract(&html, "https://a.example/p", when(), ExtractionParams::from_seed(seed, 0.5));
        prop_assert_eq!(count_unescaped(&doc.text) % 2, 0, "{}", doc.text);
        // Every delimited formula in the text is one of the extracted spans.
        let found: Vec<String> = scan_delimited(&doc.text).into_iter().map(|m| m.latex).collect();
        let spans: Vec<String> = doc.spans.iter().map(|s| s.latex.clone()).collect();
        prop_assert_eq!(found, spans);
    }

    #[test]
    fn params_are_a_function_of_the_seed(seed in any::<u64>(), p in 0.0f64..=1.0) {
        let a = ExtractionParams::from_seed(seed, p);
        prop_assert_eq!(a, ExtractionParams::from_seed(seed, p));
        prop_assert!((1..=2).contains(&a.boilerplate_trigger_count));
        prop_assert_eq!(a.rng_seed, seed);
    }
}

#[test]
fn markdown_is_drawn_about_half_the_time() {
    let markdown = (0..1000u64)
        .filter(|&i| ExtractionParams::from_seed(document_seed(42, &format!("https://x.example/{i}")), 0.5).format == OutputFormat::Markdown)
        .count();
    let share = markdown as f64 / 1000.0;
    assert!((0.4..=0.6).contains(&share), "markdown share {share}");

    let triggers_of_one = (0..1000u64)
        .filter(|&s| ExtractionParams::from_seed(s, 0.5).boilerplate_trigger_count == 1)
        .count();
    assert!((400..=600).contains(&triggers_of_one), "{triggers_of_one}");
}

#[test]
fn probability_extremes_pin_the_format() {
    for seed in 0..200 {
        assert_eq!(ExtractionParams::from_seed(seed, 0.0).format, OutputFormat::Plain);
        assert_eq!(ExtractionParams::from_seed(seed, 1.0).format, OutputFormat::Markdown);
    }
}

#[test]
fn document_seed_depends_on_url_and_run() {
    assert_eq!(document_seed(1, "https://a.example/"), document_seed(1, "https://a.example/"));
    assert_ne!(document_seed(1, "https://a.example/"), document_seed(2, "https://a.example/"));
    assert_ne!(document_seed(1, "https://a.example/"), document_seed(1, "https://b.example/"));
}

#[test]
fn markdown_marks_headers_and_plain_does_not() {
    let html = "<html><body><main><h2>Results</h2><p>Some longer paragraph of words that is the main text of the page.</p>\
                <ul><li>first point</li><li>second point</li></ul></main></body></html>";
    let extractor = ContentExtractor::default();
    let md = extractor.extract(html, "https://a.example/", when(), ExtractionParams::fixed(OutputFormat::Markdown, 1));
    let plain = extractor.extract(html, "https://a.example/", when(), ExtractionParams::fixed(OutputFormat::Plain, 1));
    assert!(md.text.contains("## Results"), "{}", md.text);
    assert!(!plain.text.contains('#'), "{}", plain.text);
    assert!(plain.text.contains("Results"));
}

#[test]
fn golden_pages_extract_with_even_dollars() {
    let extractor = ContentExtractor::default();
    for case in golden_cases() {
        for seed in 0..4 {
            let doc = extractor.extract(&case.html, "https://g.example/", when(), ExtractionParams::from_seed(seed, 0.5));
            assert_eq!(count_unescaped(&doc.text) % 2, 0, "{}", case.name);
        }
    }
}
