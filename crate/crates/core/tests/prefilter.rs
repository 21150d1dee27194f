mod support;

use mathcrawl_core::prefilter::{prefilter_page, CountingScorer, MathScorer, DEFAULT_THRESHOLD};
use mathcrawl_core::resources::first_command;
use mathcrawl_core::{decode_html, open_shard, KeywordList, Tier};
use proptest::prelude::*;
use support::fixtures::dir;
use support::models::mathscore;

/// Deterministic stand-in for the classifier: more digits, higher score.
struct DigitScorer;

impl MathScorer for DigitScorer {
    fn math_probability(&self, text: &str) -> f64 {
        let digits = text.chars().filter(char::is_ascii_digit).count();
        (digits as f64 / 20.0).min(1.0)
    }
}

fn fixture_pages() -> Vec<(String, String)> {
    let mut pages = Vec::new();
    for shard in [dir("shard").join("fixture-20.warc.gz"), dir("mathscore").join("corpus.warc.gz")] {
        for record in open_shard(&shard).unwrap() {
            let record = record.unwrap();
            pages.push((record.url.clone(), decode_html(&record)));
        }
    }
    pages
}

fn html_page() -> impl Strategy<Value = String> {
    prop::collection::vec("[A-Za-z0-9 ,.]{0,40}", 0..6).prop_map(|ps| {
        let body: String = ps.iter().map(|p| format!("<p>{p}</p>")).collect();
        format!("<html><body>{body}</body></html>")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn adding_a_keyword_never_loses_a_page(page in html_page(), at in any::<prop::sample::Index>(), pick in any::<prop::sample::Index>()) {
        let keywords = KeywordList::default();
        let before = prefilter_page(&page, &keywords, &DigitScorer, DEFAULT_THRESHOLD);
        let term = pick.get(keywords.terms());
        let mut cut = at.index(page.len() + 1);
        while !page.is_char_boundary(cut) {
            cut -= 1;
        }
        let after_page = format!("{}{term}{}", &page[..cut], &page[cut..]);
        let after = prefilter_page(&after_page, &keywords, &DigitScorer, DEFAULT_THRESHOLD);
        prop_assert!(after.keep);
        prop_assert!(!before.keep || after.keep);
        prop_assert_eq!(after.tier, Tier::Keyword);
    }

    #[test]
    fn extra_terms_only_widen_the_keep_set(page in html_page(), extra in "[a-z]{3,8}") {
        let base = KeywordList::default();
        let wider = KeywordList::default().with_term(extra);
        let a = prefilter_page(&page, &base, &DigitScorer, DEFAULT_THRESHOLD);
        let b = prefilter_page(&page, &wider, &DigitScorer, DEFAULT_THRESHOLD);
        prop_assert!(!a.keep || b.keep);
    }

    #[test]
    fn lowering_the_threshold_only_widens_the_keep_set(page in html_page(), t in 0.0f64..1.0, dt in 0.0f64..1.0) {
        let keywords = KeywordList::default();
        let strict = prefilter_page(&page, &keywords, &DigitScorer, t + dt);
        let loose = prefilter_page(&page, &keywords, &DigitScorer, t);
        prop_assert!(!strict.keep || loose.keep);
    }

    #[test]
    fn keyword_pages_never_reach_the_scorer(page in html_page(), pick in any::<prop::sample::Index>()) {
        let keywords = KeywordList::default();
        let page = format!("{}{page}", pick.get(keywords.terms()));
        let counting = CountingScorer::new(&DigitScorer);
        prefilter_page(&page, &keywords, &counting, DEFAULT_THRESHOLD);
        prop_assert_eq!(counting.calls(), 0);
    }
}

#[test]
fn tiers_are_tried_in_order_on_the_fixture_corpus() {
    let keywords = KeywordList::default();
    let model = mathscore();
    let mut seen = std::collections::HashMap::new();
    for (url, html) in fixture_pages() {
        let counting = CountingScorer::new(&model);
        let decision = prefilter_page(&html, &keywords, &counting, DEFAULT_THRESHOLD);
        *seen.entry(decision.tier).or_insert(0) += 1;
        let has_keyword = keywords.terms().iter().any(|t| html.contains(t.as_str()));
        let rough = mathcrawl_core::markup::rough_text(&html);
        let has_symbol = html.contains('\\') && first_command(&rough, keywords.symbols()).is_some();
        match decision.tier {
            Tier::Keyword => {
                assert!(has_keyword, "{url}");
                assert_eq!(counting.calls(), 0, "{url}");
            }
            Tier::LatexSymbol => {
                assert!(!has_keyword && has_symbol, "{url}");
                assert_eq!(counting.calls(), 0, "{url}");
            }
            Tier::Classifier | Tier::Rejected => {
                assert!(!has_keyword && !has_symbol, "{url}");
                // An empty body is rejected before the classifier is asked.
                assert_eq!(counting.calls(), u64::from(!html.is_empty()), "{url}");
            }
        }
        assert_eq!(decision.keep, decision.tier != Tier::Rejected);
    }
    assert!(seen.get(&Tier::Keyword).is_some_and(|&n| n > 0), "{seen:?}");
    assert!(seen.get(&Tier::Rejected).is_some_and(|&n| n > 0), "{seen:?}");
}

#[test]
fn every_math_page_in_the_shard_passes() {
    let truth: std::collections::BTreeMap<String, bool> =
        serde_json::from_str(&std::fs::read_to_string(dir("shard").join("truth.json")).unwrap()).unwrap();
    let keywords = KeywordList::default();
    let model = mathscore();
    for record in open_shard(&dir("shard").join("fixture-20.warc.gz")).unwrap() {
        let record = record.unwrap();
        if truth.get(&record.url) == Some(&true) {
            let d = prefilter_page(&decode_html(&record), &keywords, &model, DEFAULT_THRESHOLD);
            assert!(d.keep, "{} rejected", record.url);
        }
    }
}
