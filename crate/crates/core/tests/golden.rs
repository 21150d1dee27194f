mod support;

use std::collections::BTreeSet;

use mathcrawl_core::SpanKind;
use support::fixtures::{check_golden, check_no_formula_lost, golden_cases};

#[test]
fn every_fixture_yields_its_expected_spans() {
    check_golden().unwrap();
}

#[test]
fn corpus_covers_every_kind_twice() {
    let cases = golden_cases();
    assert!(cases.len() >= 24);
    for kind in SpanKind::ALL {
        let pages: BTreeSet<&str> = cases
            .iter()
            .filter(|c| c.expected.iter().any(|s| s.kind == kind.as_str()))
            .map(|c| c.name.as_str())
            .collect();
        assert!(pages.len() >= 2, "{kind} appears on {} pages", pages.len());
    }
}

#[test]
fn content_extraction_loses_no_formula() {
    assert!(check_no_formula_lost(8).unwrap() > 0);
}
