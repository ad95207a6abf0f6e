use std::collections::BTreeSet;

use super::*;

fn corpus() -> Corpus {
    Corpus::load(&Corpus::default_dir()).unwrap()
}

#[test]
fn shipped_corpus_loads() {
    let c = corpus();
    assert!(c.entries.len() >= 20);
    for kind in CorpusKind::ALL {
        assert!(c.of_kind(kind).count() >= 3, "{kind:?}");
    }
    assert!(c.get("qe/plane_wave").is_some());
    assert_eq!(c.hash(), corpus().hash());
}

#[test]
fn default_suite_meets_every_expectation() {
    let c = corpus();
    let r = run_suite(&c, &SuiteOptions::default());
    assert!(r.success(), "{}", r.render_text());
    let ids: BTreeSet<&str> = r.checks.iter().map(|c| c.id.as_str()).collect();
    assert_eq!(ids.len(), r.checks.len(), "check ids are unique");
    let verdict = r.checks.iter().find(|c| c.id == "divweyl_reading.verdict").unwrap();
    assert!(verdict.residual.contains("grouped"), "{}", verdict.residual);
    assert_eq!(verdict.status, Status::Zero);
}

#[test]
fn injected_sign_error_fails_calibration() {
    let c = corpus();
    let opts = SuiteOptions { inject_weyl_sign_error: true, ..SuiteOptions::default() };
    let r = run_suite(&c, &opts);
    assert!(!r.success());
    assert!(r.summary.unmet.iter().all(|id| id.starts_with("closed_form.")), "{:?}", r.summary.unmet);
    let failing = r.checks.iter().find(|c| !c.met()).unwrap();
    assert_eq!(failing.anchor, "Lemma \"W-divW\"");
}

#[test]
fn reports_are_deterministic() {
    let c = corpus();
    let a = run_suite(&c, &SuiteOptions::default());
    let b = run_suite(&c, &SuiteOptions::default());
    assert_eq!(a.comparison_surface(), b.comparison_surface());
    let other = run_suite(&c, &SuiteOptions { seed: 7, ..SuiteOptions::default() });
    assert_ne!(a.comparison_surface(), other.comparison_surface());
}
