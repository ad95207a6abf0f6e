//! The public report API as seen by a downstream user.

use qe_core::report::{Expectation, VerificationReport};
use qe_core::suite::{run_suite, Corpus, SuiteOptions};

fn report(opts: &SuiteOptions) -> VerificationReport {
    run_suite(&Corpus::load(&Corpus::default_dir()).expect("corpus loads"), opts)
}

#[test]
fn suite_report_serializes_and_round_trips() {
    let r = report(&SuiteOptions::default());
    assert!(r.success());
    let json = r.to_json();
    let back: VerificationReport = serde_json::from_str(&json).expect("report deserializes");
    assert_eq!(back.comparison_surface(), r.comparison_surface());
    assert!(!r.comparison_surface().contains("wall_ms"));
    assert!(r.checks.iter().any(|c| c.expected == Expectation::Fail));
    assert!(r.checks.iter().any(|c| c.expected == Expectation::Refuse));
    assert!(r.render_text().contains(&format!("{n} of {n} checks met", n = r.checks.len())));
}
