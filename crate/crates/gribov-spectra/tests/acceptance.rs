//! Acceptance gate: runs every documented verification criterion at its
//! stated tolerance and prints one pass/fail line per criterion.

use gribov_spectra::report::verify_summary;
use gribov_spectra::verify::{run_all, VerifyOptions};

#[test]
fn acceptance_criteria() {
    let report = run_all(&VerifyOptions::default()).expect("verification suite must complete");
    // one pass/fail line per criterion
    print!("{}", verify_summary(&report));
    let failing: Vec<String> = report
        .outcomes
        .iter()
        .filter(|o| !o.pass)
        .map(|o| {
            format!(
                "criterion {} ({}): measured {:.6e} vs threshold {:.6e} [{}]",
                o.index, o.name, o.measured, o.threshold, o.detail
            )
        })
        .collect();
    assert!(
        failing.is_empty(),
        "failing acceptance criteria:\n{}",
        failing.join("\n")
    );
}
