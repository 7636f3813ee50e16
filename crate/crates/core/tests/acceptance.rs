//! The full acceptance gate: every numbered cross-validation criterion at the
//! default sample budget, one verdict line each.
//!
//! Run with `--nocapture` to watch the lines stream; on failure the report is
//! part of the panic message.

use crn_sop::selftest::{run_criterion, SelftestOptions, CRITERION_COUNT};

#[test]
fn all_criteria_pass_at_the_default_budget() {
    let opts = SelftestOptions::default();
    let mut failures = Vec::new();
    for id in 1..=CRITERION_COUNT {
        let r = run_criterion(id, &opts);
        println!("{}", r.line());
        if !r.passed {
            failures.push(r.line());
        }
    }
    assert!(
        failures.is_empty(),
        "{} of {CRITERION_COUNT} criteria failed:\n{}",
        failures.len(),
        failures.join("\n")
    );
}
