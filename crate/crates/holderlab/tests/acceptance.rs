//! Acceptance gate: every criterion runs and prints one pass/fail line.
//! A failing criterion fails the test.

use holderlab::checks::{run_criterion, CRITERION_IDS};

#[test]
fn acceptance() {
    let mut failures = Vec::new();
    for id in CRITERION_IDS {
        let result = run_criterion(id).unwrap_or_else(|e| panic!("{id} errored: {e}"));
        println!(
            "{}: {} - {} ({})",
            result.id,
            if result.passed { "PASS" } else { "FAIL" },
            result.description,
            result.measured
        );
        if !result.passed {
            failures.push(format!("{}: {}", result.id, result.measured));
        }
    }
    assert!(failures.is_empty(), "failed criteria:\n{}", failures.join("\n"));
}
