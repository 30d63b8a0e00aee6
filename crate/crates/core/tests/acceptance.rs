//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line. The criteria and their bounds live in
//! `epiloc::acceptance`.

use std::io::Write;

use epiloc::acceptance::{self, Outcome};

fn report(outcome: Outcome) {
    let line = format!("{}\n", outcome.line());
    // written past the test harness capture so the line always shows
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(outcome.passed, "criterion {} failed: {}", outcome.criterion, outcome.detail);
}

#[test]
fn criterion_01_s3_localization() {
    report(acceptance::criterion_01_s3_localization());
}

#[test]
fn criterion_02_z_map_law() {
    report(acceptance::criterion_02_z_map_law());
}

#[test]
fn criterion_03_benson_sequence() {
    report(acceptance::criterion_03_benson_sequence());
}

#[test]
fn criterion_04_tor_formula() {
    report(acceptance::criterion_04_tor_formula());
}

#[test]
fn criterion_05_epimorphism_agreement() {
    report(acceptance::criterion_05_epimorphism_agreement());
}

#[test]
fn criterion_06_filtration() {
    report(acceptance::criterion_06_filtration());
}

#[test]
fn criterion_07_omega_versus_multiplication() {
    report(acceptance::criterion_07_omega_versus_multiplication());
}

#[test]
fn criterion_08_resolution_independence() {
    report(acceptance::criterion_08_resolution_independence());
}

#[test]
fn criterion_09_nakayama() {
    report(acceptance::criterion_09_nakayama());
}

#[test]
fn criterion_10_hilbert_series() {
    report(acceptance::criterion_10_hilbert_series());
}
