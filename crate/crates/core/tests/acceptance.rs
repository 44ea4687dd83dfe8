//! Acceptance criteria at full desk scale, one test per criterion.
//!
//! Each test writes a single `criterion N: PASS|FAIL` line straight to stdout, so
//! the lines appear even when the harness captures test output.

use std::io::Write;
use std::sync::OnceLock;

use dlcoh::verify::{Scale, Verifier};
use dlcoh::Bounds;

fn verifier() -> &'static Verifier {
    static V: OnceLock<Verifier> = OnceLock::new();
    V.get_or_init(|| Verifier::new(Scale::FullDesk, Bounds::default(), 0))
}

fn run(id: u8) {
    let result = verifier().criterion(id);
    let mut out = std::io::stdout().lock();
    writeln!(out, "{result}").unwrap();
    out.flush().unwrap();
    assert!(result.passed(), "{result}");
}

#[test]
fn criterion_1_complex_acyclicity() {
    run(1);
}

#[test]
fn criterion_2_steinberg_cokernel() {
    run(2);
}

#[test]
fn criterion_3_mod_pm_acyclicity() {
    run(3);
}

#[test]
fn criterion_4_spectral_degeneration() {
    run(4);
}

#[test]
fn criterion_5_counting() {
    run(5);
}

#[test]
fn criterion_6_geck_pfeiffer() {
    run(6);
}

#[test]
fn criterion_7_reduction_totality() {
    run(7);
}

#[test]
fn criterion_8_report_shape() {
    run(8);
}
