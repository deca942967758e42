//! Acceptance criteria, one test each. Every test prints its verdict line.

use shortvar::acceptance::{self, Verdict};
use shortvar::Exec;

fn report(v: Verdict) {
    println!("{}", v.line());
    assert!(v.pass, "{}", v.line());
}

#[test]
fn criterion_01_prime_polynomial_theorem() {
    report(acceptance::prime_polynomial_theorem(Exec::Parallel));
}

#[test]
fn criterion_02_involution_suite() {
    report(acceptance::involution_suite(Exec::Parallel));
}

#[test]
fn criterion_03_orthogonality() {
    report(acceptance::orthogonality(Exec::Parallel));
}

#[test]
fn criterion_04_even_count() {
    report(acceptance::even_count(Exec::Parallel));
}

#[test]
fn criterion_05_variance_identity() {
    report(acceptance::variance_identity(Exec::Parallel));
}

#[test]
fn criterion_06_expectation_routes() {
    report(acceptance::expectation_routes(Exec::Parallel));
}

#[test]
fn criterion_07_purity() {
    report(acceptance::purity(Exec::Parallel));
}

#[test]
fn criterion_08_degree_laws() {
    report(acceptance::degree_laws(Exec::Parallel));
}

#[test]
fn criterion_09_matrix_integral() {
    report(acceptance::matrix_integral(Exec::Parallel));
}

#[test]
fn criterion_10_limit_check() {
    report(acceptance::limit_check(Exec::Parallel));
}
