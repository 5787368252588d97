//! Full acceptance suite: one test per criterion, each printing a
//! single pass/fail summary line (run with `--nocapture` to see them all).

use abwave::verify::{
    criterion_1, criterion_10, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
    criterion_7, criterion_8, criterion_9, CriterionResult,
};

fn check(result: CriterionResult) {
    println!("{}", result.summary_line());
    assert!(
        result.pass,
        "criterion {} failed: measured {:.6e} vs tolerance {:.6e} ({})",
        result.criterion_id, result.measured, result.tolerance, result.description
    );
}

#[test]
fn criterion_01_abel_series_identity() {
    check(criterion_1());
}

#[test]
fn criterion_02_commutator_pairing_constant() {
    check(criterion_2());
}

#[test]
fn criterion_03_flagship_probe() {
    check(criterion_3(false));
}

#[test]
fn criterion_04_coefficient_scaling_laws() {
    check(criterion_4());
}

#[test]
fn criterion_05_free_field_limit() {
    check(criterion_5());
}

#[test]
fn criterion_06_special_function_accuracy() {
    check(criterion_6());
}

#[test]
fn criterion_07_kernel_symmetries() {
    check(criterion_7());
}

#[test]
fn criterion_08_duhamel_stationary_phase() {
    check(criterion_8());
}

#[test]
fn criterion_09_boundary_functionals() {
    check(criterion_9());
}

#[test]
fn criterion_10_geometric_front_phase() {
    check(criterion_10());
}
