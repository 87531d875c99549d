//! The verification suite as an integration target: one test per
//! criterion, each printing its pass/fail line and detail checks.

use charvar::acceptance::{self, CriterionResult};

fn report(r: &CriterionResult) {
    println!("criterion {}: {} — {}", r.id, if r.passed { "PASS" } else { "FAIL" }, r.title);
    for d in &r.details {
        println!("    {d}");
    }
    assert!(r.passed, "criterion {} failed: {}", r.id, r.title);
}

#[test]
fn criterion_1_homology_spheres() {
    report(&acceptance::criterion_homology_spheres());
}

#[test]
fn criterion_2_arc_oracle() {
    report(&acceptance::criterion_arc_oracle());
}

#[test]
fn criterion_3_two_intersection_loci() {
    report(&acceptance::criterion_two_intersection_loci());
}

#[test]
fn criterion_4_degenerate_point() {
    report(&acceptance::criterion_degenerate_point());
}

#[test]
fn criterion_5_wedge_component() {
    report(&acceptance::criterion_wedge_component());
}

#[test]
fn criterion_6_census() {
    report(&acceptance::criterion_census());
}

#[test]
fn criterion_7_variant_link() {
    report(&acceptance::criterion_variant_link());
}

#[test]
fn criterion_8_property_suites() {
    report(&acceptance::criterion_property_suites());
}
