//! Three-way verification of the closed-form identities.

use proptest::prelude::*;
use sl3theta_core::exactalg::{int, rat, Rational};
use sl3theta_core::qseries::Window;
use sl3theta_core::theta::{levi_limit_verdict, verify_identity, Classification, ClosedFormId, Status};
use sl3theta_core::verma::ModuleSpec;

fn borel_samples() -> Vec<(Rational, Rational)> {
    vec![(rat(7, 3), rat(5, 7)), (rat(11, 5), rat(-3, 7)), (rat(13, 4), rat(9, 11))]
}

fn passes(id: ClosedFormId, spec: &ModuleSpec, window: &Window) -> bool {
    let r = verify_identity(id, spec, window, &[]).unwrap();
    assert_eq!(r.pipeline_agreement, Status::Pass, "{} pipelines disagree", id.name());
    r.status == Status::Pass
}

#[test]
fn parabolic_character() {
    let window = Window::new(0, 0, 8).unwrap();
    for l2 in 0..=3 {
        let spec = ModuleSpec::parabolic(rat(7, 3), l2, 10);
        assert!(passes(ClosedFormId::ParabolicCharacter, &spec, &window), "λ2 = {l2}");
    }
}

#[test]
fn borel_trace13_at_every_sample() {
    let window = Window::new(5, 8, 8).unwrap();
    for (l1, l2) in borel_samples() {
        assert!(passes(ClosedFormId::BorelTrace13, &ModuleSpec::borel(l1, l2, 10), &window));
    }
}

#[test]
fn borel_trace13_on_the_largest_window() {
    let window = Window::new(7, 10, 8).unwrap();
    for (l1, l2) in borel_samples() {
        assert!(passes(ClosedFormId::BorelTrace13, &ModuleSpec::borel(l1, l2, 10), &window));
    }
}

#[test]
fn regularized_borel_traces() {
    let window = Window::new(5, 8, 8).unwrap();
    for id in [ClosedFormId::BorelRegTrace12, ClosedFormId::BorelRegTrace23] {
        let r = verify_identity(id, &ModuleSpec::borel(rat(7, 3), rat(5, 7), 10), &window, &[]).unwrap();
        assert_eq!(r.pipeline_agreement, Status::Pass);
        assert_eq!(r.status, Status::Pass, "{:?}", r.first_mismatch);
        assert_eq!(r.depth_used, 17);
    }
}

#[test]
fn parabolic_traces() {
    let window = Window::new(5, 8, 8).unwrap();
    for l2 in 0..=2 {
        let spec = ModuleSpec::parabolic(rat(7, 3), l2, 10);
        assert!(passes(ClosedFormId::ParabolicTrace13, &spec, &window), "13 at λ2 = {l2}");
        assert!(passes(ClosedFormId::ParabolicTrace12Alt, &spec, &window), "12 alt at λ2 = {l2}");
    }
}

#[test]
fn displayed_parabolic_trace12_has_the_wrong_sign() {
    // the displayed exponent -(2k+1)λ1 leaves nothing with a positive λ1
    // coefficient, while the module's κ eigenvalues all grow with λ1
    let window = Window::new(5, 8, 8).unwrap();
    for l2 in 0..=2 {
        let spec = ModuleSpec::parabolic(rat(7, 3), l2, 10);
        let r = verify_identity(ClosedFormId::ParabolicTrace12, &spec, &window, &[]).unwrap();
        assert_eq!(r.pipeline_agreement, Status::Pass);
        assert_eq!(r.classification, Classification::PaperDiscrepancy);
        assert!(r.closed_form.terms().all(|(m, _)| m.qexp.c1 < 0));
        assert!(r.brute_force.terms().all(|(m, _)| m.qexp.c1 > 0));
    }
}

#[test]
fn levi_limit_is_decided() {
    let window = Window::new(5, 8, 8).unwrap();
    for l2 in 0..=2 {
        let spec = ModuleSpec::parabolic(rat(7, 3), l2, 10);
        let literal = verify_identity(ClosedFormId::ParabolicTrace23, &spec, &window, &[]).unwrap();
        let fixed = verify_identity(ClosedFormId::ParabolicTrace23AltLimit, &spec, &window, &[]).unwrap();
        assert_eq!(literal.pipeline_agreement, Status::Pass);
        assert_eq!((literal.status, fixed.status), (Status::Mismatch, Status::Pass));
        assert!(levi_limit_verdict(&literal, &fixed).contains("k <= i"));
        let first = literal.first_mismatch.unwrap();
        assert_eq!((first.closed_form, first.brute_force), (int(1), int(0)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn shrinking_a_window_keeps_a_pass(b in 1i64..=5, d in 0i64..=8, l2 in 0u32..=2) {
        let window = Window::new(b, d, 8).unwrap();
        let spec = ModuleSpec::parabolic(rat(7, 3), l2, 10);
        prop_assert!(passes(ClosedFormId::ParabolicTrace13, &spec, &window));
        prop_assert!(passes(ClosedFormId::ParabolicTrace23AltLimit, &spec, &window));
        let borel = ModuleSpec::borel(rat(7, 3), rat(5, 7), 10);
        prop_assert!(passes(ClosedFormId::BorelTrace13, &borel, &window));
    }
}
