use ttm_testkit::{checks, SEED};

const CASES: usize = 200;

fn run(check: fn(usize, u64) -> checks::CheckResult) {
    if let Err(msg) = check(CASES, SEED) {
        panic!("{msg}");
    }
}

#[test]
fn smith_normal_form_laws() {
    run(checks::smith_normal_form_laws);
}

#[test]
fn primitivity_matches_minor_gcd() {
    run(checks::primitivity_oracle);
}

#[test]
fn meyer_cocycle_identity() {
    run(checks::meyer_cocycle);
}

#[test]
fn coboundaries_compose_to_zero_and_close() {
    run(checks::cochain_complex);
}

#[test]
fn blow_up_keeps_necklace_valid() {
    run(checks::blow_up_validity);
}

#[test]
fn cohomology_has_poincare_shape() {
    run(checks::cohomology_shape);
}
