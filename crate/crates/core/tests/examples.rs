use ccc_core::fixtures;
use ccc_core::*;

#[test]
fn quotient_singularity_left() {
    let phi = fixtures::a2_mod_z2_morphism();
    let v = decide_left_functorial(&phi).unwrap();
    assert!(v.verdict);
}

#[test]
fn doubled_line_right() {
    let v = decide_right_functorial(&fixtures::doubled_line_to_a1()).unwrap();
    assert!(v.verdict);
    assert!(v.per_cone.iter().all(|c| c.image_is_cone && c.saturated));
}

#[test]
fn adjunction_hypotheses_on_several_enlargements() {
    use ccc_core::skeleton::adj_hypothesis_check;
    let phi = fixtures::a2_mod_z2_morphism();
    let lambda = fltz_skeleton(phi.source());
    let lambda_t = fltz_skeleton(phi.target());
    let full = Skeleton::full(2);
    assert!(adj_hypothesis_check(&phi, &lambda, &lambda_t).unwrap());
    assert!(adj_hypothesis_check(&phi, &full, &lambda_t).unwrap());
    assert!(adj_hypothesis_check(&phi, &full, &full).unwrap());
    let zero = Skeleton::zero_section(2);
    assert!(matches!(adj_hypothesis_check(&phi, &zero, &lambda_t), Err(Error::PrerequisiteFailed(_))));
}
