mod common;

use common::*;
use pfuniform::exact::{AlgebraicPoint, Polynomial, RationalFunction};
use pfuniform::ode::LinearODE;
use pfuniform::transform::pullback2;
use pfuniform::uniformdata::lambda_operator;
use pfuniform::uniformize::{signature_of_pullback, uniformization_check, OrbifoldSignature, PullbackFailure, Weight};

fn psl2z() -> OrbifoldSignature {
    uniformization_check(&lambda_operator()).unwrap().signature
}

fn pulled(r: &RationalFunction) -> LinearODE {
    pullback2(&lambda_operator(), r).unwrap().pnf2().unwrap()
}

#[test]
fn cubic_cover_kills_the_order_three_point() {
    let r = rf(&[0, 0, 0, 1], &[1]);
    let pred = signature_of_pullback(&psl2z(), &r).unwrap();
    assert!(pred.passes);
    let check = uniformization_check(&pulled(&r)).unwrap();
    assert!(check.passed);
    assert_eq!(check.signature, pred.signature);
    let roots = AlgebraicPoint::from_irreducible(&Polynomial::from_ints(&[1, 1, 1])).unwrap();
    let expect = OrbifoldSignature::new(vec![
        (AlgebraicPoint::from_int(1), Weight::Finite(2)),
        (roots, Weight::Finite(2)),
        (AlgebraicPoint::Infinity, Weight::Cusp),
    ])
    .unwrap();
    assert_eq!(check.signature, expect);
}

#[test]
fn square_cover_over_the_order_three_point_fails() {
    let r = rf(&[0, 0, 1], &[1]);
    let pred = signature_of_pullback(&psl2z(), &r).unwrap();
    assert!(!pred.passes);
    let bad = pred.points.iter().find(|p| p.location == AlgebraicPoint::from_int(0)).unwrap();
    assert_eq!(bad.failure, Some(PullbackFailure::Generic { weight: 3, ramification: 2 }));
    let check = uniformization_check(&pulled(&r)).unwrap();
    assert!(!check.passed);
}

#[test]
fn extra_ramification_is_apparent() {
    // R = x^2 + 2x ramifies at -1 over the ordinary value -1
    let r = rf(&[0, 2, 1], &[1]);
    let pred = signature_of_pullback(&psl2z(), &r).unwrap();
    let p = pred.points.iter().find(|p| p.location == AlgebraicPoint::from_int(-1)).unwrap();
    assert_eq!(p.failure, Some(PullbackFailure::Apparent { ramification: 2 }));
    let check = uniformization_check(&pulled(&r)).unwrap();
    assert!(!check.strict);
}

#[test]
fn predictions_agree_with_the_analytic_check() {
    let mut g = rng(41);
    for _ in 0..15 {
        let r = random_map(&mut g);
        let pred = signature_of_pullback(&psl2z(), &r).unwrap();
        let check = uniformization_check(&pulled(&r)).unwrap();
        assert_eq!(pred.passes, check.passed, "R = {r}");
        if pred.passes {
            assert_eq!(pred.signature, check.signature, "R = {r}");
        }
    }
}
