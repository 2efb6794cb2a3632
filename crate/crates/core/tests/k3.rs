mod common;

use common::*;
use pfuniform::exact::{AlgebraicPoint, Field, Rational};
use pfuniform::k3::{
    check_k3_modularity, hauptmodul_normalization_check, k3_pf_root, mirror_vs_hauptmodul, K3Verdict,
};
use pfuniform::mirror::{mirror_map, reciprocal_plus_constant};
use pfuniform::transform::{pullback2, sym2};
use pfuniform::uniformdata::{family_e_pf, j_series, lambda_operator, signature_psl2z};

#[test]
fn square_root_recovers_pullbacks() {
    let r = rf(&[0, 0, 0, 1], &[1, 1]);
    let l = pullback2(&lambda_operator(), &r).unwrap().pnf2().unwrap();
    assert_eq!(k3_pf_root(&sym2(&l).unwrap()).unwrap(), l);
}

#[test]
fn cubic_invariant_passes_both_routes() {
    let h = rf(&[0, 0, 0, 1], &[1]);
    let l3 = sym2(&pullback2(&lambda_operator(), &h).unwrap()).unwrap();
    let r = check_k3_modularity(&h, &signature_psl2z(), Some(&l3)).unwrap();
    assert!(r.combinatorial);
    assert_eq!(r.analytic, Some(true));
    assert_eq!(r.verdict, K3Verdict::Modular);
}

#[test]
fn sextic_invariant_passes_combinatorially() {
    // vanishing order 6 over the order-3 point is a multiple of 3
    let h = rf(&[0, 0, 0, 0, 0, 0, 1], &[1]);
    let r = check_k3_modularity(&h, &signature_psl2z(), None).unwrap();
    assert!(r.combinatorial);
    // x^3 + 1 takes the order-2 value 1 with order 3 at x = 0
    let h = rf(&[1, 0, 0, 1], &[1]);
    let r = check_k3_modularity(&h, &signature_psl2z(), None).unwrap();
    assert_eq!(r.verdict, K3Verdict::NotModular);
}

#[test]
fn j_from_the_mirror_map_is_a_normalized_hauptmodul() {
    let m = mirror_map(&family_e_pf(), &AlgebraicPoint::Infinity, 6).unwrap().rescaled(&q(1, 1728));
    let j = reciprocal_plus_constant(&m.series, &Rational::from_int(0)).unwrap();
    assert!(hauptmodul_normalization_check(&j));
    assert!(hauptmodul_normalization_check(&j_series()));
    // H = 1/z composed with the mirror map reproduces j
    assert!(mirror_vs_hauptmodul(&m.series, &j_series(), &rf(&[1], &[0, 1])).unwrap());
}
