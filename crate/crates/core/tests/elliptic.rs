mod common;

use common::*;
use pfuniform::elliptic::{
    check_elliptic_modularity, check_j_modularity, lambda_j, KodairaFiber, ModularityVerdict, WeierstrassModel,
};
use pfuniform::exact::{AlgebraicPoint, RationalFunction};
use pfuniform::uniformdata::{family_e, lambda_operator};
use rand::Rng;

fn poly_model(g2: &[i64], g3: &[i64]) -> WeierstrassModel {
    WeierstrassModel::new(rf(g2, &[1]), rf(g3, &[1])).unwrap()
}

#[test]
fn random_rational_surfaces_have_euler_sum_twelve() {
    let mut g = rng(31);
    let mut seen = 0;
    while seen < 25 {
        let d2 = g.gen_range(0..=4);
        let d3 = g.gen_range(0..=6);
        let w = WeierstrassModel::new(
            RationalFunction::from_poly(small_poly(&mut g, d2, 4)),
            RationalFunction::from_poly(small_poly(&mut g, d3, 4)),
        );
        let Ok(w) = w else { continue };
        if w.g2().is_constant() && w.g3().is_constant() {
            continue;
        }
        let total: u32 = w.fiber_census().iter().map(|(p, f)| p.degree() as u32 * f.euler_number()).sum();
        assert_eq!(total, 12, "g2 = {}, g3 = {}", w.g2(), w.g3());
        seen += 1;
    }
}

#[test]
fn discriminant_and_invariant_formulas() {
    let w = poly_model(&[0, 1], &[1, 0, 1]);
    let g2 = w.g2().clone();
    let g3 = w.g3().clone();
    let cube = &(&g2 * &g2) * &g2;
    let delta = &cube - &(&g3 * &g3).scale(&q(27, 1));
    assert_eq!(w.discriminant(), delta);
    assert_eq!(w.functional_invariant(), &cube / &delta);
}

#[test]
fn standard_fibre_types() {
    use KodairaFiber::*;
    let cases: [(&[i64], &[i64], KodairaFiber); 8] = [
        (&[0, 1], &[1], I(0)),
        (&[0, 1], &[0, 1], II),
        (&[0, 1], &[0, 0, 1], III),
        (&[0, 0, 1], &[0, 0, 1], IV),
        (&[0, 0, 1], &[0, 0, 0, 2], IStar(0)),
        (&[0, 0, 0, 1], &[0, 0, 0, 0, 1], IVStar),
        (&[0, 0, 0, 1], &[0, 0, 0, 0, 0, 1], IIIStar),
        (&[0, 0, 0, 0, 1], &[0, 0, 0, 0, 0, 1], IIStar),
    ];
    for (g2, g3, t) in cases {
        assert_eq!(poly_model(g2, g3).kodaira_type(&AlgebraicPoint::from_int(0)), t, "g2 = {g2:?}, g3 = {g3:?}");
    }
    // Delta = -27 s (s + 2)
    let w = poly_model(&[3], &[1, 1]);
    assert_eq!(w.kodaira_type(&AlgebraicPoint::from_int(0)), I(1));
    assert_eq!(w.kodaira_type(&AlgebraicPoint::from_int(-2)), I(1));
    // J has a double pole where the valuations force the starred type
    let w = poly_model(&[0, 0, 3], &[0, 0, 0, 1, 1]);
    assert_eq!(w.kodaira_type(&AlgebraicPoint::from_int(0)), IStar(1));
}

#[test]
fn lambda_j_at_identity_is_the_uniformizing_operator() {
    assert_eq!(lambda_j(&RationalFunction::x()).unwrap(), lambda_operator());
    assert_eq!(check_j_modularity(&RationalFunction::x()).unwrap().verdict, ModularityVerdict::Modular);
}

#[test]
fn forbidden_fibres_veto_modularity() {
    let r = check_elliptic_modularity(&family_e()).unwrap();
    assert!(r.forbidden_fibers.is_empty());
    // IV at 0 forces NOT MODULAR regardless of J
    let w = poly_model(&[0, 0, 1], &[0, 0, 1, 0, 0, 1]);
    let r = check_elliptic_modularity(&w).unwrap();
    assert!(r.forbidden_fibers.iter().any(|(_, f)| *f == KodairaFiber::IV));
    assert_eq!(r.verdict, ModularityVerdict::NotModular);
}
