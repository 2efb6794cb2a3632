mod common;

use common::*;
use pfuniform::elliptic::WeierstrassModel;
use pfuniform::exact::{factor, rational_gcd, AlgebraicPoint, Field, Polynomial, Rational, RationalFunction};
use pfuniform::k3::admissible_vanishing_order;
use pfuniform::ode::{exponents, singular_points, ExponentValue, LinearODE};
use pfuniform::series::{schwarzian_rational, QSeries};
use pfuniform::transform::{sym2, sym2_root};
use pfuniform::uniformize::{OrbifoldSignature, Weight};
use proptest::prelude::*;

fn poly(c: &[i64]) -> Polynomial {
    Polynomial::from_ints(c)
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, 1..=max_len)
}

fn nonconstant(max_len: usize) -> impl Strategy<Value = Polynomial> {
    coeffs(max_len).prop_map(|c| poly(&c)).prop_filter("nonconstant", |p| !p.is_constant())
}

fn moebius() -> impl Strategy<Value = [i64; 4]> {
    prop::array::uniform4(-5i64..=5).prop_filter("invertible", |m| m[0] * m[3] != m[1] * m[2])
}

fn moebius_rf(m: [i64; 4]) -> RationalFunction {
    rf(&[m[1], m[0]], &[m[3], m[2]])
}

fn exponent_sum(e: &[ExponentValue]) -> Rational {
    e.iter()
        .map(|v| match v {
            ExponentValue::Exact(x) => x.as_rational().unwrap(),
            ExponentValue::Quadratic { center, .. } => center.as_rational().unwrap(),
        })
        .fold(Rational::from_int(0), |a, b| a + b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn modular_gcd_matches_euclid(a in nonconstant(5), b in nonconstant(5), g in nonconstant(3)) {
        let x = &a * &g;
        let y = &b * &g;
        let fast = rational_gcd(&x, &y);
        prop_assert_eq!(&fast, &x.gcd(&y));
        prop_assert!(x.exact_div(&fast).is_some());
    }

    #[test]
    fn factorization_reconstructs(p in nonconstant(7)) {
        let prod = factor(&p).iter().fold(Polynomial::one(), |acc, (f, m)| {
            (0..*m).fold(acc, |acc, _| &acc * f)
        });
        prop_assert_eq!(prod, p.monic());
    }

    #[test]
    fn series_inverse_and_reversion(c in prop::collection::vec(-9i64..=9, 1..8)) {
        let mut v: Vec<Rational> = vec![Rational::from_int(1)];
        v.extend(c.iter().map(|&x| Rational::from_int(x)));
        let s = QSeries::from_coeffs(0, v.clone(), Some(v.len() as i64));
        let one = s.mul(&s.inv().unwrap());
        prop_assert_eq!(one, QSeries::one().truncate(v.len() as i64));
        let z = s.shift(1);
        let back = QSeries::compose(&z, &z.revert().unwrap()).unwrap();
        prop_assert_eq!(back, QSeries::var().truncate(z.precision().unwrap()));
        let t = s.sub(&QSeries::one()).shift(1);
        prop_assert_eq!(t.exp().unwrap().log().unwrap(), t.truncate(t.precision().unwrap()));
    }

    #[test]
    fn rational_schwarzian_is_moebius_invariant(w in nonconstant(4), m in moebius()) {
        let w = RationalFunction::from_poly(w);
        let mw = (&(&w.scale(&Rational::from_int(m[0])) + &RationalFunction::from_int(m[1])))
            / &(&w.scale(&Rational::from_int(m[2])) + &RationalFunction::from_int(m[3]));
        prop_assert_eq!(schwarzian_rational(&w).unwrap(), schwarzian_rational(&mw).unwrap());
    }

    #[test]
    fn vanishing_order_rule(b in prop::sample::select(vec![2u64, 3, 4, 6]), k in 1u64..8) {
        prop_assert!(admissible_vanishing_order(b, 1));
        prop_assert!(admissible_vanishing_order(b, b * k));
        for d in 1..=b {
            prop_assert_eq!(admissible_vanishing_order(b, d), b % d == 0);
        }
    }

    #[test]
    fn signature_order_is_canonical(perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let items = [
            (AlgebraicPoint::from_int(1), Weight::Finite(2)),
            (AlgebraicPoint::Infinity, Weight::Cusp),
            (AlgebraicPoint::from_int(0), Weight::Finite(3)),
        ];
        let shuffled: Vec<_> = perm.iter().map(|&i| items[i].clone()).collect();
        let a = OrbifoldSignature::new(shuffled).unwrap();
        prop_assert_eq!(a.to_string(), "{(0, 3), (1, 2), (inf, inf)}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normal_form_commutes_with_moebius(seed in any::<u64>(), m in moebius()) {
        let l = random_fuchsian2(&mut rng(seed));
        let p = l.pnf2().unwrap();
        prop_assert_eq!(p.pnf2().unwrap(), p.clone());
        let phi = moebius_rf(m);
        let a = l.change_of_variable(&phi).unwrap().pnf2().unwrap();
        let b = p.change_of_variable(&phi).unwrap().pnf2().unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn fuchs_relation(seed in any::<u64>()) {
        let l = random_fuchsian2(&mut rng(seed));
        prop_assume!(!l.is_pnf());
        let pts = singular_points(&l);
        let total = pts.iter().fold(Rational::from_int(0), |acc, p| {
            acc + exponent_sum(&exponents(&l, p).unwrap()) - Rational::from_int(1)
        });
        prop_assert_eq!(total, Rational::from_int(-2));
    }

    #[test]
    fn symmetric_square_round_trip(seed in any::<u64>()) {
        let p = random_fuchsian2(&mut rng(seed)).pnf2().unwrap();
        prop_assert_eq!(sym2_root(&sym2(&p).unwrap()).unwrap(), p);
    }

    #[test]
    fn twist_preserves_functional_invariant(g2 in coeffs(3), g3 in coeffs(3), u in nonconstant(3)) {
        let w = WeierstrassModel::new(
            RationalFunction::from_poly(poly(&g2)),
            RationalFunction::from_poly(poly(&g3)),
        );
        prop_assume!(w.is_ok());
        let w = w.unwrap();
        let t = w.twist(&RationalFunction::from_poly(u)).unwrap();
        prop_assert_eq!(t.functional_invariant(), w.functional_invariant());
    }
}

#[test]
fn fuchs_relation_for_lambda() {
    let l = LinearODE::pnf2_from(rf(&[32, -41, 36], &[0, 0, 144, -288, 144]));
    // in normal form the exponents at infinity are read after re-normalizing
    let e: Vec<Rational> = singular_points(&l).iter().map(|p| exponent_sum(&exponents(&l, p).unwrap())).collect();
    assert_eq!(e, vec![Rational::from_int(1), Rational::from_int(1), Rational::from_int(1)]);
}
