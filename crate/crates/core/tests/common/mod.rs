//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use pfuniform::exact::{Polynomial, Rational, RationalFunction};
use pfuniform::ode::{fuchsian_check, LinearODE};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
    RationalFunction::new(Polynomial::from_ints(n), Polynomial::from_ints(d))
}

pub fn small_poly(r: &mut ChaCha8Rng, deg: usize, bound: i64) -> Polynomial {
    Polynomial::from_ints(&(0..=deg).map(|_| r.gen_range(-bound..=bound)).collect::<Vec<_>>())
}

/// Product of `k` distinct monic linear factors with small integer roots.
pub fn pole_polynomial(r: &mut ChaCha8Rng, k: usize) -> Polynomial {
    let mut roots: Vec<i64> = (-4..=4).collect();
    roots.shuffle(r);
    roots[..k]
        .iter()
        .fold(Polynomial::from_ints(&[1]), |acc, &a| &acc * &Polynomial::from_ints(&[-a, 1]))
}

/// Random order-2 Fuchsian operator: `P1 = A/B`, `P2 = C/B^2` with `B`
/// squarefree of degree 1..=3, `deg A < deg B`, `deg C <= 2 deg B - 2`.
pub fn random_fuchsian2(r: &mut ChaCha8Rng) -> LinearODE {
    loop {
        let k = r.gen_range(1..=3);
        let b = pole_polynomial(r, k);
        let a = small_poly(r, k - 1, 3);
        let c = small_poly(r, (2 * k).saturating_sub(2), 3);
        let p1 = RationalFunction::new(a, b.clone());
        let p2 = RationalFunction::new(c, &b * &b);
        if p2.is_zero() {
            continue;
        }
        let l = LinearODE::new(vec![p1, p2]).unwrap();
        if fuchsian_check(&l).fuchsian {
            return l;
        }
    }
}

/// Random nonconstant rational map of degree at most 3 with small
/// coefficients.
pub fn random_map(r: &mut ChaCha8Rng) -> RationalFunction {
    loop {
        let dn = r.gen_range(1..=3);
        let dd = r.gen_range(0..=1);
        let num = small_poly(r, dn, 3);
        let den = if dd == 0 { Polynomial::from_ints(&[1]) } else { small_poly(r, 1, 3) };
        if den.is_zero() {
            continue;
        }
        let m = RationalFunction::new(num, den);
        if !m.is_constant() {
            return m;
        }
    }
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
