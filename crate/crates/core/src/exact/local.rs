//! Points of the projective line over the rationals, their residue fields,
//! and Laurent expansion of rational functions at them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;



use super::factor::{canonical_cmp, factor};
use super::field::{Field, Rational};
use super::poly::{Poly, Polynomial};
use super::ratfunc::RationalFunction;

/// A closed point of the projective line over the rationals: the Galois
/// orbit of roots of a monic irreducible polynomial, or infinity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AlgebraicPoint {
    Finite(Modulus),
    Infinity,
}

/// Monic irreducible polynomial defining a finite point.
#[derive(Clone, PartialEq, Debug)]
pub struct Modulus(Arc<Polynomial>);

impl Eq for Modulus {}

impl Modulus {
    /// Wraps a polynomial already known to be monic and irreducible.
    pub fn new_unchecked(p: Polynomial) -> Self {
        debug_assert!(p.is_monic() && p.degree().unwrap_or(0) >= 1);
        Modulus(Arc::new(p))
    }

    pub fn poly(&self) -> &Polynomial {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.degree().unwrap()
    }
}

impl AlgebraicPoint {
    pub fn rational(a: Rational) -> Self {
        AlgebraicPoint::Finite(Modulus::new_unchecked(Polynomial::linear_root(a)))
    }

    pub fn from_int(a: i64) -> Self {
        Self::rational(Rational::from_int(a))
    }

    /// Points defined by the irreducible factors of `p`; fails with the
    /// factor list when `p` is not irreducible.
    pub fn from_irreducible(p: &Polynomial) -> Result<Self, Vec<Polynomial>> {
        let f = factor(p);
        if f.len() == 1 && f[0].1 == 1 {
            Ok(AlgebraicPoint::Finite(Modulus::new_unchecked(f[0].0.clone())))
        } else {
            Err(f.into_iter().map(|(g, _)| g).collect())
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, AlgebraicPoint::Infinity)
    }

    pub fn modulus(&self) -> Option<&Modulus> {
        match self {
            AlgebraicPoint::Finite(m) => Some(m),
            AlgebraicPoint::Infinity => None,
        }
    }

    /// Degree of the residue field over the rationals (1 at infinity).
    pub fn degree(&self) -> usize {
        self.modulus().map_or(1, Modulus::degree)
    }

    /// The coordinate of a rational finite point.
    pub fn as_rational(&self) -> Option<Rational> {
        let m = self.modulus()?;
        (m.degree() == 1).then(|| -m.poly().coeff(0))
    }

    /// The generator of the residue field: the class of `x` modulo the
    /// defining polynomial.
    pub fn generator(&self) -> Option<LocalElement> {
        let m = self.modulus()?;
        Some(LocalElement::reduced(Polynomial::x(), Some(m.clone())))
    }

    /// Multiplicity of this point as a zero of a polynomial.
    pub fn multiplicity_in(&self, p: &Polynomial) -> usize {
        let Some(m) = self.modulus() else { return 0 };
        let mut k = 0;
        let mut q = p.clone();
        while !q.is_zero() {
            match q.exact_div(m.poly()) {
                Some(r) => {
                    q = r;
                    k += 1;
                }
                None => break,
            }
        }
        k
    }

    /// Order of vanishing of `f` here (negative for poles, `None` for zero).
    pub fn valuation(&self, f: &RationalFunction) -> Option<i64> {
        if f.is_zero() {
            return None;
        }
        match self {
            AlgebraicPoint::Infinity => f.degree_difference().map(|d| -d),
            AlgebraicPoint::Finite(_) => {
                Some(self.multiplicity_in(f.num()) as i64 - self.multiplicity_in(f.den()) as i64)
            }
        }
    }

    /// Writes the point with the named coordinate, e.g. `0`, `-1/2`,
    /// `root of x^2 + 1`, `inf`.
    pub fn display_with(&self, var: &str) -> String {
        match self {
            AlgebraicPoint::Infinity => "inf".to_string(),
            AlgebraicPoint::Finite(m) => match self.as_rational() {
                Some(r) => r.to_string(),
                None => format!("root of {}", m.poly().fmt_in(var)),
            },
        }
    }
}

impl fmt::Display for AlgebraicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

impl Ord for AlgebraicPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (AlgebraicPoint::Infinity, AlgebraicPoint::Infinity) => Ordering::Equal,
            (AlgebraicPoint::Infinity, _) => Ordering::Greater,
            (_, AlgebraicPoint::Infinity) => Ordering::Less,
            (AlgebraicPoint::Finite(a), AlgebraicPoint::Finite(b)) => canonical_cmp(a.poly(), b.poly()),
        }
    }
}

impl PartialOrd for AlgebraicPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of a residue field `Q[x]/(m)`, or of `Q` itself when no modulus
/// is attached. Rational constants carry no modulus so they combine with
/// elements of any residue field.
#[derive(Clone, Debug)]
pub struct LocalElement {
    value: Polynomial,
    modulus: Option<Modulus>,
}

impl LocalElement {
    fn reduced(value: Polynomial, modulus: Option<Modulus>) -> Self {
        let value = match &modulus {
            Some(m) if m.degree() > 1 => value.rem(m.poly()),
            Some(m) => Polynomial::constant(value.eval(&-m.poly().coeff(0))),
            None => value,
        };
        // elements that reduce to constants forget the modulus
        if value.is_constant() {
            return LocalElement { value, modulus: None };
        }
        LocalElement { value, modulus }
    }

    pub fn rational(r: Rational) -> Self {
        LocalElement { value: Polynomial::constant(r), modulus: None }
    }

    /// Representative polynomial of degree below the modulus degree.
    pub fn value(&self) -> &Polynomial {
        &self.value
    }

    pub fn modulus(&self) -> Option<&Modulus> {
        self.modulus.as_ref()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.value.is_constant().then(|| self.value.coeff(0))
    }

    fn join(a: &Option<Modulus>, b: &Option<Modulus>) -> Option<Modulus> {
        match (a, b) {
            (Some(x), Some(y)) => {
                assert_eq!(x, y, "mixing elements of different residue fields");
                Some(x.clone())
            }
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        }
    }

    pub fn display_with(&self, var: &str) -> String {
        match self.as_rational() {
            Some(r) => r.to_string(),
            None => self.value.fmt_in(var),
        }
    }
}

impl PartialEq for LocalElement {
    fn eq(&self, other: &Self) -> bool {
        // constants are stored without modulus, so values decide equality
        self.value == other.value
    }
}

impl fmt::Display for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("a"))
    }
}

impl Add for LocalElement {
    type Output = LocalElement;
    fn add(self, rhs: LocalElement) -> LocalElement {
        let m = Self::join(&self.modulus, &rhs.modulus);
        LocalElement::reduced(&self.value + &rhs.value, m)
    }
}

impl Sub for LocalElement {
    type Output = LocalElement;
    fn sub(self, rhs: LocalElement) -> LocalElement {
        let m = Self::join(&self.modulus, &rhs.modulus);
        LocalElement::reduced(&self.value - &rhs.value, m)
    }
}

impl Mul for LocalElement {
    type Output = LocalElement;
    fn mul(self, rhs: LocalElement) -> LocalElement {
        let m = Self::join(&self.modulus, &rhs.modulus);
        LocalElement::reduced(&self.value * &rhs.value, m)
    }
}

impl Div for LocalElement {
    type Output = LocalElement;
    fn div(self, rhs: LocalElement) -> LocalElement {
        self * Field::inv(&rhs).expect("division by zero in residue field")
    }
}

impl Neg for LocalElement {
    type Output = LocalElement;
    fn neg(self) -> LocalElement {
        LocalElement { value: -&self.value, modulus: self.modulus }
    }
}

impl Field for LocalElement {
    fn zero() -> Self {
        LocalElement::rational(Rational::from_int(0))
    }
    fn one() -> Self {
        LocalElement::rational(Rational::from_int(1))
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.value.is_zero() {
            return None;
        }
        match (&self.modulus, self.as_rational()) {
            (_, Some(r)) => Some(LocalElement::rational(r.recip())),
            (Some(m), None) => {
                let (g, s, _) = self.value.ext_gcd(m.poly());
                debug_assert!(g.is_constant());
                Some(LocalElement::reduced(s, Some(m.clone())))
            }
            (None, None) => unreachable!("non-constant element without modulus"),
        }
    }
    fn from_rational(r: Rational) -> Self {
        LocalElement::rational(r)
    }
    fn to_rational(&self) -> Option<Rational> {
        self.as_rational()
    }
}

/// Truncated Laurent expansion at a point: `coeffs[i]` multiplies
/// `t^(valuation + i)` in the local parameter `t` (`x - a`, or `1/x` at
/// infinity).
#[derive(Clone, PartialEq, Debug)]
pub struct LaurentExpansion {
    /// `None` for the zero function.
    pub valuation: Option<i64>,
    pub coeffs: Vec<LocalElement>,
}

impl LaurentExpansion {
    pub fn leading(&self) -> Option<&LocalElement> {
        self.coeffs.first()
    }

    /// Coefficient of `t^k` (zero outside the computed window).
    pub fn coeff(&self, k: i64) -> LocalElement {
        match self.valuation {
            Some(v) if k >= v => self
                .coeffs
                .get((k - v) as usize)
                .cloned()
                .unwrap_or_else(LocalElement::zero),
            _ => LocalElement::zero(),
        }
    }
}

/// Taylor coefficients of `num/den` around `t = 0` through `t^(n-1)`,
/// given `den(0)` invertible.
pub fn taylor_quotient<F: Field>(num: &Poly<F>, den: &Poly<F>, n: usize) -> Vec<F> {
    let d0inv = den.coeff(0).inv().expect("denominator vanishes at expansion point");
    let mut out: Vec<F> = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = num.coeff(k);
        for j in 1..=k.min(den.degree().unwrap_or(0)) {
            acc = acc - den.coeff(j) * out[k - j].clone();
        }
        out.push(acc * d0inv.clone());
    }
    out
}

/// Laurent expansion of `f` at `at` through the term `t^order`.
pub fn laurent_expand(f: &RationalFunction, at: &AlgebraicPoint, order: i64) -> LaurentExpansion {
    let Some(v) = at.valuation(f) else {
        return LaurentExpansion { valuation: None, coeffs: Vec::new() };
    };
    let count = if order >= v { (order - v + 1) as usize } else { 0 };
    let (num, den) = match at {
        AlgebraicPoint::Infinity => {
            // f(1/t) = t^(dd - dn) * rev(num)(t) / rev(den)(t)
            let n = f.num().reversed().map(|c| LocalElement::rational(c.clone()));
            let d = f.den().reversed().map(|c| LocalElement::rational(c.clone()));
            (n, d)
        }
        AlgebraicPoint::Finite(_) => {
            let a = at.generator().unwrap();
            let vn = at.multiplicity_in(f.num()) as u32;
            let vd = at.multiplicity_in(f.den()) as u32;
            // shift to the point, then strip the t-powers that vanish there
            let n = f.num().taylor_at(&a);
            let d = f.den().taylor_at(&a);
            (strip(&n, vn), strip(&d, vd))
        }
    };
    let coeffs = taylor_quotient(&num, &den, count);
    LaurentExpansion { valuation: Some(v), coeffs }
}

fn strip(p: &Poly<LocalElement>, k: u32) -> Poly<LocalElement> {
    Poly::new(p.coeffs().iter().skip(k as usize).cloned().collect())
}

/// Leading coefficient of `f` at `at` in the local parameter, or `None` for zero.
pub fn leading_coefficient(f: &RationalFunction, at: &AlgebraicPoint) -> Option<LocalElement> {
    let v = at.valuation(f)?;
    laurent_expand(f, at, v).coeffs.into_iter().next()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{int, rat};

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn laurent_at_rational_points() {
        // 1/(s(s-1)) at 0
        let f = RationalFunction::new(p(&[1]), p(&[0, -1, 1]));
        let e = laurent_expand(&f, &AlgebraicPoint::from_int(0), 2);
        assert_eq!(e.valuation, Some(-1));
        let c: Vec<_> = e.coeffs.iter().map(|c| c.as_rational().unwrap()).collect();
        assert_eq!(c, vec![int(-1); 4]);
        // s at infinity
        let e = laurent_expand(&RationalFunction::x(), &AlgebraicPoint::Infinity, 0);
        assert_eq!(e.valuation, Some(-1));
        assert_eq!(e.coeffs[0].as_rational(), Some(int(1)));
        // 27^3 s^2/(s-1)^3 at 1
        let f = RationalFunction::new(p(&[0, 0, 19683]), p(&[-1, 1]).pow(3));
        assert_eq!(AlgebraicPoint::from_int(1).valuation(&f), Some(-3));
        assert!(laurent_expand(&RationalFunction::zero(), &AlgebraicPoint::Infinity, 3)
            .valuation
            .is_none());
    }

    #[test]
    fn laurent_at_algebraic_point() {
        // 1/(x^2 + 1) at i: 1/((x - i)(x + i)) has leading coefficient 1/(2i) = -i/2
        let pt = AlgebraicPoint::from_irreducible(&p(&[1, 0, 1])).unwrap();
        let f = RationalFunction::new(p(&[1]), p(&[1, 0, 1]));
        let e = laurent_expand(&f, &pt, 1);
        assert_eq!(e.valuation, Some(-1));
        assert_eq!(e.coeffs[0].value(), &Polynomial::new(vec![int(0), rat(-1, 2)]));
        // next coefficient: -1/(2i)^2 = 1/4
        assert_eq!(e.coeffs[1].as_rational(), Some(rat(1, 4)));
    }

    #[test]
    fn residue_field_inverse() {
        let pt = AlgebraicPoint::from_irreducible(&p(&[-2, 0, 1])).unwrap();
        let a = pt.generator().unwrap();
        let b = a.clone() + LocalElement::rational(int(1));
        let prod = b.clone() * Field::inv(&b).unwrap();
        assert_eq!(prod.as_rational(), Some(int(1)));
        assert_eq!((a.clone() * a).as_rational(), Some(int(2)));
    }

    #[test]
    fn point_order() {
        let mut pts = vec![
            AlgebraicPoint::Infinity,
            AlgebraicPoint::from_int(1),
            AlgebraicPoint::from_irreducible(&p(&[1, 0, 1])).unwrap(),
            AlgebraicPoint::rational(rat(-1, 2)),
        ];
        pts.sort();
        let shown: Vec<_> = pts.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, vec!["-1/2", "1", "root of x^2 + 1", "inf"]);
    }
}
