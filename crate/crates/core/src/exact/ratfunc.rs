//! Rational functions in one variable over the rationals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, Integer};

use super::field::{denominator_lcm, Field, Rational};
use super::factor::rational_gcd;
use super::poly::Polynomial;

/// Quotient `num / den` of rational polynomials.
///
/// Always reduced: `den` is monic and `gcd(num, den) = 1`, so structural
/// equality is equality of functions.
#[derive(Clone, PartialEq, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Builds and normalizes `num / den`. Panics if `den` is zero.
    pub fn new(num: Polynomial, den: Polynomial) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = rational_gcd(&num, &den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let lc = den.leading().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(n)))
    }

    /// The identity function `x`.
    pub fn x() -> Self {
        Self::from_poly(Polynomial::x())
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    /// Degree as a map of the projective line: `max(deg num, deg den)`.
    pub fn map_degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    /// `deg num - deg den`, the negated order at infinity (`None` for zero).
    pub fn degree_difference(&self) -> Option<i64> {
        let n = self.num.degree()? as i64;
        Some(n - self.den.degree().unwrap() as i64)
    }

    pub fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::new(self.den.clone(), self.num.clone()))
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den)
    }

    /// The `k`-th derivative.
    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |f, _| f.derivative())
    }

    /// Value at a rational point; `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Value at a point of an extension field; `None` at a pole.
    pub fn eval_in<G: Field>(&self, x: &G) -> Option<G> {
        let d: G = self.den.eval_in(x);
        let inv = d.inv()?;
        Some(self.num.eval_in(x) * inv)
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &RationalFunction) -> Self {
        let k = self.map_degree();
        let a = &inner.num;
        let b = &inner.den;
        let homog = |p: &Polynomial| -> Polynomial {
            let mut acc = Polynomial::zero();
            let mut apow = Polynomial::one();
            let bpows: Vec<Polynomial> = (0..=k).map(|i| b.pow(i as u32)).collect();
            for i in 0..=k {
                let c = p.coeff(i);
                if !c.is_zero() {
                    acc = &acc + &(&apow * &bpows[k - i]).scale(&c);
                }
                apow = &apow * a;
            }
            acc
        };
        Self::new(homog(&self.num), homog(&self.den))
    }

    pub fn pow(&self, e: i32) -> Self {
        let base = if e < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let e = e.unsigned_abs();
        RationalFunction {
            num: base.num.pow(e),
            den: base.den.pow(e),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Numerator and denominator scaled by a common rational so both have
    /// coprime integer coefficients and the denominator a positive leading
    /// coefficient.
    pub fn integer_form(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let l = denominator_lcm(self.num.coeffs().iter().chain(self.den.coeffs()));
        let scale = |p: &Polynomial| -> Vec<BigInt> {
            p.coeffs()
                .iter()
                .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
                .collect()
        };
        let mut n = scale(&self.num);
        let mut d = scale(&self.den);
        let g = n
            .iter()
            .chain(d.iter())
            .fold(BigInt::from(0), |acc, c| acc.gcd(c));
        if g > BigInt::from(1) {
            for c in n.iter_mut().chain(d.iter_mut()) {
                *c = &*c / &g;
            }
        }
        (n, d)
    }

    /// Formats as `num/den` in the variable `var`, with integer coefficients
    /// where the denominator is not constant.
    pub fn display_with(&self, var: &str) -> String {
        if self.den.is_constant() {
            return self.num.fmt_in(var);
        }
        let (n, d) = self.integer_form();
        let n = Polynomial::from_integers(&n);
        let d = Polynomial::from_integers(&d);
        let wrap = |p: &Polynomial| -> String {
            let s = p.fmt_in(var);
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        let num = wrap(&n);
        let den_terms = d.coeffs().iter().filter(|c| !c.is_zero()).count();
        let den_plain = den_terms == 1 && d.leading().unwrap().is_one();
        let den = if den_plain {
            d.fmt_in(var)
        } else {
            format!("({})", d.fmt_in(var))
        };
        format!("{num}/{den}")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_poly(p)
    }
}

impl From<Rational> for RationalFunction {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone());
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(n, &self.den * &rhs.den)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        // cross-cancel before multiplying to keep the gcd small
        let g1 = rational_gcd(&self.num, &rhs.den);
        let g2 = rational_gcd(&rhs.num, &self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = rhs.den.exact_div(&g1).unwrap();
        let n2 = rhs.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        RationalFunction::new(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self * &rhs.inv().expect("rational function division by zero")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl Field for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        RationalFunction::inv(self)
    }
    fn from_rational(r: Rational) -> Self {
        RationalFunction::constant(r)
    }
    fn to_rational(&self) -> Option<Rational> {
        self.as_constant()
    }
}
