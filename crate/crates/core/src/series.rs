//! Truncated Laurent/power series over an exact field.
//!
//! Every series carries its absolute precision: a series with precision
//! `p` is known modulo `q^p`. Polynomials and Laurent polynomials can be
//! held exactly (no precision bound). Each operation computes the precision
//! its result is actually determined to.

use std::fmt;

use thiserror::Error;

use crate::exact::{Field, Polynomial, Rational, RationalFunction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("division by a series with no known nonzero coefficient")]
    DivisionByZeroSeries,
    #[error("bad constant term for exp/log")]
    BadConstantTerm,
    #[error("composition diverges: inner series has nonpositive valuation")]
    CompositionDiverges,
    #[error("series must have valuation exactly 1, found {0:?}")]
    BadValuation(Option<i64>),
    #[error("derivative vanishes identically")]
    ConstantInput,
    #[error("exact input produces an infinite series; truncate it first")]
    UnboundedPrecision,
}

/// Truncated series `sum_k c_k q^k + O(q^precision)`.
///
/// `coeffs[i]` is the coefficient of `q^(valuation + i)`; the first entry is
/// nonzero and there are no trailing zeros. Coefficients past the stored
/// vector and below the precision are zero.
#[derive(Clone, PartialEq, Debug)]
pub struct PowerSeries<F> {
    val: i64,
    coeffs: Vec<F>,
    /// `None` means exact.
    prec: Option<i64>,
}

/// Series in the variable `q` with rational coefficients.
pub type QSeries = PowerSeries<Rational>;

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn add_prec(a: Option<i64>, k: i64) -> Option<i64> {
    a.map(|p| p + k)
}

impl<F: Field> PowerSeries<F> {
    /// Builds `sum coeffs[i] q^(start + i)` known modulo `q^prec`
    /// (`None` for exact).
    pub fn from_coeffs(start: i64, coeffs: Vec<F>, prec: Option<i64>) -> Self {
        let mut coeffs = coeffs;
        if let Some(p) = prec {
            let keep = (p - start).max(0) as usize;
            coeffs.truncate(keep);
        }
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => PowerSeries {
                val: prec.unwrap_or(0),
                coeffs: Vec::new(),
                prec,
            },
            Some(i) => {
                let mut c: Vec<F> = coeffs.split_off(i);
                while c.last().is_some_and(|x| x.is_zero()) {
                    c.pop();
                }
                PowerSeries { val: start + i as i64, coeffs: c, prec }
            }
        }
    }

    /// Power series `sum coeffs[i] q^i + O(q^prec)`.
    pub fn truncated(coeffs: Vec<F>, prec: i64) -> Self {
        Self::from_coeffs(0, coeffs, Some(prec))
    }

    /// Exact polynomial `sum coeffs[i] q^i`.
    pub fn exact(coeffs: Vec<F>) -> Self {
        Self::from_coeffs(0, coeffs, None)
    }

    pub fn zero() -> Self {
        Self::exact(Vec::new())
    }

    pub fn one() -> Self {
        Self::exact(vec![F::one()])
    }

    /// `c q^k`, exact.
    pub fn monomial(c: F, k: i64) -> Self {
        Self::from_coeffs(k, vec![c], None)
    }

    /// The variable `q`, exact.
    pub fn var() -> Self {
        Self::monomial(F::one(), 1)
    }

    /// Order of the first nonzero coefficient, if any is known.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.val)
    }

    /// Absolute precision; `None` for exact series.
    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// True when no nonzero coefficient is known.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lower bound for the order of vanishing: the valuation, or the
    /// precision when nothing nonzero is known.
    fn order(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            self.prec
        } else {
            Some(self.val)
        }
    }

    /// Coefficient of `q^k`; zero outside the stored window.
    pub fn coeff(&self, k: i64) -> F {
        if self.coeffs.is_empty() || k < self.val {
            return F::zero();
        }
        self.coeffs
            .get((k - self.val) as usize)
            .cloned()
            .unwrap_or_else(F::zero)
    }

    /// Exponent one past the last stored coefficient.
    fn end(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    /// Coefficients of `q^from .. q^to` (exclusive).
    pub fn coeff_range(&self, from: i64, to: i64) -> Vec<F> {
        (from..to).map(|k| self.coeff(k)).collect()
    }

    /// Drops everything from `q^p` on.
    pub fn truncate(&self, p: i64) -> Self {
        Self::from_coeffs(self.val, self.coeffs.clone(), min_prec(self.prec, Some(p)))
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_coeffs(
            self.val,
            self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
            self.prec,
        )
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self::from_coeffs(self.val + k, self.coeffs.clone(), add_prec(self.prec, k))
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = min_prec(self.prec, other.prec);
        if self.is_zero() && other.is_zero() {
            return Self::from_coeffs(0, Vec::new(), prec);
        }
        let lo = match (self.valuation(), other.valuation()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!(),
        };
        let mut hi = self.end().max(other.end());
        if let Some(p) = prec {
            hi = hi.min(p);
        }
        let c = (lo..hi.max(lo)).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::from_coeffs(lo, c, prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = match (self.order(), other.order()) {
            (Some(oa), Some(ob)) => min_prec(add_prec(self.prec, ob), add_prec(other.prec, oa)),
            // an exact zero factor makes the product exactly zero
            _ => None,
        };
        if self.is_zero() || other.is_zero() {
            return Self::from_coeffs(0, Vec::new(), prec);
        }
        let v = self.val + other.val;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(p) = prec {
            len = len.min((p - v).max(0) as usize);
        }
        let mut out = vec![F::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                let t = out[i + j].clone() + a.clone() * b.clone();
                out[i + j] = t;
            }
        }
        Self::from_coeffs(v, out, prec)
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::DivisionByZeroSeries);
        }
        let v = self.val;
        let c0inv = self.coeffs[0].inv().unwrap();
        let Some(p) = self.prec else {
            if self.coeffs.len() == 1 {
                return Ok(Self::monomial(c0inv, -v));
            }
            return Err(SeriesError::UnboundedPrecision);
        };
        let n = (p - v) as usize;
        let u = &self.coeffs;
        let mut out: Vec<F> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = if k == 0 { F::one() } else { F::zero() };
            for j in 1..=k.min(u.len() - 1) {
                acc = acc - u[j].clone() * out[k - j].clone();
            }
            out.push(acc * c0inv.clone());
        }
        Ok(Self::from_coeffs(-v, out, Some(p - 2 * v)))
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        if self.is_zero() && self.is_exact() {
            return Ok(Self::zero());
        }
        if other.is_exact() && other.coeffs.len() > 1 && !self.is_exact() {
            // exact divisor: truncate it to what the numerator can use
            let p = self.prec.unwrap() - self.order().unwrap() + other.val;
            return Ok(self.mul(&other.truncate(p).inv()?));
        }
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self, SeriesError> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.clone() * F::from_int(self.val + i as i64))
            .collect();
        Self::from_coeffs(self.val - 1, c, add_prec(self.prec, -1))
    }

    /// Formal exponential of a series without constant or polar terms.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if self.order().is_some_and(|o| o < 1) {
            return Err(SeriesError::BadConstantTerm);
        }
        let Some(n) = self.prec else {
            if self.is_zero() {
                return Ok(Self::one());
            }
            return Err(SeriesError::UnboundedPrecision);
        };
        let n = n.max(0) as usize;
        let a: Vec<F> = (0..n as i64).map(|k| self.coeff(k)).collect();
        let mut e: Vec<F> = Vec::with_capacity(n);
        for m in 0..n {
            if m == 0 {
                e.push(F::one());
                continue;
            }
            let mut acc = F::zero();
            for k in 1..=m {
                if !a[k].is_zero() {
                    acc = acc + F::from_int(k as i64) * a[k].clone() * e[m - k].clone();
                }
            }
            e.push(acc * F::from_int(m as i64).inv().unwrap());
        }
        Ok(Self::from_coeffs(0, e, Some(n as i64)))
    }

    /// Formal logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if self.valuation() != Some(0) || !self.coeffs[0].is_one() {
            return Err(SeriesError::BadConstantTerm);
        }
        let Some(n) = self.prec else {
            if self.coeffs.len() == 1 {
                return Ok(Self::zero());
            }
            return Err(SeriesError::UnboundedPrecision);
        };
        let n = n as usize;
        let a: Vec<F> = (0..n as i64).map(|k| self.coeff(k)).collect();
        let mut l: Vec<F> = vec![F::zero(); n];
        for m in 1..n {
            // m l_m = m a_m - sum_{k=1}^{m-1} k l_k a_{m-k}
            let mut acc = F::from_int(m as i64) * a[m].clone();
            for k in 1..m {
                acc = acc - F::from_int(k as i64) * l[k].clone() * a[m - k].clone();
            }
            l[m] = acc * F::from_int(m as i64).inv().unwrap();
        }
        Ok(Self::from_coeffs(0, l, Some(n as i64)))
    }

    /// `outer(inner(q))`.
    ///
    /// The polar part of `outer` must be finite (it always is) and needs
    /// `inner` invertible; the power-series part needs `inner` of positive
    /// valuation unless it is an exact polynomial.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self, SeriesError> {
        let inner_order = inner.order();
        let mut result = Self::zero();
        // polar terms
        for k in outer.val..0 {
            let c = outer.coeff(k);
            if c.is_zero() {
                continue;
            }
            result = result.add(&inner.pow(k)?.scale(&c));
        }
        // nonnegative part by Horner
        let start = outer.val.max(0);
        let end = outer.end();
        let tail_needed = outer.prec.is_some();
        if tail_needed && inner_order.is_none_or(|w| w < 1) {
            return Err(SeriesError::CompositionDiverges);
        }
        let mut acc = Self::zero();
        if end > start {
            for k in (0..end).rev() {
                acc = acc.mul(inner).add(&Self::monomial(outer.coeff(k), 0));
            }
        }
        if let (Some(pu), Some(w)) = (outer.prec, inner_order) {
            // O(x^pu) becomes O(q^(w pu))
            acc = acc.add(&Self::from_coeffs(0, Vec::new(), Some(w * pu.max(0))));
        }
        Ok(result.add(&acc))
    }

    /// Compositional inverse of a series of valuation 1.
    pub fn revert(&self) -> Result<Self, SeriesError> {
        if self.valuation() != Some(1) {
            return Err(SeriesError::BadValuation(self.valuation()));
        }
        let c1inv = self.coeffs[0].inv().unwrap();
        let Some(p) = self.prec else {
            if self.coeffs.len() == 1 {
                return Ok(Self::monomial(c1inv, 1));
            }
            return Err(SeriesError::UnboundedPrecision);
        };
        let n = p as usize;
        let a: Vec<F> = (0..p).map(|k| self.coeff(k)).collect();
        let da: Vec<F> = (1..p)
            .map(|k| self.coeff(k) * F::from_int(k))
            .collect();
        // Newton: b <- b - (a(b) - q) / a'(b), doubling correct terms
        let mut b: Vec<F> = vec![F::zero(), c1inv];
        let mut m = 2usize;
        while m < n {
            m = (2 * m).min(n);
            b.resize(m, F::zero());
            let ab = raw_compose(&a, &b, m);
            let dab = raw_compose(&da, &b, m);
            let mut resid = ab;
            resid[1] = resid[1].clone() - F::one();
            let corr = raw_mul(&resid, &raw_inv(&dab, m), m);
            for (bi, ci) in b.iter_mut().zip(corr) {
                *bi = bi.clone() - ci;
            }
        }
        b.truncate(n);
        Ok(Self::from_coeffs(0, b, Some(p)))
    }

    /// Schwarzian derivative `(3 w''^2 - 2 w' w''') / (4 w'^2)`.
    pub fn schwarzian(&self) -> Result<Self, SeriesError> {
        let d1 = self.derivative();
        if d1.is_zero() {
            return Err(SeriesError::ConstantInput);
        }
        let d2 = d1.derivative();
        let d3 = d2.derivative();
        let num = d2.mul(&d2).scale(&F::from_int(3)).sub(&d1.mul(&d3).scale(&F::from_int(2)));
        let den = d1.mul(&d1).scale(&F::from_int(4));
        num.div(&den)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> PowerSeries<G> {
        PowerSeries::from_coeffs(self.val, self.coeffs.iter().map(f).collect(), self.prec)
    }

    /// Stored coefficients starting at the valuation.
    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }
}

/// First `n` coefficients of `outer(inner)` for raw coefficient vectors,
/// `inner[0] = 0`.
fn raw_compose<F: Field>(outer: &[F], inner: &[F], n: usize) -> Vec<F> {
    let mut acc = vec![F::zero(); n];
    for c in outer.iter().rev() {
        acc = raw_mul(&acc, inner, n);
        acc[0] = acc[0].clone() + c.clone();
    }
    acc
}

fn raw_mul<F: Field>(a: &[F], b: &[F], n: usize) -> Vec<F> {
    let mut out = vec![F::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            let t = out[i + j].clone() + x.clone() * y.clone();
            out[i + j] = t;
        }
    }
    out
}

fn raw_inv<F: Field>(a: &[F], n: usize) -> Vec<F> {
    let c0 = a[0].inv().expect("unit constant term");
    let mut out: Vec<F> = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = if k == 0 { F::one() } else { F::zero() };
        for j in 1..=k.min(a.len().saturating_sub(1)) {
            acc = acc - a[j].clone() * out[k - j].clone();
        }
        out.push(acc * c0.clone());
    }
    out
}

impl QSeries {
    /// Evaluates a rational function on a series: `f(s)`.
    pub fn compose_rational(f: &RationalFunction, s: &QSeries) -> Result<QSeries, SeriesError> {
        let num = QSeries::compose_poly(f.num(), s);
        let den = QSeries::compose_poly(f.den(), s);
        num.div(&den)
    }

    fn compose_poly(p: &Polynomial, s: &QSeries) -> QSeries {
        let mut acc = QSeries::zero();
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(s).add(&QSeries::monomial(c.clone(), 0));
        }
        acc
    }

    /// Formats as `c*q^k + ... + O(q^p)` in the given variable.
    pub fn display_with(&self, var: &str) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if Field::is_zero(c) {
                continue;
            }
            let k = self.val + i as i64;
            let neg = c < &Rational::from_int(0);
            let a = if neg { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if k == 0 {
                out.push_str(&a.to_string());
            } else if Field::is_one(&a) {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}*{mono}"));
            }
        }
        if let Some(p) = self.prec {
            let big_o = match p {
                0 => "O(1)".to_string(),
                1 => format!("O({var})"),
                _ => format!("O({var}^{p})"),
            };
            if out.is_empty() {
                out = big_o;
            } else {
                out.push_str(&format!(" + {big_o}"));
            }
        } else if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("q"))
    }
}

/// Schwarzian derivative of a rational function.
pub fn schwarzian_rational(w: &RationalFunction) -> Result<RationalFunction, SeriesError> {
    let d1 = w.derivative();
    if d1.is_zero() {
        return Err(SeriesError::ConstantInput);
    }
    let d2 = d1.derivative();
    let d3 = d2.derivative();
    let three = RationalFunction::from_int(3);
    let two = RationalFunction::from_int(2);
    let four = RationalFunction::from_int(4);
    let num = &(&three * &(&d2 * &d2)) - &(&two * &(&d1 * &d3));
    Ok(&num / &(&four * &(&d1 * &d1)))
}
