//! Monic linear differential operators with rational function coefficients
//! and their local analysis.

mod frobenius;
mod local;

use std::fmt;

use thiserror::Error;

use crate::exact::{AlgebraicPoint, Rational, RationalFunction};

pub use frobenius::{frobenius_basis, LogSolution, LogSolutionBasis};
pub use local::{
    analyze, analyze_point, exponents, fuchsian_check, indicial, is_apparent, local_operator,
    mum_check, singular_points, Classification, ExponentValue, FuchsianReport, PointRegularity,
    SingularPointReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("operator must have order at least 1")]
    ZeroOrder,
    #[error("operation needs order {expected}, operator has order {found}")]
    WrongOrder { expected: usize, found: usize },
    #[error("operation is implemented for orders 2 and 3 only, got {0}")]
    UnsupportedOrder(usize),
    #[error("leading coefficient vanishes identically")]
    ZeroLeadingCoefficient,
    #[error("change of variable by a constant map")]
    ConstantMap,
    #[error("irregular singular point at {0}")]
    NotFuchsian(String),
    #[error("exponents at {0} lie outside the rationals and quadratic extensions of the residue field")]
    UnsupportedExponentField(String),
    #[error("exponents at {0} do not differ by an integer")]
    NotIntegerDifference(String),
}

/// `f^(k) + P_1 f^(k-1) + ... + P_k f = 0`, stored as `[P_1, ..., P_k]`.
#[derive(Clone, PartialEq, Debug)]
pub struct LinearODE {
    coeffs: Vec<RationalFunction>,
}

impl LinearODE {
    /// Monic operator from `[P_1, ..., P_k]`.
    pub fn new(coeffs: Vec<RationalFunction>) -> Result<Self, OdeError> {
        if coeffs.is_empty() {
            return Err(OdeError::ZeroOrder);
        }
        Ok(LinearODE { coeffs })
    }

    /// Operator `a_k f^(k) + ... + a_0 f` from `[a_0, ..., a_k]`, made monic.
    pub fn from_full(a: &[RationalFunction]) -> Result<Self, OdeError> {
        let k = a.len().checked_sub(1).filter(|&k| k >= 1).ok_or(OdeError::ZeroOrder)?;
        let lead = a[k].inv().ok_or(OdeError::ZeroLeadingCoefficient)?;
        Self::new((1..=k).map(|i| &a[k - i] * &lead).collect())
    }

    /// Order-2 operator `f'' + Q f` in projective normal form.
    pub fn pnf2_from(q: RationalFunction) -> Self {
        LinearODE { coeffs: vec![RationalFunction::zero(), q] }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `P_i` for `1 <= i <= k`; `P_0 = 1`.
    pub fn p(&self, i: usize) -> RationalFunction {
        if i == 0 {
            RationalFunction::one()
        } else {
            self.coeffs[i - 1].clone()
        }
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    /// Coefficient of `f^(j)`, leading one included.
    pub fn derivative_coeff(&self, j: usize) -> RationalFunction {
        self.p(self.order() - j)
    }

    /// True when the next-to-leading coefficient vanishes.
    pub fn is_pnf(&self) -> bool {
        self.order() >= 2 && self.coeffs[0].is_zero()
    }

    fn expect_order(&self, k: usize) -> Result<(), OdeError> {
        if self.order() == k {
            Ok(())
        } else {
            Err(OdeError::WrongOrder { expected: k, found: self.order() })
        }
    }

    /// `L f` for a rational function `f`.
    pub fn apply(&self, f: &RationalFunction) -> RationalFunction {
        let k = self.order();
        let mut d = f.clone();
        let mut acc = RationalFunction::zero();
        for j in 0..=k {
            acc = &acc + &(&self.derivative_coeff(j) * &d);
            if j < k {
                d = d.derivative();
            }
        }
        acc
    }

    /// The operator satisfied by `g(t) = f(phi(t))`.
    pub fn change_of_variable(&self, phi: &RationalFunction) -> Result<Self, OdeError> {
        let dphi = phi.derivative();
        let inv = dphi.inv().ok_or(OdeError::ConstantMap)?;
        let k = self.order();
        // rows[j][m]: d^j/dx^j = sum_m rows[j][m] d^m/dt^m
        let mut rows: Vec<Vec<RationalFunction>> = vec![vec![RationalFunction::one()]];
        for j in 0..k {
            let prev = &rows[j];
            let mut next = vec![RationalFunction::zero(); j + 2];
            for (m, c) in prev.iter().enumerate() {
                next[m] = &next[m] + &c.derivative();
                next[m + 1] = &next[m + 1] + c;
            }
            rows.push(next.iter().map(|c| c * &inv).collect());
        }
        let mut full = vec![RationalFunction::zero(); k + 1];
        for (j, row) in rows.iter().enumerate() {
            let a = self.derivative_coeff(j).compose(phi);
            if a.is_zero() {
                continue;
            }
            for (m, c) in row.iter().enumerate() {
                full[m] = &full[m] + &(&a * c);
            }
        }
        Self::from_full(&full)
    }

    /// Projective normal form `f'' + Q f` with `Q = P_2 - P_1'/2 - P_1^2/4`.
    pub fn pnf2(&self) -> Result<Self, OdeError> {
        self.expect_order(2)?;
        let p1 = &self.coeffs[0];
        let p2 = &self.coeffs[1];
        let q = &(p2 - &p1.derivative().scale(&Rational::new(1.into(), 2.into())))
            - &(p1 * p1).scale(&Rational::new(1.into(), 4.into()));
        Ok(Self::pnf2_from(q))
    }

    /// Projective normal form of an order-3 operator: the gauge
    /// `f = g exp(-int P_1/3)` gives `g''' + R_2 g' + R_3 g` with
    /// `R_2 = P_2 - P_1' - P_1^2/3` and
    /// `R_3 = P_3 - P_1 P_2/3 - P_1''/3 + 2 P_1^3/27`.
    pub fn pnf3(&self) -> Result<Self, OdeError> {
        self.expect_order(3)?;
        let third = Rational::new(1.into(), 3.into());
        let p1 = &self.coeffs[0];
        let p2 = &self.coeffs[1];
        let p3 = &self.coeffs[2];
        let d1 = p1.derivative();
        let p1sq = p1 * p1;
        let r2 = &(p2 - &d1) - &p1sq.scale(&third);
        let r3 = &(&(p3 - &(p1 * p2).scale(&third)) - &d1.derivative().scale(&third))
            + &(&p1sq * p1).scale(&Rational::new(2.into(), 27.into()));
        Self::new(vec![RationalFunction::zero(), r2, r3])
    }

    /// Projective normal form for orders 2 and 3.
    pub fn pnf(&self) -> Result<Self, OdeError> {
        match self.order() {
            2 => self.pnf2(),
            3 => self.pnf3(),
            k => Err(OdeError::UnsupportedOrder(k)),
        }
    }

    /// Writes the operator in the variable `var`.
    pub fn display_with(&self, var: &str) -> String {
        let k = self.order();
        let deriv = |j: usize| -> String {
            match j {
                0 => "f".to_string(),
                1..=3 => format!("f{}", "'".repeat(j)),
                _ => format!("f^({j})"),
            }
        };
        let mut s = deriv(k);
        for i in 1..=k {
            let c = &self.coeffs[i - 1];
            if c.is_zero() {
                continue;
            }
            s.push_str(&format!(" + ({})*{}", c.display_with(var), deriv(k - i)));
        }
        s
    }

    /// The point at infinity is handled through the coordinate `t = 1/x`.
    pub fn at_infinity_coordinate() -> RationalFunction {
        RationalFunction::x().inv().unwrap()
    }

    /// Finite poles of the coefficients together with infinity, before any
    /// regularity test.
    pub(crate) fn candidate_points(&self) -> Vec<AlgebraicPoint> {
        let mut pts = Vec::new();
        for c in &self.coeffs {
            for (g, _) in crate::exact::factor(c.den()) {
                let p = AlgebraicPoint::Finite(crate::exact::Modulus::new_unchecked(g));
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
        }
        pts.sort();
        pts
    }
}

impl fmt::Display for LinearODE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}
