//! Exact arithmetic: rationals, polynomials, rational functions,
//! factorization, and local expansions at points of the projective line.

pub mod factor;
pub mod field;
pub mod linalg;
pub mod local;
pub mod poly;
pub mod ratfunc;

pub use factor::{factor, factor_squarefree, rational_gcd, rational_roots, yun};
pub use field::{int, rat, rational_sqrt, Field, Rational};
pub use local::{laurent_expand, AlgebraicPoint, LaurentExpansion, LocalElement, Modulus};
pub use poly::{Poly, Polynomial};
pub use ratfunc::RationalFunction;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ExactError {
    #[error("zero polynomial has no factorization")]
    ZeroPolynomial,
}

/// Monic gcd of two rational polynomials; `gcd(0, 0) = 0`.
pub fn polynomial_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    rational_gcd(a, b)
}

/// Squarefree factorization refined into irreducible factors over the
/// rationals: monic factors with multiplicities whose product equals `p`
/// up to its leading coefficient.
pub fn squarefree_factor(p: &Polynomial) -> Result<Vec<(Polynomial, usize)>, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    Ok(factor(p))
}
