//! Exact analysis of Fuchsian differential operators with rational
//! function coefficients: local exponents, projective normal forms,
//! pullbacks, symmetric squares, Frobenius bases and mirror maps, plus
//! modularity checks for elliptic surfaces and K3 families built on them.

pub mod exact;
pub mod series;
pub mod ode;
pub mod transform;
pub mod uniformize;
pub mod mirror;
pub mod elliptic;
pub mod k3;
pub mod uniformdata;
