//! Bundled exact fixtures: the uniformizing operator for the modular group,
//! the elliptic family with functional invariant `J = s`, its Picard-Fuchs
//! operator, the list of modular rational elliptic surfaces and the
//! classical `j` expansions.

use thiserror::Error;

use crate::elliptic::{KodairaFiber, WeierstrassModel};
use crate::exact::{rat, AlgebraicPoint, Field, Polynomial, Rational, RationalFunction};
use crate::k3::FrickeOrbifoldData;
use crate::ode::LinearODE;
use crate::series::QSeries;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("unknown fixture {0:?}")]
pub struct UnknownFixture(pub String);

#[derive(Clone, Debug, PartialEq)]
pub enum FixturePayload {
    Operator(LinearODE),
    Weierstrass(WeierstrassModel),
    FiberConfigurations(Vec<Vec<KodairaFiber>>),
    Series(QSeries),
    Signature(FrickeOrbifoldData),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub name: &'static str,
    pub payload: FixturePayload,
    pub provenance: &'static str,
}

pub const FIXTURE_NAMES: [&str; 7] = [
    "lambda",
    "family-E",
    "family-E-pf",
    "modular-33",
    "j-series",
    "mirror-map-E",
    "signature-psl2z",
];

/// `f'' + (36x^2 - 41x + 32)/(144 x^2 (x-1)^2) f`, uniformizing the
/// modular group with the elliptic points of order 3 and 2 at 0 and 1 and
/// the cusp at infinity.
pub fn lambda_operator() -> LinearODE {
    LinearODE::pnf2_from(RationalFunction::new(
        Polynomial::from_ints(&[32, -41, 36]),
        Polynomial::from_ints(&[0, 0, 144, -288, 144]),
    ))
}

/// `g2 = g3 = 27 s/(s - 1)`.
pub fn family_e() -> WeierstrassModel {
    let g = RationalFunction::new(Polynomial::from_ints(&[0, 27]), Polynomial::from_ints(&[-1, 1]));
    WeierstrassModel::new(g.clone(), g).expect("smooth generic fibre")
}

/// `f'' + (1/s) f' + ((31/144) s - 1/36)/(s^2 (s-1)^2) f`.
pub fn family_e_pf() -> LinearODE {
    let p1 = RationalFunction::new(Polynomial::from_ints(&[1]), Polynomial::from_ints(&[0, 1]));
    let p2 = RationalFunction::new(
        Polynomial::new(vec![rat(-1, 36), rat(31, 144)]),
        Polynomial::from_ints(&[0, 0, 1, -2, 1]),
    );
    LinearODE::new(vec![p1, p2]).expect("order 2")
}

const MODULAR_33: [&str; 33] = [
    "I1, II, III*",
    "I2, I4, III, III",
    "I2, I3, I4, III",
    "I2, II, IV*",
    "I3, I3, III, III",
    "I1, I1, I8, II",
    "I1, I2, III*",
    "I1, I6, II, III",
    "I1, I2, I7, II",
    "I3, III, III, III",
    "I2, I5, II, III",
    "I1, I4, I5, II",
    "I1, I3, IV*",
    "I3, I4, II, III",
    "I2, I3, I5, II",
    "I4, II, III, III",
    "I1, I7, II, II",
    "I1, I1, I1, I9",
    "I5, II, II, III",
    "I2, I6, II, II",
    "I1, I1, I2, I8",
    "I1, I1, I4*",
    "I4, I4, II, II",
    "I1, I2, I3, I6",
    "I2, I2, I2*",
    "I1, I1, I7, III",
    "I1, I1, I5, I5",
    "I6, II, II, II",
    "I1, I2, I6, III",
    "I2, I2, I4, I4",
    "I1, I5, III, III",
    "I1, I3, I5, III",
    "I3, I3, I3, I3",
];

/// Singular fibre configurations of the rational elliptic surfaces with
/// modular mirror map, listed row by row.
pub fn modular_list() -> Vec<Vec<KodairaFiber>> {
    MODULAR_33
        .iter()
        .map(|row| row.split(',').map(|t| t.parse().expect("fibre type")).collect())
        .collect()
}

fn ints(start: i64, c: &[i64], prec: i64) -> QSeries {
    QSeries::from_coeffs(start, c.iter().map(|&x| Rational::from_int(x)).collect(), Some(prec))
}

/// `j(q) = 1/q + 744 + 196884 q + 21493760 q^2 + O(q^3)`.
pub fn j_series() -> QSeries {
    ints(-1, &[1, 744, 196884, 21493760], 3)
}

/// `1/j(q) = q - 744 q^2 + 356652 q^3 - 140361152 q^4 + O(q^5)`.
pub fn mirror_map_e() -> QSeries {
    ints(1, &[1, -744, 356652, -140361152], 5)
}

/// The modular group seen through the coordinate of the uniformizing
/// operator: order 3 at 0, order 2 at 1, cusp at infinity.
pub fn signature_psl2z() -> FrickeOrbifoldData {
    FrickeOrbifoldData::new(
        1,
        vec![(AlgebraicPoint::from_int(0), 3), (AlgebraicPoint::from_int(1), 2)],
        vec![AlgebraicPoint::Infinity],
    )
    .expect("distinct values")
}

pub fn load_fixture(name: &str) -> Result<Fixture, UnknownFixture> {
    let (payload, provenance) = match name {
        "lambda" => (
            FixturePayload::Operator(lambda_operator()),
            "uniformizing differential equation of PSL(2,Z) in the J coordinate",
        ),
        "family-E" => (
            FixturePayload::Weierstrass(family_e()),
            "Weierstrass family y^2 = 4x^3 - 27s/(s-1) x - 27s/(s-1) with functional invariant s",
        ),
        "family-E-pf" => (
            FixturePayload::Operator(family_e_pf()),
            "Picard-Fuchs operator of the family with g2 = g3 = 27s/(s-1) in the base coordinate s",
        ),
        "modular-33" => (
            FixturePayload::FiberConfigurations(modular_list()),
            "singular fibre types of the 33 rational elliptic modular surfaces",
        ),
        "j-series" => (
            FixturePayload::Series(j_series()),
            "q-expansion of the elliptic modular function j",
        ),
        "mirror-map-E" => (
            FixturePayload::Series(mirror_map_e()),
            "mirror map of the family with functional invariant s, as the series 1/j(q)",
        ),
        "signature-psl2z" => (
            FixturePayload::Signature(signature_psl2z()),
            "orbifold data (2, 3, inf) of PSL(2,Z), derived from the exponents of lambda",
        ),
        _ => return Err(UnknownFixture(name.to_string())),
    };
    let name = FIXTURE_NAMES.iter().find(|n| **n == name).expect("listed");
    Ok(Fixture { name, payload, provenance })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load() {
        for n in FIXTURE_NAMES {
            assert_eq!(load_fixture(n).unwrap().name, n);
        }
        assert_eq!(load_fixture("nope"), Err(UnknownFixture("nope".into())));
        assert_eq!(family_e_pf().pnf2().unwrap(), lambda_operator());
        let rows = modular_list();
        assert_eq!(rows.len(), 33);
        assert_eq!(rows[0], vec![KodairaFiber::I(1), KodairaFiber::II, KodairaFiber::IIIStar]);
        assert_eq!(rows[32], vec![KodairaFiber::I(3); 4]);
        assert_eq!(
            lambda_operator().p(2).to_string(),
            "(36*x^2 - 41*x + 32)/(144*x^4 - 288*x^3 + 144*x^2)"
        );
    }
}
