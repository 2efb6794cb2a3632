//! Acceptance suite: one line per criterion, exact comparisons, wall-clock
//! limits. Runs without the libtest harness so the lines always print.

mod common;

use std::time::{Duration, Instant};

use common::*;
use pfuniform::elliptic::{
    check_elliptic_modularity, check_j_modularity, euler_sum, lambda_j, modular_list_fixture,
    KodairaFiber, ModularityVerdict, WeierstrassModel,
};
use pfuniform::exact::{AlgebraicPoint, Field, LocalElement, Polynomial, Rational, RationalFunction};
use pfuniform::k3::{admissible_vanishing_order, check_k3_modularity, k3_pf_root, FrickeOrbifoldData, K3Error, K3Verdict};
use pfuniform::mirror::{mirror_map, reciprocal_plus_constant};
use pfuniform::ode::{analyze, exponents, Classification, ExponentValue, LinearODE};
use pfuniform::series::QSeries;
use pfuniform::transform::{
    classify_pullback, sym2, sym2_root, sym_power_system, system_to_scalar, TransformError,
};
use pfuniform::uniformdata::{family_e, family_e_pf, lambda_operator, mirror_map_e, signature_psl2z};
use pfuniform::uniformize::{uniformization_check, OrbifoldSignature, Weight};
use rand::Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rats(l: &LinearODE, p: &AlgebraicPoint) -> Vec<Rational> {
    exponents(l, p).unwrap().iter().map(|e| e.as_rational().unwrap()).collect()
}

fn c1_pnf_golden() -> Outcome {
    let q = family_e_pf().pnf2().map_err(|e| e.to_string())?.p(2);
    let expect = RationalFunction::new(
        Polynomial::from_ints(&[32, -41, 36]),
        &Polynomial::from_ints(&[0, 0, 144]) * &Polynomial::from_ints(&[1, -2, 1]),
    );
    check(q == expect, format!("got {q}"))?;
    Ok(format!("Q = {}", q.display_with("s")))
}

fn c2_exponents() -> Outcome {
    let l = lambda_operator();
    check(rats(&l, &AlgebraicPoint::from_int(0)) == vec![q(1, 3), q(2, 3)], "exponents at 0")?;
    check(rats(&l, &AlgebraicPoint::from_int(1)) == vec![q(1, 4), q(3, 4)], "exponents at 1")?;
    check(rats(&l, &AlgebraicPoint::Infinity) == vec![q(1, 2), q(1, 2)], "exponents at inf")?;
    let r = uniformization_check(&l).map_err(|e| e.to_string())?;
    let expect = OrbifoldSignature::new(vec![
        (AlgebraicPoint::from_int(0), Weight::Finite(3)),
        (AlgebraicPoint::from_int(1), Weight::Finite(2)),
        (AlgebraicPoint::Infinity, Weight::Cusp),
    ])
    .unwrap();
    check(r.passed && r.signature == expect, format!("verdict {} signature {}", r.passed, r.signature))?;
    Ok(format!("PASS with signature {}", r.signature))
}

/// `1/j = Delta/E4^3` from divisor sums and the product expansion.
fn inverse_j_oracle(n: usize) -> QSeries {
    let prec = n as i64 + 1;
    let mut e4 = vec![Rational::from_int(1)];
    for k in 1..=n as i64 {
        let s3: i64 = (1..=k).filter(|d| k % d == 0).map(|d| d * d * d).sum();
        e4.push(Rational::from_int(240 * s3));
    }
    let e4 = QSeries::truncated(e4, prec);
    let mut prod = QSeries::one().truncate(prec);
    for k in 1..=n as i64 {
        let f = QSeries::one().sub(&QSeries::monomial(Rational::from_int(1), k)).truncate(prec);
        prod = prod.mul(&f.pow(24).unwrap());
    }
    let delta = prod.shift(1).truncate(prec);
    delta.div(&e4.pow(3).unwrap()).unwrap().truncate(prec)
}

fn c3_mirror_golden() -> Outcome {
    let raw = mirror_map(&family_e_pf(), &AlgebraicPoint::Infinity, 20).map_err(|e| e.to_string())?;
    // the classical expansion is in the coordinate 1/j = 1/(1728 s)
    let m = raw.rescaled(&q(1, 1728));
    let golden = mirror_map_e();
    for k in 1..=4 {
        check(m.series.coeff(k) == golden.coeff(k), format!("coefficient of q^{k}: {}", m.series.coeff(k)))?;
    }
    check(m.series == inverse_j_oracle(20), "20-term series differs from Delta/E4^3")?;
    let j = reciprocal_plus_constant(&m.series, &Rational::from_int(0)).map_err(|e| e.to_string())?;
    for (k, c) in [(-1, 1), (0, 744), (1, 196884), (2, 21493760)] {
        check(j.coeff(k) == Rational::from_int(c), format!("j coefficient of q^{k}: {}", j.coeff(k)))?;
    }
    Ok(format!(
        "z = 1/(1728 s): {} ...; raw z = 1/s gives {} ...",
        m.series.truncate(5),
        raw.series.truncate(3)
    ))
}

fn fixed_models() -> Vec<(&'static str, WeierstrassModel)> {
    let w = |a: &[i64], b: &[i64]| WeierstrassModel::new(rf(a, &[1]), rf(b, &[1])).unwrap();
    vec![
        ("family-E", family_e()),
        ("(s, s)", w(&[0, 1], &[0, 1])),
        ("(s, 1)", w(&[0, 1], &[1])),
        ("(s^2 + 1, s)", w(&[1, 0, 1], &[0, 1])),
        ("(3s, s + 1)", w(&[0, 3], &[1, 1])),
    ]
}

fn prop_49(w: &WeierstrassModel) -> Result<(), String> {
    let lhs = w.griffiths_pf().map_err(|e| e.to_string())?.pnf2().map_err(|e| e.to_string())?;
    let rhs = lambda_j(&w.functional_invariant()).map_err(|e| e.to_string())?;
    check(lhs == rhs, format!("g2 = {}, g3 = {}", w.g2(), w.g3()))
}

fn c4_griffiths_oracle() -> Outcome {
    let models = fixed_models();
    for (_, w) in &models {
        prop_49(w)?;
    }
    let mut r = rng(4);
    for i in 0..10 {
        let base = &models[i % models.len()].1;
        let u = loop {
            let (dn, dd) = (r.gen_range(0..=2), r.gen_range(0..=1));
            let (n, d) = (small_poly(&mut r, dn, 3), small_poly(&mut r, dd, 3));
            if !n.is_zero() && !d.is_zero() {
                break RationalFunction::new(n, d);
            }
        };
        let t = base.twist(&u).map_err(|e| e.to_string())?;
        prop_49(&t)?;
        let a = t.griffiths_pf().unwrap().pnf2().unwrap();
        let b = base.griffiths_pf().unwrap().pnf2().unwrap();
        check(a == b, "twist changed the normal form")?;
    }
    Ok(format!("{} fixed models, 10 twists", models.len()))
}

fn c5_kodaira() -> Outcome {
    use KodairaFiber::*;
    let w = family_e();
    let census = w.fiber_census();
    let expect = vec![
        (AlgebraicPoint::from_int(0), II),
        (AlgebraicPoint::from_int(1), IIIStar),
        (AlgebraicPoint::Infinity, I(1)),
    ];
    check(census == expect, format!("{census:?}"))?;
    let mut types: Vec<KodairaFiber> = census.iter().map(|c| c.1).collect();
    let mut first = modular_list_fixture()[0].clone();
    types.sort_by_key(|t| t.to_string());
    first.sort_by_key(|t| t.to_string());
    check(types == first, "census differs from the first listed configuration")?;
    let r = check_elliptic_modularity(&w).map_err(|e| e.to_string())?;
    check(r.verdict == ModularityVerdict::Modular, "verdict")?;
    Ok("II@0, III*@1, I1@inf; MODULAR".into())
}

fn c6_list_audit() -> Outcome {
    let rows = modular_list_fixture();
    check(rows.len() == 33, "row count")?;
    for row in &rows {
        check(euler_sum(row) == 12, format!("Euler sum of {row:?}"))?;
        check(!row.iter().any(KodairaFiber::is_forbidden), format!("IV or II* in {row:?}"))?;
    }
    Ok("33 rows, all sum to 12, none with IV or II*".into())
}

fn c7_symmetric_squares() -> Outcome {
    let mut r = rng(7);
    for _ in 0..50 {
        let l = random_fuchsian2(&mut r);
        let p = l.pnf2().unwrap();
        let lhs = sym2(&l).unwrap().pnf3().unwrap();
        let rhs = sym2(&p).unwrap();
        check(lhs == rhs, format!("pnf3(sym2) != sym2(pnf2) for {l}"))?;
        check(sym2_root(&rhs).unwrap() == p, format!("root mismatch for {l}"))?;
        let a = sym_power_system(&l, 2).unwrap();
        check(system_to_scalar(&a, 0).unwrap() == sym2(&l).unwrap(), format!("Lee system for {l}"))?;
    }
    Ok("50 random operators".into())
}

/// Squared exponent difference, as an element of the residue field.
fn diff_square(d: &ExponentValue) -> LocalElement {
    match d {
        ExponentValue::Exact(e) => e.clone() * e.clone(),
        ExponentValue::Quadratic { radicand, .. } => radicand.clone(),
    }
}

/// Moves an element of the residue field at `R(z0)` to the residue field
/// at `z0`.
fn transport(e: &LocalElement, r: &RationalFunction, z0: &AlgebraicPoint) -> LocalElement {
    if let Some(x) = e.as_rational() {
        return LocalElement::from_rational(x);
    }
    let beta = z0.generator().expect("finite point");
    let alpha = r.eval_in(&beta).expect("finite image");
    e.value().eval_in(&alpha)
}

fn c8_pullback_exponents() -> Outcome {
    let mut r = rng(8);
    let mut checked = 0;
    let mut apparent = 0;
    for _ in 0..30 {
        let l = random_fuchsian2(&mut r).pnf2().unwrap();
        let map = random_map(&mut r);
        let source = analyze(&l).map_err(|e| e.to_string())?;
        let rep = classify_pullback(&l, &map).map_err(|e| e.to_string())?;
        for p in &rep {
            let e = p.ramification as i64;
            match &p.image {
                Some(img) => {
                    let s = source.iter().find(|s| &s.location == img).unwrap();
                    let ds = diff_square(s.exponent_difference.as_ref().unwrap());
                    let dp = diff_square(p.exponent_difference.as_ref().unwrap());
                    let want = transport(&ds, &map, &p.location) * LocalElement::from_int(e * e);
                    check(
                        dp == want,
                        format!("L = {l}, R = {map}, point {}: diff^2 {dp} vs {want}", p.location),
                    )?;
                    checked += 1;
                }
                None => {
                    check(
                        p.classification == Classification::Apparent,
                        format!("L = {l}, R = {map}, critical point {} is {}", p.location, p.classification),
                    )?;
                    apparent += 1;
                }
            }
        }
    }
    Ok(format!("{checked} preimage points, {apparent} extra critical points"))
}

fn table_row(b: u64, r: u64) -> bool {
    match b {
        2 => r == 1 || r % 2 == 0,
        3 => r == 1 || r % 3 == 0,
        4 => r == 1 || r == 2 || r % 4 == 0,
        6 => r == 1 || r == 2 || r == 3 || r % 6 == 0,
        _ => unreachable!(),
    }
}

fn c9_table() -> Outcome {
    for b in [2, 3, 4, 6] {
        for r in 1..=36 {
            check(admissible_vanishing_order(b, r) == table_row(b, r), format!("b = {b}, r = {r}"))?;
        }
    }
    Ok("144 pairs agree".into())
}

fn c10_k3() -> Outcome {
    let lam = lambda_operator();
    let l3 = sym2(&lam).unwrap();
    check(k3_pf_root(&l3).map_err(|e| e.to_string())? == lam, "root of sym2")?;
    let via3 = mirror_map(&l3, &AlgebraicPoint::Infinity, 10).map_err(|e| e.to_string())?;
    let via2 = mirror_map(&lam, &AlgebraicPoint::Infinity, 10).map_err(|e| e.to_string())?;
    let pf = mirror_map(&family_e_pf(), &AlgebraicPoint::Infinity, 10).map_err(|e| e.to_string())?;
    check(via3.series == via2.series, "order 3 vs order 2")?;
    check(via2.series == pf.series, "normal form vs family E operator")?;
    let sym_pf = sym2(&family_e_pf()).unwrap();
    let via3_pf = mirror_map(&sym_pf, &AlgebraicPoint::Infinity, 10).map_err(|e| e.to_string())?;
    check(via3_pf.series == pf.series, "sym2 of family E operator")?;
    Ok("10 terms agree across routes".into())
}

fn c11_schwarzian() -> Outcome {
    let mut r = rng(11);
    for _ in 0..20 {
        let coeffs: Vec<Rational> = std::iter::once(Rational::from_int(1))
            .chain((0..7).map(|_| q(r.gen_range(-9..=9), r.gen_range(1..=4))))
            .collect();
        let w = QSeries::from_coeffs(1, coeffs, Some(9));
        let (a, b, c, d) = loop {
            let m: Vec<i64> = (0..4).map(|_| r.gen_range(-5..=5)).collect();
            if m[0] * m[3] - m[1] * m[2] != 0 && m[3] != 0 {
                break (m[0], m[1], m[2], m[3]);
            }
        };
        let k = |x: i64| Rational::from_int(x);
        let num = w.scale(&k(a)).add(&QSeries::monomial(k(b), 0));
        let den = w.scale(&k(c)).add(&QSeries::monomial(k(d), 0));
        let mw = num.div(&den).unwrap();
        let s1 = w.schwarzian().unwrap();
        let s2 = mw.schwarzian().unwrap();
        let top = s1.precision().unwrap().min(s2.precision().unwrap());
        check(top >= 4, "too little precision")?;
        for i in 0..top {
            check(s1.coeff(i) == s2.coeff(i), format!("coefficient {i} for ({a}w+{b})/({c}w+{d})"))?;
        }
    }
    Ok("20 Möbius transforms".into())
}

fn c12_negative() -> Outcome {
    let r = check_j_modularity(&rf(&[0, 0, 1], &[1])).map_err(|e| e.to_string())?;
    check(r.verdict == ModularityVerdict::NotModular, "J = z^2")?;
    let cubic = LinearODE::new(vec![RationalFunction::zero(), RationalFunction::zero(), RationalFunction::one()]).unwrap();
    check(sym2_root(&cubic) == Err(TransformError::NotSymmetricSquare), "f''' + f")?;
    check(k3_pf_root(&cubic) == Err(K3Error::NotSymmetricSquare), "f''' + f via k3")?;
    check(!admissible_vanishing_order(2, 3), "b = 2, r = 3")?;
    let orb = FrickeOrbifoldData::new(1, vec![(AlgebraicPoint::from_int(0), 2)], vec![AlgebraicPoint::Infinity]).unwrap();
    let k = check_k3_modularity(&rf(&[0, 0, 0, 1], &[1]), &orb, None).map_err(|e| e.to_string())?;
    check(k.verdict == K3Verdict::NotModular, "H = z^3 over an order-2 point")?;
    let ok = check_k3_modularity(&RationalFunction::x(), &signature_psl2z(), None).map_err(|e| e.to_string())?;
    check(ok.verdict == K3Verdict::Modular, "identity map")?;
    Ok("J = z^2 NOT MODULAR; f''' + f not a square; r = 3 over b = 2 rejected".into())
}

fn main() {
    let criteria: Vec<(u32, &str, Duration, fn() -> Outcome)> = vec![
        (1, "normal form of the family E Picard-Fuchs operator", Duration::from_secs(1), c1_pnf_golden),
        (2, "exponents and signature of lambda", Duration::from_secs(1), c2_exponents),
        (3, "mirror map of family E, 20 terms", Duration::from_secs(5), c3_mirror_golden),
        (4, "Griffiths operator vs lambda_J", Duration::from_secs(10), c4_griffiths_oracle),
        (5, "Kodaira census of family E", Duration::from_secs(5), c5_kodaira),
        (6, "33-configuration audit", Duration::from_secs(1), c6_list_audit),
        (7, "symmetric squares on 50 random operators", Duration::from_secs(30), c7_symmetric_squares),
        (8, "pullback exponent multiplicativity, 30 pairs", Duration::from_secs(30), c8_pullback_exponents),
        (9, "vanishing-order rule vs table rows", Duration::from_secs(1), c9_table),
        (10, "K3 square root and mirror map routes", Duration::from_secs(10), c10_k3),
        (11, "Schwarzian Möbius invariance", Duration::from_secs(1), c11_schwarzian),
        (12, "negative controls", Duration::from_secs(5), c12_negative),
    ];
    let mut failed = 0;
    for (n, name, limit, f) in criteria {
        let start = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let (status, detail) = match out {
            Ok(d) if took <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("over time limit {limit:?}: {d}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} [{n:>2}] {name} ({:.3}s, limit {}s): {detail}", took.as_secs_f64(), limit.as_secs());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 12 criteria passed");
}
