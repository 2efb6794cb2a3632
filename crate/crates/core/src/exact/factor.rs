//! Factorization of rational polynomials: Yun's squarefree decomposition
//! followed by Zassenhaus (factor modulo a prime, Hensel lift, recombine).

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::Rational;
use super::poly::Polynomial;

/// Squarefree decomposition of a monic-normalized polynomial: pairs
/// `(s_i, i)` with `p = lc * prod s_i^i`, each `s_i` monic, squarefree and
/// pairwise coprime. Factors of degree zero are omitted.
pub fn yun(p: &Polynomial) -> Vec<(Polynomial, usize)> {
    let f = p.monic();
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let df = f.derivative();
    let a = rational_gcd(&f, &df);
    let mut b = f.exact_div(&a).unwrap();
    let mut c = df.exact_div(&a).unwrap();
    let mut d = &c - &b.derivative();
    let mut i = 1;
    loop {
        let g = rational_gcd(&b, &d);
        if !g.is_constant() {
            out.push((g.clone(), i));
        }
        b = b.exact_div(&g).unwrap();
        if b.is_constant() {
            break;
        }
        c = d.exact_div(&g).unwrap();
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

/// Monic gcd over the rationals. A gcd of degree zero modulo a prime not
/// dividing the leading coefficients settles coprime inputs; otherwise a
/// primitive remainder sequence over the integers.
pub fn rational_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    let mut x = a.primitive_integer();
    let mut y = b.primitive_integer();
    for p in [2_147_483_647_i64, 2_305_843_009_213_693_951] {
        let p = BigInt::from(p);
        let lc_ok = |v: &ZPoly| !v.last().unwrap().is_multiple_of(&p);
        if lc_ok(&x) && lc_ok(&y) && deg(&gcd_mod(&x, &y, &p)) == 0 {
            return Polynomial::one();
        }
    }
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        if y.len() == 1 {
            return Polynomial::one();
        }
        let r = pseudo_rem(&x, &y);
        x = y;
        y = if r.is_empty() { r } else { primitive(&r) };
    }
    Polynomial::from_integers(&x).monic()
}

/// Pseudo-remainder of integer polynomials with content removed along the
/// way.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut r = a.to_vec();
    let lb = b.last().unwrap();
    while r.len() >= b.len() {
        let lr = r.last().unwrap().clone();
        let k = r.len() - b.len();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, c) in b.iter().enumerate() {
            r[i + k] -= &lr * c;
        }
        r = trim(r);
        if r.is_empty() {
            break;
        }
        let g = content(&r);
        if !g.is_one() {
            for c in r.iter_mut() {
                *c /= &g;
            }
        }
    }
    r
}

/// Irreducible factors over the rationals of a squarefree polynomial,
/// each monic, sorted canonically.
pub fn factor_squarefree(p: &Polynomial) -> Vec<Polynomial> {
    let mut out = Vec::new();
    let Some(deg) = p.degree() else { return out };
    if deg == 0 {
        return out;
    }
    let mut f = p.monic();
    // pull out x first; it is the most common factor in practice
    if f.coeff(0).is_zero() {
        out.push(Polynomial::x());
        f = f.exact_div(&Polynomial::x()).unwrap();
    }
    if f.degree().unwrap_or(0) >= 1 {
        let ints = f.primitive_integer();
        for g in zassenhaus(&ints) {
            out.push(Polynomial::from_integers(&g).monic());
        }
    }
    sort_canonical(&mut out);
    out
}

/// Full factorization into monic irreducibles with multiplicities.
pub fn factor(p: &Polynomial) -> Vec<(Polynomial, usize)> {
    let mut out = Vec::new();
    for (s, m) in yun(p) {
        for g in factor_squarefree(&s) {
            out.push((g, m));
        }
    }
    out.sort_by(|a, b| canonical_cmp(&a.0, &b.0));
    out
}

/// Canonical order on monic factors: by degree, then by coefficient vector
/// from the constant term up; for linear factors this is ascending root.
pub fn canonical_cmp(a: &Polynomial, b: &Polynomial) -> std::cmp::Ordering {
    let da = a.degree();
    let db = b.degree();
    da.cmp(&db).then_with(|| {
        if da == Some(1) {
            // root = -c0 for monic x + c0
            return (-a.coeff(0)).cmp(&(-b.coeff(0)));
        }
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            match x.cmp(y) {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    })
}

fn sort_canonical(v: &mut [Polynomial]) {
    v.sort_by(canonical_cmp);
}

// ---------------------------------------------------------------------------
// integer polynomials modulo m, coefficient vectors lowest degree first

type ZPoly = Vec<BigInt>;

fn trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn reduce(a: &[BigInt], m: &BigInt) -> ZPoly {
    trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn deg(a: &[BigInt]) -> isize {
    a.len() as isize - 1
}

fn add_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    trim(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).mod_floor(m))
            .collect(),
    )
}

fn sub_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    trim(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).mod_floor(m))
            .collect(),
    )
}

fn mul_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    reduce(&out, m)
}

fn scale_mod(a: &[BigInt], c: &BigInt, m: &BigInt) -> ZPoly {
    reduce(&a.iter().map(|x| x * c).collect::<Vec<_>>(), m)
}

/// Inverse of `a` modulo `m`, if it exists.
fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Division with remainder modulo `m`; the divisor's leading coefficient
/// must be a unit.
fn divrem_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    let db = b.len() - 1;
    let lc_inv = inv_mod(&b[db], m).expect("unit leading coefficient");
    let mut r = reduce(a, m);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = (&r[r.len() - 1] * &lc_inv).mod_floor(m);
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = (&r[k + j] - &c * bj).mod_floor(m);
        }
        q[k] = c;
        r = trim(r);
    }
    (trim(q), r)
}

fn rem_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    divrem_mod(a, b, m).1
}

fn monic_mod(a: &[BigInt], p: &BigInt) -> ZPoly {
    match a.last() {
        None => Vec::new(),
        Some(lc) => scale_mod(a, &inv_mod(lc, p).unwrap(), p),
    }
}

/// Monic gcd modulo a prime.
fn gcd_mod(a: &[BigInt], b: &[BigInt], p: &BigInt) -> ZPoly {
    let mut a = reduce(a, p);
    let mut b = reduce(b, p);
    while !b.is_empty() {
        let r = rem_mod(&a, &b, p);
        a = b;
        b = r;
    }
    monic_mod(&a, p)
}

/// `(g, s, t)` with `s a + t b = g` modulo a prime, `g` monic.
fn ext_gcd_mod(a: &[BigInt], b: &[BigInt], p: &BigInt) -> (ZPoly, ZPoly, ZPoly) {
    let (mut r0, mut r1) = (reduce(a, p), reduce(b, p));
    let (mut s0, mut s1): (ZPoly, ZPoly) = (vec![BigInt::one()], Vec::new());
    let (mut t0, mut t1): (ZPoly, ZPoly) = (Vec::new(), vec![BigInt::one()]);
    while !r1.is_empty() {
        let (q, r) = divrem_mod(&r0, &r1, p);
        let s = sub_mod(&s0, &mul_mod(&q, &s1, p), p);
        let t = sub_mod(&t0, &mul_mod(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = inv_mod(r0.last().unwrap(), p).unwrap();
    (
        scale_mod(&r0, &inv, p),
        scale_mod(&s0, &inv, p),
        scale_mod(&t0, &inv, p),
    )
}

fn powmod_poly(base: &[BigInt], mut e: BigInt, f: &[BigInt], p: &BigInt) -> ZPoly {
    let mut acc: ZPoly = vec![BigInt::one()];
    let mut b = rem_mod(base, f, p);
    while e.is_positive() {
        if e.is_odd() {
            acc = rem_mod(&mul_mod(&acc, &b, p), f, p);
        }
        e >>= 1;
        if e.is_positive() {
            b = rem_mod(&mul_mod(&b, &b, p), f, p);
        }
    }
    acc
}

fn derivative_z(a: &[BigInt]) -> ZPoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect(),
    )
}

/// Distinct-degree then equal-degree factorization of a monic squarefree
/// polynomial modulo an odd prime.
fn factor_mod_p(f: &[BigInt], p: &BigInt, rng: &mut ChaCha8Rng) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut f = monic_mod(f, p);
    let x: ZPoly = vec![BigInt::zero(), BigInt::one()];
    let mut h = x.clone();
    let mut d = 1usize;
    while deg(&f) >= 2 * d as isize {
        h = powmod_poly(&h, p.clone(), &f, p);
        let g = gcd_mod(&sub_mod(&h, &x, p), &f, p);
        if deg(&g) > 0 {
            equal_degree(&g, d, p, rng, &mut out);
            f = divrem_mod(&f, &g, p).0;
            h = rem_mod(&h, &f, p);
        }
        d += 1;
    }
    if deg(&f) > 0 {
        out.push(f);
    }
    out
}

fn equal_degree(g: &[BigInt], d: usize, p: &BigInt, rng: &mut ChaCha8Rng, out: &mut Vec<ZPoly>) {
    let n = deg(g) as usize;
    if n == d {
        out.push(g.to_vec());
        return;
    }
    let e = (p.pow(d as u32) - 1u32) / 2u32;
    let pu = p.to_u64().unwrap();
    loop {
        let a: ZPoly = trim((0..n).map(|_| BigInt::from(rng.gen_range(0..pu))).collect());
        if deg(&a) < 1 {
            continue;
        }
        let b = sub_mod(&powmod_poly(&a, e.clone(), g, p), &[BigInt::one()], p);
        let c = gcd_mod(&b, g, p);
        let dc = deg(&c);
        if dc > 0 && (dc as usize) < n {
            let rest = divrem_mod(g, &c, p).0;
            equal_degree(&c, d, p, rng, out);
            equal_degree(&rest, d, p, rng, out);
            return;
        }
    }
}

/// Lifts `f = g h (mod p)` with `g`, `h` monic and `f` monic modulo `p^k`.
fn hensel_two(f: &[BigInt], g: &[BigInt], h: &[BigInt], p: &BigInt, k: u32) -> (ZPoly, ZPoly) {
    let (one, s, t) = ext_gcd_mod(g, h, p);
    debug_assert_eq!(one, vec![BigInt::one()]);
    let mut g = g.to_vec();
    let mut h = h.to_vec();
    let mut pj = p.clone();
    for _ in 1..k {
        let next = &pj * p;
        let e = sub_mod(&reduce(f, &next), &mul_mod(&g, &h, &next), &next);
        let e: ZPoly = e.iter().map(|c| c / &pj).collect();
        let dg = rem_mod(&mul_mod(&t, &e, p), &g, p);
        let dh = rem_mod(&mul_mod(&s, &e, p), &h, p);
        g = add_mod(&g, &scale_mod(&dg, &pj, &next), &next);
        h = add_mod(&h, &scale_mod(&dh, &pj, &next), &next);
        pj = next;
    }
    (g, h)
}

fn hensel_multi(f: &[BigInt], factors: &[ZPoly], p: &BigInt, k: u32) -> Vec<ZPoly> {
    let m = p.pow(k);
    if factors.len() == 1 {
        return vec![reduce(f, &m)];
    }
    let rest = factors[1..]
        .iter()
        .fold(vec![BigInt::one()], |acc, g| mul_mod(&acc, g, p));
    let (g, h) = hensel_two(f, &factors[0], &rest, p, k);
    let mut out = vec![g];
    out.extend(hensel_multi(&h, &factors[1..], p, k));
    out
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let c = c.mod_floor(m);
    if &c * 2 > *m {
        c - m
    } else {
        c
    }
}

fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

fn primitive(a: &[BigInt]) -> ZPoly {
    let c = content(a);
    let sign = if a.last().is_some_and(|x| x.is_negative()) { -1 } else { 1 };
    let c = c * sign;
    a.iter().map(|x| x / &c).collect()
}

/// Exact quotient of integer polynomials, if it is integral.
fn divide_z(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let pa = Polynomial::from_integers(a);
    let pb = Polynomial::from_integers(b);
    let q = pa.exact_div(&pb)?;
    q.coeffs()
        .iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect()
}

fn is_small_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Irreducible factors over the integers of a primitive squarefree
/// polynomial of positive degree.
fn zassenhaus(f: &[BigInt]) -> Vec<ZPoly> {
    let f = primitive(f);
    let n = f.len() - 1;
    if n == 1 {
        return vec![f];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let lc = f[n].clone();

    // choose the prime giving the fewest modular factors among a few
    let mut best: Option<(BigInt, Vec<ZPoly>)> = None;
    let mut tried = 0;
    let mut candidate = 3u64;
    while tried < 5 {
        candidate += 2;
        if !is_small_prime(candidate) {
            continue;
        }
        let p = BigInt::from(candidate);
        if (&lc % &p).is_zero() {
            continue;
        }
        let fp = reduce(&f, &p);
        let g = gcd_mod(&fp, &derivative_z(&fp), &p);
        if deg(&g) > 0 {
            continue;
        }
        tried += 1;
        let facs = factor_mod_p(&fp, &p, &mut rng);
        if facs.len() == 1 {
            return vec![f];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
    }
    let (p, facs) = best.unwrap();

    // coefficient bound for factors of lc*f, doubled for the symmetric range
    let max = f.iter().map(|c| c.abs()).max().unwrap();
    let bound = BigInt::from(2u32).pow(n as u32) * BigInt::from(n + 1) * max * lc.abs() * 2;
    let mut k = 1u32;
    while p.pow(k) <= bound {
        k += 1;
    }
    let m = p.pow(k);
    let monic_f = scale_mod(&f, &inv_mod(&lc, &m).unwrap(), &m);
    let mut lifted = hensel_multi(&monic_f, &facs, &p, k);

    let mut result = Vec::new();
    let mut f = f;
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = false;
        for subset in subsets(lifted.len(), s) {
            let lcf = f.last().unwrap().clone();
            let prod = subset
                .iter()
                .fold(vec![lcf.clone()], |acc, &i| mul_mod(&acc, &lifted[i], &m));
            let cand: ZPoly = prod.iter().map(|c| symmetric(c, &m)).collect();
            let cand = primitive(&trim(cand));
            if let Some(q) = divide_z(&f, &cand) {
                result.push(cand);
                f = primitive(&q);
                let mut keep = Vec::new();
                for (i, g) in lifted.into_iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(g);
                    }
                }
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    if f.len() > 1 {
        result.push(f);
    }
    result
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Rational roots of a polynomial with multiplicities, ascending.
pub fn rational_roots(p: &Polynomial) -> Vec<(Rational, usize)> {
    factor(p)
        .into_iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, m)| (-g.coeff(0), m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    fn reassemble(f: &[(Polynomial, usize)]) -> Polynomial {
        f.iter()
            .fold(Polynomial::one(), |acc, (g, m)| &acc * &g.pow(*m as u32))
    }

    #[test]
    fn squarefree_examples() {
        // s^2 (s - 27)
        let f = p(&[0, 0, -27, 1]);
        assert_eq!(factor(&f), vec![(p(&[0, 1]), 2), (p(&[-27, 1]), 1)]);
        assert_eq!(factor(&p(&[-1, 0, 1])), vec![(p(&[1, 1]), 1), (p(&[-1, 1]), 1)]);
        assert_eq!(factor(&p(&[1, 0, 1]).pow(2)), vec![(p(&[1, 0, 1]), 2)]);
    }

    #[test]
    fn zassenhaus_splits_products() {
        // (x^2 - 2)(x^3 - x - 1)(2x + 3)^2
        let a = p(&[-2, 0, 1]);
        let b = p(&[-1, -1, 0, 1]);
        let c = p(&[3, 2]);
        let f = &(&a * &b) * &c.pow(2);
        let fac = factor(&f);
        assert_eq!(fac.len(), 3);
        assert_eq!(reassemble(&fac).scale(&Rational::from_integer(4.into())), f);
        // x^4 + 1 is irreducible over Q but splits modulo every prime
        assert_eq!(factor(&p(&[1, 0, 0, 0, 1])), vec![(p(&[1, 0, 0, 0, 1]), 1)]);
        // Swinnerton-Dyer style product of conjugate quadratics
        let f = &p(&[-2, 0, 1]) * &p(&[-3, 0, 1]);
        assert_eq!(factor(&f).len(), 2);
    }

    #[test]
    fn yun_multiplicities() {
        let f = &(&p(&[-1, 1]).pow(3) * &p(&[2, 1]).pow(2)) * &p(&[5, 0, 1]);
        let y = yun(&f);
        assert_eq!(y.iter().map(|(_, m)| *m).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(reassemble(&y), f);
    }

    #[test]
    fn roots() {
        let f = &p(&[1, 2]) * &p(&[-3, 1]).pow(2);
        let r = rational_roots(&f);
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].1, 1);
        assert_eq!(r[1].1, 2);
    }
}
