//! Frobenius solutions at a regular singular point.
//!
//! With `theta = t d/dt`, the operator times `t^k` is `sum_m t^m F_m(theta)`
//! where `F_0` is the indicial polynomial. Solutions are sought in the basis
//! `e(s, j) = t^s log(t)^j / j!`, on which `theta` acts by
//! `theta e(s, j) = s e(s, j) + e(s, j-1)`. Each class of exponents with
//! integer differences is solved at once: every coefficient is a linear form
//! in free parameters introduced at the roots of `F_0`, and the solvability
//! conditions met at those roots cut the parameter space down to the
//! solution space.

use crate::exact::linalg::{nullspace, rank};
use crate::exact::{AlgebraicPoint, Field, LocalElement, Poly, Rational};
use crate::series::PowerSeries;

use super::local::{exponents, local_operator, theta_coefficients, ExponentValue};
use super::{LinearODE, OdeError};

type F = LocalElement;

/// `t^exponent * sum_j log_series[j] * log(t)^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSolution {
    pub exponent: LocalElement,
    pub log_series: Vec<PowerSeries<LocalElement>>,
}

impl LogSolution {
    /// Highest power of `log t` with a nonzero coefficient.
    pub fn log_degree(&self) -> usize {
        self.log_series.iter().rposition(|s| !s.is_zero()).unwrap_or(0)
    }

    /// Coefficient series of `log(t)^j` with rational coefficients, when
    /// the residue field is the rationals.
    pub fn rational_series(&self, j: usize) -> Option<PowerSeries<Rational>> {
        let s = self.log_series.get(j)?;
        let c: Option<Vec<Rational>> = s.coeffs().iter().map(|c| c.as_rational()).collect();
        Some(PowerSeries::from_coeffs(s.valuation().unwrap_or(0), c?, s.precision()))
    }
}

/// Basis of formal solutions at a point, ordered by exponent class and,
/// within a class, by increasing power of the logarithm.
#[derive(Clone, Debug)]
pub struct LogSolutionBasis {
    pub point: AlgebraicPoint,
    pub exponents: Vec<ExponentValue>,
    pub solutions: Vec<LogSolution>,
    /// Coefficients are known for `t^0 .. t^(n_terms - 1)` relative to the
    /// exponent.
    pub n_terms: usize,
}

impl LogSolutionBasis {
    pub fn has_logs(&self) -> bool {
        self.solutions.iter().any(|s| s.log_degree() > 0)
    }

    pub fn max_log_degree(&self) -> usize {
        self.solutions.iter().map(LogSolution::log_degree).max().unwrap_or(0)
    }
}

/// One class of exponents differing by integers, solved.
pub(crate) struct ClassSolution {
    pub rho: F,
    /// Exponent offsets from `rho` and their multiplicities.
    pub offsets: Vec<(usize, usize)>,
    /// `coeffs[s][n][j]`: coefficient of `e(rho + n, j)` in solution `s`.
    pub coeffs: Vec<Vec<Vec<F>>>,
    /// `filtration[l]`: dimension of solutions with no `log^(>l)` term.
    pub filtration: Vec<usize>,
}

impl ClassSolution {
    pub fn size(&self) -> usize {
        self.offsets.iter().map(|o| o.1).sum()
    }

    pub fn log_free_dimension(&self) -> usize {
        self.filtration[0]
    }

    /// True when the class has a single exponent and each power of the
    /// logarithm up to the multiplicity minus one occurs.
    pub fn full_log_ladder(&self) -> bool {
        self.filtration.iter().enumerate().all(|(l, &d)| d == l + 1)
    }

    fn to_log_solutions(&self, n_terms: usize) -> Vec<LogSolution> {
        let mut fact = F::one();
        let mut inv_fact = Vec::new();
        for j in 0..self.size() {
            if j > 0 {
                fact = fact * F::from_int(j as i64);
            }
            inv_fact.push(fact.inv().unwrap());
        }
        self.coeffs
            .iter()
            .map(|sol| {
                let log_series = (0..self.size())
                    .map(|j| {
                        let c: Vec<F> = (0..n_terms)
                            .map(|n| sol[n][j].clone() * inv_fact[j].clone())
                            .collect();
                        PowerSeries::truncated(c, n_terms as i64)
                    })
                    .collect();
                LogSolution { exponent: self.rho.clone(), log_series }
            })
            .collect()
    }
}

fn falling(j: usize) -> Poly<F> {
    (0..j).fold(Poly::one(), |acc, i| &acc * &Poly::linear_root(F::from_int(i as i64)))
}

fn dot(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(), |acc, (x, y)| if x.is_zero() || y.is_zero() { acc } else { acc + x.clone() * y.clone() })
}

/// Groups exact exponents into classes with integer differences.
pub(crate) fn exponent_classes(exps: &[F]) -> Vec<(F, Vec<(usize, usize)>)> {
    let mut classes: Vec<Vec<F>> = Vec::new();
    for e in exps {
        let found = classes.iter_mut().find(|c| {
            (e.clone() - c[0].clone())
                .as_rational()
                .is_some_and(|d| d.is_integer())
        });
        match found {
            Some(c) => c.push(e.clone()),
            None => classes.push(vec![e.clone()]),
        }
    }
    classes
        .into_iter()
        .map(|c| {
            let diffs: Vec<Rational> =
                c.iter().map(|e| (e.clone() - c[0].clone()).as_rational().unwrap()).collect();
            let min = diffs.iter().min().unwrap().clone();
            let rho = c[0].clone() + F::from_rational(min.clone());
            let mut offsets: Vec<(usize, usize)> = Vec::new();
            for d in diffs {
                let o = (d - &min).to_integer().try_into().unwrap_or(usize::MAX);
                match offsets.iter_mut().find(|x| x.0 == o) {
                    Some(x) => x.1 += 1,
                    None => offsets.push((o, 1)),
                }
            }
            offsets.sort();
            (rho, offsets)
        })
        .collect()
}

/// Solves one exponent class given `c[i][m]`, the coefficients of
/// `t^i P_i` (with `P_0 = 1`).
pub(crate) fn solve_class(
    c: &[Vec<F>],
    rho: &F,
    offsets: &[(usize, usize)],
    n_terms: usize,
) -> ClassSolution {
    let k = c.len() - 1;
    let size: usize = offsets.iter().map(|o| o.1).sum();
    let jmax = size - 1;
    let nparams = size;
    let ff: Vec<Poly<F>> = (0..=k).map(falling).collect();
    let fm: Vec<Poly<F>> = (0..n_terms)
        .map(|m| {
            (0..=k).fold(Poly::zero(), |acc, i| {
                let cim = c[i].get(m).cloned().unwrap_or_else(F::zero);
                if cim.is_zero() {
                    acc
                } else {
                    &acc + &ff[k - i].scale(&cim)
                }
            })
        })
        .collect();
    // taylor coefficients of F_m at rho + s, truncated to jmax + 1 terms
    let taylor = |m: usize, s: usize| -> Vec<F> {
        let pt = rho.clone() + F::from_int(s as i64);
        let sh = fm[m].taylor_shift(&pt);
        (0..=jmax + 1).map(|l| sh.coeff(l)).collect()
    };

    let zero_form = vec![F::zero(); nparams];
    let mut a: Vec<Vec<Vec<F>>> = Vec::with_capacity(n_terms);
    let mut constraints: Vec<Vec<F>> = Vec::new();
    let mut next_param = 0;
    for n in 0..n_terms {
        let mut rhs: Vec<Vec<F>> = vec![zero_form.clone(); jmax + 1];
        for m in 1..=n {
            if fm[m].is_zero() {
                continue;
            }
            let t = taylor(m, n - m);
            for (j, r) in rhs.iter_mut().enumerate() {
                for l in 0..=(jmax - j) {
                    if t[l].is_zero() {
                        continue;
                    }
                    for (p, x) in a[n - m][j + l].iter().enumerate() {
                        if !x.is_zero() {
                            r[p] = r[p].clone() - t[l].clone() * x.clone();
                        }
                    }
                }
            }
        }
        let t0 = taylor(0, n);
        let mult = offsets.iter().find(|o| o.0 == n).map_or(0, |o| o.1);
        let mut row: Vec<Vec<F>> = vec![zero_form.clone(); jmax + 1];
        for r in row.iter_mut().take(mult) {
            r[next_param] = F::one();
            next_param += 1;
        }
        let lead_inv = t0[mult].inv().expect("multiplicity of indicial root");
        if mult <= jmax {
            for j in (0..=(jmax - mult)).rev() {
                let mut v = rhs[j].clone();
                for l in (mult + 1)..=(jmax - j) {
                    if t0[l].is_zero() {
                        continue;
                    }
                    for (p, x) in row[j + l].iter().enumerate() {
                        if !x.is_zero() {
                            v[p] = v[p].clone() - t0[l].clone() * x.clone();
                        }
                    }
                }
                row[j + mult] = v.into_iter().map(|x| x * lead_inv.clone()).collect();
            }
        }
        for r in rhs.iter().skip(jmax + 1 - mult) {
            if r.iter().any(|x| !x.is_zero()) {
                constraints.push(r.clone());
            }
        }
        a.push(row);
    }

    let basis = nullspace(&constraints, nparams);
    // coordinates of each a[n][j] on the solution basis
    let on_basis = |n: usize, j: usize| -> Vec<F> { basis.iter().map(|b| dot(&a[n][j], b)).collect() };
    let dim = basis.len();
    let mut filtration = Vec::with_capacity(jmax + 1);
    let mut kernels: Vec<Vec<Vec<F>>> = Vec::with_capacity(jmax + 1);
    for l in 0..=jmax {
        let rows: Vec<Vec<F>> = (0..n_terms)
            .flat_map(|n| ((l + 1)..=jmax).map(move |j| (n, j)))
            .map(|(n, j)| on_basis(n, j))
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        let ker = nullspace(&rows, dim);
        filtration.push(ker.len());
        kernels.push(ker);
    }
    // adapted basis: extend the log-free part step by step
    let mut chosen: Vec<Vec<F>> = Vec::new();
    for ker in &kernels {
        for v in ker {
            let mut trial = chosen.clone();
            trial.push(v.clone());
            if rank(&trial) > chosen.len() {
                chosen.push(v.clone());
            }
        }
    }
    let coeffs = chosen
        .iter()
        .map(|w| {
            // parameter vector of this solution
            let params: Vec<F> = (0..nparams)
                .map(|p| {
                    basis
                        .iter()
                        .zip(w)
                        .fold(F::zero(), |acc, (b, x)| acc + b[p].clone() * x.clone())
                })
                .collect();
            (0..n_terms)
                .map(|n| (0..=jmax).map(|j| dot(&a[n][j], &params)).collect())
                .collect()
        })
        .collect();
    ClassSolution {
        rho: rho.clone(),
        offsets: offsets.to_vec(),
        coeffs,
        filtration,
    }
}

/// Solves all integer-difference classes among `exps` at a local point of
/// `lop` (already moved off infinity).
pub(crate) fn solve_classes(
    lop: &LinearODE,
    lpt: &AlgebraicPoint,
    exps: &[F],
    min_terms: usize,
) -> Result<Vec<ClassSolution>, OdeError> {
    let classes = exponent_classes(exps);
    let span = classes
        .iter()
        .flat_map(|(_, o)| o.iter().map(|x| x.0))
        .max()
        .unwrap_or(0);
    let n = min_terms.max(span + 2);
    let c = theta_coefficients(lop, lpt, n)?;
    Ok(classes
        .iter()
        .map(|(rho, offs)| solve_class(&c, rho, offs, n))
        .collect())
}

/// A full basis of formal solutions at `at`, each known through `n_terms`
/// coefficients.
pub fn frobenius_basis(
    l: &LinearODE,
    at: &AlgebraicPoint,
    n_terms: usize,
) -> Result<LogSolutionBasis, OdeError> {
    let exps = exponents(l, at)?;
    let mut exact = Vec::new();
    for e in &exps {
        match e {
            ExponentValue::Exact(x) => exact.push(x.clone()),
            ExponentValue::Quadratic { .. } => {
                return Err(OdeError::UnsupportedExponentField(at.to_string()))
            }
        }
    }
    let (lop, lpt) = local_operator(l, at)?;
    let classes = solve_classes(&lop, &lpt, &exact, n_terms.max(1))?;
    let mut solutions = Vec::new();
    for cl in &classes {
        for s in cl.to_log_solutions(n_terms.max(1)) {
            solutions.push(s);
        }
    }
    Ok(LogSolutionBasis {
        point: at.clone(),
        exponents: exps,
        solutions,
        n_terms,
    })
}
