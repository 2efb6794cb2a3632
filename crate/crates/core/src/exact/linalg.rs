//! Gaussian elimination over an exact field.

use super::field::Field;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce<F: Field>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for j in c..cols {
            let v = m[r][j].clone() * inv.clone();
            m[r][j] = v;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..cols {
                let v = m[i][j].clone() - f.clone() * m[r][j].clone();
                m[i][j] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel `{v : M v = 0}` of a matrix with `cols` columns.
pub fn nullspace<F: Field>(rows: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let mut m: Vec<Vec<F>> = rows.to_vec();
    let pivots = row_reduce(&mut m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); cols];
        v[free] = F::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn rank<F: Field>(rows: &[Vec<F>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{int, Rational};

    #[test]
    fn kernel_of_rank_one() {
        let m: Vec<Vec<Rational>> = vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(6)]];
        let k = nullspace(&m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: Rational = m[0].iter().zip(v).map(|(a, b)| a * b).sum();
            assert_eq!(dot, int(0));
        }
        assert_eq!(rank(&m), 1);
    }
}
