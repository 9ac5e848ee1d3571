//! Dense linear algebra over an ordered field.
//!
//! Matrices are plain `Vec<Vec<T>>` in row-major order; the sizes in this
//! crate never exceed a few dozen rows.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Rank via fraction-free (Bareiss) elimination. Entries stay in `T` but
/// every division is exact when the input is integral.
pub fn rank<T: Scalar>(rows: &[Vec<T>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let mut prev = T::one();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_negligible()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in c + 1..cols {
                let mut t = m[r][c].clone() * &m[i][j];
                t -= m[i][c].clone() * &m[r][j];
                t /= &prev;
                m[i][j] = t;
            }
            m[i][c] = T::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce<T: Scalar>(m: &mut [Vec<T>]) -> Vec<usize> {
    let mut pivots = Vec::new();
    if m.is_empty() {
        return pivots;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_negligible()) else {
            continue;
        };
        m.swap(r, p);
        let inv = T::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = f.clone() * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right null space `{x : rows * x = 0}`.
pub fn nullspace<T: Scalar>(rows: &[Vec<T>], cols: usize) -> Vec<Vec<T>> {
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let pivots = row_reduce(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![T::zero(); cols];
            x[f] = T::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -m[r][f].clone();
            }
            x
        })
        .collect()
}

/// Solves the square system `a x = b`. Returns `None` when `a` is singular.
pub fn solve<T: Scalar>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = a.len();
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut m);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

pub fn inverse<T: Scalar>(a: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = a.len();
    let mut m: Vec<Vec<T>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    let pivots = row_reduce(&mut m);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant<T: Scalar>(a: &[Vec<T>]) -> T {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = T::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_negligible()) else {
            return T::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        for i in c + 1..n {
            let f = m[i][c].clone() / m[c][c].clone();
            for j in c..n {
                let t = f.clone() * &m[c][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Leading principal minors of a square matrix, smallest first.
pub fn leading_minors<T: Scalar>(a: &[Vec<T>]) -> Vec<T> {
    (1..=a.len())
        .map(|k| {
            let sub: Vec<Vec<T>> = a[..k].iter().map(|row| row[..k].to_vec()).collect();
            determinant(&sub)
        })
        .collect()
}

/// Symmetric decomposition `x^T G x = sum_i q_i (x_i + sum_{j>i} mu_ij x_j)^2`.
///
/// Fails with [`Error::NotPositiveDefinite`] as soon as a pivot is not
/// strictly positive.
#[derive(Debug, Clone)]
pub struct Ldl<T> {
    pub q: Vec<T>,
    /// `mu[i][j]`, meaningful for `j > i`.
    pub mu: Vec<Vec<T>>,
}

pub fn ldl<T: Scalar>(g: &[Vec<T>]) -> Result<Ldl<T>> {
    let n = g.len();
    let mut a = g.to_vec();
    let mut q = vec![T::zero(); n];
    let mut mu = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        if a[i][i].is_negligible() || a[i][i].is_negative() {
            return Err(Error::NotPositiveDefinite);
        }
        q[i] = a[i][i].clone();
        for j in i + 1..n {
            mu[i][j] = a[i][j].clone() / q[i].clone();
        }
        for j in i + 1..n {
            for k in j..n {
                let t = mu[i][j].clone() * &a[i][k];
                a[j][k] -= t;
                if k != j {
                    a[k][j] = a[j][k].clone();
                }
            }
        }
    }
    Ok(Ldl { q, mu })
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut s = T::zero();
    for (x, y) in a.iter().zip(b) {
        s += x.clone() * y;
    }
    s
}
