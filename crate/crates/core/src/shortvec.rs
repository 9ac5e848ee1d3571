//! Minimum and minimal vectors of a positive definite Gram matrix.
//!
//! The search runs on an LLL-reduced basis (integral change of basis, so
//! the result is unaffected) and then enumerates with Fincke-Pohst over the
//! symmetric decomposition of the reduced matrix. Interval endpoints are
//! guessed in floating point and then moved until the exact test holds, so
//! every accept/reject decision is made in `T`.

use crate::error::{Error, Result};
use crate::formspace::{lattice_elements, Gram, LatticeVector};
use crate::linalg;
use crate::qfield::{FieldElement, QuadraticField};
use crate::scalar::Scalar;

/// `m(f)` together with `M(f)` modulo `+-1`.
///
/// Each vector is stored with its first nonzero coordinate positive; the
/// list is sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalData<T> {
    pub minimum: T,
    pub vectors: Vec<LatticeVector>,
}

impl<T: Scalar> MinimalData<T> {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// The minimal vectors as elements of `O^n`.
    pub fn field_vectors(&self, field: QuadraticField) -> Vec<Vec<FieldElement<T>>> {
        self.vectors.iter().map(|v| lattice_elements(field, v)).collect()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let c = canonical_sign(v.to_vec());
        self.vectors.binary_search(&c).is_ok()
    }
}

/// Flips `v` so that its first nonzero coordinate is positive.
pub fn canonical_sign(mut v: LatticeVector) -> LatticeVector {
    if let Some(&x) = v.iter().find(|&&x| x != 0) {
        if x < 0 {
            for c in v.iter_mut() {
                *c = -*c;
            }
        }
    }
    v
}

/// LLL-reduces `g` (parameter 3/4). Returns the reduced Gram matrix and the
/// integer basis vectors (rows) it is expressed in.
pub fn lll_reduce<T: Scalar>(g: &Gram<T>) -> Result<(Gram<T>, Vec<Vec<i64>>)> {
    let n = g.dim();
    let mut gram = g.rows();
    let mut basis: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if n <= 1 {
        return Ok((g.clone(), basis));
    }
    let delta = T::from_frac(3, 4);
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 100_000 {
            return Err(Error::Domain("lattice reduction did not converge".into()));
        }
        let (mu, bn) = gso(&gram)?;
        let r = mu[k][k - 1].round_i64();
        if r != 0 {
            sub_multiple(&mut gram, &mut basis, k, k - 1, r);
            continue;
        }
        let m = mu[k][k - 1].clone();
        let lhs = bn[k].clone();
        let rhs = (delta.clone() - m.clone() * &m) * &bn[k - 1];
        if lhs < rhs {
            gram.swap(k, k - 1);
            for row in gram.iter_mut() {
                row.swap(k, k - 1);
            }
            basis.swap(k, k - 1);
            k = (k - 1).max(1);
        } else {
            for j in (0..k - 1).rev() {
                let (mu, _) = gso(&gram)?;
                let r = mu[k][j].round_i64();
                if r != 0 {
                    sub_multiple(&mut gram, &mut basis, k, j, r);
                }
            }
            k += 1;
        }
    }
    Ok((Gram::new(gram)?, basis))
}

/// Gram-Schmidt coefficients and squared lengths from a Gram matrix.
fn gso<T: Scalar>(g: &[Vec<T>]) -> Result<(Vec<Vec<T>>, Vec<T>)> {
    let n = g.len();
    let mut mu = vec![vec![T::zero(); n]; n];
    let mut r = vec![vec![T::zero(); n]; n];
    let mut bn = vec![T::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut x = g[i][j].clone();
            for k in 0..j {
                x -= mu[j][k].clone() * &r[i][k];
            }
            r[i][j] = x.clone();
            mu[i][j] = x / bn[j].clone();
        }
        let mut b = g[i][i].clone();
        for k in 0..i {
            b -= mu[i][k].clone() * &r[i][k];
        }
        if b.is_negligible() || b.is_negative() {
            return Err(Error::NotPositiveDefinite);
        }
        bn[i] = b;
    }
    Ok((mu, bn))
}

/// `b_k <- b_k - r b_j`, updating the Gram matrix in place.
fn sub_multiple<T: Scalar>(g: &mut [Vec<T>], basis: &mut [Vec<i64>], k: usize, j: usize, r: i64) {
    let rt = T::from_int(r);
    let mut gkk = g[k][k].clone();
    gkk -= rt.clone() * &g[k][j] * T::from_int(2);
    gkk += rt.clone() * &rt * &g[j][j];
    for l in 0..g.len() {
        if l != k {
            let t = rt.clone() * &g[j][l];
            g[k][l] -= t;
            g[l][k] = g[k][l].clone();
        }
    }
    g[k][k] = gkk;
    let bj = basis[j].clone();
    for (x, y) in basis[k].iter_mut().zip(bj) {
        *x -= r * y;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Values `<= bound`, bound lowered to the best value found.
    Minimum,
    AtMost,
    Below,
}

struct Enumerator<'a, T> {
    q: &'a [T],
    mu: &'a [Vec<T>],
    mode: Mode,
    bound: T,
    x: Vec<i64>,
    found: Vec<(Vec<i64>, T)>,
}

impl<T: Scalar> Enumerator<'_, T> {
    fn accepts(&self, val: &T) -> bool {
        match self.mode {
            Mode::Below => *val < self.bound,
            _ => *val <= self.bound,
        }
    }

    fn search(&mut self, i: usize, partial: T, zero_above: bool) {
        let n = self.q.len();
        let mut c = T::zero();
        for j in i + 1..n {
            if self.x[j] != 0 {
                c += self.mu[i][j].clone() * T::from_int(self.x[j]);
            }
        }
        let remaining = self.bound.clone() - &partial;
        if remaining.is_negative() {
            return;
        }
        let qi = self.q[i].clone();
        let fits = |x: i64| {
            let t = T::from_int(x) + &c;
            qi.clone() * &t * &t <= remaining
        };
        let center = -c.approx();
        let radius = (remaining.approx() / qi.approx()).max(0.0).sqrt();
        let mut lo = (center - radius).floor() as i64;
        let mut hi = (center + radius).ceil() as i64;
        if !(lo <= hi) || !center.is_finite() || !radius.is_finite() {
            lo = -c.round_i64();
            hi = lo;
        }
        while fits(lo - 1) {
            lo -= 1;
        }
        while fits(hi + 1) {
            hi += 1;
        }
        if zero_above {
            lo = lo.max(if i == 0 { 1 } else { 0 });
        }
        for xi in lo..=hi {
            let t = T::from_int(xi) + &c;
            let val = partial.clone() + qi.clone() * &t * &t;
            if !self.accepts(&val) {
                continue;
            }
            self.x[i] = xi;
            if i == 0 {
                if self.mode == Mode::Minimum && val < self.bound {
                    self.bound = val.clone();
                    self.found.clear();
                }
                self.found.push((self.x.clone(), val));
            } else {
                self.search(i - 1, val, zero_above && xi == 0);
            }
        }
        self.x[i] = 0;
    }
}

fn enumerate<T: Scalar>(g: &Gram<T>, bound: T, mode: Mode) -> Result<Vec<(LatticeVector, T)>> {
    let n = g.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let (reduced, basis) = lll_reduce(g)?;
    let ldl = linalg::ldl(&reduced.rows())?;
    let mut e = Enumerator {
        q: &ldl.q,
        mu: &ldl.mu,
        mode,
        bound,
        x: vec![0; n],
        found: Vec::new(),
    };
    e.search(n - 1, T::zero(), true);
    let mut out: Vec<(LatticeVector, T)> = e
        .found
        .into_iter()
        .map(|(x, val)| {
            let mut v = vec![0i64; n];
            for (xi, b) in x.iter().zip(&basis) {
                if *xi != 0 {
                    for (vj, bj) in v.iter_mut().zip(b) {
                        *vj += xi * bj;
                    }
                }
            }
            (canonical_sign(v), val)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// All nonzero `v` (modulo sign) with `g(v) <= bound`, sorted.
pub fn short_vectors<T: Scalar>(g: &Gram<T>, bound: &T) -> Result<Vec<(LatticeVector, T)>> {
    enumerate(g, bound.clone(), Mode::AtMost)
}

/// All nonzero `v` (modulo sign) with `g(v) < bound`, sorted.
pub fn vectors_below<T: Scalar>(g: &Gram<T>, bound: &T) -> Result<Vec<(LatticeVector, T)>> {
    enumerate(g, bound.clone(), Mode::Below)
}

/// Exact minimum and minimal vectors of a positive definite Gram matrix.
pub fn minimal_vectors<T: Scalar>(g: &Gram<T>) -> Result<MinimalData<T>> {
    let n = g.dim();
    if n == 0 {
        return Err(Error::Domain("empty Gram matrix".into()));
    }
    linalg::ldl(&g.rows())?;
    let start = (0..n)
        .map(|i| g.get(i, i).clone())
        .reduce(|a, b| if b < a { b } else { a })
        .expect("nonempty");
    let found = enumerate(g, start, Mode::Minimum)?;
    let minimum = found
        .iter()
        .map(|(_, v)| v.clone())
        .reduce(|a, b| if b < a { b } else { a })
        .ok_or_else(|| Error::Domain("no vector found below the initial bound".into()))?;
    Ok(MinimalData {
        vectors: found
            .into_iter()
            .filter(|(_, v)| *v == minimum)
            .map(|(x, _)| x)
            .collect(),
        minimum,
    })
}

/// Exhaustive search over the box `[-size, size]^k`.
pub fn brute_force_minimal_vectors<T: Scalar>(g: &Gram<T>, size: i64) -> Result<MinimalData<T>> {
    let n = g.dim();
    if !g.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let mut best: Option<T> = None;
    let mut vectors = Vec::new();
    let mut x = vec![-size; n];
    loop {
        if x.iter().any(|&c| c != 0) && canonical_sign(x.clone()) == x {
            let val = g.value(&x);
            match &best {
                Some(b) if val > *b => {}
                Some(b) if val == *b => vectors.push(x.clone()),
                _ => {
                    best = Some(val);
                    vectors.clear();
                    vectors.push(x.clone());
                }
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                vectors.sort();
                return best
                    .map(|minimum| MinimalData { minimum, vectors })
                    .ok_or_else(|| Error::Domain("empty search box".into()));
            }
            if x[i] < size {
                x[i] += 1;
                break;
            }
            x[i] = -size;
            i += 1;
        }
    }
}

/// Brute force with a box grown until it provably contains every vector of
/// value at most the reported minimum: `x_i^2 <= m (G^-1)_ii` on the
/// ellipsoid `g(x) <= m`.
pub fn certified_brute_force<T: Scalar>(g: &Gram<T>) -> Result<MinimalData<T>> {
    let inv = linalg::inverse(&g.rows()).ok_or(Error::NotPositiveDefinite)?;
    let mut size = 1i64;
    loop {
        let md = brute_force_minimal_vectors(g, size)?;
        let needed = (0..g.dim())
            .map(|i| isqrt_floor(&(md.minimum.clone() * &inv[i][i])))
            .max()
            .unwrap_or(0);
        if needed <= size {
            return Ok(md);
        }
        size = needed;
    }
}

/// Largest integer `b >= 0` with `b^2 <= x`.
fn isqrt_floor<T: Scalar>(x: &T) -> i64 {
    if !x.is_positive() {
        return 0;
    }
    let mut b = x.approx().sqrt().floor() as i64;
    while T::from_int(b * b) > *x {
        b -= 1;
    }
    while T::from_int((b + 1) * (b + 1)) <= *x {
        b += 1;
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_frac(n, d)
    }

    fn a2() -> Gram<Q> {
        Gram::new(vec![vec![q(1, 1), q(1, 2)], vec![q(1, 2), q(1, 1)]]).unwrap()
    }

    #[test]
    fn a2_minimal_vectors() {
        let md = minimal_vectors(&a2()).unwrap();
        assert_eq!(md.minimum, q(1, 1));
        assert_eq!(md.vectors, vec![vec![0, 1], vec![1, -1], vec![1, 0]]);
        assert_eq!(brute_force_minimal_vectors(&a2(), 3).unwrap(), md);
    }

    #[test]
    fn identity_minimal_vectors() {
        let md = minimal_vectors(&Gram::<Q>::identity(2)).unwrap();
        assert_eq!(md.minimum, q(1, 1));
        assert_eq!(md.vectors, vec![vec![0, 1], vec![1, 0]]);
        let bf = brute_force_minimal_vectors(&Gram::<Q>::identity(4), 2).unwrap();
        assert_eq!(bf.len(), 4);
    }

    #[test]
    fn sqrt2_trace_form() {
        let g = Gram::<Q>::from_ints(&[&[1, -1], &[-1, 2]]).unwrap();
        let md = minimal_vectors(&g).unwrap();
        assert_eq!(md.minimum, q(1, 1));
        assert_eq!(md.vectors, vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(brute_force_minimal_vectors(&g, 5).unwrap(), md);
    }

    #[test]
    fn rejects_indefinite() {
        let g = Gram::<Q>::from_ints(&[&[1, 2], &[2, 1]]).unwrap();
        assert_eq!(minimal_vectors(&g).unwrap_err(), Error::NotPositiveDefinite);
        assert_eq!(
            brute_force_minimal_vectors(&g, 2).unwrap_err(),
            Error::NotPositiveDefinite
        );
    }

    #[test]
    fn skewed_basis_is_reduced() {
        // A_2 in the basis (1,0), (7,1): same lattice, long second vector.
        let g = a2().change_basis(&[vec![1, 0], vec![7, 1]]);
        let md = minimal_vectors(&g).unwrap();
        assert_eq!(md.minimum, q(1, 1));
        assert_eq!(md.len(), 3);
        let (r, basis) = lll_reduce(&g).unwrap();
        assert_eq!(r.change_basis(&[vec![1, 0], vec![0, 1]]), r);
        assert!(basis.iter().all(|b| b.iter().all(|x| x.abs() <= 8)));
        assert!(*r.get(1, 1) <= q(1, 1));
    }

    #[test]
    fn short_vectors_by_bound() {
        let all = short_vectors(&a2(), &q(3, 1)).unwrap();
        // values 1 (three pairs) and 3 (three pairs)
        assert_eq!(all.len(), 6);
        let below = vectors_below(&a2(), &q(3, 1)).unwrap();
        assert_eq!(below.len(), 3);
        assert!(vectors_below(&a2(), &q(1, 1)).unwrap().is_empty());
    }

    #[test]
    fn floats_run_through_the_same_code() {
        let g = Gram::new(vec![vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let md = minimal_vectors(&g).unwrap();
        assert_eq!(md.len(), 3);
    }

    #[test]
    fn certified_box_growth() {
        let g = Gram::<Q>::from_ints(&[&[50, 49], &[49, 50]]).unwrap();
        let md = certified_brute_force(&g).unwrap();
        assert_eq!(md, minimal_vectors(&g).unwrap());
        assert_eq!(md.minimum, q(2, 1));
        assert_eq!(md.vectors, vec![vec![1, -1]]);
    }

    #[test]
    fn isqrt() {
        assert_eq!(isqrt_floor(&q(17, 1)), 4);
        assert_eq!(isqrt_floor(&q(16, 1)), 4);
        assert_eq!(isqrt_floor(&q(15, 4)), 1);
        assert_eq!(isqrt_floor(&q(0, 1)), 0);
    }
}
