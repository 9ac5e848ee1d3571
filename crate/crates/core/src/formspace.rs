//! Quadratic forms over `F` and their restriction of scalars to `Q`.
//!
//! An `n`-ary form over `F` is a symmetric matrix `A` with entries in `F`
//! and value `f(v) = Tr(sum_{i,j} a_ij v_i v_j)` on `v` in `O^n`. Both
//! orders `(i, j)` and `(j, i)` enter the sum, so the off-diagonal entry of
//! `alpha * A_n` is `alpha/2`.
//!
//! Lattice vectors of `O^n` are written as integer coordinate vectors of
//! length `n*m`: entry `i*m + k` is the coefficient of the basis element
//! `w_k` in the `i`-th component.

use crate::error::{Error, Result};
use crate::linalg;
use crate::qfield::{FieldElement, QuadraticField};
use crate::scalar::Scalar;

/// Integer coordinates of a vector of `O^n` in the basis `{1, w}`.
pub type LatticeVector = Vec<i64>;

/// Square matrix with entries in `F`, row-major.
pub type FMatrix<T> = Vec<Vec<FieldElement<T>>>;

/// The `O^n` vector `v` as a list of field elements.
pub fn lattice_elements<T: Scalar>(field: QuadraticField, v: &[i64]) -> Vec<FieldElement<T>> {
    let m = field.degree();
    v.chunks(m).map(|c| field.from_coords(c)).collect()
}

/// Inverse of [`lattice_elements`]; fails if some component is not in `O`.
pub fn lattice_coords<T: Scalar>(v: &[FieldElement<T>]) -> Result<LatticeVector> {
    let mut out = Vec::new();
    for x in v {
        out.extend(x.integral_coords().ok_or(Error::NotIntegral)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormOverF<T> {
    field: QuadraticField,
    n: usize,
    entries: Vec<FieldElement<T>>,
}

impl<T: Scalar> FormOverF<T> {
    pub fn new(field: QuadraticField, rows: FMatrix<T>) -> Result<Self> {
        let n = rows.len();
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(FormOverF {
            field,
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zero(field: QuadraticField, n: usize) -> Self {
        FormOverF {
            field,
            n,
            entries: vec![field.zero(); n * n],
        }
    }

    pub fn field(&self) -> QuadraticField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &FieldElement<T> {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> FMatrix<T> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Builds a form from its coordinates in [`SymBasis`] order.
    pub fn from_sym_coords(field: QuadraticField, n: usize, coords: &[T]) -> Result<Self> {
        let basis = SymBasis::new(field, n);
        if coords.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                got: coords.len(),
            });
        }
        let m = field.degree();
        let mut form = FormOverF::zero(field, n);
        for (p, (i, j)) in basis.pairs().into_iter().enumerate() {
            let c = &coords[p * m..(p + 1) * m];
            let x = if m == 1 {
                field.element(c[0].clone(), T::zero())
            } else {
                field.element(c[0].clone(), c[1].clone())
            };
            form.entries[i * n + j] = x.clone();
            form.entries[j * n + i] = x;
        }
        Ok(form)
    }

    /// Coordinates in [`SymBasis`] order.
    pub fn sym_coords(&self) -> Vec<T> {
        let basis = SymBasis::new(self.field, self.n);
        let m = self.field.degree();
        let mut out = Vec::with_capacity(basis.dim());
        for (i, j) in basis.pairs() {
            let x = self.entry(i, j);
            out.push(x.a().clone());
            if m == 2 {
                out.push(x.b().clone());
            }
        }
        out
    }

    /// `v^T A w` as an element of `F`.
    pub fn bilinear_in_field(&self, v: &[FieldElement<T>], w: &[FieldElement<T>]) -> FieldElement<T> {
        let mut s = self.field.zero();
        for i in 0..self.n {
            let mut row = self.field.zero();
            for j in 0..self.n {
                row = &row + &(self.entry(i, j) * &w[j]);
            }
            s = &s + &(&v[i] * &row);
        }
        s
    }

    /// `v^T A v` in `F`; its trace is `f(v)`.
    pub fn value_in_field(&self, v: &[i64]) -> FieldElement<T> {
        let e = lattice_elements(self.field, v);
        self.bilinear_in_field(&e, &e)
    }

    /// `f(v)` for integral coordinates `v`.
    pub fn evaluate(&self, v: &[i64]) -> T {
        self.value_in_field(v).trace()
    }

    /// `f(v)` for `v` given as field elements; they must lie in `O`.
    pub fn evaluate_elements(&self, v: &[FieldElement<T>]) -> Result<T> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        if v.iter().any(|x| !x.is_integral()) {
            return Err(Error::NotIntegral);
        }
        Ok(self.bilinear_in_field(v, v).trace())
    }

    /// The symmetric bilinear form `Tr(v^T A w)` attached to `f`.
    pub fn bilinear(&self, v: &[i64], w: &[i64]) -> T {
        let ve = lattice_elements(self.field, v);
        let we = lattice_elements(self.field, w);
        self.bilinear_in_field(&ve, &we).trace()
    }

    /// The `nm x nm` rational Gram matrix of `f` on `Z^{nm}`.
    pub fn restriction_of_scalars(&self) -> Gram<T> {
        let m = self.field.degree();
        let basis: Vec<FieldElement<T>> = self.field.basis();
        let size = self.n * m;
        let mut g = vec![T::zero(); size * size];
        for i in 0..self.n {
            for j in 0..self.n {
                let a = self.entry(i, j);
                for k in 0..m {
                    let ak = a * &basis[k];
                    for l in 0..m {
                        g[(i * m + k) * size + j * m + l] = (&ak * &basis[l]).trace();
                    }
                }
            }
        }
        Gram { n: size, entries: g }
    }

    /// Leading principal minors over `F`, decided by exact embedding signs.
    pub fn is_positive_definite(&self) -> bool {
        let rows = self.rows();
        (1..=self.n).all(|k| {
            let sub: FMatrix<T> = rows[..k].iter().map(|r| r[..k].to_vec()).collect();
            f_determinant(&sub).is_totally_positive()
        })
    }

    /// The same decision through the restriction of scalars.
    pub fn is_positive_definite_rational(&self) -> bool {
        self.restriction_of_scalars().is_positive_definite()
    }

    pub fn determinant(&self) -> FieldElement<T> {
        f_determinant(&self.rows())
    }

    pub fn scale(&self, s: &T) -> Self {
        FormOverF {
            field: self.field,
            n: self.n,
            entries: self.entries.iter().map(|x| x.scale(s)).collect(),
        }
    }

    /// `self + t * other`.
    pub fn add_scaled(&self, other: &Self, t: &T) -> Self {
        assert_eq!(self.n, other.n);
        FormOverF {
            field: self.field,
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(x, y)| x + &y.scale(t))
                .collect(),
        }
    }

    /// The form `v -> f(U v)`, i.e. the matrix `U^T A U`.
    pub fn transform(&self, u: &FMatrix<T>) -> Self {
        let a = self.rows();
        let ut = f_transpose(u);
        let m = f_mul(&f_mul(&ut, &a), u);
        FormOverF {
            field: self.field,
            n: self.n,
            entries: m.into_iter().flatten().collect(),
        }
    }

    /// Entry-wise Galois conjugate.
    pub fn conjugate(&self) -> Self {
        FormOverF {
            field: self.field,
            n: self.n,
            entries: self.entries.iter().map(|x| x.conjugate()).collect(),
        }
    }
}

/// The scaled trace form `x -> Tr(alpha x^2)` on `O`, as a unary form.
pub fn scaled_trace_form<T: Scalar>(alpha: &FieldElement<T>) -> FormOverF<T> {
    FormOverF {
        field: alpha.field(),
        n: 1,
        entries: vec![alpha.clone()],
    }
}

/// `x -> Tr(alpha A_n(x))` with `A_n(x) = sum_{i <= j} x_i x_j`: diagonal
/// entries `alpha`, off-diagonal entries `alpha/2`.
pub fn tensor_with_an<T: Scalar>(alpha: &FieldElement<T>, n: usize) -> FormOverF<T> {
    let half = alpha.scale(&T::from_frac(1, 2));
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(if i == j { alpha.clone() } else { half.clone() });
        }
    }
    FormOverF {
        field: alpha.field(),
        n,
        entries,
    }
}

/// Symmetric rational matrix of a form on `Z^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gram<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Scalar> Gram<T> {
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rows.iter().map(|r| r.len()).find(|&l| l != n).unwrap_or(n),
            });
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(Gram {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Gram::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| T::from_int(x)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![T::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = T::one();
        }
        Gram { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn value(&self, v: &[i64]) -> T {
        self.bilinear(v, v)
    }

    pub fn bilinear(&self, v: &[i64], w: &[i64]) -> T {
        let mut s = T::zero();
        for i in 0..self.n {
            if v[i] == 0 {
                continue;
            }
            let mut row = T::zero();
            for j in 0..self.n {
                if w[j] != 0 {
                    row += self.get(i, j).clone() * T::from_int(w[j]);
                }
            }
            s += row * T::from_int(v[i]);
        }
        s
    }

    /// Sylvester's criterion on the leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        linalg::ldl(&self.rows()).is_ok()
    }

    pub fn leading_minors(&self) -> Vec<T> {
        linalg::leading_minors(&self.rows())
    }

    pub fn scale(&self, s: &T) -> Self {
        Gram {
            n: self.n,
            entries: self.entries.iter().map(|x| x.clone() * s).collect(),
        }
    }

    /// Kronecker product `self (x) other`, with `self` as the outer index.
    pub fn kron(&self, other: &Gram<T>) -> Gram<T> {
        let n = self.n * other.n;
        let mut entries = vec![T::zero(); n * n];
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..other.n {
                    for l in 0..other.n {
                        entries[(i * other.n + k) * n + j * other.n + l] = self.get(i, j).clone() * other.get(k, l);
                    }
                }
            }
        }
        Gram { n, entries }
    }

    /// `B G B^T` for the integer matrix `B` whose rows are new basis vectors.
    pub fn change_basis(&self, basis: &[Vec<i64>]) -> Gram<T> {
        let k = basis.len();
        let mut entries = vec![T::zero(); k * k];
        for i in 0..k {
            for j in i..k {
                let x = self.bilinear(&basis[i], &basis[j]);
                entries[j * k + i] = x.clone();
                entries[i * k + j] = x;
            }
        }
        Gram { n: k, entries }
    }
}

/// Ordered basis of the `m n(n+1)/2`-dimensional rational space of
/// symmetric `n x n` matrices over `F`.
///
/// Index pairs `(i, j)` with `i <= j` come in row-major order; within each
/// pair the coordinates are those of the entry in `{1, w}`. For `n = 2` and
/// a quadratic field this is `(E11, wE11, S12, wS12, E22, wE22)` where
/// `S12` has ones in both off-diagonal positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymBasis {
    field: QuadraticField,
    n: usize,
}

impl SymBasis {
    pub fn new(field: QuadraticField, n: usize) -> Self {
        SymBasis { field, n }
    }

    pub fn dim(&self) -> usize {
        self.field.degree() * self.n * (self.n + 1) / 2
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i..self.n {
                out.push((i, j));
            }
        }
        out
    }

    pub fn labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, j) in self.pairs() {
            let base = if i == j {
                format!("E{}{}", i + 1, j + 1)
            } else {
                format!("S{}{}", i + 1, j + 1)
            };
            out.push(base.clone());
            if self.field.degree() == 2 {
                out.push(format!("w{base}"));
            }
        }
        out
    }

    /// Coordinates `c(v)` of the functional `X -> Tr(v^T X v)`, so that
    /// `f(v) = c(v) . sym_coords(f)`.
    pub fn evaluation_vector<T: Scalar>(&self, v: &[i64]) -> Result<Vec<T>> {
        let m = self.field.degree();
        if v.len() != self.n * m {
            return Err(Error::DimensionMismatch {
                expected: self.n * m,
                got: v.len(),
            });
        }
        if v.iter().all(|&x| x == 0) {
            return Err(Error::ZeroVector);
        }
        let e: Vec<FieldElement<T>> = lattice_elements(self.field, v);
        let basis: Vec<FieldElement<T>> = self.field.basis();
        let mut out = Vec::with_capacity(self.dim());
        for (i, j) in self.pairs() {
            let prod = &e[i] * &e[j];
            let mult = T::from_int(if i == j { 1 } else { 2 });
            for b in &basis {
                out.push((&prod * b).trace() * &mult);
            }
        }
        Ok(out)
    }
}

pub fn f_transpose<T: Scalar>(a: &FMatrix<T>) -> FMatrix<T> {
    let n = a.len();
    let c = if n == 0 { 0 } else { a[0].len() };
    (0..c).map(|j| (0..n).map(|i| a[i][j].clone()).collect()).collect()
}

pub fn f_mul<T: Scalar>(a: &FMatrix<T>, b: &FMatrix<T>) -> FMatrix<T> {
    let field = a[0][0].field();
    let inner = b.len();
    let cols = b[0].len();
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = field.zero();
                    for k in 0..inner {
                        s = &s + &(&row[k] * &b[k][j]);
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn f_mul_vec<T: Scalar>(a: &FMatrix<T>, v: &[FieldElement<T>]) -> Vec<FieldElement<T>> {
    let field = v[0].field();
    a.iter()
        .map(|row| {
            let mut s = field.zero();
            for (x, y) in row.iter().zip(v) {
                s = &s + &(x * y);
            }
            s
        })
        .collect()
}

pub fn f_identity<T: Scalar>(field: QuadraticField, n: usize) -> FMatrix<T> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { field.one() } else { field.zero() })
                .collect()
        })
        .collect()
}

pub fn f_determinant<T: Scalar>(a: &FMatrix<T>) -> FieldElement<T> {
    let n = a.len();
    if n == 0 {
        panic!("determinant of an empty matrix");
    }
    let field = a[0][0].field();
    match n {
        1 => a[0][0].clone(),
        2 => &(&a[0][0] * &a[1][1]) - &(&a[0][1] * &a[1][0]),
        _ => {
            let mut m = a.clone();
            let mut det = field.one();
            for c in 0..n {
                let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
                    return field.zero();
                };
                if p != c {
                    m.swap(p, c);
                    det = -det;
                }
                det = &det * &m[c][c];
                let inv = m[c][c].inverse().expect("nonzero pivot");
                for i in c + 1..n {
                    let f = &m[i][c] * &inv;
                    for j in c..n {
                        m[i][j] = &m[i][j] - &(&f * &m[c][j]);
                    }
                }
            }
            det
        }
    }
}

/// Inverse over `F`, `None` if singular.
pub fn f_inverse<T: Scalar>(a: &FMatrix<T>) -> Option<FMatrix<T>> {
    let n = a.len();
    let field = a[0][0].field();
    let mut m: FMatrix<T> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(p, c);
        let inv = m[c][c].inverse().ok()?;
        for x in m[c].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..2 * n {
                    m[i][j] = &m[i][j] - &(&f * &m[c][j]);
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}
