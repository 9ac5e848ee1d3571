//! Exact arithmetic in a real quadratic field `Q(sqrt d)` and its ring of
//! integers `O = Z[w]`.
//!
//! Elements are stored as `a + b*w` in the integral basis `{1, w}` where
//! `w = (1 + sqrt d)/2` for `d = 1 (mod 4)` and `w = sqrt d` otherwise, so
//! that `O` is exactly the set of elements with integral coordinates.
//! Signs of the two real embeddings are decided exactly; no floating
//! point value ever enters a predicate.
//!
//! The degenerate field `Q` (degree 1, basis `{1}`) is available through
//! [`QuadraticField::rational`] so the whole pipeline can run in the
//! classical setting.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OmegaKind {
    /// `F = Q`, degree one.
    Rational,
    /// `w = sqrt d`, used when `d = 2, 3 (mod 4)`.
    Sqrt,
    /// `w = (1 + sqrt d)/2`, used when `d = 1 (mod 4)`.
    HalfInteger,
}

/// Descriptor of `F = Q(sqrt d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticField {
    d: i64,
    kind: OmegaKind,
}

pub fn is_squarefree(n: i64) -> bool {
    if n < 1 {
        return false;
    }
    let mut k = 2i64;
    while k * k <= n {
        if n % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl QuadraticField {
    pub fn new(d: i64) -> Result<Self> {
        if d < 2 || !is_squarefree(d) {
            return Err(Error::InvalidField(format!(
                "d = {d} must be a square-free integer >= 2"
            )));
        }
        let kind = if d % 4 == 1 {
            OmegaKind::HalfInteger
        } else {
            OmegaKind::Sqrt
        };
        Ok(QuadraticField { d, kind })
    }

    pub fn rational() -> Self {
        QuadraticField {
            d: 1,
            kind: OmegaKind::Rational,
        }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn kind(&self) -> OmegaKind {
        self.kind
    }

    pub fn is_rational(&self) -> bool {
        self.kind == OmegaKind::Rational
    }

    /// Field discriminant: `d` if `d = 1 (mod 4)`, else `4d`. `Q` reports 1.
    pub fn discriminant(&self) -> i64 {
        match self.kind {
            OmegaKind::Rational => 1,
            OmegaKind::Sqrt => 4 * self.d,
            OmegaKind::HalfInteger => self.d,
        }
    }

    /// Degree `m` of `F` over `Q`.
    pub fn degree(&self) -> usize {
        if self.is_rational() {
            1
        } else {
            2
        }
    }

    /// `Tr(w)`.
    pub fn omega_trace(&self) -> i64 {
        match self.kind {
            OmegaKind::HalfInteger => 1,
            _ => 0,
        }
    }

    /// The constant `c` in `w^2 = Tr(w) w + c`.
    pub fn omega_square_constant(&self) -> i64 {
        match self.kind {
            OmegaKind::Rational => 0,
            OmegaKind::Sqrt => self.d,
            OmegaKind::HalfInteger => (self.d - 1) / 4,
        }
    }

    pub fn element<T: Scalar>(&self, a: T, b: T) -> FieldElement<T> {
        debug_assert!(!self.is_rational() || b.is_zero());
        FieldElement { field: *self, a, b }
    }

    pub fn int<T: Scalar>(&self, n: i64) -> FieldElement<T> {
        self.element(T::from_int(n), T::zero())
    }

    pub fn from_scalar<T: Scalar>(&self, a: T) -> FieldElement<T> {
        self.element(a, T::zero())
    }

    pub fn zero<T: Scalar>(&self) -> FieldElement<T> {
        self.int(0)
    }

    pub fn one<T: Scalar>(&self) -> FieldElement<T> {
        self.int(1)
    }

    pub fn omega<T: Scalar>(&self) -> FieldElement<T> {
        assert!(!self.is_rational(), "Q has no element w");
        self.element(T::zero(), T::one())
    }

    /// The integral basis `[1]` or `[1, w]`.
    pub fn basis<T: Scalar>(&self) -> Vec<FieldElement<T>> {
        if self.is_rational() {
            vec![self.one()]
        } else {
            vec![self.one(), self.omega()]
        }
    }

    /// The ring element with integral coordinates `coords` in the basis.
    pub fn from_coords<T: Scalar>(&self, coords: &[i64]) -> FieldElement<T> {
        debug_assert_eq!(coords.len(), self.degree());
        let b = if self.is_rational() { 0 } else { coords[1] };
        self.element(T::from_int(coords[0]), T::from_int(b))
    }

    /// The element `p + q sqrt d`.
    pub fn from_sqrt_coords<T: Scalar>(&self, p: T, q: T) -> FieldElement<T> {
        match self.kind {
            OmegaKind::Rational => {
                assert!(q.is_zero(), "Q has no sqrt d component");
                self.element(p, T::zero())
            }
            OmegaKind::Sqrt => self.element(p, q),
            // p + q sqrt d = p + q (2w - 1)
            OmegaKind::HalfInteger => {
                let b = q.clone() + &q;
                self.element(p - q, b)
            }
        }
    }
}

impl fmt::Display for QuadraticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "Q")
        } else {
            write!(f, "Q(sqrt {})", self.d)
        }
    }
}

/// `a + b w` with exact coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement<T> {
    field: QuadraticField,
    a: T,
    b: T,
}

impl<T: Scalar> FieldElement<T> {
    pub fn field(&self) -> QuadraticField {
        self.field
    }

    pub fn a(&self) -> &T {
        &self.a
    }

    pub fn b(&self) -> &T {
        &self.b
    }

    pub fn coords(&self) -> [T; 2] {
        [self.a.clone(), self.b.clone()]
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// Integral coordinates, when the element lies in `O` and fits `i64`.
    pub fn integral_coords(&self) -> Option<Vec<i64>> {
        if !self.is_integral() {
            return None;
        }
        let a = self.a.to_i64()?;
        if self.field.is_rational() {
            Some(vec![a])
        } else {
            Some(vec![a, self.b.to_i64()?])
        }
    }

    /// Galois conjugate; swaps the two real embeddings.
    pub fn conjugate(&self) -> Self {
        if self.field.is_rational() {
            return self.clone();
        }
        let t = T::from_int(self.field.omega_trace());
        FieldElement {
            field: self.field,
            a: self.a.clone() + t * &self.b,
            b: -self.b.clone(),
        }
    }

    pub fn trace(&self) -> T {
        if self.field.is_rational() {
            return self.a.clone();
        }
        let t = T::from_int(self.field.omega_trace());
        self.a.clone() + &self.a + t * &self.b
    }

    pub fn norm(&self) -> T {
        if self.field.is_rational() {
            return self.a.clone();
        }
        let t = T::from_int(self.field.omega_trace());
        let c = T::from_int(self.field.omega_square_constant());
        let mut n = self.a.clone() * &self.a;
        n += t * &self.a * &self.b;
        n -= c * &self.b * &self.b;
        n
    }

    /// Integral with norm `+-1`.
    pub fn is_unit(&self) -> bool {
        if !self.is_integral() {
            return false;
        }
        let n = self.norm();
        n == T::one() || n == -T::one()
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conjugate();
        Ok(FieldElement {
            field: self.field,
            a: c.a / n.clone(),
            b: c.b / n,
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn scale(&self, s: &T) -> Self {
        FieldElement {
            field: self.field,
            a: self.a.clone() * s,
            b: self.b.clone() * s,
        }
    }

    /// `(p, q)` with `self = p + q sqrt d`.
    pub fn sqrt_coords(&self) -> (T, T) {
        match self.field.kind {
            OmegaKind::HalfInteger => {
                let half = T::from_frac(1, 2);
                let q = self.b.clone() * &half;
                (self.a.clone() + &q, q)
            }
            _ => (self.a.clone(), self.b.clone()),
        }
    }

    /// Exact signs of the images under the embeddings `sqrt d -> +sqrt d`
    /// and `sqrt d -> -sqrt d`. For `Q` both entries are the same sign.
    pub fn embedding_signs(&self) -> [Ordering; 2] {
        let (p, q) = self.sqrt_coords();
        if self.field.is_rational() {
            let s = sign(&p);
            return [s, s];
        }
        let d = T::from_int(self.field.d);
        [sign_of_sum(&p, &q, &d), sign_of_sum(&p, &(-q.clone()), &d)]
    }

    pub fn is_totally_positive(&self) -> bool {
        self.embedding_signs().iter().all(|s| *s == Ordering::Greater)
    }

    /// Floating point embedding images; for diagnostics only.
    pub fn embeddings_f64(&self) -> [f64; 2] {
        let (p, q) = self.sqrt_coords();
        let r = (self.field.d as f64).sqrt();
        if self.field.is_rational() {
            return [p.approx(), p.approx()];
        }
        [p.approx() + q.approx() * r, p.approx() - q.approx() * r]
    }
}

fn sign<T: Scalar>(x: &T) -> Ordering {
    if x.is_zero() {
        Ordering::Equal
    } else if x.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Sign of `p + q sqrt d` for square-free `d > 1`.
fn sign_of_sum<T: Scalar>(p: &T, q: &T, d: &T) -> Ordering {
    let sp = sign(p);
    let sq = sign(q);
    if sq == Ordering::Equal {
        return sp;
    }
    if sp == Ordering::Equal || sp == sq {
        return sq;
    }
    // opposite signs: compare p^2 with q^2 d
    let p2 = p.clone() * p;
    let q2d = q.clone() * q * d;
    match p2.partial_cmp(&q2d) {
        Some(Ordering::Greater) => sp,
        Some(Ordering::Less) => sq,
        _ => Ordering::Equal,
    }
}

impl<T: Scalar> fmt::Display for FieldElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_rational() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*w", self.a, self.b)
        }
    }
}

fn same_field<T>(x: &FieldElement<T>, y: &FieldElement<T>) -> QuadraticField {
    assert_eq!(x.field, y.field, "mixed-field arithmetic");
    x.field
}

impl<T: Scalar> Add for &FieldElement<T> {
    type Output = FieldElement<T>;
    fn add(self, rhs: Self) -> FieldElement<T> {
        FieldElement {
            field: same_field(self, rhs),
            a: self.a.clone() + &rhs.a,
            b: self.b.clone() + &rhs.b,
        }
    }
}

impl<T: Scalar> Sub for &FieldElement<T> {
    type Output = FieldElement<T>;
    fn sub(self, rhs: Self) -> FieldElement<T> {
        FieldElement {
            field: same_field(self, rhs),
            a: self.a.clone() - &rhs.a,
            b: self.b.clone() - &rhs.b,
        }
    }
}

impl<T: Scalar> Mul for &FieldElement<T> {
    type Output = FieldElement<T>;
    fn mul(self, rhs: Self) -> FieldElement<T> {
        let field = same_field(self, rhs);
        if field.is_rational() {
            return FieldElement {
                field,
                a: self.a.clone() * &rhs.a,
                b: T::zero(),
            };
        }
        // (a1 + b1 w)(a2 + b2 w), w^2 = t w + c
        let bb = self.b.clone() * &rhs.b;
        let mut a = self.a.clone() * &rhs.a;
        a += T::from_int(field.omega_square_constant()) * &bb;
        let mut b = self.a.clone() * &rhs.b;
        b += self.b.clone() * &rhs.a;
        b += T::from_int(field.omega_trace()) * &bb;
        FieldElement { field, a, b }
    }
}

impl<T: Scalar> Neg for &FieldElement<T> {
    type Output = FieldElement<T>;
    fn neg(self) -> FieldElement<T> {
        FieldElement {
            field: self.field,
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for FieldElement<T> {
            type Output = FieldElement<T>;
            fn $m(self, rhs: Self) -> FieldElement<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for FieldElement<T> {
    type Output = FieldElement<T>;
    fn neg(self) -> FieldElement<T> {
        -&self
    }
}
