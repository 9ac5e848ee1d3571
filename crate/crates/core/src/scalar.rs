//! Scalar abstraction shared by every algorithm in the crate.
//!
//! All decisions in the enumeration pipeline are made over [`ExactScalar`]
//! types (arbitrary precision rationals). The weaker [`Scalar`] bound is
//! enough for the linear algebra, the quadratic field arithmetic and the
//! short vector search, so those also run over `f64` when an approximate
//! answer is acceptable.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, NumAssignRef, NumRef, One, Signed, ToPrimitive, Zero};

/// An ordered field element usable by the generic algorithms.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + NumRef
    + NumAssignRef
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// Zero test used for pivoting and rank decisions.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    /// Largest integer not exceeding `self`.
    fn floor_i64(&self) -> i64;

    fn is_integer(&self) -> bool;

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer conversion")
    }

    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    /// Nearest integer, ties rounded up.
    fn round_i64(&self) -> i64 {
        let half = Self::from_frac(1, 2);
        (self.clone() + half).floor_i64()
    }

    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// A scalar with exact arithmetic and a total order, convertible to and
/// from arbitrary precision integers.
pub trait ExactScalar: Scalar + Eq + Ord + Hash {
    fn numer_denom(&self) -> (BigInt, BigInt);

    fn from_bigints(num: BigInt, den: BigInt) -> Self;

    fn from_bigint(n: BigInt) -> Self {
        Self::from_bigints(n, BigInt::one())
    }
}

impl Scalar for f64 {
    fn is_negligible(&self) -> bool {
        self.abs() <= 1e-9
    }

    fn floor_i64(&self) -> i64 {
        self.floor() as i64
    }

    fn is_integer(&self) -> bool {
        self.fract() == 0.0
    }
}

impl Scalar for f32 {
    fn is_negligible(&self) -> bool {
        self.abs() <= 1e-5
    }

    fn floor_i64(&self) -> i64 {
        self.floor() as i64
    }

    fn is_integer(&self) -> bool {
        self.fract() == 0.0
    }
}

impl Scalar for BigRational {
    fn floor_i64(&self) -> i64 {
        self.floor().to_integer().to_i64().expect("floor exceeds i64 range")
    }

    fn is_integer(&self) -> bool {
        self.is_integer()
    }

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_frac(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// `Ratio<i64>` arithmetic is not overflow checked in release builds; it
/// is meant for small hand-written inputs.
impl Scalar for Rational64 {
    fn floor_i64(&self) -> i64 {
        self.floor().to_integer()
    }

    fn is_integer(&self) -> bool {
        self.is_integer()
    }
}

impl ExactScalar for BigRational {
    fn numer_denom(&self) -> (BigInt, BigInt) {
        (self.numer().clone(), self.denom().clone())
    }

    fn from_bigints(num: BigInt, den: BigInt) -> Self {
        BigRational::new(num, den)
    }
}

/// Scales a rational vector by a positive factor so that it becomes a
/// primitive integer vector (gcd of entries 1). The zero vector maps to
/// itself.
pub fn primitive_integer_vector<T: ExactScalar>(v: &[T]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        let (_, den) = x.numer_denom();
        lcm = lcm.lcm(&den);
    }
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|x| {
            let (num, den) = x.numer_denom();
            num * (&lcm / den)
        })
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in &mut ints {
            *x /= &g;
        }
    }
    ints
}

/// Renders an exact scalar as `num/den`, always with an explicit
/// denominator.
pub fn to_fraction_string<T: ExactScalar>(x: &T) -> String {
    let (n, d) = x.numer_denom();
    format!("{n}/{d}")
}

/// Parses `num/den` or a bare integer.
pub fn parse_fraction<T: ExactScalar>(s: &str) -> Option<T> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(T::from_bigints(n, d))
}
