//! The explicit initial perfect form over `Q(sqrt d)`.
//!
//! The scaled trace forms `x -> Tr(alpha x^2)`, `alpha >> 0`, trace out a
//! geodesic in the upper half plane. Where that geodesic meets the
//! well-rounded retract (arcs `(x - n)^2 + y^2 = 1`) the trace form has two
//! independent minimal vectors `1` and `eta = n~ + w`; tensoring it with
//! `A_n` gives a perfect `n`-ary form over `F`.

use crate::error::{Error, Result};
use crate::formspace::{scaled_trace_form, tensor_with_an, FormOverF, Gram};
use crate::perfection::perfection_report;
use crate::qfield::{FieldElement, OmegaKind, QuadraticField};
use crate::scalar::Scalar;
use crate::shortvec::{minimal_vectors, MinimalData};

/// Which geodesic the trace-form cone maps to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geodesic {
    /// `(x + 1/2)^2 + y^2 = d/4`, for `d = 1 (mod 4)`.
    ShiftedCircle,
    /// `x^2 + y^2 = d`, otherwise.
    CenteredCircle,
}

impl Geodesic {
    pub fn equation(&self) -> &'static str {
        match self {
            Geodesic::ShiftedCircle => "(x + 1/2)^2 + y^2 = d/4",
            Geodesic::CenteredCircle => "x^2 + y^2 = d",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedData<T> {
    pub field: QuadraticField,
    pub alpha: FieldElement<T>,
    pub n_tilde: i64,
    pub eta: FieldElement<T>,
    pub x0: T,
    pub geodesic: Geodesic,
    /// Set when no non-negative `n` had `X(n) = x0` and `n~` was taken as
    /// the integer nearest to `x0` instead.
    pub reflected: bool,
}

impl<T: Scalar> SeedData<T> {
    /// `y0^2 = 1 - (x0 - n~)^2`.
    pub fn y0_squared(&self) -> T {
        let t = self.x0.clone() - T::from_int(self.n_tilde);
        T::one() - t.clone() * &t
    }

    /// Whether `(x0, y0)` lies on the geodesic, with `y0^2` eliminated
    /// through the retract circle.
    pub fn on_geodesic(&self) -> bool {
        let y2 = self.y0_squared();
        if y2.is_negative() {
            return false;
        }
        let d = T::from_int(self.field.d());
        match self.geodesic {
            Geodesic::ShiftedCircle => {
                let s = self.x0.clone() + T::from_frac(1, 2);
                s.clone() * &s + y2 == d / T::from_int(4)
            }
            Geodesic::CenteredCircle => self.x0.clone() * &self.x0 + y2 == d,
        }
    }
}

/// `X(n)`, the `x`-coordinate where the circle `(x - n)^2 + y^2 = 1` meets
/// the trace-form geodesic of `Q(sqrt d)`.
pub fn x_of_n<T: Scalar>(d: i64, n: i64) -> Result<T> {
    if d % 4 == 1 {
        Ok(T::from_int(4 * n * n + d - 5) / T::from_int(4 + 8 * n))
    } else {
        if n == 0 {
            return Err(Error::Domain(format!("X(0) is undefined for d = {d}")));
        }
        Ok(T::from_int(n * n + d - 1) / T::from_int(2 * n))
    }
}

/// Whether `|X(n)|` is nondecreasing in `|n|` for all `|n| >= bound`.
///
/// For `d = 1 (mod 4)` the derivative of `X` on `n >= 0` has numerator
/// `32n - 8d + 40`, and `X(-1-n) = -1 - X(n)` handles the negative side.
/// Otherwise `X` is odd with derivative numerator `2n^2 - 2d + 2`.
fn monotone_beyond(d: i64, bound: i64) -> bool {
    if d % 4 == 1 {
        32 * (bound - 1) - 8 * d + 40 >= 0
    } else {
        bound * bound - d + 1 >= 0
    }
}

pub fn initial_alpha<T: Scalar>(field: QuadraticField) -> Result<SeedData<T>> {
    if field.is_rational() {
        return Err(Error::Seed("the rational field has no trace-form seed".into()));
    }
    let d = field.d();
    let range = d + 2;
    if !monotone_beyond(d, range) {
        return Err(Error::Seed(format!("scan range {range} is not certified for d = {d}")));
    }
    let mut values = Vec::new();
    for n in -range..=range {
        if let Ok(x) = x_of_n::<T>(d, n) {
            values.push((n, x));
        }
    }
    let x0 = values
        .iter()
        .map(|(_, x)| x.abs())
        .reduce(|a, b| if b < a { b } else { a })
        .expect("nonempty scan");
    let exact = values
        .iter()
        .filter(|(n, x)| *n >= 0 && *x == x0)
        .map(|(n, _)| *n)
        .min();
    let (n_tilde, reflected) = match exact {
        Some(n) => (n, false),
        None => (x0.round_i64().max(0), true),
    };
    if reflected {
        let t = x0.clone() - T::from_int(n_tilde);
        if (t.clone() * &t) > T::one() {
            return Err(Error::Seed(format!(
                "no integer n~ >= 0 within distance 1 of x0 = {x0}"
            )));
        }
    }
    let half = T::from_frac(1, 2);
    let two_d = T::from_int(2 * d);
    let (geodesic, q) = match field.kind() {
        OmegaKind::HalfInteger => (
            Geodesic::ShiftedCircle,
            -(x0.clone() * T::from_int(2) + T::one()) / two_d,
        ),
        _ => (Geodesic::CenteredCircle, -x0.clone() / two_d),
    };
    let alpha = field.from_sqrt_coords(half, q);
    if !alpha.is_totally_positive() {
        return Err(Error::Seed(format!("alpha = {alpha} is not totally positive")));
    }
    let eta = &field.int(n_tilde) + &field.omega();
    Ok(SeedData {
        field,
        alpha,
        n_tilde,
        eta,
        x0,
        geodesic,
        reflected,
    })
}

/// The Gram matrix of `Tr(alpha x^2)` on `O = Z + Zw` with its minimal
/// vectors. Fails unless `1` and `eta` are both minimal.
pub fn seed_trace_form<T: Scalar>(field: QuadraticField) -> Result<(SeedData<T>, Gram<T>, MinimalData<T>)> {
    let seed = initial_alpha::<T>(field)?;
    let phi = scaled_trace_form(&seed.alpha);
    let gram = phi.restriction_of_scalars();
    let md = minimal_vectors(&gram)?;
    let one = [1, 0];
    let eta = [seed.n_tilde, 1];
    if gram.value(&one) != md.minimum || gram.value(&eta) != md.minimum {
        return Err(Error::Seed(format!(
            "trace form for d = {} is not minimized at 1 and eta (minimum {}, values {} and {})",
            field.d(),
            md.minimum,
            gram.value(&one),
            gram.value(&eta)
        )));
    }
    debug_assert!(md.contains(&one) && md.contains(&eta));
    Ok((seed, gram, md))
}

/// `Tr(alpha A_n(x))`; over `Q` this is `A_n`. For `n >= 2` the perfection
/// of the result is checked and a failure is an error.
pub fn initial_perfect_form<T: Scalar>(field: QuadraticField, n: usize) -> Result<FormOverF<T>> {
    if n == 0 {
        return Err(Error::Domain("rank must be positive".into()));
    }
    let alpha = if field.is_rational() {
        field.one()
    } else {
        seed_trace_form::<T>(field)?.0.alpha
    };
    let form = tensor_with_an(&alpha, n);
    if n >= 2 {
        let md = minimal_vectors(&form.restriction_of_scalars())?;
        let report = perfection_report(&form, &md)?;
        if !report.is_perfect {
            return Err(Error::NotPerfect {
                rank: report.rank,
                required: report.required,
            });
        }
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_frac(n, d)
    }

    #[test]
    fn x_of_n_examples() {
        assert_eq!(x_of_n::<Q>(13, 1).unwrap(), q(1, 1));
        assert_eq!(x_of_n::<Q>(5, 0).unwrap(), q(0, 1));
        assert_eq!(x_of_n::<Q>(2, 1).unwrap(), q(1, 1));
        assert!(x_of_n::<Q>(2, 0).is_err());
        assert_eq!(x_of_n::<Q>(3, 2).unwrap(), q(3, 2));
    }

    #[test]
    fn alpha_examples() {
        let f5 = QuadraticField::new(5).unwrap();
        let s = initial_alpha::<Q>(f5).unwrap();
        assert_eq!(s.alpha, f5.from_sqrt_coords(q(1, 2), q(-1, 10)));
        assert_eq!(s.n_tilde, 0);
        assert_eq!(s.eta, f5.omega());

        let f2 = QuadraticField::new(2).unwrap();
        let s = initial_alpha::<Q>(f2).unwrap();
        assert_eq!(s.alpha, f2.from_sqrt_coords(q(1, 2), q(-1, 4)));
        assert_eq!(s.n_tilde, 1);
        assert_eq!(s.eta, f2.element(q(1, 1), q(1, 1)));

        let f3 = QuadraticField::new(3).unwrap();
        let s = initial_alpha::<Q>(f3).unwrap();
        assert_eq!(s.x0, q(3, 2));
        assert_eq!(s.alpha, f3.from_sqrt_coords(q(1, 2), q(-1, 4)));
        assert_eq!(s.n_tilde, 1);
        assert!(!s.reflected);
        assert!(s.on_geodesic());
    }

    #[test]
    fn rational_field_has_no_alpha() {
        assert!(initial_alpha::<Q>(QuadraticField::rational()).is_err());
    }

    #[test]
    fn trace_form_examples() {
        let (_, g, md) = seed_trace_form::<Q>(QuadraticField::new(5).unwrap()).unwrap();
        assert_eq!(g, Gram::identity(2));
        assert_eq!(md.vectors, vec![vec![0, 1], vec![1, 0]]);

        let (_, g, md) = seed_trace_form::<Q>(QuadraticField::new(2).unwrap()).unwrap();
        assert_eq!(g, Gram::from_ints(&[&[1, -1], &[-1, 2]]).unwrap());
        assert_eq!(md.vectors, vec![vec![1, 0], vec![1, 1]]);

        let (s, _, md) = seed_trace_form::<Q>(QuadraticField::new(13).unwrap()).unwrap();
        assert_eq!(md.minimum, q(1, 1));
        assert!(md.contains(&[1, 0]) && md.contains(&[1, 1]));
        assert_eq!((&s.alpha * &(&s.eta * &s.eta)).trace(), q(1, 1));
    }

    #[test]
    fn sqrt3_has_three_minimal_vectors() {
        let (_, _, md) = seed_trace_form::<Q>(QuadraticField::new(3).unwrap()).unwrap();
        assert_eq!(md.vectors, vec![vec![1, 0], vec![1, 1], vec![2, 1]]);
    }

    #[test]
    fn initial_forms_are_perfect() {
        for d in [2, 3, 5] {
            let f = QuadraticField::new(d).unwrap();
            let form = initial_perfect_form::<Q>(f, 2).unwrap();
            assert!(form.is_positive_definite());
        }
        let a2 = initial_perfect_form::<Q>(QuadraticField::rational(), 2).unwrap();
        assert_eq!(a2.entry(0, 1), &QuadraticField::rational().from_scalar(q(1, 2)));
    }

    #[test]
    fn certificate_covers_scan() {
        for d in 2..200 {
            assert!(monotone_beyond(d, d + 2));
        }
    }
}
