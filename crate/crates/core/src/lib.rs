//! Perfect quadratic forms over real quadratic fields.
//!
//! The crate builds the explicit initial perfect form `Tr(alpha A_n(x))`
//! over `Q(sqrt d)` and runs Voronoi's neighbor algorithm to list the
//! `GL_2(O)`-classes of perfect binary forms. Everything is exact.
//!
//! The algorithms are generic over a [`Scalar`]; the aliases below fix it
//! to arbitrary precision rationals, which is what the enumeration uses.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod formspace;
pub mod linalg;
pub mod perfection;
pub mod polyhedra;
pub mod qfield;
pub mod scalar;
pub mod seed;
pub mod shortvec;
pub mod voronoi;

pub use error::{Error, Result};
pub use qfield::QuadraticField;
pub use scalar::{ExactScalar, Scalar};

pub type Rational = num_rational::BigRational;
pub type FieldElement = qfield::FieldElement<Rational>;
pub type FormOverF = formspace::FormOverF<Rational>;
pub type RationalGram = formspace::Gram<Rational>;
pub type MinimalData = shortvec::MinimalData<Rational>;
pub type Facet = polyhedra::Facet<Rational>;
pub type PerfectClass = voronoi::PerfectClass<Rational>;
pub type EnumerationResult = voronoi::EnumerationResult<Rational>;
