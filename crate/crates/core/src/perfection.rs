//! Perfection test: is `f` the only solution of `Tr(v^T X v) = m(f)` for
//! `v` in `M(f)`?
//!
//! `f` is a solution by construction, so uniqueness is the same as the
//! evaluation functionals of the minimal vectors spanning the dual of the
//! form space.

use crate::error::{Error, Result};
use crate::formspace::{FormOverF, SymBasis};
use crate::linalg;
use crate::scalar::Scalar;
use crate::shortvec::MinimalData;

#[derive(Debug, Clone, PartialEq)]
pub struct PerfectionReport<T> {
    pub rank: usize,
    pub required: usize,
    pub is_perfect: bool,
    /// One evaluation functional per minimal vector, in [`SymBasis`] order.
    pub evaluation_matrix: Vec<Vec<T>>,
}

pub fn perfection_report<T: Scalar>(f: &FormOverF<T>, md: &MinimalData<T>) -> Result<PerfectionReport<T>> {
    let basis = SymBasis::new(f.field(), f.n());
    let coords = f.sym_coords();
    let mut rows = Vec::with_capacity(md.vectors.len());
    for v in &md.vectors {
        let c: Vec<T> = basis.evaluation_vector(v)?;
        if linalg::dot(&c, &coords) != md.minimum {
            return Err(Error::InconsistentMinimalData(format!(
                "vector {v:?} has value {} but the minimum is {}",
                linalg::dot(&c, &coords),
                md.minimum
            )));
        }
        rows.push(c);
    }
    let rank = linalg::rank(&rows);
    let required = basis.dim();
    Ok(PerfectionReport {
        rank,
        required,
        is_perfect: rank == required,
        evaluation_matrix: rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formspace::tensor_with_an;
    use crate::qfield::QuadraticField;
    use crate::shortvec::minimal_vectors;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_frac(n, d)
    }

    fn report(f: &FormOverF<Q>) -> PerfectionReport<Q> {
        let md = minimal_vectors(&f.restriction_of_scalars()).unwrap();
        perfection_report(f, &md).unwrap()
    }

    #[test]
    fn a2_is_perfect() {
        let r = QuadraticField::rational();
        let rep = report(&tensor_with_an(&r.one::<Q>(), 2));
        assert_eq!((rep.rank, rep.required, rep.is_perfect), (3, 3, true));
    }

    #[test]
    fn identity_is_not_perfect() {
        let r = QuadraticField::rational();
        let id = FormOverF::new(r, vec![vec![r.one::<Q>(), r.zero()], vec![r.zero(), r.one()]]).unwrap();
        let rep = report(&id);
        assert_eq!((rep.rank, rep.required, rep.is_perfect), (2, 3, false));
    }

    #[test]
    fn sqrt5_seed_is_perfect() {
        let f = QuadraticField::new(5).unwrap();
        let alpha = f.from_sqrt_coords(q(1, 2), q(-1, 10));
        let rep = report(&tensor_with_an(&alpha, 2));
        assert_eq!((rep.rank, rep.required, rep.is_perfect), (6, 6, true));
        assert_eq!(rep.evaluation_matrix.len(), 6);
    }

    #[test]
    fn inconsistent_data_is_rejected() {
        let r = QuadraticField::rational();
        let a2 = tensor_with_an(&r.one::<Q>(), 2);
        let bad = MinimalData {
            minimum: q(1, 1),
            vectors: vec![vec![1, 1]],
        };
        assert!(matches!(
            perfection_report(&a2, &bad),
            Err(Error::InconsistentMinimalData(_))
        ));
    }
}
