//! Facets of a full-dimensional polyhedral cone given by generators.
//!
//! The facet normals of `cone(g_1, ..., g_k)` are the extreme rays of the
//! polar `{x : g_i . x >= 0}`. Those are computed with the incremental
//! double description method on primitive integer vectors, using the
//! combinatorial adjacency test.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{primitive_integer_vector, ExactScalar, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Cone<T> {
    pub ambient_dim: usize,
    pub generators: Vec<Vec<T>>,
}

impl<T: Scalar> Cone<T> {
    pub fn new(ambient_dim: usize, generators: Vec<Vec<T>>) -> Result<Self> {
        for g in &generators {
            if g.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    got: g.len(),
                });
            }
            if g.iter().all(|x| x.is_zero()) {
                return Err(Error::ZeroVector);
            }
        }
        Ok(Cone {
            ambient_dim,
            generators,
        })
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.generators)
    }
}

/// Supporting hyperplane `{x : normal . x = 0}` with the cone on the
/// nonnegative side.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Facet<T> {
    pub normal: Vec<T>,
    /// Indices of the generators lying on the facet, ascending.
    pub incident: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(len: usize) -> Self {
        BitSet(vec![0; len.div_ceil(64).max(1)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersect(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_superset(&self, other: &BitSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Ray {
    v: Vec<BigInt>,
    zeros: BitSet,
}

fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn make_primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    use num_integer::Integer;
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g == BigInt::from(1) {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

/// Complete irredundant facet list, normals primitive integral and sorted
/// lexicographically.
pub fn dual_description<T: ExactScalar>(cone: &Cone<T>) -> Result<Vec<Facet<T>>> {
    let d = cone.ambient_dim;
    let rank = cone.rank();
    if rank < d {
        return Err(Error::DegenerateCone { rank, dim: d });
    }
    let k = cone.generators.len();
    let gens: Vec<Vec<BigInt>> = cone.generators.iter().map(|g| primitive_integer_vector(g)).collect();

    // d independent generators, chosen greedily in index order
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..k {
        if basis.len() == d {
            break;
        }
        let mut rows: Vec<Vec<T>> = basis.iter().map(|&j| cone.generators[j].clone()).collect();
        rows.push(cone.generators[i].clone());
        if linalg::rank(&rows) == rows.len() {
            basis.push(i);
        }
    }

    let mut rays: Vec<Ray> = Vec::new();
    for (pos, &j) in basis.iter().enumerate() {
        let others: Vec<Vec<T>> = basis
            .iter()
            .enumerate()
            .filter(|(p, _)| *p != pos)
            .map(|(_, &i)| cone.generators[i].clone())
            .collect();
        let ns = linalg::nullspace(&others, d);
        debug_assert_eq!(ns.len(), 1);
        let mut v = primitive_integer_vector(&ns[0]);
        if int_dot(&gens[j], &v).is_negative() {
            v = v.into_iter().map(|x| -x).collect();
        }
        let mut zeros = BitSet::new(k);
        for (p, &i) in basis.iter().enumerate() {
            if p != pos {
                zeros.insert(i);
            }
        }
        rays.push(Ray { v, zeros });
    }

    for i in (0..k).filter(|i| !basis.contains(i)) {
        let g = &gens[i];
        let signs: Vec<BigInt> = rays.iter().map(|r| int_dot(g, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&r| signs[r].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&r| signs[r].is_negative()).collect();
        if neg.is_empty() {
            for (r, s) in rays.iter_mut().zip(&signs) {
                if s.is_zero() {
                    r.zeros.insert(i);
                }
            }
            continue;
        }
        let mut next: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.intersect(&rays[n].zeros);
                if common.count() + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(r, ray)| r == p || r == n || !ray.zeros.is_superset(&common));
                if !adjacent {
                    continue;
                }
                let v: Vec<BigInt> = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(xn, xp)| &signs[p] * xn - &signs[n] * xp)
                    .collect();
                let mut zeros = common;
                zeros.insert(i);
                next.push(Ray {
                    v: make_primitive(v),
                    zeros,
                });
            }
        }
        for (r, ray) in rays.into_iter().enumerate() {
            if signs[r].is_positive() {
                next.push(ray);
            } else if signs[r].is_zero() {
                let mut ray = ray;
                ray.zeros.insert(i);
                next.push(ray);
            }
        }
        rays = next;
    }

    let mut facets: Vec<(Vec<BigInt>, Vec<usize>)> = rays
        .into_iter()
        .map(|r| {
            let incident = (0..k).filter(|&i| int_dot(&gens[i], &r.v).is_zero()).collect();
            (r.v, incident)
        })
        .collect();
    facets.sort();
    Ok(facets
        .into_iter()
        .map(|(v, incident)| Facet {
            normal: v.into_iter().map(T::from_bigint).collect(),
            incident,
        })
        .collect())
}

/// Whether `point` satisfies every facet inequality.
pub fn contains<T: Scalar>(facets: &[Facet<T>], point: &[T]) -> Result<bool> {
    for f in facets {
        if f.normal.len() != point.len() {
            return Err(Error::DimensionMismatch {
                expected: f.normal.len(),
                got: point.len(),
            });
        }
        if linalg::dot(&f.normal, point).is_negative() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reference facet enumeration: every hyperplane spanned by `d - 1`
/// generators that has all generators on one side.
pub fn brute_force_facets<T: ExactScalar>(cone: &Cone<T>) -> Result<Vec<Facet<T>>> {
    let d = cone.ambient_dim;
    let rank = cone.rank();
    if rank < d {
        return Err(Error::DegenerateCone { rank, dim: d });
    }
    let k = cone.generators.len();
    let mut found: Vec<Vec<BigInt>> = Vec::new();
    for subset in subsets(k, d - 1) {
        let rows: Vec<Vec<T>> = subset.iter().map(|&i| cone.generators[i].clone()).collect();
        let ns = linalg::nullspace(&rows, d);
        if ns.len() != 1 {
            continue;
        }
        let n = &ns[0];
        let vals: Vec<T> = cone.generators.iter().map(|g| linalg::dot(g, n)).collect();
        let normal = if vals.iter().all(|v| !v.is_negative()) {
            n.clone()
        } else if vals.iter().all(|v| !v.is_positive()) {
            n.iter().map(|x| -x.clone()).collect()
        } else {
            continue;
        };
        let p = primitive_integer_vector(&normal);
        if !found.contains(&p) {
            found.push(p);
        }
    }
    found.sort();
    Ok(found
        .into_iter()
        .map(|v| {
            let normal: Vec<T> = v.into_iter().map(T::from_bigint).collect();
            let incident = (0..k)
                .filter(|&i| linalg::dot(&cone.generators[i], &normal).is_zero())
                .collect();
            Facet { normal, incident }
        })
        .collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formspace::SymBasis;
    use crate::qfield::QuadraticField;
    use num_rational::BigRational;

    type Q = BigRational;

    fn cone(rows: &[&[i64]]) -> Cone<Q> {
        let d = rows[0].len();
        Cone::new(
            d,
            rows.iter()
                .map(|r| r.iter().map(|&x| Q::from_int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn ints(v: &[Q]) -> Vec<i64> {
        v.iter().map(|x| x.floor_i64()).collect()
    }

    #[test]
    fn quadrant() {
        let c = cone(&[&[1, 0], &[0, 1]]);
        let f = dual_description(&c).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(ints(&f[0].normal), vec![0, 1]);
        assert_eq!(f[0].incident, vec![0]);
        assert_eq!(ints(&f[1].normal), vec![1, 0]);
        assert_eq!(f[1].incident, vec![1]);
        assert!(contains(&f, &[Q::from_int(1), Q::from_int(1)]).unwrap());
        assert!(!contains(&f, &[Q::from_int(-1), Q::from_int(2)]).unwrap());
        assert!(contains(&f, &[Q::from_int(1)]).is_err());
    }

    #[test]
    fn interior_generator_is_on_no_facet() {
        let c = cone(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        let f = dual_description(&c).unwrap();
        assert_eq!(f.len(), 3);
        assert!(f.iter().all(|x| !x.incident.contains(&3)));
        assert_eq!(f, brute_force_facets(&c).unwrap());
    }

    #[test]
    fn a2_cone_is_simplicial() {
        let basis = SymBasis::new(QuadraticField::rational(), 2);
        let gens: Vec<Vec<Q>> = [[1, 0], [0, 1], [1, -1]]
            .iter()
            .map(|v| basis.evaluation_vector(v).unwrap())
            .collect();
        let c = Cone::new(3, gens.clone()).unwrap();
        let f = dual_description(&c).unwrap();
        assert_eq!(f.len(), 3);
        assert!(f.iter().all(|x| x.incident.len() == 2));
        let sum: Vec<Q> = gens[0].iter().zip(&gens[1]).map(|(a, b)| a + b).collect();
        assert!(contains(&f, &sum).unwrap());
    }

    #[test]
    fn octahedral_cone_needs_adjacency() {
        // cone over a square: 4 generators in dimension 3, 4 facets
        let c = cone(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        let f = dual_description(&c).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f, brute_force_facets(&c).unwrap());
    }

    #[test]
    fn degenerate_input() {
        let c = cone(&[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(
            dual_description(&c).unwrap_err(),
            Error::DegenerateCone { rank: 2, dim: 3 }
        );
        assert!(Cone::<Q>::new(2, vec![vec![Q::from_int(0), Q::from_int(0)]]).is_err());
    }
}
