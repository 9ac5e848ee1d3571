use num_traits::{Signed, Zero};
use perfect_forms::formspace::{f_mul, FMatrix, FormOverF, Gram, SymBasis};
use perfect_forms::linalg;
use perfect_forms::perfection::perfection_report;
use perfect_forms::polyhedra::{brute_force_facets, contains, dual_description, Cone};
use perfect_forms::seed::initial_perfect_form;
use perfect_forms::shortvec::{certified_brute_force, minimal_vectors, short_vectors};
use perfect_forms::voronoi::{are_equivalent, equivalence_witness, PerfectClass};
use perfect_forms::{QuadraticField, Rational, Scalar};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

type Q = Rational;

fn q(n: i64) -> Q {
    Q::from_int(n)
}

fn square(b: &[Vec<i64>]) -> Gram<Q> {
    let n = b.len();
    let rows = (0..n)
        .map(|i| (0..n).map(|j| q((0..n).map(|k| b[k][i] * b[k][j]).sum())).collect())
        .collect();
    Gram::new(rows).unwrap()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed_f0e5),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// Half-width of the box the brute-force oracle has to search, using the
/// smallest diagonal entry as an upper bound for the minimum.
fn oracle_box(g: &Gram<Q>) -> f64 {
    let inv = linalg::inverse(&g.rows()).unwrap();
    let m = (0..g.dim()).map(|i| g.get(i, i).approx()).fold(f64::INFINITY, f64::min);
    (0..g.dim())
        .map(|i| (m * inv[i][i].approx()).sqrt())
        .fold(0.0, f64::max)
}

fn basis_matrix(k: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, k), k)
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn shortvec_matches_brute_force(b in basis_matrix(4), shift in 0i64..3) {
        let ints: Vec<Vec<Q>> = b.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        prop_assume!(!linalg::determinant(&ints).is_zero());
        let mut g = square(&b).rows();
        // a non-square denominator keeps the exact path honest
        for (i, row) in g.iter_mut().enumerate() {
            row[i] += Q::from_frac(shift, 3);
        }
        let g = Gram::new(g).unwrap();
        prop_assume!(oracle_box(&g) <= 6.0);
        let fast = minimal_vectors(&g).unwrap();
        let slow = certified_brute_force(&g).unwrap();
        prop_assert_eq!(fast, slow);
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn dual_description_matches_oracle(
        dim in 2usize..=6,
        raw in prop::collection::vec(prop::collection::vec(-3i64..=3, 6), 2..=12),
    ) {
        let gens: Vec<Vec<Q>> = raw
            .iter()
            .map(|r| r[..dim].iter().map(|&x| q(x)).collect::<Vec<_>>())
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        prop_assume!(!gens.is_empty() && linalg::rank(&gens) == dim);
        let cone = Cone::new(dim, gens.clone()).unwrap();
        let facets = dual_description(&cone).unwrap();
        prop_assert_eq!(&facets, &brute_force_facets(&cone).unwrap());
        // the cone may be all of Q^dim, which has no facets
        for g in &gens {
            prop_assert!(contains(&facets, g).unwrap());
        }
        for (i, f) in facets.iter().enumerate() {
            let inc: Vec<Vec<Q>> = f.incident.iter().map(|&k| gens[k].clone()).collect();
            prop_assert_eq!(linalg::rank(&inc), dim - 1);
            let p = irredundancy_witness(&facets, i, &gens);
            for (j, h) in facets.iter().enumerate() {
                prop_assert_eq!(linalg::dot(&h.normal, &p).is_negative(), i == j);
            }
        }
    }
}

/// A point violating exactly facet `i`: the centre of that facet pushed
/// slightly outward.
fn irredundancy_witness(facets: &[perfect_forms::Facet], i: usize, gens: &[Vec<Q>]) -> Vec<Q> {
    let dim = gens[0].len();
    let mut c = vec![q(0); dim];
    for &k in &facets[i].incident {
        for (x, y) in c.iter_mut().zip(&gens[k]) {
            *x += y;
        }
    }
    let ni = &facets[i].normal;
    let mut eps = q(1);
    for (j, f) in facets.iter().enumerate() {
        let dn = linalg::dot(&f.normal, ni);
        if j != i && dn.is_positive() {
            let t = linalg::dot(&f.normal, &c) / (dn * q(2));
            if t < eps {
                eps = t;
            }
        }
    }
    c.iter().zip(ni).map(|(x, n)| x.clone() - eps.clone() * n).collect()
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn exact_signs_agree_with_floats(
        d in prop::sample::select(vec![2i64, 3, 5, 6, 7, 13, 17, 57, 65]),
        an in -500i64..500, ad in 1i64..50, bn in -500i64..500, bd in 1i64..50,
    ) {
        let f = QuadraticField::new(d).unwrap();
        let x = f.element(Q::from_frac(an, ad), Q::from_frac(bn, bd));
        let signs = x.embedding_signs();
        for (s, v) in signs.iter().zip(x.embeddings_f64()) {
            if v.abs() > 1e-9 {
                prop_assert_eq!(*s, v.partial_cmp(&0.0).unwrap());
            }
        }
        // the product of the embeddings is the norm
        let n = x.norm();
        let both = signs[0] as i32 * signs[1] as i32;
        prop_assert_eq!(both, if n.is_zero() { 0 } else if n.is_positive() { 1 } else { -1 });
    }
}

fn field_of(d: i64) -> QuadraticField {
    QuadraticField::new(d).unwrap()
}

fn form_from(field: QuadraticField, c: &[i64]) -> FormOverF<Q> {
    let coords: Vec<Q> = c.iter().map(|&x| Q::from_frac(x, 4)).collect();
    FormOverF::from_sym_coords(field, 2, &coords).unwrap()
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn evaluation_routes_agree(
        d in prop::sample::select(vec![2i64, 3, 5, 13]),
        c in prop::collection::vec(-8i64..=8, 6),
        v in prop::collection::vec(-4i64..=4, 4),
    ) {
        let field = field_of(d);
        let f = form_from(field, &c);
        let gram = f.restriction_of_scalars();
        let basis = SymBasis::new(field, 2);
        let direct = f.evaluate(&v);
        prop_assert_eq!(&direct, &gram.value(&v));
        if v.iter().any(|&x| x != 0) {
            let ev: Vec<Q> = basis.evaluation_vector(&v).unwrap();
            prop_assert_eq!(direct, linalg::dot(&ev, &f.sym_coords()));
        }
        prop_assert_eq!(f.is_positive_definite(), f.is_positive_definite_rational());
    }
}

/// Elementary matrix products with entries in `O`, times a unit diagonal.
fn gl2_element(field: QuadraticField, steps: &[(bool, i64, i64)], unit_power: u32) -> FMatrix<Q> {
    let mut u: FMatrix<Q> = vec![vec![field.one(), field.zero()], vec![field.zero(), field.one()]];
    for &(upper, a, b) in steps {
        let x = field.from_coords::<Q>(&[a, b]);
        let e = if upper {
            vec![vec![field.one(), x], vec![field.zero(), field.one()]]
        } else {
            vec![vec![field.one(), field.zero()], vec![x, field.one()]]
        };
        u = f_mul(&u, &e);
    }
    let eps = small_unit(field);
    let mut p = field.one::<Q>();
    for _ in 0..unit_power {
        p = &p * &eps;
    }
    f_mul(&u, &vec![vec![p, field.zero()], vec![field.zero(), field.one()]])
}

fn small_unit(field: QuadraticField) -> perfect_forms::FieldElement {
    for b in 1..50i64 {
        for a in -100..=100i64 {
            let x = field.from_coords::<Q>(&[a, b]);
            if x.is_unit() {
                return x;
            }
        }
    }
    -field.one::<Q>()
}

fn seed_class(d: i64) -> PerfectClass<Q> {
    PerfectClass::new(initial_perfect_form::<Q>(field_of(d), 2).unwrap()).unwrap()
}

fn steps() -> impl Strategy<Value = Vec<(bool, i64, i64)>> {
    prop::collection::vec((any::<bool>(), -2i64..=2, -1i64..=1), 0..4)
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn equivalence_is_symmetric(
        d in prop::sample::select(vec![2i64, 3, 5, 13]),
        s in steps(), k in 0u32..3,
    ) {
        let field = field_of(d);
        let f = seed_class(d);
        let u = gl2_element(field, &s, k);
        let g = PerfectClass::new(f.form.transform(&u)).unwrap();
        prop_assert_eq!(&f.fingerprint, &g.fingerprint);
        let w = equivalence_witness(&f, &g).expect("forward witness");
        prop_assert_eq!(f.form.transform(&w), g.form.clone());
        let back = equivalence_witness(&g, &f).expect("inverse witness");
        prop_assert_eq!(g.form.transform(&back), f.form.clone());
        prop_assert!(are_equivalent(&f, &f));
        // perfection is a GL_2(O) invariant
        let rf = perfection_report(&f.form, &f.minimal).unwrap();
        let rg = perfection_report(&g.form, &g.minimal).unwrap();
        prop_assert_eq!((rf.rank, rf.is_perfect), (rg.rank, rg.is_perfect));
    }
}

proptest! {
    #![proptest_config(config(50))]

    #[test]
    fn equivalence_is_transitive(
        d in prop::sample::select(vec![2i64, 5, 13]),
        s1 in steps(), s2 in steps(), k in 0u32..2,
    ) {
        let field = field_of(d);
        let f = seed_class(d);
        let g = PerfectClass::new(f.form.transform(&gl2_element(field, &s1, k))).unwrap();
        let h = PerfectClass::new(g.form.transform(&gl2_element(field, &s2, 0))).unwrap();
        let fg = equivalence_witness(&f, &g).unwrap();
        let gh = equivalence_witness(&g, &h).unwrap();
        prop_assert_eq!(f.form.transform(&f_mul(&fg, &gh)), h.form.clone());
        prop_assert!(are_equivalent(&f, &h));
    }

    #[test]
    fn scaling_keeps_minimal_vectors(
        d in prop::sample::select(vec![2i64, 3, 5, 13]),
        num in 1i64..20, den in 1i64..20,
    ) {
        let f = seed_class(d);
        let scaled = f.form.scale(&Q::from_frac(num, den));
        let md = minimal_vectors(&scaled.restriction_of_scalars()).unwrap();
        prop_assert_eq!(&md.vectors, &f.minimal.vectors);
        prop_assert_eq!(&md.minimum, &Q::from_frac(num, den));
        prop_assert!(perfection_report(&scaled, &md).unwrap().is_perfect);
    }
}

#[test]
fn short_vectors_contains_minimal() {
    let g = square(&[vec![2, 1, 0], vec![0, 1, 1], vec![1, 0, 3]]);
    let md = minimal_vectors(&g).unwrap();
    let sv = short_vectors(&g, &md.minimum).unwrap();
    let at_min: Vec<_> = sv
        .iter()
        .filter(|(_, v)| *v == md.minimum)
        .map(|(x, _)| x.clone())
        .collect();
    assert_eq!(at_min, md.vectors);
    assert!(sv.iter().all(|(_, v)| *v == md.minimum));
    let wider = short_vectors(&g, &(md.minimum.clone() * q(3))).unwrap();
    assert!(wider.len() >= sv.len());
}
