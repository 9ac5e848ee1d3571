use perfect_forms::formspace::{tensor_with_an, FormOverF};
use perfect_forms::perfection::perfection_report;
use perfect_forms::qfield::is_squarefree;
use perfect_forms::seed::{initial_perfect_form, seed_trace_form};
use perfect_forms::shortvec::{canonical_sign, certified_brute_force, minimal_vectors};
use perfect_forms::{QuadraticField, Rational, Scalar};

type Q = Rational;

/// `{eta e_1, eta e_2, eta (e_1 - e_2)}` over the given `eta`, in lattice
/// coordinates, canonical signs, sorted.
fn tensor_vectors(etas: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for e in etas {
        let (a, b) = (e[0], e[1]);
        out.push(canonical_sign(vec![a, b, 0, 0]));
        out.push(canonical_sign(vec![0, 0, a, b]));
        out.push(canonical_sign(vec![a, b, -a, -b]));
    }
    out.sort();
    out
}

fn squarefree_up_to(n: i64) -> Vec<i64> {
    (2..=n).filter(|&d| is_squarefree(d)).collect()
}

#[test]
fn seeds_for_all_small_fields() {
    for d in squarefree_up_to(66) {
        let field = QuadraticField::new(d).unwrap();
        let (seed, gram, md) = seed_trace_form::<Q>(field).unwrap();
        assert!(seed.alpha.is_totally_positive(), "d={d}");
        assert_eq!(seed.alpha.trace(), Q::from_int(1), "d={d}");
        assert!(seed.on_geodesic(), "d={d}");
        assert_eq!(gram.value(&[1, 0]), md.minimum, "d={d}");
        assert_eq!(gram.value(&[seed.n_tilde, 1]), md.minimum, "d={d}");
        let f = initial_perfect_form::<Q>(field, 2).unwrap();
        let fmd = minimal_vectors(&f.restriction_of_scalars()).unwrap();
        let rep = perfection_report(&f, &fmd).unwrap();
        assert_eq!((rep.rank, rep.required), (6, 6), "d={d}");
        assert_eq!(fmd.minimum, md.minimum, "d={d}");
        assert_eq!(fmd.vectors, tensor_vectors(&md.vectors), "d={d}");
    }
}

#[test]
fn tensor_structure_against_brute_force() {
    for d in [2, 3, 5, 13] {
        let field = QuadraticField::new(d).unwrap();
        let (seed, gram, md) = seed_trace_form::<Q>(field).unwrap();
        assert_eq!(certified_brute_force(&gram).unwrap(), md);
        let f = tensor_with_an(&seed.alpha, 2);
        let fmd = certified_brute_force(&f.restriction_of_scalars()).unwrap();
        assert_eq!(fmd.minimum, md.minimum);
        assert_eq!(fmd.vectors, tensor_vectors(&md.vectors));
    }
}

#[test]
fn lambda_family_is_not_perfect() {
    let r = QuadraticField::rational();
    for (num, den) in [(0, 1), (1, 2), (-1, 2)] {
        let half = Q::from_frac(num, 2 * den);
        let f = FormOverF::new(
            r,
            vec![
                vec![r.one::<Q>(), r.from_scalar(half.clone())],
                vec![r.from_scalar(half), r.one()],
            ],
        )
        .unwrap();
        let md = minimal_vectors(&f.restriction_of_scalars()).unwrap();
        assert_eq!(md.vectors, vec![vec![0, 1], vec![1, 0]]);
        let rep = perfection_report(&f, &md).unwrap();
        assert!(!rep.is_perfect);
        assert_eq!(rep.rank, 2);
    }
}
