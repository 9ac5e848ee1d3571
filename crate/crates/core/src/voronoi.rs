//! Voronoi's algorithm for binary (or `n`-ary) forms over `F`.
//!
//! Every perfect form here is normalized to minimum 1. Its Voronoi cone is
//! spanned by the evaluation functionals of its minimal vectors; crossing a
//! facet of that cone leads to the unique neighboring perfect form, and a
//! breadth-first walk over this graph modulo `GL_n(O)` lists all classes.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formspace::{f_determinant, f_inverse, f_mul, FMatrix, FormOverF, SymBasis};
use crate::linalg;
use crate::perfection::perfection_report;
use crate::polyhedra::{dual_description, Cone, Facet};
use crate::qfield::{FieldElement, QuadraticField};
use crate::scalar::{parse_fraction, to_fraction_string, ExactScalar};
use crate::seed::initial_perfect_form;
use crate::shortvec::{minimal_vectors, MinimalData};

/// Invariants of a form under `GL_n(O)`, used to skip hopeless
/// equivalence searches.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint<T> {
    pub num_min_vectors: usize,
    /// `v^T A v` in `F` for each minimal vector, as `(a, b)` coordinates, sorted.
    pub values: Vec<(T, T)>,
    /// `|Tr(v^T A w)|` over unordered pairs of distinct minimal vectors, sorted.
    pub pair_traces: Vec<T>,
    /// Norm of `det A`; transformations multiply `det A` by a square unit.
    pub det_norm: T,
}

impl<T: ExactScalar> Fingerprint<T> {
    pub fn of(form: &FormOverF<T>, md: &MinimalData<T>) -> Self {
        let field = form.field();
        let mut values: Vec<(T, T)> = md
            .vectors
            .iter()
            .map(|v| {
                let x = form.value_in_field(v);
                (x.a().clone(), x.b().clone())
            })
            .collect();
        values.sort();
        let elems = md.field_vectors(field);
        let mut pair_traces = Vec::new();
        for i in 0..elems.len() {
            for j in i + 1..elems.len() {
                pair_traces.push(form.bilinear_in_field(&elems[i], &elems[j]).trace().abs());
            }
        }
        pair_traces.sort();
        Fingerprint {
            num_min_vectors: md.len(),
            values,
            pair_traces,
            det_norm: form.determinant().norm(),
        }
    }

    /// Stable textual rendering, suitable for hashing.
    pub fn canonical_string(&self) -> String {
        let mut s = format!("{};", self.num_min_vectors);
        for (a, b) in &self.values {
            s.push_str(&format!("{},{};", to_fraction_string(a), to_fraction_string(b)));
        }
        for t in &self.pair_traces {
            s.push_str(&to_fraction_string(t));
            s.push(';');
        }
        s.push_str(&to_fraction_string(&self.det_norm));
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerfectClass<T> {
    pub form: FormOverF<T>,
    pub minimal: MinimalData<T>,
    pub fingerprint: Fingerprint<T>,
}

impl<T: ExactScalar> PerfectClass<T> {
    /// Validates that `form` is perfect with minimum 1.
    pub fn new(form: FormOverF<T>) -> Result<Self> {
        let minimal = minimal_vectors(&form.restriction_of_scalars())?;
        if minimal.minimum != T::one() {
            return Err(Error::Domain(format!(
                "form is not normalized: minimum {}",
                minimal.minimum
            )));
        }
        let report = perfection_report(&form, &minimal)?;
        if !report.is_perfect {
            return Err(Error::NotPerfect {
                rank: report.rank,
                required: report.required,
            });
        }
        let fingerprint = Fingerprint::of(&form, &minimal);
        Ok(PerfectClass {
            form,
            minimal,
            fingerprint,
        })
    }

    pub fn field(&self) -> QuadraticField {
        self.form.field()
    }

    pub fn cone(&self) -> Result<Cone<T>> {
        let basis = SymBasis::new(self.field(), self.form.n());
        let gens = self
            .minimal
            .vectors
            .iter()
            .map(|v| basis.evaluation_vector(v))
            .collect::<Result<Vec<_>>>()?;
        Cone::new(basis.dim(), gens)
    }

    pub fn facets(&self) -> Result<Vec<Facet<T>>> {
        dual_description(&self.cone()?)
    }
}

const WALK_LIMIT: usize = 400;

/// The perfect form across `facet` of the Voronoi cone of `class`.
///
/// With `R` the facet normal read as a form, `R[v] >= 0` on `M(f)` with
/// equality exactly on the facet. Along `f + tR` the facet vectors keep
/// value 1 and the others grow, until at `t = rho` some vector outside
/// `M(f)` drops to 1. `rho` is bracketed by doubling and halving, then
/// pinned exactly: every vector below 1 at `t = u` gives the candidate
/// `(1 - f[w]) / R[w] < u`, and jumping there repeatedly reaches `rho`.
pub fn neighbor<T: ExactScalar>(class: &PerfectClass<T>, facet: &Facet<T>) -> Result<FormOverF<T>> {
    let f = &class.form;
    let r = FormOverF::from_sym_coords(f.field(), f.n(), &facet.normal)?;
    let one = T::one();
    let two = T::from_int(2);
    let mut lo = T::zero();
    let mut u = T::one();
    for _ in 0..WALK_LIMIT {
        let g = f.add_scaled(&r, &u);
        let gram = g.restriction_of_scalars();
        if !gram.is_positive_definite() {
            u = (lo.clone() + &u) / &two;
            continue;
        }
        let md = minimal_vectors(&gram)?;
        if md.minimum == one {
            if md.vectors.iter().any(|v| !r.evaluate(v).is_zero()) {
                return Ok(g);
            }
            lo = u.clone();
            u *= &two;
            continue;
        }
        let mut cur = md;
        for _ in 0..WALK_LIMIT {
            let mut next: Option<T> = None;
            for w in &cur.vectors {
                let rw = r.evaluate(w);
                if !rw.is_negative() {
                    return Err(Error::Walk(format!(
                        "vector {w:?} fell below the minimum without a negative slope"
                    )));
                }
                let t = (one.clone() - f.evaluate(w)) / rw;
                if next.as_ref().is_none_or(|n| t < *n) {
                    next = Some(t);
                }
            }
            u = next.expect("minimal vectors are nonempty");
            let g = f.add_scaled(&r, &u);
            cur = minimal_vectors(&g.restriction_of_scalars())?;
            if cur.minimum == one {
                return Ok(g);
            }
            if cur.minimum > one {
                return Err(Error::Walk("minimum rose above 1 on the facet".into()));
            }
        }
        return Err(Error::Walk("exact step did not converge".into()));
    }
    Err(Error::Walk(format!(
        "no neighbor found within {WALK_LIMIT} bracketing steps"
    )))
}

fn f_rank<T: ExactScalar>(field: QuadraticField, vectors: &[Vec<FieldElement<T>>]) -> usize {
    // F-independence of v_i is Q-independence of {v_i, w v_i}
    let mults: Vec<FieldElement<T>> = if field.is_rational() {
        vec![field.one()]
    } else {
        vec![field.one(), field.omega()]
    };
    let mut rows = Vec::new();
    for v in vectors {
        for m in &mults {
            let mut row = Vec::new();
            for x in v {
                let y = m * x;
                row.push(y.a().clone());
                if !field.is_rational() {
                    row.push(y.b().clone());
                }
            }
            rows.push(row);
        }
    }
    linalg::rank(&rows) / mults.len()
}

fn column_matrix<T: ExactScalar>(cols: &[Vec<FieldElement<T>>]) -> FMatrix<T> {
    let n = cols.len();
    (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
}

/// Searches for `U` in `GL_n(O)` with `U^T A_f U = A_g`, so `f(Ux) = g(x)`.
///
/// Such a `U` maps `M(g)` onto `+-M(f)`, so it is determined by the images
/// of `n` independent minimal vectors of `g`; all sign and target choices
/// compatible with the `F`-valued inner products are tried.
pub fn equivalence_witness<T: ExactScalar>(f: &PerfectClass<T>, g: &PerfectClass<T>) -> Option<FMatrix<T>> {
    let field = f.field();
    let n = f.form.n();
    if field != g.field() || n != g.form.n() || f.minimal.len() != g.minimal.len() {
        return None;
    }
    let fv = f.minimal.field_vectors(field);
    let gv = g.minimal.field_vectors(field);
    let f_vals: Vec<FieldElement<T>> = f.minimal.vectors.iter().map(|v| f.form.value_in_field(v)).collect();
    let g_vals: Vec<FieldElement<T>> = g.minimal.vectors.iter().map(|v| g.form.value_in_field(v)).collect();

    let candidates: Vec<Vec<usize>> = g_vals
        .iter()
        .map(|gx| (0..fv.len()).filter(|&k| f_vals[k] == *gx).collect())
        .collect();
    let mut order: Vec<usize> = (0..gv.len()).collect();
    order.sort_by_key(|&i| (candidates[i].len(), i));
    let mut chosen: Vec<usize> = Vec::new();
    for i in order {
        if chosen.len() == n {
            break;
        }
        let mut trial: Vec<Vec<FieldElement<T>>> = chosen.iter().map(|&c| gv[c].clone()).collect();
        trial.push(gv[i].clone());
        if f_rank(field, &trial) == trial.len() {
            chosen.push(i);
        }
    }
    if chosen.len() < n {
        return None;
    }
    let sources: Vec<Vec<FieldElement<T>>> = chosen.iter().map(|&c| gv[c].clone()).collect();
    let v_inv = f_inverse(&column_matrix(&sources))?;
    let g_inner: Vec<Vec<FieldElement<T>>> = sources
        .iter()
        .map(|a| sources.iter().map(|b| g.form.bilinear_in_field(a, b)).collect())
        .collect();

    let mut images: Vec<Vec<FieldElement<T>>> = Vec::new();
    search(f, g, &fv, &candidates, &chosen, &g_inner, &v_inv, &mut images)
}

#[allow(clippy::too_many_arguments)]
fn search<T: ExactScalar>(
    f: &PerfectClass<T>,
    g: &PerfectClass<T>,
    fv: &[Vec<FieldElement<T>>],
    candidates: &[Vec<usize>],
    chosen: &[usize],
    g_inner: &[Vec<FieldElement<T>>],
    v_inv: &FMatrix<T>,
    images: &mut Vec<Vec<FieldElement<T>>>,
) -> Option<FMatrix<T>> {
    let depth = images.len();
    if depth == chosen.len() {
        let u = f_mul(&column_matrix(images), v_inv);
        if !u.iter().flatten().all(|x| x.is_integral()) || !f_determinant(&u).is_unit() {
            return None;
        }
        return (f.form.transform(&u) == g.form).then_some(u);
    }
    // -U is a witness whenever U is, so the first image keeps its sign
    let signs: &[i64] = if depth == 0 { &[1] } else { &[1, -1] };
    for &k in &candidates[chosen[depth]] {
        for &s in signs {
            let w: Vec<FieldElement<T>> = fv[k].iter().map(|x| x.scale(&T::from_int(s))).collect();
            let fits = (0..depth).all(|j| f.form.bilinear_in_field(&images[j], &w) == g_inner[j][depth]);
            if !fits {
                continue;
            }
            images.push(w);
            if let Some(u) = search(f, g, fv, candidates, chosen, g_inner, v_inv, images) {
                return Some(u);
            }
            images.pop();
        }
    }
    None
}

pub fn are_equivalent<T: ExactScalar>(f: &PerfectClass<T>, g: &PerfectClass<T>) -> bool {
    equivalence_witness(f, g).is_some()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationConfig {
    pub class_cap: usize,
    pub threads: usize,
    /// Classes explored between checkpoints. Does not affect the result.
    pub batch_size: usize,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig {
            class_cap: 10_000,
            threads: 1,
            batch_size: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub facet: usize,
    pub to: usize,
}

#[derive(Debug, Clone)]
pub struct EnumerationResult<T> {
    pub field: QuadraticField,
    pub n: usize,
    pub classes: Vec<PerfectClass<T>>,
    pub facet_counts: Vec<usize>,
    pub edges: Vec<Edge>,
    /// Class of the Galois conjugate form, per class.
    pub galois_partners: Vec<Option<usize>>,
}

impl<T> EnumerationResult<T> {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }
}

/// Serializable enumeration state at a batch boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub d: i64,
    pub n: usize,
    /// Representatives in sym-basis coordinates, as `"num/den"` strings.
    pub forms: Vec<Vec<String>>,
    pub explored: usize,
    pub facet_counts: Vec<usize>,
    pub edges: Vec<Edge>,
}

struct State<T> {
    classes: Vec<PerfectClass<T>>,
    buckets: HashMap<Fingerprint<T>, Vec<usize>>,
    explored: usize,
    facet_counts: Vec<usize>,
    edges: Vec<Edge>,
}

impl<T: ExactScalar> State<T> {
    fn push(&mut self, class: PerfectClass<T>) -> usize {
        let idx = self.classes.len();
        self.buckets.entry(class.fingerprint.clone()).or_default().push(idx);
        self.classes.push(class);
        idx
    }

    fn find(&self, class: &PerfectClass<T>) -> Option<usize> {
        let bucket = self.buckets.get(&class.fingerprint)?;
        bucket
            .par_iter()
            .find_first(|&&j| are_equivalent(&self.classes[j], class))
            .copied()
    }

    fn checkpoint(&self, field: QuadraticField, n: usize) -> Checkpoint {
        Checkpoint {
            d: field.d(),
            n,
            forms: self
                .classes
                .iter()
                .map(|c| c.form.sym_coords().iter().map(to_fraction_string).collect())
                .collect(),
            explored: self.explored,
            facet_counts: self.facet_counts.clone(),
            edges: self.edges.clone(),
        }
    }

    fn restore(field: QuadraticField, n: usize, cp: &Checkpoint) -> Result<Self> {
        if cp.d != field.d() || cp.n != n {
            return Err(Error::Domain(format!("checkpoint is for d = {}, n = {}", cp.d, cp.n)));
        }
        if cp.explored > cp.forms.len() || cp.facet_counts.len() != cp.explored {
            return Err(Error::Domain("inconsistent checkpoint".into()));
        }
        let mut state = State {
            classes: Vec::new(),
            buckets: HashMap::new(),
            explored: cp.explored,
            facet_counts: cp.facet_counts.clone(),
            edges: cp.edges.clone(),
        };
        let classes = cp
            .forms
            .par_iter()
            .map(|coords| {
                let c = coords
                    .iter()
                    .map(|s| parse_fraction(s).ok_or_else(|| Error::Domain(format!("bad number {s:?}"))))
                    .collect::<Result<Vec<T>>>()?;
                PerfectClass::new(FormOverF::from_sym_coords(field, n, &c)?)
            })
            .collect::<Result<Vec<_>>>()?;
        for c in classes {
            state.push(c);
        }
        Ok(state)
    }
}

pub fn enumerate<T: ExactScalar>(
    field: QuadraticField,
    n: usize,
    config: &EnumerationConfig,
) -> Result<EnumerationResult<T>> {
    enumerate_resumable(field, n, config, None, |_| Ok(()))
}

/// Breadth-first enumeration of the perfect classes, optionally resumed from
/// a checkpoint. `on_checkpoint` runs after every batch.
///
/// Neighbors of a batch are computed in parallel; they are then merged in
/// (class, facet) order, so the output does not depend on the thread count
/// or the batch size.
pub fn enumerate_resumable<T: ExactScalar>(
    field: QuadraticField,
    n: usize,
    config: &EnumerationConfig,
    resume: Option<&Checkpoint>,
    mut on_checkpoint: impl FnMut(&Checkpoint) -> Result<()> + Send,
) -> Result<EnumerationResult<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.max(1))
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    pool.install(|| run(field, n, config, resume, &mut on_checkpoint))
}

fn run<T: ExactScalar>(
    field: QuadraticField,
    n: usize,
    config: &EnumerationConfig,
    resume: Option<&Checkpoint>,
    on_checkpoint: &mut (dyn FnMut(&Checkpoint) -> Result<()> + Send),
) -> Result<EnumerationResult<T>> {
    let mut state = match resume {
        Some(cp) => State::restore(field, n, cp)?,
        None => {
            let mut s = State {
                classes: Vec::new(),
                buckets: HashMap::new(),
                explored: 0,
                facet_counts: Vec::new(),
                edges: Vec::new(),
            };
            let seed = initial_perfect_form::<T>(field, n)?;
            let min = minimal_vectors(&seed.restriction_of_scalars())?.minimum;
            s.push(PerfectClass::new(seed.scale(&(T::one() / min)))?);
            s
        }
    };
    if state.classes.len() > config.class_cap {
        return Err(Error::Truncated { cap: config.class_cap });
    }

    while state.explored < state.classes.len() {
        let end = state.classes.len().min(state.explored + config.batch_size.max(1));
        let found: Vec<Result<Vec<PerfectClass<T>>>> = state.classes[state.explored..end]
            .par_iter()
            .map(|class| {
                let facets = class.facets()?;
                facets
                    .par_iter()
                    .map(|facet| PerfectClass::new(neighbor(class, facet)?))
                    .collect()
            })
            .collect();
        for (offset, neighbors) in found.into_iter().enumerate() {
            let from = state.explored + offset;
            let neighbors = neighbors?;
            state.facet_counts.push(neighbors.len());
            for (facet, cand) in neighbors.into_iter().enumerate() {
                let to = match state.find(&cand) {
                    Some(j) => j,
                    None => {
                        if state.classes.len() >= config.class_cap {
                            return Err(Error::Truncated { cap: config.class_cap });
                        }
                        state.push(cand)
                    }
                };
                state.edges.push(Edge { from, facet, to });
            }
        }
        state.explored = end;
        on_checkpoint(&state.checkpoint(field, n))?;
    }

    let galois_partners = state
        .classes
        .par_iter()
        .map(|c| {
            let conj = PerfectClass::new(c.form.conjugate())?;
            Ok(state.find(&conj))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(EnumerationResult {
        field,
        n,
        classes: state.classes,
        facet_counts: state.facet_counts,
        edges: state.edges,
        galois_partners,
    })
}
