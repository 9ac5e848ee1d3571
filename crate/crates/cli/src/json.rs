//! JSON records. Rationals are written as `"num/den"` strings so that no
//! precision is lost.

use perfect_forms::formspace::LatticeVector;
use perfect_forms::scalar::{parse_fraction, to_fraction_string};
use perfect_forms::voronoi::Fingerprint;
use perfect_forms::{EnumerationResult, FieldElement, FormOverF, QuadraticField, Rational};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub d: i64,
    #[serde(rename = "D")]
    pub discriminant: i64,
}

impl FieldJson {
    pub fn of(field: QuadraticField) -> Self {
        FieldJson {
            d: field.d(),
            discriminant: field.discriminant(),
        }
    }

    pub fn field(&self) -> Result<QuadraticField, CliError> {
        field_from_d(self.d)
    }
}

pub fn field_from_d(d: i64) -> Result<QuadraticField, CliError> {
    if d == 1 {
        Ok(QuadraticField::rational())
    } else {
        QuadraticField::new(d).map_err(|e| CliError::Usage(e.to_string()))
    }
}

/// `a + b w` in the integral basis `{1, w}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub a: String,
    pub b: String,
}

impl ElementJson {
    pub fn of(x: &FieldElement) -> Self {
        ElementJson {
            a: to_fraction_string(x.a()),
            b: to_fraction_string(x.b()),
        }
    }

    pub fn element(&self, field: QuadraticField) -> Result<FieldElement, CliError> {
        let a = parse_number(&self.a)?;
        let b = parse_number(&self.b)?;
        if field.is_rational() && b != Rational::from_integer(0.into()) {
            return Err(CliError::Usage(format!("rational entry with b = {}", self.b)));
        }
        Ok(field.element(a, b))
    }
}

pub fn parse_number(s: &str) -> Result<Rational, CliError> {
    parse_fraction(s).ok_or_else(|| CliError::Usage(format!("not a rational number: {s:?}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub field: FieldJson,
    pub n: usize,
    pub entries: Vec<Vec<ElementJson>>,
}

impl FormJson {
    pub fn of(form: &FormOverF) -> Self {
        FormJson {
            field: FieldJson::of(form.field()),
            n: form.n(),
            entries: form
                .rows()
                .iter()
                .map(|r| r.iter().map(ElementJson::of).collect())
                .collect(),
        }
    }

    pub fn form(&self) -> Result<FormOverF, CliError> {
        let field = self.field.field()?;
        if self.entries.len() != self.n || self.entries.iter().any(|r| r.len() != self.n) {
            return Err(CliError::Usage(format!("form entries are not {0}x{0}", self.n)));
        }
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|x| x.element(field)).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        FormOverF::new(field, rows).map_err(|e| CliError::Usage(e.to_string()))
    }
}

/// A minimal vector as a list of `O`-coordinates, one element per entry.
pub fn vector_json(field: QuadraticField, v: &LatticeVector) -> Vec<ElementJson> {
    perfect_forms::formspace::lattice_elements::<Rational>(field, v)
        .iter()
        .map(ElementJson::of)
        .collect()
}

pub fn fingerprint_digest(fp: &Fingerprint<Rational>) -> String {
    let digest = Sha256::digest(fp.canonical_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub index: usize,
    pub form: FormJson,
    pub min_vectors: Vec<Vec<ElementJson>>,
    pub num_min_vectors: usize,
    pub fingerprint: String,
    pub num_facets: usize,
    pub galois_partner: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassesFile {
    pub field: FieldJson,
    pub normalization: String,
    pub classes: Vec<ClassJson>,
    pub adjacency: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjacencyFile {
    pub field: FieldJson,
    pub num_classes: usize,
    pub facet_counts: Vec<usize>,
    pub edges: Vec<[usize; 3]>,
}

pub fn classes_file(res: &EnumerationResult) -> ClassesFile {
    let classes = res
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| ClassJson {
            index: i,
            form: FormJson::of(&c.form),
            min_vectors: c.minimal.vectors.iter().map(|v| vector_json(res.field, v)).collect(),
            num_min_vectors: c.minimal.len(),
            fingerprint: fingerprint_digest(&c.fingerprint),
            num_facets: res.facet_counts[i],
            galois_partner: res.galois_partners[i],
        })
        .collect();
    ClassesFile {
        field: FieldJson::of(res.field),
        normalization: "min=1".into(),
        classes,
        adjacency: edges(res),
    }
}

pub fn adjacency_file(res: &EnumerationResult) -> AdjacencyFile {
    AdjacencyFile {
        field: FieldJson::of(res.field),
        num_classes: res.num_classes(),
        facet_counts: res.facet_counts.clone(),
        edges: edges(res),
    }
}

fn edges(res: &EnumerationResult) -> Vec<[usize; 3]> {
    res.edges.iter().map(|e| [e.from, e.facet, e.to]).collect()
}

/// Pretty JSON with a trailing newline.
pub fn render<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use perfect_forms::seed::initial_perfect_form;

    #[test]
    fn form_roundtrip() {
        for d in [1, 2, 5, 13, 57] {
            let field = field_from_d(d).unwrap();
            let form = initial_perfect_form::<Rational>(field, 2).unwrap();
            let json = FormJson::of(&form);
            let text = render(&json).unwrap();
            let back: FormJson = serde_json::from_str(&text).unwrap();
            assert_eq!(back, json);
            assert_eq!(back.form().unwrap(), form);
        }
    }

    #[test]
    fn element_strings() {
        let f = field_from_d(5).unwrap();
        let x = f.from_sqrt_coords(Rational::new(1.into(), 2.into()), Rational::new((-1).into(), 10.into()));
        let j = ElementJson::of(&x);
        assert_eq!((j.a.as_str(), j.b.as_str()), ("3/5", "-1/5"));
        assert_eq!(j.element(f).unwrap(), x);
        let bad = ElementJson {
            a: "1/0".into(),
            b: "0".into(),
        };
        assert!(bad.element(f).is_err());
    }

    #[test]
    fn rejects_bad_field() {
        assert!(field_from_d(12).is_err());
        assert!(field_from_d(0).is_err());
    }
}
