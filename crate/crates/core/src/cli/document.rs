//! JSON interchange: equation and solution documents.

use std::io;

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::numeric::{ComplexMatrix, C64};
use crate::polymatrix::{ExponentTuple, MatrixPolynomial, VarietyPoint};
use crate::solver::{Orientation, SandwichSlots, SolutionFamily, Solutions, StructuredEquation};

/// `[re, im]`.
pub type ComplexDoc = [f64; 2];
/// Row-major nested rows of `[re, im]` pairs.
pub type MatrixDoc = Vec<Vec<ComplexDoc>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrientationTag {
    Left,
    Right,
    Sandwich,
}

impl From<Orientation> for OrientationTag {
    fn from(o: Orientation) -> Self {
        match o {
            Orientation::UnknownsLeft => OrientationTag::Left,
            Orientation::UnknownsRight => OrientationTag::Right,
            Orientation::SandwichBivariate => OrientationTag::Sandwich,
        }
    }
}

impl From<OrientationTag> for Orientation {
    fn from(o: OrientationTag) -> Self {
        match o {
            OrientationTag::Left => Orientation::UnknownsLeft,
            OrientationTag::Right => Orientation::UnknownsRight,
            OrientationTag::Sandwich => Orientation::SandwichBivariate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDocument {
    pub exponents: Vec<u32>,
    pub coefficient: MatrixDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotsDocument {
    #[serde(rename = "A")]
    pub a: MatrixDoc,
    #[serde(rename = "B")]
    pub b: MatrixDoc,
    #[serde(rename = "C")]
    pub c: MatrixDoc,
    #[serde(rename = "D")]
    pub d: MatrixDoc,
    #[serde(rename = "E")]
    pub e: MatrixDoc,
    #[serde(rename = "F")]
    pub f: MatrixDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationDocument {
    pub dimension: usize,
    pub arity: usize,
    pub orientation: OrientationTag,
    #[serde(default)]
    pub terms: Vec<TermDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sandwich_slots: Option<SlotsDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDocument {
    pub eigenvalues: Vec<Vec<ComplexDoc>>,
    pub transform: MatrixDoc,
    pub unknowns: Vec<MatrixDoc>,
    pub residual: f64,
    pub transform_condition: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticDocument {
    pub class_or_attempt: String,
    pub failure: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDocument {
    pub families: Vec<FamilyDocument>,
    #[serde(default)]
    pub diagnostics: Vec<DiagnosticDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointDocument {
    pub values: Vec<ComplexDoc>,
    pub null_vector: Vec<ComplexDoc>,
    pub side: String,
    pub det_residual: f64,
    pub null_residual: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarietyDocument {
    pub points: Vec<PointDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootDocument {
    pub value: ComplexDoc,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetPolyDocument {
    pub coefficients: Vec<ComplexDoc>,
    pub roots: Vec<RootDocument>,
}

pub fn complex_doc(z: C64) -> ComplexDoc {
    [z.re, z.im]
}

pub fn matrix_doc(m: &ComplexMatrix) -> MatrixDoc {
    m.to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(complex_doc).collect())
        .collect()
}

/// Parses a `dim × dim` matrix, naming `path` in every error.
pub fn matrix_from_doc(doc: &MatrixDoc, dim: usize, path: &str) -> Result<ComplexMatrix, String> {
    if doc.len() != dim {
        return Err(format!("{path}: expected {dim} rows, got {}", doc.len()));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for (i, row) in doc.iter().enumerate() {
        if row.len() != dim {
            return Err(format!(
                "{path}[{i}]: expected {dim} entries, got {}",
                row.len()
            ));
        }
        entries.extend(row.iter().map(|&[re, im]| C64::new(re, im)));
    }
    ComplexMatrix::new(dim, dim, entries).map_err(|e| format!("{path}: {e}"))
}

impl EquationDocument {
    pub fn from_equation(eq: &StructuredEquation) -> Self {
        let orientation = OrientationTag::from(eq.orientation());
        if let Some(s) = eq.sandwich_slots() {
            return Self {
                dimension: eq.dim(),
                arity: eq.arity(),
                orientation,
                terms: Vec::new(),
                sandwich_slots: Some(SlotsDocument {
                    a: matrix_doc(&s.a),
                    b: matrix_doc(&s.b),
                    c: matrix_doc(&s.c),
                    d: matrix_doc(&s.d),
                    e: matrix_doc(&s.e),
                    f: matrix_doc(&s.f),
                }),
            };
        }
        Self {
            dimension: eq.dim(),
            arity: eq.arity(),
            orientation,
            terms: eq
                .poly()
                .terms()
                .map(|(e, c)| TermDocument {
                    exponents: e.as_slice().to_vec(),
                    coefficient: matrix_doc(c),
                })
                .collect(),
            sandwich_slots: None,
        }
    }

    pub fn to_equation(&self) -> Result<StructuredEquation, String> {
        let n = self.dimension;
        if n == 0 {
            return Err("dimension: must be at least 1".into());
        }
        if self.arity == 0 {
            return Err("arity: must be at least 1".into());
        }
        let orientation = Orientation::from(self.orientation);
        if let Some(slots) = &self.sandwich_slots {
            if orientation != Orientation::SandwichBivariate {
                return Err("sandwich_slots: only allowed with orientation \"sandwich\"".into());
            }
            if !self.terms.is_empty() {
                return Err("terms: must be empty when sandwich_slots is given".into());
            }
            if self.arity != 2 {
                return Err(format!(
                    "arity: sandwich equations have arity 2, got {}",
                    self.arity
                ));
            }
            let named = [
                ("A", &slots.a),
                ("B", &slots.b),
                ("C", &slots.c),
                ("D", &slots.d),
                ("E", &slots.e),
                ("F", &slots.f),
            ];
            let mut mats = Vec::with_capacity(6);
            for (name, m) in named {
                mats.push(matrix_from_doc(m, n, &format!("sandwich_slots.{name}"))?);
            }
            let slots = SandwichSlots::from_array(mats.try_into().expect("six slots"));
            return StructuredEquation::sandwich(slots).map_err(|e| e.to_string());
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (t, term) in self.terms.iter().enumerate() {
            if term.exponents.len() != self.arity {
                return Err(format!(
                    "terms[{t}].exponents: expected {} entries, got {}",
                    self.arity,
                    term.exponents.len()
                ));
            }
            let exp = ExponentTuple::new(term.exponents.clone())
                .map_err(|e| format!("terms[{t}].exponents: {e}"))?;
            if terms.iter().any(|(e, _)| *e == exp) {
                return Err(format!("terms[{t}].exponents: duplicate monomial"));
            }
            terms.push((
                exp,
                matrix_from_doc(&term.coefficient, n, &format!("terms[{t}].coefficient"))?,
            ));
        }
        let poly =
            MatrixPolynomial::new(self.arity, n, terms).map_err(|e| format!("terms: {e}"))?;
        StructuredEquation::new(poly, orientation).map_err(|e| format!("orientation: {e}"))
    }
}

impl FamilyDocument {
    pub fn from_family(f: &SolutionFamily) -> Self {
        Self {
            eigenvalues: f
                .eigenvalues
                .iter()
                .map(|list| list.iter().map(|z| complex_doc(*z)).collect())
                .collect(),
            transform: matrix_doc(&f.transform),
            unknowns: f.unknowns.iter().map(matrix_doc).collect(),
            residual: f.residual,
            transform_condition: f.transform_condition,
        }
    }

    /// Unknown matrices, checked against the equation's dimension and arity.
    pub fn unknowns(
        &self,
        dim: usize,
        arity: usize,
        path: &str,
    ) -> Result<Vec<ComplexMatrix>, String> {
        if self.unknowns.len() != arity {
            return Err(format!(
                "{path}.unknowns: expected {arity} matrices, got {}",
                self.unknowns.len()
            ));
        }
        self.unknowns
            .iter()
            .enumerate()
            .map(|(s, m)| matrix_from_doc(m, dim, &format!("{path}.unknowns[{s}]")))
            .collect()
    }
}

impl SolutionDocument {
    pub fn from_solutions(s: &Solutions) -> Self {
        Self {
            families: s.families.iter().map(FamilyDocument::from_family).collect(),
            diagnostics: s
                .diagnostics
                .iter()
                .map(|d| DiagnosticDocument {
                    class_or_attempt: d.label.clone(),
                    failure: d.failure.to_string(),
                })
                .collect(),
        }
    }
}

impl PointDocument {
    pub fn from_point(p: &VarietyPoint) -> Self {
        Self {
            values: p.values.entries().into_iter().map(complex_doc).collect(),
            null_vector: p
                .null_vector
                .entries()
                .into_iter()
                .map(complex_doc)
                .collect(),
            side: p.side.to_string(),
            det_residual: p.det_residual,
            null_residual: p.null_residual,
            scale: p.scale,
        }
    }
}

/// Pretty printing with every float written to 17 significant digits.
struct FullPrecision<'a>(PrettyFormatter<'a>);

impl Formatter for FullPrecision<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut out, FullPrecision(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .expect("documents always serialize");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

/// Parses JSON, reporting the path of the offending field on failure.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, String> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            e.inner().to_string()
        } else {
            format!("{path}: {}", e.inner())
        }
    })?;
    de.end().map_err(|e| e.to_string())?;
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic() -> StructuredEquation {
        StructuredEquation::left(
            MatrixPolynomial::univariate(vec![
                ComplexMatrix::from_real(1, 1, &[2.0]).unwrap(),
                ComplexMatrix::from_real(1, 1, &[-3.0]).unwrap(),
                ComplexMatrix::identity(1),
            ])
            .unwrap(),
        )
    }

    #[test]
    fn equation_round_trip() {
        let doc = EquationDocument::from_equation(&quadratic());
        let text = to_json(&doc);
        let back: EquationDocument = from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_equation().unwrap(), quadratic());
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn floats_keep_seventeen_digits() {
        let text = to_json(&[0.1f64, 1.0 / 3.0, -2.5e-300]);
        assert!(text.contains("1.0000000000000001e-1"));
        assert!(text.contains("3.3333333333333331e-1"));
        let back: Vec<f64> = from_json(&text).unwrap();
        assert_eq!(back, vec![0.1, 1.0 / 3.0, -2.5e-300]);
    }

    #[test]
    fn errors_name_the_field() {
        let text = r#"{"dimension": 1, "arity": 1, "orientation": "left",
            "terms": [{"exponents": [0], "coefficient": [[[1.0, "x"]]]}]}"#;
        let err = from_json::<EquationDocument>(text).unwrap_err();
        assert!(err.starts_with("terms[0].coefficient[0][0]"), "{err}");

        let text = r#"{"dimension": 2, "arity": 1, "orientation": "left",
            "terms": [{"exponents": [0], "coefficient": [[[1.0, 0.0]]]}]}"#;
        let doc: EquationDocument = from_json(text).unwrap();
        let err = doc.to_equation().unwrap_err();
        assert!(err.starts_with("terms[0].coefficient"), "{err}");

        let text = r#"{"dimension": 1, "arity": 1, "orientation": "upward", "terms": []}"#;
        assert!(from_json::<EquationDocument>(text)
            .unwrap_err()
            .starts_with("orientation"));
    }
}
