use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numeric::{ComplexMatrix, Side};
use crate::polymatrix::{ExponentTuple, MatrixPolynomial};

/// Placement of the unknown matrices relative to the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `Σ X₁^{i₁}…X_m^{i_m} A_{(i)} = 0`
    UnknownsLeft,
    /// `Σ A_{(i)} X₁^{i₁}…X_m^{i_m} = 0`
    UnknownsRight,
    /// `XAX + YBY + XCY + XD + YE + F = 0`
    SandwichBivariate,
}

impl Orientation {
    /// Side on which shared eigenvectors annihilate the evaluated polynomial.
    pub fn null_side(self) -> Option<Side> {
        match self {
            Orientation::UnknownsLeft => Some(Side::Left),
            Orientation::UnknownsRight => Some(Side::Right),
            Orientation::SandwichBivariate => None,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::UnknownsLeft => "left",
            Orientation::UnknownsRight => "right",
            Orientation::SandwichBivariate => "sandwich",
        })
    }
}

impl FromStr for Orientation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Orientation::UnknownsLeft),
            "right" => Ok(Orientation::UnknownsRight),
            "sandwich" => Ok(Orientation::SandwichBivariate),
            other => Err(Error::InvalidOrientation(other.to_string())),
        }
    }
}

/// Slot names of the sandwich template and the exponent `(x, y)` each one is stored under.
pub const SANDWICH_SLOTS: [(&str, [u32; 2]); 6] = [
    ("A", [2, 0]),
    ("B", [0, 2]),
    ("C", [1, 1]),
    ("D", [1, 0]),
    ("E", [0, 1]),
    ("F", [0, 0]),
];

/// Named coefficients `A..F` of `XAX + YBY + XCY + XD + YE + F`.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichSlots {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub c: ComplexMatrix,
    pub d: ComplexMatrix,
    pub e: ComplexMatrix,
    pub f: ComplexMatrix,
}

impl SandwichSlots {
    /// Slots in template order `A, B, C, D, E, F`.
    pub fn as_array(&self) -> [&ComplexMatrix; 6] {
        [&self.a, &self.b, &self.c, &self.d, &self.e, &self.f]
    }

    pub fn from_array(slots: [ComplexMatrix; 6]) -> Self {
        let [a, b, c, d, e, f] = slots;
        Self { a, b, c, d, e, f }
    }
}

/// A matrix polynomial together with the placement of its unknowns.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredEquation {
    poly: MatrixPolynomial,
    orientation: Orientation,
}

impl StructuredEquation {
    pub fn new(poly: MatrixPolynomial, orientation: Orientation) -> Result<Self> {
        if orientation == Orientation::SandwichBivariate {
            if poly.arity() != 2 {
                return Err(Error::InvalidOrientation(format!(
                    "sandwich form needs two unknowns, got {}",
                    poly.arity()
                )));
            }
            let allowed: Vec<ExponentTuple> = SANDWICH_SLOTS
                .iter()
                .map(|(_, e)| ExponentTuple::new(e.to_vec()).expect("non-empty"))
                .collect();
            if let Some((e, _)) = poly.terms().find(|(e, _)| !allowed.contains(e)) {
                return Err(Error::InvalidOrientation(format!(
                    "term {e:?} is not one of the sandwich slots"
                )));
            }
        }
        Ok(Self { poly, orientation })
    }

    pub fn left(poly: MatrixPolynomial) -> Self {
        Self {
            poly,
            orientation: Orientation::UnknownsLeft,
        }
    }

    pub fn right(poly: MatrixPolynomial) -> Self {
        Self {
            poly,
            orientation: Orientation::UnknownsRight,
        }
    }

    pub fn sandwich(slots: SandwichSlots) -> Result<Self> {
        let dim = slots.a.rows();
        let terms = SANDWICH_SLOTS
            .iter()
            .zip(slots.as_array())
            .map(|((_, e), m)| {
                (
                    ExponentTuple::new(e.to_vec()).expect("non-empty"),
                    m.clone(),
                )
            });
        let poly = MatrixPolynomial::new(2, dim, terms)?;
        Self::new(poly, Orientation::SandwichBivariate)
    }

    pub fn poly(&self) -> &MatrixPolynomial {
        &self.poly
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn arity(&self) -> usize {
        self.poly.arity()
    }

    /// Sandwich slots (absent slots read as zero); `None` for other orientations.
    pub fn sandwich_slots(&self) -> Option<SandwichSlots> {
        if self.orientation != Orientation::SandwichBivariate {
            return None;
        }
        let n = self.dim();
        let slots = SANDWICH_SLOTS.map(|(_, e)| {
            let key = ExponentTuple::new(e.to_vec()).expect("non-empty");
            self.poly
                .coefficient(&key)
                .cloned()
                .unwrap_or_else(|| ComplexMatrix::zeros(n, n))
        });
        Some(SandwichSlots::from_array(slots))
    }

    /// Flips left/right orientation and transposes every coefficient; `X` solves the original
    /// iff `Xᵀ` solves the result.
    pub fn transposed(&self) -> Result<Self> {
        let orientation = match self.orientation {
            Orientation::UnknownsLeft => Orientation::UnknownsRight,
            Orientation::UnknownsRight => Orientation::UnknownsLeft,
            Orientation::SandwichBivariate => {
                return Err(Error::InvalidOrientation(
                    "sandwich equations have no transposed dual here".into(),
                ))
            }
        };
        Ok(Self {
            poly: self.poly.transpose_coefficients(),
            orientation,
        })
    }

    fn check_unknowns(&self, unknowns: &[ComplexMatrix]) -> Result<()> {
        if unknowns.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: unknowns.len(),
            });
        }
        let n = self.dim();
        if let Some((s, x)) = unknowns
            .iter()
            .enumerate()
            .find(|(_, x)| x.shape() != (n, n))
        {
            return Err(Error::DimensionMismatch(format!(
                "unknown {s} is {}x{}, expected {n}x{n}",
                x.rows(),
                x.cols()
            )));
        }
        Ok(())
    }

    /// Left-hand side evaluated at matrix values of the unknowns.
    pub fn lhs(&self, unknowns: &[ComplexMatrix]) -> Result<ComplexMatrix> {
        self.check_unknowns(unknowns)?;
        let n = self.dim();
        if let Some(s) = self.sandwich_slots() {
            let (x, y) = (&unknowns[0], &unknowns[1]);
            let mut acc = &(&(x * &s.a) * x) + &(&(y * &s.b) * y);
            acc = &acc + &(&(x * &s.c) * y);
            acc = &acc + &(x * &s.d);
            acc = &acc + &(y * &s.e);
            return Ok(&acc + &s.f);
        }
        let powers: Vec<Vec<ComplexMatrix>> = unknowns
            .iter()
            .enumerate()
            .map(|(s, x)| {
                let top = self.poly.degree_in(s);
                let mut pows = vec![ComplexMatrix::identity(n)];
                for k in 1..=top as usize {
                    let next = &pows[k - 1] * x;
                    pows.push(next);
                }
                pows
            })
            .collect();
        let mut acc = ComplexMatrix::zeros(n, n);
        for (exp, coef) in self.poly.terms() {
            let mut monomial = ComplexMatrix::identity(n);
            for (s, &e) in exp.as_slice().iter().enumerate() {
                if e > 0 {
                    monomial = &monomial * &powers[s][e as usize];
                }
            }
            let term = match self.orientation {
                Orientation::UnknownsLeft => &monomial * coef,
                _ => coef * &monomial,
            };
            acc = &acc + &term;
        }
        Ok(acc)
    }
}
