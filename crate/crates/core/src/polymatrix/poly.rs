use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::{ComplexMatrix, C64, ONE};

/// Exponents `(i₁, …, i_m)` of one monomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentTuple(Vec<u32>);

impl ExponentTuple {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidInput(
                "exponent tuple must be non-empty".into(),
            ));
        }
        Ok(Self(exponents))
    }

    pub fn zero(arity: usize) -> Self {
        Self(vec![0; arity])
    }

    /// `x_var^power` in `arity` variables.
    pub fn unit(arity: usize, var: usize, power: u32) -> Self {
        let mut e = vec![0; arity];
        e[var] = power;
        Self(e)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Scalar monomial value `∏ point_s^{i_s}`, multiplied in variable order.
    pub fn weight(&self, point: &[C64]) -> C64 {
        self.0
            .iter()
            .zip(point)
            .fold(ONE, |acc, (&e, &z)| acc * z.powu(e))
    }

    /// All tuples of the given arity with total degree in `min..=max`, in ascending order.
    pub fn all_up_to(arity: usize, min: u32, max: u32) -> Vec<Self> {
        fn rec(arity: usize, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if prefix.len() == arity {
                out.push(prefix.clone());
                return;
            }
            for e in 0..=budget {
                prefix.push(e);
                rec(arity, budget - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(arity, max, &mut Vec::new(), &mut out);
        let mut tuples: Vec<Self> = out
            .into_iter()
            .map(Self)
            .filter(|t| t.total() >= min)
            .collect();
        tuples.sort();
        tuples
    }
}

impl fmt::Debug for ExponentTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Square-matrix-coefficient polynomial `Σ μ₁^{i₁}…μ_m^{i_m} A_{(i)}`.
///
/// Coefficients are `dim × dim`; terms are kept in exponent order and exact-zero
/// coefficients are dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPolynomial {
    arity: usize,
    dim: usize,
    terms: BTreeMap<ExponentTuple, ComplexMatrix>,
}

impl MatrixPolynomial {
    pub fn new(
        arity: usize,
        dim: usize,
        terms: impl IntoIterator<Item = (ExponentTuple, ComplexMatrix)>,
    ) -> Result<Self> {
        if arity == 0 || dim == 0 {
            return Err(Error::InvalidInput(
                "arity and dimension must be positive".into(),
            ));
        }
        let mut map = BTreeMap::new();
        for (exp, coef) in terms {
            if exp.arity() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: exp.arity(),
                });
            }
            if coef.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient for {exp:?} is {}x{}, expected {dim}x{dim}",
                    coef.rows(),
                    coef.cols()
                )));
            }
            if map.contains_key(&exp) {
                return Err(Error::InvalidInput(format!(
                    "duplicate exponent tuple {exp:?}"
                )));
            }
            map.insert(exp, coef);
        }
        map.retain(|_, c: &mut ComplexMatrix| c.frobenius() != 0.0);
        Ok(Self {
            arity,
            dim,
            terms: map,
        })
    }

    /// Univariate polynomial from ascending coefficients `A₀, A₁, …`.
    pub fn univariate(coefficients: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = coefficients.first().ok_or(Error::Empty)?.rows();
        Self::new(
            1,
            dim,
            coefficients
                .into_iter()
                .enumerate()
                .map(|(k, c)| (ExponentTuple::unit(1, 0, k as u32), c)),
        )
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentTuple, &ComplexMatrix)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exp: &ExponentTuple) -> Option<&ComplexMatrix> {
        self.terms.get(exp)
    }

    /// Largest `i₁ + … + i_m` over the stored terms; zero for a constant or empty polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(ExponentTuple::total)
            .max()
            .unwrap_or(0)
    }

    /// Highest power of one variable.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|e| e.as_slice()[var])
            .max()
            .unwrap_or(0)
    }

    /// Sum of coefficient Frobenius norms.
    pub fn coefficient_norm_sum(&self) -> f64 {
        self.terms.values().map(ComplexMatrix::frobenius).sum()
    }

    /// Backward-error scale at a point: `Σ |∏ point^i|·‖A_{(i)}‖_F`.
    pub fn scale_at(&self, point: &[C64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| e.weight(point).norm() * c.frobenius())
            .sum()
    }

    pub fn evaluate(&self, point: &[C64]) -> Result<ComplexMatrix> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: point.len(),
            });
        }
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for (exp, coef) in &self.terms {
            acc = &acc + &coef.scale(exp.weight(point));
        }
        Ok(acc)
    }

    /// Univariate slice in variable `pivot`, with every other variable fixed.
    ///
    /// `fixed` lists the values of the remaining variables in their original order.
    pub fn fix_all_but(&self, pivot: usize, fixed: &[C64]) -> Result<MatrixPolynomial> {
        if pivot >= self.arity {
            return Err(Error::InvalidInput(format!(
                "pivot {pivot} out of range for arity {}",
                self.arity
            )));
        }
        if fixed.len() + 1 != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity - 1,
                found: fixed.len(),
            });
        }
        let point = merge_point(pivot, ONE, fixed);
        let mut slice: BTreeMap<ExponentTuple, ComplexMatrix> = BTreeMap::new();
        for (exp, coef) in &self.terms {
            let k = exp.as_slice()[pivot];
            let mut rest = exp.clone();
            rest.0[pivot] = 0;
            let term = coef.scale(rest.weight(&point));
            let key = ExponentTuple::unit(1, 0, k);
            let entry = slice
                .entry(key)
                .or_insert_with(|| ComplexMatrix::zeros(self.dim, self.dim));
            *entry = &*entry + &term;
        }
        Self::new(1, self.dim, slice)
    }

    /// Same exponents, every coefficient transposed.
    pub fn transpose_coefficients(&self) -> MatrixPolynomial {
        Self {
            arity: self.arity,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.transpose()))
                .collect(),
        }
    }

    /// Derivative with respect to the single variable of a univariate polynomial.
    pub(crate) fn derivative_univariate(&self) -> MatrixPolynomial {
        debug_assert_eq!(self.arity, 1);
        Self {
            arity: 1,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.as_slice()[0] > 0)
                .map(|(e, c)| {
                    let k = e.as_slice()[0];
                    (
                        ExponentTuple::unit(1, 0, k - 1),
                        c.scale(C64::new(f64::from(k), 0.0)),
                    )
                })
                .collect(),
        }
    }
}

/// Full point from a pivot value and the remaining fixed values.
pub fn merge_point(pivot: usize, value: C64, fixed: &[C64]) -> Vec<C64> {
    let mut point = Vec::with_capacity(fixed.len() + 1);
    point.extend_from_slice(&fixed[..pivot]);
    point.push(value);
    point.extend_from_slice(&fixed[pivot..]);
    point
}

pub fn total_degree(p: &MatrixPolynomial) -> u32 {
    p.total_degree()
}
