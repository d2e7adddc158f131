use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};

/// Complex double, the only scalar type used throughout the crate.
pub type C64 = Complex<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<C64>,
}

/// Dense complex vector with at least one finite entry.
#[derive(Clone, PartialEq)]
pub struct ComplexVector {
    inner: DVector<C64>,
}

fn check_finite(m: &DMatrix<C64>) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Self::from_na(DMatrix::from_row_slice(rows, cols, &entries))
    }

    /// Row-major real entries, promoted to complex.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&x| C64::new(x, 0.0)).collect(),
        )
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return Err(Error::DimensionMismatch(format!(
                "row {bad} has {} entries, expected {c}",
                rows[bad].len()
            )));
        }
        Self::new(r, c, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_na(inner: DMatrix<C64>) -> Result<Self> {
        if inner.nrows() == 0 || inner.ncols() == 0 {
            return Err(Error::Empty);
        }
        check_finite(&inner)?;
        Ok(Self { inner })
    }

    /// Wraps a matrix produced by arithmetic on already-validated inputs.
    pub(crate) fn wrap(inner: DMatrix<C64>) -> Self {
        debug_assert!(inner.nrows() > 0 && inner.ncols() > 0);
        Self { inner }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::wrap(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self::wrap(DMatrix::identity(n, n))
    }

    pub fn diag(values: &[C64]) -> Self {
        Self::wrap(DMatrix::from_diagonal(&DVector::from_column_slice(values)))
    }

    pub fn real_diag(values: &[f64]) -> Self {
        let v: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self> {
        let first = columns.first().ok_or(Error::Empty)?;
        let n = first.len();
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        let cols: Vec<DVector<C64>> = columns.iter().map(|c| c.inner.clone()).collect();
        Ok(Self::wrap(DMatrix::from_columns(&cols)))
    }

    /// Matrix whose rows carry the entries of the given vectors.
    pub fn from_row_vectors(rows: &[ComplexVector]) -> Result<Self> {
        Ok(Self::from_columns(rows)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.inner.shape()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.inner[(i, j)]
    }

    pub fn as_na(&self) -> &DMatrix<C64> {
        &self.inner
    }

    pub fn into_na(self) -> DMatrix<C64> {
        self.inner
    }

    pub fn transpose(&self) -> Self {
        Self::wrap(self.inner.transpose())
    }

    pub fn adjoint(&self) -> Self {
        Self::wrap(self.inner.adjoint())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::wrap(&self.inner * s)
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::wrap(self.inner.column(j).into_owned())
    }

    /// Row `i` as a vector of its entries (no conjugation).
    pub fn row(&self, i: usize) -> ComplexVector {
        ComplexVector::wrap(self.inner.row(i).transpose())
    }

    pub fn diagonal(&self) -> Vec<C64> {
        self.inner.diagonal().iter().copied().collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.inner[(i, j)]).collect())
            .collect()
    }

    pub fn frobenius(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// True when every entry has integer real and imaginary parts.
    pub fn is_gaussian_integer(&self) -> bool {
        self.inner
            .iter()
            .all(|z| z.re.fract() == 0.0 && z.im.fract() == 0.0)
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> ComplexVector {
        ComplexVector::wrap(&self.inner * &v.inner)
    }

    /// Row vector times matrix, `v · self`, returned as entries.
    pub fn vec_mul(&self, v: &ComplexVector) -> ComplexVector {
        ComplexVector::wrap((v.inner.transpose() * &self.inner).transpose())
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.rows());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{:?}", self.to_rows())
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::wrap(&self.inner + &rhs.inner)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::wrap(&self.inner - &rhs.inner)
    }
}

/// Panics on incompatible shapes; use [`matmul`] for a checked product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::wrap(&self.inner * &rhs.inner)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix::wrap(-&self.inner)
    }
}

/// Checked matrix product.
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(a * b)
}

pub fn frobenius(m: &ComplexMatrix) -> f64 {
    m.frobenius()
}

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(i) = entries
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { row: i, col: 0 });
        }
        Ok(Self {
            inner: DVector::from_vec(entries),
        })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub(crate) fn wrap(inner: DVector<C64>) -> Self {
        Self { inner }
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn get(&self, i: usize) -> C64 {
        self.inner[i]
    }

    pub fn entries(&self) -> Vec<C64> {
        self.inner.iter().copied().collect()
    }

    pub fn as_na(&self) -> &DVector<C64> {
        &self.inner
    }

    pub fn norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            self.clone()
        } else {
            Self::wrap(&self.inner / C64::new(n, 0.0))
        }
    }

    pub fn conj(&self) -> Self {
        Self::wrap(self.inner.map(|z| z.conj()))
    }

    /// Unconjugated bilinear product `Σ self_i · other_i`.
    pub fn dot(&self, other: &ComplexVector) -> C64 {
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| a * b)
            .sum()
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexVector{:?}", self.entries())
    }
}

fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return 0.0;
    }
    // 12 significant digits
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Sort key for complex values: (real, imaginary) each rounded to 12 significant digits.
pub fn order_key(z: C64) -> (f64, f64) {
    (round_sig(z.re), round_sig(z.im))
}

pub fn cmp_complex(a: &C64, b: &C64) -> Ordering {
    let (ka, kb) = (order_key(*a), order_key(*b));
    ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
}
