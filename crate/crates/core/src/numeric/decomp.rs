use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SVD};

use super::matrix::{cmp_complex, ComplexMatrix, ComplexVector, C64, ONE, ZERO};
use super::schur::schur;
use crate::error::{Error, Result};

/// Default rank tolerance, relative to the largest singular value.
pub const DEFAULT_TOL_RANK: f64 = 1e-10;

/// Which side a null vector multiplies from.
///
/// `Right` vectors satisfy `m·v = 0`; `Left` vectors are rows with `v·m = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(Error::InvalidInput(format!("unknown side '{other}'"))),
        }
    }
}

fn require_square(m: &ComplexMatrix) -> Result<usize> {
    if m.is_square() {
        Ok(m.rows())
    } else {
        Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let svd = SVD::new(m.as_na().clone(), false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Two-norm condition number; infinite for a singular matrix.
pub fn condition(m: &ComplexMatrix) -> f64 {
    let s = singular_values(m);
    let (max, min) = (s[0], s[s.len() - 1]);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

pub fn determinant(m: &ComplexMatrix) -> Result<C64> {
    require_square(m)?;
    Ok(m.as_na().clone().lu().determinant())
}

/// Inverse together with its estimated two-norm condition number.
pub fn inverse(m: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    inverse_with_tol(m, DEFAULT_TOL_RANK)
}

pub fn inverse_with_tol(m: &ComplexMatrix, tol_rank: f64) -> Result<(ComplexMatrix, f64)> {
    require_square(m)?;
    let s = singular_values(m);
    let (max, min) = (s[0], s[s.len() - 1]);
    let cond = if min == 0.0 { f64::INFINITY } else { max / min };
    if max == 0.0 || min <= tol_rank * max {
        return Err(Error::SingularMatrix { condition: cond });
    }
    let inv = m
        .as_na()
        .clone()
        .lu()
        .try_inverse()
        .ok_or(Error::SingularMatrix { condition: cond })?;
    Ok((ComplexMatrix::from_na(inv)?, cond))
}

/// Solves `a·x = b` for square nonsingular `a`.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = require_square(a)?;
    if b.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} rows, expected {n}",
            b.rows()
        )));
    }
    let x = a
        .as_na()
        .clone()
        .lu()
        .solve(b.as_na())
        .ok_or(Error::SingularMatrix {
            condition: f64::INFINITY,
        })?;
    ComplexMatrix::from_na(x)
}

/// Eigenvalues only, sorted by [`cmp_complex`].
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    require_square(m)?;
    let (_, t) = schur(m.as_na(), false)?;
    let mut values: Vec<C64> = t.diagonal().iter().copied().collect();
    values.sort_by(cmp_complex);
    Ok(values)
}

/// Eigenvalues with unit right eigenvectors as columns, sorted by [`cmp_complex`].
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: ComplexVector,
    pub vectors: ComplexMatrix,
}

/// Eigendecomposition via complex Schur form and triangular back-substitution.
pub fn eigen(m: &ComplexMatrix) -> Result<Eigen> {
    let n = require_square(m)?;
    let (q, t) = schur(m.as_na(), true)?;
    let t_norm = t.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let small = if t_norm == 0.0 {
        1.0
    } else {
        f64::EPSILON * t_norm
    };

    let mut pairs: Vec<(C64, DVector<C64>)> = (0..n)
        .map(|k| {
            let lambda = t[(k, k)];
            let mut y = DVector::from_element(n, ZERO);
            y[k] = ONE;
            for i in (0..k).rev() {
                let s: C64 = ((i + 1)..=k).map(|l| t[(i, l)] * y[l]).sum();
                let mut denom = t[(i, i)] - lambda;
                if denom.norm() < small {
                    denom = C64::new(small, 0.0);
                }
                y[i] = -s / denom;
            }
            let v = &q * y;
            let norm = v.norm();
            (lambda, v / C64::new(norm, 0.0))
        })
        .collect();
    pairs.sort_by(|a, b| cmp_complex(&a.0, &b.0));

    let values = ComplexVector::new(pairs.iter().map(|p| p.0).collect())?;
    let cols: Vec<DVector<C64>> = pairs.into_iter().map(|p| p.1).collect();
    let vectors = ComplexMatrix::from_na(DMatrix::from_columns(&cols))?;
    Ok(Eigen { values, vectors })
}

/// Singular directions on the requested side, sorted by ascending singular value.
///
/// The returned vectors form an orthonormal basis of the whole space (length `cols` for `Right`,
/// `rows` for `Left`); singular values beyond the matrix rank are reported as zero.
pub fn singular_directions(m: &ComplexMatrix, side: Side) -> (Vec<f64>, Vec<ComplexVector>) {
    let a = match side {
        Side::Right => m.as_na().clone(),
        Side::Left => m.as_na().adjoint(),
    };
    let (rows, cols) = a.shape();
    let a = if rows < cols {
        let mut padded = DMatrix::from_element(cols, cols, ZERO);
        padded.view_mut((0, 0), (rows, cols)).copy_from(&a);
        padded
    } else {
        a
    };
    let svd = SVD::new(a, false, true);
    let v_t = svd.v_t.expect("requested V");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));

    let sigmas = order.iter().map(|&i| svd.singular_values[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| {
            // row i of V^H is v_i^H; a right vector is its conjugate, a left row vector
            // (entries of u^H with m^H u = 0) is the row itself
            let row = v_t.row(i).transpose();
            ComplexVector::wrap(match side {
                Side::Right => row.map(|z| z.conj()),
                Side::Left => row,
            })
        })
        .collect();
    (sigmas, vectors)
}

/// Orthonormal null-space basis: directions with σ ≤ `tol_rank`·σ_max.
pub fn null_space(m: &ComplexMatrix, side: Side, tol_rank: f64) -> Vec<ComplexVector> {
    let (sigmas, vectors) = singular_directions(m, side);
    let sigma_max = sigmas.last().copied().unwrap_or(0.0);
    let threshold = tol_rank * sigma_max;
    sigmas
        .into_iter()
        .zip(vectors)
        .take_while(|(s, _)| *s <= threshold)
        .map(|(_, v)| v)
        .collect()
}

/// Numerical rank under the same threshold as [`null_space`].
pub fn rank(m: &ComplexMatrix, tol_rank: f64) -> usize {
    let s = singular_values(m);
    let threshold = tol_rank * s[0];
    s.iter().filter(|&&x| x > threshold).count()
}
