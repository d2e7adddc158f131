use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::det::{det_poly_univariate, point_null_space, refine_root};
use super::poly::{merge_point, MatrixPolynomial};
use super::scalar::poly_roots;
use crate::error::{Error, Result};
use crate::numeric::{ComplexVector, Side, C64};

/// Default acceptance threshold for null vectors, relative to the backward-error scale.
pub const DEFAULT_TOL_NULL: f64 = 1e-8;

/// How the fixed coordinates of each slice are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Equispaced points on the unit circle.
    Grid,
    /// Seeded uniform draws from the annulus `0.5 ≤ |z| ≤ 2`.
    Random,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Grid => "grid",
            Strategy::Random => "random",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(Strategy::Grid),
            "random" => Ok(Strategy::Random),
            other => Err(Error::InvalidInput(format!("unknown strategy '{other}'"))),
        }
    }
}

/// A zero of the determinantal polynomial with one attached unit null vector.
#[derive(Debug, Clone)]
pub struct VarietyPoint {
    pub values: ComplexVector,
    pub null_vector: ComplexVector,
    pub side: Side,
    /// `|det P(values)|`.
    pub det_residual: f64,
    /// Backward-error scale `s` of `P(values)`; `det_residual ≤ tol·s^n` for an accepted point.
    pub scale: f64,
    /// `‖P(values)·v‖ / s` (or `‖v·P(values)‖ / s` on the left).
    pub null_residual: f64,
}

impl VarietyPoint {
    /// Re-checks both invariants against `p` at tolerance `tol`.
    pub fn satisfies(&self, p: &MatrixPolynomial, tol: f64) -> bool {
        let Ok(m) = p.evaluate(&self.values.entries()) else {
            return false;
        };
        let applied = match self.side {
            Side::Right => m.mul_vec(&self.null_vector),
            Side::Left => m.vec_mul(&self.null_vector),
        };
        let n = p.dim() as i32;
        (self.null_vector.norm() - 1.0).abs() <= 1e-12
            && applied.norm() <= tol * self.scale
            && self.det_residual <= tol * self.scale.powi(n)
    }
}

/// Zeros of one univariate slice with null vectors attached.
///
/// Degree-zero slices contribute nothing. Simple roots are refined against the matrix
/// determinant before the null vectors are extracted; roots whose evaluated matrix has no
/// singular value under `tol·scale` are dropped.
pub fn slice_points(
    p: &MatrixPolynomial,
    pivot: usize,
    fixed: &[C64],
    side: Side,
    tol: f64,
) -> Result<Vec<VarietyPoint>> {
    let slice = p.fix_all_but(pivot, fixed)?;
    let det = det_poly_univariate(&slice)?;
    let roots = match poly_roots(&det) {
        Ok(r) => r,
        Err(Error::DegreeZero) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let mut out = Vec::new();
    for root in roots {
        let z = if root.multiplicity == 1 {
            refine_root(&slice, root.value)?
        } else {
            root.value
        };
        let point = merge_point(pivot, z, fixed);
        let ns = point_null_space(p, &point, side, tol)?;
        let values = ComplexVector::new(point)?;
        for (v, sigma) in ns.vectors.into_iter().zip(ns.sigmas) {
            out.push(VarietyPoint {
                values: values.clone(),
                null_vector: v,
                side,
                det_residual: ns.det_abs,
                scale: ns.scale,
                null_residual: if ns.scale > 0.0 {
                    sigma / ns.scale
                } else {
                    0.0
                },
            });
        }
    }
    Ok(out)
}

/// Variety sampling over slices whose pivot cycles through the variables.
#[derive(Debug, Clone)]
pub struct VarietySampler {
    pub side: Side,
    pub count: usize,
    pub seed: u64,
    pub strategy: Strategy,
    pub tol: f64,
    /// Rotation of the grid, as a fraction of the grid spacing.
    pub grid_phase: f64,
}

impl VarietySampler {
    pub fn new(side: Side, count: usize, seed: u64, strategy: Strategy) -> Self {
        Self {
            side,
            count,
            seed,
            strategy,
            tol: DEFAULT_TOL_NULL,
            grid_phase: 0.0,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_grid_phase(mut self, phase: f64) -> Self {
        self.grid_phase = phase;
        self
    }

    /// Fixed values for slice `j`, in variable order with the pivot removed.
    fn slice_values(&self, arity: usize, j: usize, grid: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
        let q = j / arity;
        (0..arity - 1)
            .map(|rank| match self.strategy {
                Strategy::Grid => {
                    let step = (q * (rank + 1)) % grid;
                    let angle = 2.0 * PI * (step as f64 + self.grid_phase) / grid as f64;
                    C64::from_polar(1.0, angle)
                }
                Strategy::Random => {
                    let r: f64 = rng.random_range(0.5..=2.0);
                    let theta: f64 = rng.random_range(0.0..(2.0 * PI));
                    C64::from_polar(r, theta)
                }
            })
            .collect()
    }

    pub fn sample(&self, p: &MatrixPolynomial) -> Result<Vec<VarietyPoint>> {
        let m = p.arity();
        if m < 2 {
            return Err(Error::ArityMismatch {
                expected: 2,
                found: m,
            });
        }
        if self.count == 0 {
            return Err(Error::InvalidInput(
                "sample count must be at least 1".into(),
            ));
        }
        let grid = self.count.max(4);
        let budget = m * grid;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut points = Vec::new();
        let mut degenerate = 0;
        for j in 0..budget {
            let fixed = self.slice_values(m, j, grid, &mut rng);
            match slice_points(p, j % m, &fixed, self.side, self.tol) {
                Ok(found) => points.extend(found),
                // an unlucky slice can lie inside the variety
                Err(Error::IdenticallySingular) => degenerate += 1,
                Err(e) => return Err(e),
            }
            if points.len() >= self.count {
                points.truncate(self.count);
                break;
            }
        }
        if degenerate == budget {
            return Err(Error::IdenticallySingular);
        }
        if points.is_empty() {
            return Err(Error::NoPointsFound);
        }
        Ok(points)
    }
}

/// Samples at least `count` variety points (or as many as the slice budget finds).
pub fn sample_variety(
    p: &MatrixPolynomial,
    side: Side,
    count: usize,
    seed: u64,
    strategy: Strategy,
) -> Result<Vec<VarietyPoint>> {
    VarietySampler::new(side, count, seed, strategy).sample(p)
}
