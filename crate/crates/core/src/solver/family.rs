use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::{ComplexMatrix, C64, DEFAULT_TOL_RANK};
use crate::polymatrix::{Strategy, DEFAULT_TOL_NULL};

/// Retry budget for transform assembly in the multivariate solver.
pub const MAX_ATTEMPTS: usize = 8;

/// Tolerances and sampling controls shared by the solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Transform singularity threshold, relative to σ_max.
    pub tol_rank: f64,
    /// Acceptance bound on the normalized residual.
    pub tol_residual: f64,
    /// Null-vector acceptance at candidate eigenvalues, relative to the backward-error scale.
    pub tol_zero: f64,
    pub max_classes: usize,
    pub sample_count: usize,
    pub seed: u64,
    pub strategy: Strategy,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol_rank: DEFAULT_TOL_RANK,
            tol_residual: 1e-8,
            tol_zero: DEFAULT_TOL_NULL,
            max_classes: 200,
            sample_count: 16,
            seed: 0,
            strategy: Strategy::Random,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let tols = [
            ("tol_rank", self.tol_rank),
            ("tol_residual", self.tol_residual),
            ("tol_zero", self.tol_zero),
        ];
        if let Some((name, v)) = tols.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidInput(format!(
                "{name} must be positive, got {v}"
            )));
        }
        if self.max_classes == 0 {
            return Err(Error::InvalidInput("max_classes must be at least 1".into()));
        }
        if self.sample_count == 0 {
            return Err(Error::InvalidInput(
                "sample_count must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// One reconstructed solution `X_s = T·F_s·T⁻¹` with its shared transform.
#[derive(Debug, Clone)]
pub struct SolutionFamily {
    /// `T` (eigenvectors as columns) for right orientation, `W = T⁻¹` (rows) for left.
    pub transform: ComplexMatrix,
    /// `eigenvalues[s][k]` is the k-th diagonal entry of `F_s`.
    pub eigenvalues: Vec<Vec<C64>>,
    pub unknowns: Vec<ComplexMatrix>,
    pub residual: f64,
    pub transform_condition: f64,
}

/// Why a class or an assembly attempt produced no family.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// A root of multiplicity `needed` has a thinner null space.
    ThinNullSpace {
        root: C64,
        needed: usize,
        found: usize,
    },
    TransformSingular {
        condition: f64,
    },
    ResidualExceeded {
        residual: f64,
    },
    NoPointsFound,
    TooFewPoints {
        found: usize,
        needed: usize,
    },
    /// Fewer roots of `det P` (with multiplicity) than the dimension.
    InsufficientRoots {
        available: usize,
        needed: usize,
    },
    /// Class enumeration stopped at the cap.
    Truncated {
        kept: usize,
    },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::ThinNullSpace {
                root,
                needed,
                found,
            } => write!(
                f,
                "ThinNullSpace: root {} needs {needed} null vectors, found {found}",
                fmt_complex(*root)
            ),
            Failure::TransformSingular { condition } => {
                write!(f, "TransformSingular: condition {condition:e}")
            }
            Failure::ResidualExceeded { residual } => {
                write!(f, "ResidualExceeded: residual {residual:e}")
            }
            Failure::NoPointsFound => f.write_str("NoPointsFound"),
            Failure::TooFewPoints { found, needed } => {
                write!(f, "NoPointsFound: {found} usable points, need {needed}")
            }
            Failure::InsufficientRoots { available, needed } => {
                write!(f, "InsufficientRoots: {available} roots, need {needed}")
            }
            Failure::Truncated { kept } => {
                write!(f, "Truncated: class enumeration capped at {kept}")
            }
        }
    }
}

pub(crate) fn fmt_complex(z: C64) -> String {
    if z.im >= 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}{}i", z.re, z.im)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    /// Which class or attempt failed, e.g. `class 3 {1+0i, 2+0i}` or `attempt 2`.
    pub label: String,
    pub failure: Failure,
}

/// Families found by a solver plus everything that failed along the way.
#[derive(Debug, Clone, Default)]
pub struct Solutions {
    pub families: Vec<SolutionFamily>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Solutions {
    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    /// First family, or the error that best summarizes the diagnostics.
    pub fn first(&self) -> Result<&SolutionFamily> {
        if let Some(f) = self.families.first() {
            return Ok(f);
        }
        let attempts = self
            .diagnostics
            .iter()
            .filter(|d| !matches!(d.failure, Failure::Truncated { .. }))
            .count();
        let all_pointless = attempts > 0
            && self.diagnostics.iter().all(|d| {
                matches!(
                    d.failure,
                    Failure::NoPointsFound
                        | Failure::TooFewPoints { .. }
                        | Failure::Truncated { .. }
                )
            });
        Err(if all_pointless {
            Error::NoPointsFound
        } else {
            Error::TransformSingular { attempts }
        })
    }
}
