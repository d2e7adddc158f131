//! Structured matrix polynomial equations and their spectral solvers.

mod assemble;
mod checks;
mod equation;
mod family;
mod multivariate;
mod univariate;

pub use assemble::{assemble_family, extend_independent, family_from_points, greedy_select};
pub use checks::{
    commutation_check, factor_gap, quotient_factor, residual_normalization, sandwich_probe,
    verify_residual, ProbeEntry, SandwichReport, FACTOR_CHECK_TOL,
};
pub use equation::{Orientation, SandwichSlots, StructuredEquation, SANDWICH_SLOTS};
pub use family::{Diagnostic, Failure, SolutionFamily, Solutions, SolverConfig, MAX_ATTEMPTS};
pub use multivariate::solve_multivariate;
pub use univariate::{
    eigen_candidates, enumerate_classes, solve_univariate, ClassEnumeration, RootClass,
};

use crate::error::Result;

/// Dispatches on arity: class enumeration for one unknown, variety sampling otherwise.
pub fn solve(eq: &StructuredEquation, cfg: &SolverConfig) -> Result<Solutions> {
    if eq.arity() == 1 {
        solve_univariate(eq, cfg)
    } else {
        solve_multivariate(eq, cfg)
    }
}
