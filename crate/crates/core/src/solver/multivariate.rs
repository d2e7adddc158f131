use super::assemble::{family_from_points, greedy_select};
use super::equation::StructuredEquation;
use super::family::{Diagnostic, Failure, Solutions, SolverConfig, MAX_ATTEMPTS};
use super::univariate::{null_side, require_arity};
use crate::error::{Error, Result};
use crate::polymatrix::{Strategy, VarietyPoint, VarietySampler};

const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// Shared-transform assembly from sampled variety points, for two or more unknowns.
///
/// Each attempt samples `max(sample_count, 2n)` points from a fresh seed stream (or a rotated
/// grid), greedily picks `n` whose null vectors stack well, and reconstructs every `X_s`. The
/// first attempt that passes the residual check is returned.
pub fn solve_multivariate(eq: &StructuredEquation, cfg: &SolverConfig) -> Result<Solutions> {
    cfg.validate()?;
    require_arity(eq, eq.arity() >= 2, 2)?;
    let side = null_side(eq)?;
    let n = eq.dim();
    let count = cfg.sample_count.max(2 * n);
    let mut solutions = Solutions::default();
    for attempt in 0..MAX_ATTEMPTS {
        let label = format!("attempt {attempt}");
        let sampler = VarietySampler::new(
            side,
            count,
            cfg.seed
                .wrapping_add(SEED_STRIDE.wrapping_mul(attempt as u64)),
            cfg.strategy,
        )
        .with_tol(cfg.tol_zero)
        .with_grid_phase(match cfg.strategy {
            Strategy::Grid => attempt as f64 / MAX_ATTEMPTS as f64,
            Strategy::Random => 0.0,
        });
        let points = match sampler.sample(eq.poly()) {
            Ok(p) => p,
            Err(Error::NoPointsFound) => {
                solutions.diagnostics.push(Diagnostic {
                    label,
                    failure: Failure::NoPointsFound,
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        if points.len() < n {
            solutions.diagnostics.push(Diagnostic {
                label,
                failure: Failure::TooFewPoints {
                    found: points.len(),
                    needed: n,
                },
            });
            continue;
        }
        let chosen: Vec<VarietyPoint> = greedy_select(&points, n)
            .into_iter()
            .map(|i| points[i].clone())
            .collect();
        match family_from_points(eq, &chosen, cfg)? {
            Ok(family) => {
                solutions.families.push(family);
                break;
            }
            Err(failure) => solutions.diagnostics.push(Diagnostic { label, failure }),
        }
    }
    Ok(solutions)
}
