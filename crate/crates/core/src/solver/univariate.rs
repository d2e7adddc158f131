use rayon::prelude::*;

use super::assemble::{assemble_family, extend_independent};
use super::equation::StructuredEquation;
use super::family::{fmt_complex, Diagnostic, Failure, SolutionFamily, Solutions, SolverConfig};
use crate::error::{Error, Result};
use crate::numeric::{ComplexVector, Side, C64};
use crate::polymatrix::{det_poly_univariate, point_null_space, poly_roots, refine_root, Root};

pub(crate) fn require_arity(eq: &StructuredEquation, ok: bool, expected: usize) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::ArityMismatch {
            expected,
            found: eq.arity(),
        })
    }
}

pub(crate) fn null_side(eq: &StructuredEquation) -> Result<Side> {
    eq.orientation().null_side().ok_or_else(|| {
        Error::InvalidOrientation(format!("no constructive solver for {}", eq.orientation()))
    })
}

/// Zeros of `det P(μ)` with multiplicity: the eigenvalue pool shared by every solution.
pub fn eigen_candidates(eq: &StructuredEquation) -> Result<Vec<Root>> {
    require_arity(eq, eq.arity() == 1, 1)?;
    match poly_roots(&det_poly_univariate(eq.poly())?) {
        Err(Error::DegreeZero) => Ok(Vec::new()),
        other => other,
    }
}

/// One equivalence class: `members` pairs a pool index with how many copies it contributes.
#[derive(Debug, Clone, PartialEq)]
pub struct RootClass {
    pub members: Vec<(usize, usize)>,
    pub values: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassEnumeration {
    pub classes: Vec<RootClass>,
    pub truncated: bool,
}

/// All n-element sub-multisets of the pool in lexicographic order, cut off after `cap`.
pub fn enumerate_classes(pool: &[Root], n: usize, cap: usize) -> Result<ClassEnumeration> {
    let available: usize = pool.iter().map(|r| r.multiplicity).sum();
    if available < n {
        return Err(Error::InsufficientRoots {
            needed: n,
            available,
        });
    }
    // suffix[i] = multiplicity still available from pool[i..]
    let mut suffix = vec![0; pool.len() + 1];
    for i in (0..pool.len()).rev() {
        suffix[i] = suffix[i + 1] + pool[i].multiplicity;
    }
    let mut out = ClassEnumeration {
        classes: Vec::new(),
        truncated: false,
    };
    let mut counts = vec![0; pool.len()];
    walk(pool, &suffix, 0, n, cap, &mut counts, &mut out);
    Ok(out)
}

fn walk(
    pool: &[Root],
    suffix: &[usize],
    i: usize,
    remaining: usize,
    cap: usize,
    counts: &mut [usize],
    out: &mut ClassEnumeration,
) {
    if out.truncated {
        return;
    }
    if remaining == 0 {
        if out.classes.len() == cap {
            out.truncated = true;
            return;
        }
        let members: Vec<(usize, usize)> = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| (k, c))
            .collect();
        let values = members
            .iter()
            .flat_map(|&(k, c)| std::iter::repeat_n(pool[k].value, c))
            .collect();
        out.classes.push(RootClass { members, values });
        return;
    }
    if i == pool.len() || suffix[i] < remaining {
        return;
    }
    let top = pool[i].multiplicity.min(remaining);
    for c in (0..=top).rev() {
        if suffix[i + 1] + c < remaining {
            break;
        }
        counts[i] = c;
        walk(pool, suffix, i + 1, remaining - c, cap, counts, out);
        counts[i] = 0;
    }
}

fn class_label(index: usize, class: &RootClass) -> String {
    let vals: Vec<String> = class.values.iter().map(|z| fmt_complex(*z)).collect();
    format!("class {index} {{{}}}", vals.join(", "))
}

/// Class-wise reconstruction for the one-unknown equation.
///
/// Each class stacks null vectors of `P(λ_k)` (repeated roots consume an orthonormal set of
/// that size) and reconstructs `X`; classes with a thin null space, a singular transform or a
/// residual over `cfg.tol_residual` land in the diagnostics.
pub fn solve_univariate(eq: &StructuredEquation, cfg: &SolverConfig) -> Result<Solutions> {
    cfg.validate()?;
    require_arity(eq, eq.arity() == 1, 1)?;
    let side = null_side(eq)?;
    let n = eq.dim();
    let raw = eigen_candidates(eq)?;
    let pool: Vec<Root> = raw
        .into_iter()
        .map(|r| {
            let value = if r.multiplicity == 1 {
                refine_root(eq.poly(), r.value)?
            } else {
                r.value
            };
            Ok(Root { value, ..r })
        })
        .collect::<Result<_>>()?;
    let enumeration = enumerate_classes(&pool, n, cfg.max_classes)?;
    let null_spaces: Vec<Vec<ComplexVector>> = pool
        .par_iter()
        .map(|r| point_null_space(eq.poly(), &[r.value], side, cfg.tol_zero).map(|ns| ns.vectors))
        .collect::<Result<_>>()?;

    let outcomes: Vec<Result<SolutionFamily, Failure>> = enumeration
        .classes
        .par_iter()
        .map(|class| {
            let mut stack: Vec<ComplexVector> = Vec::with_capacity(n);
            for &(k, count) in &class.members {
                let picked = extend_independent(&stack, &null_spaces[k], count);
                if picked.len() < count {
                    return Err(Failure::ThinNullSpace {
                        root: pool[k].value,
                        needed: count,
                        found: null_spaces[k].len().min(picked.len()),
                    });
                }
                stack.extend(picked);
            }
            assemble_family(eq, side, &stack, vec![class.values.clone()], cfg)
        })
        .collect();

    let mut solutions = Solutions::default();
    for (index, (class, outcome)) in enumeration.classes.iter().zip(outcomes).enumerate() {
        match outcome {
            Ok(family) => solutions.families.push(family),
            Err(failure) => solutions.diagnostics.push(Diagnostic {
                label: class_label(index, class),
                failure,
            }),
        }
    }
    if enumeration.truncated {
        solutions.diagnostics.push(Diagnostic {
            label: "enumeration".into(),
            failure: Failure::Truncated {
                kept: enumeration.classes.len(),
            },
        });
    }
    Ok(solutions)
}
