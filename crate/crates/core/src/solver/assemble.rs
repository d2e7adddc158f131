use nalgebra::{DMatrix, DVector};

use super::checks::verify_residual;
use super::equation::StructuredEquation;
use super::family::{Failure, SolutionFamily, SolverConfig};
use crate::error::{Error, Result};
use crate::numeric::{
    condition, inverse_with_tol, singular_values, ComplexMatrix, ComplexVector, Side, C64,
};
use crate::polymatrix::VarietyPoint;

/// Orthonormal basis of the span of `vectors` (modified Gram–Schmidt, dependent ones dropped).
fn orthonormal_span(vectors: &[ComplexVector]) -> Vec<DVector<C64>> {
    let mut basis: Vec<DVector<C64>> = Vec::new();
    for v in vectors {
        let mut w = v.as_na().clone();
        for b in &basis {
            let c = b.dotc(&w);
            w -= b * c;
        }
        let norm = w.norm();
        if norm > 1e-12 * v.norm().max(f64::MIN_POSITIVE) {
            basis.push(w / C64::new(norm, 0.0));
        }
    }
    basis
}

/// Picks `count` unit vectors from the span of `candidates` that are as independent as possible
/// of `stack`, measured on the stack's orthogonal complement. Returns fewer when the span is too
/// thin.
pub fn extend_independent(
    stack: &[ComplexVector],
    candidates: &[ComplexVector],
    count: usize,
) -> Vec<ComplexVector> {
    if count == 0 || candidates.is_empty() {
        return Vec::new();
    }
    let span = orthonormal_span(stack);
    let own = orthonormal_span(candidates);
    if own.is_empty() {
        return Vec::new();
    }
    let basis = DMatrix::from_columns(&own);
    let mut projected = basis.clone();
    for b in &span {
        let coeffs = b.adjoint() * &projected;
        projected -= b * coeffs;
    }
    let svd = projected.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    order
        .into_iter()
        .filter(|&i| svd.singular_values[i] > 1e-10)
        .take(count)
        .map(|i| {
            let c = v_t.row(i).adjoint();
            let v = &basis * c;
            let norm = v.norm();
            ComplexVector::new((v / C64::new(norm, 0.0)).iter().copied().collect())
                .expect("finite combination")
        })
        .collect()
}

/// Smallest singular value of the stack of the given unit vectors.
fn stack_sigma_min(vectors: &[&ComplexVector]) -> f64 {
    let cols: Vec<ComplexVector> = vectors.iter().map(|v| v.normalized()).collect();
    let m = ComplexMatrix::from_columns(&cols).expect("non-empty stack");
    *singular_values(&m).last().expect("non-empty")
}

/// Greedy conditioning: start at the point with the smallest null residual, then repeatedly
/// add the point whose null vector maximizes the smallest singular value of the stack.
pub fn greedy_select(points: &[VarietyPoint], n: usize) -> Vec<usize> {
    let Some(first) = (0..points.len())
        .min_by(|&a, &b| points[a].null_residual.total_cmp(&points[b].null_residual))
    else {
        return Vec::new();
    };
    let mut chosen = vec![first];
    while chosen.len() < n.min(points.len()) {
        let mut best: Option<(usize, f64)> = None;
        for i in (0..points.len()).filter(|i| !chosen.contains(i)) {
            let mut stack: Vec<&ComplexVector> =
                chosen.iter().map(|&c| &points[c].null_vector).collect();
            stack.push(&points[i].null_vector);
            let s = stack_sigma_min(&stack);
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((i, s));
            }
        }
        match best {
            Some((i, _)) => chosen.push(i),
            None => break,
        }
    }
    chosen
}

/// Builds `X_s` from eigenvector `k` paired with `eigenvalues[s][k]` and checks the residual.
///
/// Left vectors become the rows of `W` and `X_s = W⁻¹·F_s·W`; right vectors become the columns
/// of `T` and `X_s = T·F_s·T⁻¹`.
pub fn assemble_family(
    eq: &StructuredEquation,
    side: Side,
    vectors: &[ComplexVector],
    eigenvalues: Vec<Vec<C64>>,
    cfg: &SolverConfig,
) -> Result<SolutionFamily, Failure> {
    let n = eq.dim();
    if vectors.len() != n {
        return Err(Failure::TooFewPoints {
            found: vectors.len(),
            needed: n,
        });
    }
    let transform = match side {
        Side::Left => ComplexMatrix::from_row_vectors(vectors),
        Side::Right => ComplexMatrix::from_columns(vectors),
    }
    .expect("n vectors of length n");
    let (inv, cond) = match inverse_with_tol(&transform, cfg.tol_rank) {
        Ok(r) => r,
        Err(_) => {
            return Err(Failure::TransformSingular {
                condition: condition(&transform),
            })
        }
    };
    let unknowns: Vec<ComplexMatrix> = eigenvalues
        .iter()
        .map(|vals| {
            let d = ComplexMatrix::diag(vals);
            match side {
                Side::Left => &(&inv * &d) * &transform,
                Side::Right => &(&transform * &d) * &inv,
            }
        })
        .collect();
    let residual = verify_residual(eq, &unknowns).unwrap_or(f64::INFINITY);
    if residual.is_nan() || residual > cfg.tol_residual {
        return Err(Failure::ResidualExceeded { residual });
    }
    Ok(SolutionFamily {
        transform,
        eigenvalues,
        unknowns,
        residual,
        transform_condition: cond,
    })
}

/// Family from `n` variety points: point `k` supplies eigenvector `k` and the k-th entry of
/// every eigenvalue list.
pub fn family_from_points(
    eq: &StructuredEquation,
    points: &[VarietyPoint],
    cfg: &SolverConfig,
) -> Result<Result<SolutionFamily, Failure>> {
    let side = eq
        .orientation()
        .null_side()
        .ok_or_else(|| Error::InvalidOrientation(eq.orientation().to_string()))?;
    if let Some(p) = points.iter().find(|p| p.side != side) {
        return Err(Error::InvalidInput(format!(
            "point carries a {} null vector, equation needs {side}",
            p.side
        )));
    }
    let m = eq.arity();
    if let Some(p) = points.iter().find(|p| p.values.len() != m) {
        return Err(Error::ArityMismatch {
            expected: m,
            found: p.values.len(),
        });
    }
    let vectors: Vec<ComplexVector> = points.iter().map(|p| p.null_vector.clone()).collect();
    let eigenvalues = (0..m)
        .map(|s| points.iter().map(|p| p.values.get(s)).collect())
        .collect();
    Ok(assemble_family(eq, side, &vectors, eigenvalues, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(re: &[f64]) -> ComplexVector {
        ComplexVector::from_real(re).unwrap()
    }

    #[test]
    fn extension_avoids_existing_directions() {
        let stack = [v(&[1.0, 0.0, 0.0])];
        let cands = [v(&[1.0, 0.0, 0.0]), v(&[1.0, 1.0, 0.0])];
        let picked = extend_independent(&stack, &cands, 1);
        assert_eq!(picked.len(), 1);
        // the pick must be orthogonal to the stack: the pure e₂ combination
        assert!(picked[0].get(0).norm() < 1e-12);
        assert!((picked[0].get(1).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn extension_reports_thin_spans() {
        let cands = [v(&[1.0, 2.0]), v(&[2.0, 4.0])];
        assert_eq!(extend_independent(&[], &cands, 2).len(), 1);
        assert_eq!(extend_independent(&[v(&[1.0, 2.0])], &cands, 1).len(), 0);
    }

    #[test]
    fn extension_of_full_basis_is_full() {
        let cands = [v(&[1.0, 0.0]), v(&[0.0, 1.0])];
        let picked = extend_independent(&[], &cands, 2);
        let m = ComplexMatrix::from_columns(&picked).unwrap();
        let s = singular_values(&m);
        assert!((s[0] - 1.0).abs() < 1e-12 && (s[1] - 1.0).abs() < 1e-12);
    }
}
