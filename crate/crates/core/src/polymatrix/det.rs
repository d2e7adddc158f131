use std::f64::consts::PI;

use super::poly::MatrixPolynomial;
use super::scalar::ScalarPolynomial;
use crate::error::{Error, Result};
use crate::numeric::{
    determinant, singular_directions, singular_values, solve, ComplexVector, Side, C64, ZERO,
};

/// Coefficients below this fraction of the largest one are snapped to zero.
pub const COEFFICIENT_SNAP: f64 = 1e-9;

/// A sample node is numerically singular when σ_min ≤ this · σ_max.
const NODE_SINGULAR: f64 = 1e-13;

fn require_univariate(p: &MatrixPolynomial) -> Result<()> {
    if p.arity() == 1 {
        Ok(())
    } else {
        Err(Error::ArityMismatch {
            expected: 1,
            found: p.arity(),
        })
    }
}

/// Interpolation radius `max(1, (‖A_low‖_F / ‖A_top‖_F)^(1/deg))`.
fn node_radius(p: &MatrixPolynomial) -> f64 {
    let deg = p.total_degree();
    let mut terms = p.terms();
    let (Some((_, low)), Some((_, top))) = (terms.next(), p.terms().last()) else {
        return 1.0;
    };
    if deg == 0 {
        return 1.0;
    }
    let (low, top) = (low.frobenius(), top.frobenius());
    if low == 0.0 || top == 0.0 {
        return 1.0;
    }
    (low / top).powf(1.0 / f64::from(deg)).max(1.0)
}

/// `det P(μ)` for a univariate polynomial matrix, by evaluation at scaled roots of unity
/// followed by an inverse DFT.
pub fn det_poly_univariate(p: &MatrixPolynomial) -> Result<ScalarPolynomial> {
    require_univariate(p)?;
    if p.num_terms() == 0 {
        return Err(Error::IdenticallySingular);
    }
    let samples = p.dim() * p.total_degree() as usize + 1;
    let radius = node_radius(p);
    let omega = |k: usize| C64::from_polar(1.0, 2.0 * PI * k as f64 / samples as f64);

    let mut dets = Vec::with_capacity(samples);
    let mut all_singular = true;
    for k in 0..samples {
        let z = omega(k) * radius;
        let m = p.evaluate(&[z])?;
        let s = singular_values(&m);
        if s[0] > 0.0 && s[s.len() - 1] > NODE_SINGULAR * s[0] {
            all_singular = false;
        }
        dets.push(determinant(&m)?);
    }
    if all_singular {
        return Err(Error::IdenticallySingular);
    }

    let inv = 1.0 / samples as f64;
    let mut coefficients: Vec<C64> = (0..samples)
        .map(|j| {
            let sum: C64 = dets
                .iter()
                .enumerate()
                .map(|(k, d)| d * omega((j * k) % samples).conj())
                .sum();
            sum * inv / radius.powi(j as i32)
        })
        .collect();
    let max = coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
    for c in &mut coefficients {
        if c.norm() <= COEFFICIENT_SNAP * max {
            *c = ZERO;
        }
    }
    Ok(ScalarPolynomial::new(coefficients))
}

/// Newton refinement of a simple zero of `det P(μ)` using `d/dμ log det P = tr(P⁻¹P′)`.
///
/// Returns the best iterate as measured by `σ_min / Σ|z^k|·‖A_k‖_F`; the original
/// value is kept if refinement would move it farther than `1e-4·(1+|z|)`.
pub fn refine_root(p: &MatrixPolynomial, z0: C64) -> Result<C64> {
    require_univariate(p)?;
    let dp = p.derivative_univariate();
    let quality = |z: C64| -> Result<f64> {
        let s = singular_values(&p.evaluate(&[z])?);
        let scale = p.scale_at(&[z]);
        Ok(if scale == 0.0 {
            0.0
        } else {
            s[s.len() - 1] / scale
        })
    };
    let mut best = (z0, quality(z0)?);
    let mut z = z0;
    for _ in 0..10 {
        if best.1 == 0.0 {
            break;
        }
        let Ok(y) = solve(&p.evaluate(&[z])?, &dp.evaluate(&[z])?) else {
            break;
        };
        let trace: C64 = y.diagonal().iter().sum();
        if trace == ZERO || !trace.re.is_finite() || !trace.im.is_finite() {
            break;
        }
        let step = trace.inv();
        z -= step;
        if (z - z0).norm() > 1e-4 * (1.0 + z0.norm()) {
            break;
        }
        let q = quality(z)?;
        if q < best.1 {
            best = (z, q);
        }
        if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
            break;
        }
    }
    Ok(best.0)
}

/// Null directions of `P(point)` accepted at `σ ≤ tol·scale`, where the scale is the
/// backward-error magnitude `Σ |∏ point^i|·‖A_{(i)}‖_F`.
#[derive(Debug, Clone)]
pub struct PointNullSpace {
    pub vectors: Vec<ComplexVector>,
    /// Singular value of each accepted vector, in the same order.
    pub sigmas: Vec<f64>,
    pub scale: f64,
    pub det_abs: f64,
}

pub fn point_null_space(
    p: &MatrixPolynomial,
    point: &[C64],
    side: Side,
    tol: f64,
) -> Result<PointNullSpace> {
    let m = p.evaluate(point)?;
    let scale = p.scale_at(point);
    let (sigmas, vectors) = singular_directions(&m, side);
    let threshold = tol * scale;
    let (sigmas, vectors): (Vec<f64>, Vec<ComplexVector>) = sigmas
        .into_iter()
        .zip(vectors)
        .take_while(|(s, _)| *s <= threshold)
        .unzip();
    Ok(PointNullSpace {
        vectors,
        sigmas,
        scale,
        det_abs: determinant(&m)?.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ComplexMatrix;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn assert_coeffs(p: &ScalarPolynomial, expected: &[f64]) {
        assert_eq!(p.coefficients().len(), expected.len(), "{p:?}");
        for (c, e) in p.coefficients().iter().zip(expected) {
            assert!((c - re(*e)).norm() < 1e-12, "{p:?}");
        }
    }

    #[test]
    fn diagonal_quadratic_det() {
        let p = MatrixPolynomial::univariate(vec![
            ComplexMatrix::real_diag(&[-1.0, -4.0]),
            ComplexMatrix::zeros(2, 2),
            ComplexMatrix::identity(2),
        ])
        .unwrap();
        assert_coeffs(
            &det_poly_univariate(&p).unwrap(),
            &[4.0, 0.0, -5.0, 0.0, 1.0],
        );
    }

    #[test]
    fn scalar_linear_det() {
        let p = MatrixPolynomial::univariate(vec![
            ComplexMatrix::from_real(1, 1, &[-3.0]).unwrap(),
            ComplexMatrix::identity(1),
        ])
        .unwrap();
        assert_coeffs(&det_poly_univariate(&p).unwrap(), &[-3.0, 1.0]);
    }

    #[test]
    fn singular_leading_block_loses_degree() {
        // μ·diag(1,0) + I  →  det = 1 + μ
        let p = MatrixPolynomial::univariate(vec![
            ComplexMatrix::identity(2),
            ComplexMatrix::real_diag(&[1.0, 0.0]),
        ])
        .unwrap();
        assert_coeffs(&det_poly_univariate(&p).unwrap(), &[1.0, 1.0]);
    }

    #[test]
    fn identically_singular_inputs() {
        let zero = MatrixPolynomial::univariate(vec![ComplexMatrix::zeros(2, 2)]).unwrap();
        assert_eq!(det_poly_univariate(&zero), Err(Error::IdenticallySingular));
        // rank-one in every coefficient with a shared kernel
        let r = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[2.0, 0.0]]).unwrap();
        let p = MatrixPolynomial::univariate(vec![r.clone(), r]).unwrap();
        assert_eq!(det_poly_univariate(&p), Err(Error::IdenticallySingular));
    }

    #[test]
    fn refine_improves_perturbed_root() {
        let p = MatrixPolynomial::univariate(vec![
            ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 3.0]]).unwrap(),
            ComplexMatrix::from_real_rows(&[&[-3.0, 0.0], &[1.0, -4.0]]).unwrap(),
            ComplexMatrix::identity(2),
        ])
        .unwrap();
        let det = det_poly_univariate(&p).unwrap();
        let roots = super::super::scalar::poly_roots(&det).unwrap();
        for r in roots {
            let rough = r.value + C64::new(1e-7, -1e-7);
            let refined = refine_root(&p, rough).unwrap();
            assert!(
                (refined - r.value).norm() < 1e-12,
                "{refined} vs {}",
                r.value
            );
        }
    }
}
