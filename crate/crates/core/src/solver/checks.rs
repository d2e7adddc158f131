use std::f64::consts::PI;

use super::equation::{Orientation, StructuredEquation};
use crate::error::{Error, Result};
use crate::numeric::{determinant, eigen, inverse, ComplexMatrix, C64};
use crate::polymatrix::{ExponentTuple, MatrixPolynomial};

/// Bound on the sampled factorization gap accepted by [`quotient_factor`].
pub const FACTOR_CHECK_TOL: f64 = 1e-8;

/// Residual bound a candidate must meet before it can be factored out.
pub const DEFAULT_TOL_RESIDUAL: f64 = 1e-8;

/// `1 + Σ‖A‖_F · max(1, max_s ‖X_s‖_F)^N`.
pub fn residual_normalization(eq: &StructuredEquation, unknowns: &[ComplexMatrix]) -> f64 {
    let biggest = unknowns
        .iter()
        .map(ComplexMatrix::frobenius)
        .fold(1.0, f64::max);
    1.0 + eq.poly().coefficient_norm_sum() * biggest.powi(eq.poly().total_degree() as i32)
}

/// Relative Frobenius residual of the left-hand side at the given unknowns.
pub fn verify_residual(eq: &StructuredEquation, unknowns: &[ComplexMatrix]) -> Result<f64> {
    let lhs = eq.lhs(unknowns)?;
    Ok(lhs.frobenius() / residual_normalization(eq, unknowns))
}

/// Largest normalized commutator `‖X_iX_j − X_jX_i‖_F / (1 + ‖X_i‖_F‖X_j‖_F)` over pairs.
pub fn commutation_check(unknowns: &[ComplexMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, x) in unknowns.iter().enumerate() {
        for y in &unknowns[i + 1..] {
            let comm = &(x * y) - &(y * x);
            worst = worst.max(comm.frobenius() / (1.0 + x.frobenius() * y.frobenius()));
        }
    }
    worst
}

/// Quotient `Q` with `P(μ) = (μI − X)·Q(μ)` (unknowns left) or `P(μ) = Q(μ)·(μI − X)`
/// (unknowns right), where `Q_k = Σ_{j>k} X^{j−k−1} A_j` (resp. `A_j X^{j−k−1}`).
pub fn quotient_factor(eq: &StructuredEquation, x: &ComplexMatrix) -> Result<MatrixPolynomial> {
    if eq.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: eq.arity(),
        });
    }
    if eq.orientation() == Orientation::SandwichBivariate {
        return Err(Error::InvalidOrientation("sandwich".into()));
    }
    let residual = verify_residual(eq, std::slice::from_ref(x))?;
    if residual > DEFAULT_TOL_RESIDUAL {
        return Err(Error::NotASolution { residual });
    }
    let n = eq.dim();
    let p = eq.poly().total_degree() as usize;
    let coeff = |j: usize| {
        eq.poly()
            .coefficient(&ExponentTuple::unit(1, 0, j as u32))
            .cloned()
            .unwrap_or_else(|| ComplexMatrix::zeros(n, n))
    };
    let powers: Vec<ComplexMatrix> = (0..p.max(1)).map(|k| x.powi(k as u32)).collect();
    let mut terms = Vec::with_capacity(p);
    for k in 0..p {
        let mut q = ComplexMatrix::zeros(n, n);
        for j in (k + 1)..=p {
            let xp = &powers[j - k - 1];
            let term = match eq.orientation() {
                Orientation::UnknownsLeft => xp * &coeff(j),
                _ => &coeff(j) * xp,
            };
            q = &q + &term;
        }
        terms.push((ExponentTuple::unit(1, 0, k as u32), q));
    }
    let quotient = MatrixPolynomial::new(1, n, terms)?;

    let samples = p * n + 1;
    let radius = 1.0 + x.frobenius();
    let mut worst: f64 = 0.0;
    for k in 0..samples {
        let z = C64::from_polar(radius, 2.0 * PI * (k as f64 + 0.5) / samples as f64);
        worst = worst.max(factor_gap(eq, x, &quotient, z)?);
    }
    if worst > FACTOR_CHECK_TOL {
        return Err(Error::FactorCheckFailed { gap: worst });
    }
    Ok(quotient)
}

/// `‖P(z) − (zI−X)Q(z)‖_F / max(‖P(z)‖_F, ‖zI−X‖_F‖Q(z)‖_F)` (factors swapped for
/// right orientation).
pub fn factor_gap(
    eq: &StructuredEquation,
    x: &ComplexMatrix,
    quotient: &MatrixPolynomial,
    z: C64,
) -> Result<f64> {
    let p = eq.poly().evaluate(&[z])?;
    let shifted = &ComplexMatrix::identity(eq.dim()).scale(z) - x;
    let q = quotient.evaluate(&[z])?;
    let product = match eq.orientation() {
        Orientation::UnknownsLeft => &shifted * &q,
        _ => &q * &shifted,
    };
    let denom = p.frobenius().max(shifted.frobenius() * q.frobenius());
    let gap = (&p - &product).frobenius();
    Ok(if denom == 0.0 { gap } else { gap / denom })
}

/// Per-eigenpair entry of a [`SandwichReport`].
#[derive(Debug, Clone)]
pub struct ProbeEntry {
    pub alpha: C64,
    pub mu: C64,
    /// `g_k·P(α_k, μ_k)·t_k`, `g_k` row k of `T⁻¹`, `t_k` column k of `T`.
    pub scalar_identity: C64,
    /// `|scalar_identity|` divided by `‖g_k‖‖t_k‖·(1 + Σ‖slot‖_F·max(1,|α_k|,|μ_k|)²)`.
    pub relative_identity: f64,
    /// `|det P(α_k, μ_k)|`, reported only.
    pub det_abs: f64,
    /// `‖P(α_k, μ_k)‖_F^n`, the natural size of `det_abs`.
    pub det_scale: f64,
}

#[derive(Debug, Clone)]
pub struct SandwichReport {
    pub transform: ComplexMatrix,
    pub transform_condition: f64,
    pub entries: Vec<ProbeEntry>,
}

impl SandwichReport {
    pub fn max_relative_identity(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.relative_identity)
            .fold(0.0, f64::max)
    }
}

// Generic combination weight for extracting joint eigenvectors of x and y.
const MIX: C64 = C64::new(0.577_215_664_901_532_9, std::f64::consts::FRAC_1_PI);

/// Shared-eigenvector probe for a candidate `(x, y)` of the sandwich equation.
pub fn sandwich_probe(
    eq: &StructuredEquation,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
) -> Result<SandwichReport> {
    let slots = eq
        .sandwich_slots()
        .ok_or_else(|| Error::InvalidOrientation(eq.orientation().to_string()))?;
    let n = eq.dim();
    if x.shape() != (n, n) || y.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "candidates must be {n}x{n}"
        )));
    }
    let combined = x + &y.scale(MIX);
    let t = eigen(&combined)?.vectors;
    let (t_inv, cond) = inverse(&t).map_err(|_| Error::NotSimultaneouslyDiagonalizable {
        off_diagonal: f64::INFINITY,
    })?;
    let dx = &(&t_inv * x) * &t;
    let dy = &(&t_inv * y) * &t;
    let off = |d: &ComplexMatrix| {
        let total: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| d.get(i, j).norm_sqr())
            .sum();
        total.sqrt()
    };
    let off_diagonal = (off(&dx) / (1.0 + x.frobenius())).max(off(&dy) / (1.0 + y.frobenius()));
    if off_diagonal > 1e-8 * cond {
        return Err(Error::NotSimultaneouslyDiagonalizable { off_diagonal });
    }

    let slot_norm: f64 = slots.as_array().iter().map(|s| s.frobenius()).sum();
    let entries = (0..n)
        .map(|k| {
            let (alpha, mu) = (dx.get(k, k), dy.get(k, k));
            let p = eq.poly().evaluate(&[alpha, mu])?;
            let g = t_inv.row(k);
            let tk = t.column(k);
            let scalar_identity = p.vec_mul(&g).dot(&tk);
            let size = 1.0f64.max(alpha.norm()).max(mu.norm());
            let scale = g.norm() * tk.norm() * (1.0 + slot_norm * size * size);
            Ok(ProbeEntry {
                alpha,
                mu,
                scalar_identity,
                relative_identity: scalar_identity.norm() / scale,
                det_abs: determinant(&p)?.norm(),
                det_scale: p.frobenius().powi(n as i32),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SandwichReport {
        transform: t,
        transform_condition: cond,
        entries,
    })
}
