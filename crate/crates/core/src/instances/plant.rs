use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numeric::{condition, determinant, inverse, ComplexMatrix, C64};
use crate::polymatrix::{ExponentTuple, MatrixPolynomial};
use crate::solver::{Orientation, SandwichSlots, StructuredEquation};

const MAX_TRANSFORM_CONDITION: f64 = 100.0;
const MIN_SEPARATION: f64 = 0.1;
const COEFFICIENT_RANGE: i32 = 5;
const REJECTION_BOUND: usize = 10_000;

/// An equation with a known solution: the unknowns share the transform `T` and the constant
/// term was chosen to cancel everything else.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub equation: StructuredEquation,
    pub truth_unknowns: Vec<ComplexMatrix>,
    /// `T`, eigenvectors as columns, whatever the orientation.
    pub truth_transform: ComplexMatrix,
    pub truth_eigenvalues: Vec<Vec<C64>>,
    pub seed: u64,
}

impl PlantedInstance {
    /// The `k`-th planted eigen-tuple `(F₁[k], …, F_m[k])`.
    pub fn truth_point(&self, k: usize) -> Vec<C64> {
        self.truth_eigenvalues.iter().map(|f| f[k]).collect()
    }
}

/// Parameters for [`Planter::plant`]; eigenvalues are drawn unless given explicitly.
#[derive(Debug, Clone)]
pub struct Planter {
    pub n: usize,
    pub m: usize,
    pub degree: u32,
    pub orientation: Orientation,
    pub seed: u64,
    pub eigenvalues: Option<Vec<Vec<C64>>>,
}

pub(crate) fn annulus_point(rng: &mut ChaCha8Rng) -> C64 {
    let r: f64 = rng.random_range(0.5..=2.0);
    let theta: f64 = rng.random_range(0.0..(2.0 * PI));
    C64::from_polar(r, theta)
}

fn random_transform(n: usize, rng: &mut ChaCha8Rng) -> Result<ComplexMatrix> {
    for _ in 0..REJECTION_BOUND {
        let entries = (0..n * n)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let t = ComplexMatrix::new(n, n, entries)?;
        if condition(&t) <= MAX_TRANSFORM_CONDITION {
            return Ok(t);
        }
    }
    Err(Error::Internal(
        "no well-conditioned transform within the rejection bound".into(),
    ))
}

fn separated_eigenvalues(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<C64>> {
    let mut out: Vec<C64> = Vec::with_capacity(n);
    let mut tries = 0;
    while out.len() < n {
        tries += 1;
        if tries > REJECTION_BOUND {
            return Err(Error::Internal(
                "could not separate planted eigenvalues".into(),
            ));
        }
        let z = annulus_point(rng);
        if out.iter().all(|w| (z - w).norm() >= MIN_SEPARATION) {
            out.push(z);
        }
    }
    Ok(out)
}

pub(crate) fn integer_matrix(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let entries: Vec<f64> = (0..n * n)
        .map(|_| f64::from(rng.random_range(-COEFFICIENT_RANGE..=COEFFICIENT_RANGE)))
        .collect();
    ComplexMatrix::from_real(n, n, &entries).expect("finite entries")
}

/// Integer matrix whose determinant is nonzero (exactly, up to rounding of small integers).
pub(crate) fn nonsingular_integer_matrix(n: usize, rng: &mut ChaCha8Rng) -> Result<ComplexMatrix> {
    for _ in 0..REJECTION_BOUND {
        let a = integer_matrix(n, rng);
        if determinant(&a)?.norm() >= 0.5 {
            return Ok(a);
        }
    }
    Err(Error::Internal(
        "no nonsingular integer matrix within the rejection bound".into(),
    ))
}

impl Planter {
    pub fn new(n: usize, m: usize, degree: u32, orientation: Orientation, seed: u64) -> Self {
        Self {
            n,
            m,
            degree,
            orientation,
            seed,
            eigenvalues: None,
        }
    }

    /// Fixes `F_s = diag(eigenvalues[s])` instead of drawing them.
    pub fn with_eigenvalues(mut self, eigenvalues: Vec<Vec<C64>>) -> Self {
        self.eigenvalues = Some(eigenvalues);
        self
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 || self.degree == 0 {
            return Err(Error::InvalidInput(
                "n, m and degree must be at least 1".into(),
            ));
        }
        if self.orientation == Orientation::SandwichBivariate && (self.m != 2 || self.degree != 2) {
            return Err(Error::InvalidInput(
                "the sandwich template has two unknowns and degree 2".into(),
            ));
        }
        if let Some(ev) = &self.eigenvalues {
            if ev.len() != self.m || ev.iter().any(|f| f.len() != self.n) {
                return Err(Error::DimensionMismatch(format!(
                    "need {} eigenvalue lists of length {}",
                    self.m, self.n
                )));
            }
        }
        Ok(())
    }

    pub fn plant(&self) -> Result<PlantedInstance> {
        self.check()?;
        let (n, m) = (self.n, self.m);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let t = random_transform(n, &mut rng)?;
        let (t_inv, _) = inverse(&t)?;
        let eigenvalues = match &self.eigenvalues {
            Some(ev) => ev.clone(),
            None => (0..m)
                .map(|_| separated_eigenvalues(n, &mut rng))
                .collect::<Result<_>>()?,
        };
        let unknowns: Vec<ComplexMatrix> = eigenvalues
            .iter()
            .map(|f| &(&t * &ComplexMatrix::diag(f)) * &t_inv)
            .collect();

        let equation = if self.orientation == Orientation::SandwichBivariate {
            let mut slots: Vec<ComplexMatrix> =
                (0..5).map(|_| integer_matrix(n, &mut rng)).collect();
            slots.push(ComplexMatrix::zeros(n, n));
            let partial = StructuredEquation::sandwich(SandwichSlots::from_array(
                slots.clone().try_into().expect("six slots"),
            ))?;
            slots[5] = -&partial.lhs(&unknowns)?;
            StructuredEquation::sandwich(SandwichSlots::from_array(
                slots.try_into().expect("six slots"),
            ))?
        } else {
            let mut terms: Vec<(ExponentTuple, ComplexMatrix)> = Vec::new();
            for e in ExponentTuple::all_up_to(m, 1, self.degree) {
                let pure_top = e.total() == self.degree && e.as_slice().contains(&self.degree);
                let coef = if pure_top {
                    nonsingular_integer_matrix(n, &mut rng)?
                } else {
                    integer_matrix(n, &mut rng)
                };
                terms.push((e, coef));
            }
            let partial = StructuredEquation::new(
                MatrixPolynomial::new(m, n, terms.clone())?,
                self.orientation,
            )?;
            terms.push((ExponentTuple::zero(m), -&partial.lhs(&unknowns)?));
            StructuredEquation::new(MatrixPolynomial::new(m, n, terms)?, self.orientation)?
        };
        Ok(PlantedInstance {
            equation,
            truth_unknowns: unknowns,
            truth_transform: t,
            truth_eigenvalues: eigenvalues,
            seed: self.seed,
        })
    }
}

/// Seeded planted instance with drawn eigenvalues.
pub fn plant_instance(
    n: usize,
    m: usize,
    degree: u32,
    orientation: Orientation,
    seed: u64,
) -> Result<PlantedInstance> {
    Planter::new(n, m, degree, orientation, seed).plant()
}

/// Largest `|det P|` over `samples` seeded points with coordinates in `0.5 ≤ |z| ≤ 2`.
pub fn det_scale(p: &MatrixPolynomial, seed: u64, samples: usize) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let point: Vec<C64> = (0..p.arity()).map(|_| annulus_point(&mut rng)).collect();
        worst = worst.max(determinant(&p.evaluate(&point)?)?.norm());
    }
    Ok(worst)
}

/// Univariate polynomial with integer entries in `[−5, 5]` and a nonsingular leading coefficient.
pub fn random_integer_polynomial(n: usize, degree: u32, seed: u64) -> Result<MatrixPolynomial> {
    if n == 0 || degree == 0 {
        return Err(Error::InvalidInput(
            "n and degree must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coefficients: Vec<ComplexMatrix> =
        (0..degree).map(|_| integer_matrix(n, &mut rng)).collect();
    coefficients.push(nonsingular_integer_matrix(n, &mut rng)?);
    MatrixPolynomial::univariate(coefficients)
}
