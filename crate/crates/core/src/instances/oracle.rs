use crate::error::{Error, Result};
use crate::numeric::{ComplexMatrix, C64, ZERO};
use crate::polymatrix::{poly_roots, ExponentTuple, MatrixPolynomial, ScalarPolynomial};
use crate::solver::StructuredEquation;

/// Roots of a 1×1 univariate equation, repeated by multiplicity and sorted.
pub fn scalar_oracle(eq: &StructuredEquation) -> Result<Vec<C64>> {
    if eq.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: eq.arity(),
        });
    }
    if eq.dim() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "scalar oracle needs 1x1 coefficients, got {0}x{0}",
            eq.dim()
        )));
    }
    let p = eq.poly();
    let coefficients = (0..=p.total_degree())
        .map(|k| {
            p.coefficient(&ExponentTuple::unit(1, 0, k))
                .map_or(ZERO, |c| c.get(0, 0))
        })
        .collect();
    let roots = poly_roots(&ScalarPolynomial::new(coefficients))?;
    Ok(roots
        .iter()
        .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
        .collect())
}

/// Gaussian integer `re + im·i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct GaussInt {
    re: i128,
    im: i128,
}

impl GaussInt {
    fn add(self, o: Self) -> Self {
        Self {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }

    fn mul(self, o: Self) -> Self {
        Self {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

/// Dense polynomial with Gaussian-integer coefficients, lowest degree first.
type ExactPoly = Vec<GaussInt>;

fn poly_add(a: &ExactPoly, b: &ExactPoly) -> ExactPoly {
    let mut out = vec![GaussInt::default(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] = out[i].add(*c);
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = out[i].add(*c);
    }
    out
}

fn poly_mul(a: &ExactPoly, b: &ExactPoly) -> ExactPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![GaussInt::default(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(x.mul(*y));
        }
    }
    out
}

fn exact_entry(z: C64) -> Result<GaussInt> {
    let ok = |x: f64| x.fract() == 0.0 && x.abs() < 2f64.powi(53);
    if !(ok(z.re) && ok(z.im)) {
        return Err(Error::NonIntegerInput {
            value: format!("{}{:+}i", z.re, z.im),
        });
    }
    Ok(GaussInt {
        re: z.re as i128,
        im: z.im as i128,
    })
}

/// Laplace expansion along the first row.
fn exact_det(m: &[Vec<ExactPoly>]) -> ExactPoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total: ExactPoly = Vec::new();
    for j in 0..n {
        let minor: Vec<Vec<ExactPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let mut term = poly_mul(&m[0][j], &exact_det(&minor));
        if j % 2 == 1 {
            term = term.into_iter().map(GaussInt::neg).collect();
        }
        total = poly_add(&total, &term);
    }
    total
}

/// Exact `det P(μ)` for Gaussian-integer coefficients and `n ≤ 4`.
pub fn symbolic_det_oracle(p: &MatrixPolynomial) -> Result<ScalarPolynomial> {
    if p.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: p.arity(),
        });
    }
    let n = p.dim();
    if n > 4 {
        return Err(Error::InvalidInput(format!(
            "exact determinant oracle supports n <= 4, got {n}"
        )));
    }
    let degree = p.total_degree() as usize;
    let zero = ComplexMatrix::zeros(n, n);
    let coefficients: Vec<&ComplexMatrix> = (0..=degree)
        .map(|k| {
            p.coefficient(&ExponentTuple::unit(1, 0, k as u32))
                .unwrap_or(&zero)
        })
        .collect();
    let mut entries = vec![vec![Vec::new(); n]; n];
    for (i, row) in entries.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = coefficients
                .iter()
                .map(|c| exact_entry(c.get(i, j)))
                .collect::<Result<ExactPoly>>()?;
        }
    }
    let det = exact_det(&entries);
    Ok(ScalarPolynomial::new(
        det.iter()
            .map(|c| C64::new(c.re as f64, c.im as f64))
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polymatrix::det_poly_univariate;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn scalar_eq(coefficients: &[C64]) -> StructuredEquation {
        StructuredEquation::left(
            MatrixPolynomial::univariate(
                coefficients
                    .iter()
                    .map(|c| ComplexMatrix::new(1, 1, vec![*c]).unwrap())
                    .collect(),
            )
            .unwrap(),
        )
    }

    fn close_all(got: &[C64], want: &[C64]) -> bool {
        got.len() == want.len() && got.iter().zip(want).all(|(a, b)| (a - b).norm() < 1e-12)
    }

    #[test]
    fn scalar_oracle_examples() {
        let r = scalar_oracle(&scalar_eq(&[re(2.0), re(-3.0), re(1.0)])).unwrap();
        assert!(close_all(&r, &[re(1.0), re(2.0)]));
        let r = scalar_oracle(&scalar_eq(&[re(0.0), re(-1.0), re(0.0), re(1.0)])).unwrap();
        assert!(close_all(&r, &[re(-1.0), re(0.0), re(1.0)]));
        let r = scalar_oracle(&scalar_eq(&[re(1.0), re(0.0), re(1.0)])).unwrap();
        assert!(close_all(&r, &[C64::new(0.0, -1.0), C64::new(0.0, 1.0)]));
        assert!(matches!(
            scalar_oracle(&scalar_eq(&[re(3.0)])),
            Err(Error::DegreeZero)
        ));
    }

    #[test]
    fn exact_determinant_examples() {
        let p = MatrixPolynomial::univariate(vec![
            ComplexMatrix::real_diag(&[-1.0, -4.0]),
            ComplexMatrix::zeros(2, 2),
            ComplexMatrix::identity(2),
        ])
        .unwrap();
        let d = symbolic_det_oracle(&p).unwrap();
        assert_eq!(d, ScalarPolynomial::from_real(&[4.0, 0.0, -5.0, 0.0, 1.0]));

        let swap = ComplexMatrix::from_real_rows(&[&[0.0, -1.0], &[-1.0, 0.0]]).unwrap();
        let p = MatrixPolynomial::univariate(vec![swap, ComplexMatrix::identity(2)]).unwrap();
        assert_eq!(
            symbolic_det_oracle(&p).unwrap(),
            ScalarPolynomial::from_real(&[-1.0, 0.0, 1.0])
        );
    }

    #[test]
    fn gaussian_integer_entries() {
        // det [[μ, i], [i, μ]] = μ² + 1
        let off = ComplexMatrix::new(
            2,
            2,
            vec![ZERO, C64::new(0.0, 1.0), C64::new(0.0, 1.0), ZERO],
        )
        .unwrap();
        let p = MatrixPolynomial::univariate(vec![off, ComplexMatrix::identity(2)]).unwrap();
        assert_eq!(
            symbolic_det_oracle(&p).unwrap(),
            ScalarPolynomial::from_real(&[1.0, 0.0, 1.0])
        );
    }

    #[test]
    fn rejects_fractional_and_large_inputs() {
        let p = MatrixPolynomial::univariate(vec![ComplexMatrix::from_real(1, 1, &[0.5]).unwrap()])
            .unwrap();
        assert!(matches!(
            symbolic_det_oracle(&p),
            Err(Error::NonIntegerInput { .. })
        ));
        let big = MatrixPolynomial::univariate(vec![ComplexMatrix::identity(5)]).unwrap();
        assert!(symbolic_det_oracle(&big).is_err());
    }

    #[test]
    fn agrees_with_interpolation_on_a_cubic() {
        let p = crate::instances::random_integer_polynomial(3, 3, 21).unwrap();
        let exact = symbolic_det_oracle(&p).unwrap();
        let approx = det_poly_univariate(&p).unwrap();
        let scale = exact.max_coefficient();
        for (k, c) in exact.coefficients().iter().enumerate() {
            let a = approx.coefficients().get(k).copied().unwrap_or(ZERO);
            assert!((a - c).norm() <= 1e-6 * scale);
        }
    }
}
