use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::numeric::{cmp_complex, eigenvalues, ComplexMatrix, C64, ONE, ZERO};

/// Relative distance below which two computed roots are treated as one.
pub const ROOT_CLUSTER_TOL: f64 = 1e-7;

/// Scalar polynomial with complex coefficients in ascending degree.
///
/// Trailing zero coefficients are trimmed, so a non-empty coefficient list always has a
/// nonzero leading term. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarPolynomial {
    coefficients: Vec<C64>,
}

impl ScalarPolynomial {
    pub fn new(mut coefficients: Vec<C64>) -> Self {
        while coefficients.last().is_some_and(|c| *c == ZERO) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn from_real(coefficients: &[f64]) -> Self {
        Self::new(coefficients.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn evaluate(&self, z: C64) -> C64 {
        self.coefficients
            .iter()
            .rev()
            .fold(ZERO, |acc, &c| acc * z + c)
    }

    fn derivative_at(&self, z: C64) -> C64 {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(ZERO, |acc, (k, &c)| acc * z + c * C64::new(k as f64, 0.0))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> ScalarPolynomial {
        ScalarPolynomial::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * C64::new(k as f64, 0.0))
                .collect(),
        )
    }

    pub fn max_coefficient(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// A root with its multiplicity after clustering.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub value: C64,
    pub multiplicity: usize,
}

impl Root {
    pub fn simple(value: C64) -> Self {
        Self {
            value,
            multiplicity: 1,
        }
    }
}

fn abs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity scaling by powers of two until row and column norms balance.
fn balance(m: &mut DMatrix<C64>) {
    const RADIX: f64 = 2.0;
    let n = m.nrows();
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += abs1(m[(j, i)]);
                    r += abs1(m[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut g = r / RADIX;
            let mut f = 1.0;
            let s = c + r;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c >= g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                let finv = C64::new(1.0 / f, 0.0);
                let fc = C64::new(f, 0.0);
                for j in 0..n {
                    m[(i, j)] *= finv;
                    m[(j, i)] *= fc;
                }
            }
        }
    }
}

fn polish(p: &ScalarPolynomial, mut z: C64) -> C64 {
    let mut best = p.evaluate(z).norm();
    for _ in 0..4 {
        let d = p.derivative_at(z);
        if d == ZERO || best == 0.0 {
            break;
        }
        let candidate = z - p.evaluate(z) / d;
        let val = p.evaluate(candidate).norm();
        if val.is_nan() || val >= best {
            break;
        }
        z = candidate;
        best = val;
    }
    z
}

/// All complex roots via eigenvalues of the balanced companion matrix.
///
/// Roots within [`ROOT_CLUSTER_TOL`]`·(1+|z|)` are merged (mean value, summed multiplicity);
/// the result is sorted by [`cmp_complex`]. Exact zero low-order coefficients yield exact zero
/// roots.
pub fn poly_roots(p: &ScalarPolynomial) -> Result<Vec<Root>> {
    let degree = match p.degree() {
        None => return Err(Error::IdenticallySingular),
        Some(0) => return Err(Error::DegreeZero),
        Some(d) => d,
    };
    let coeffs = p.coefficients();
    let zeros = coeffs.iter().take_while(|c| **c == ZERO).count();
    let reduced = &coeffs[zeros..];
    let d = degree - zeros;

    let mut raw: Vec<C64> = vec![ZERO; zeros];
    if d == 1 {
        raw.push(-reduced[0] / reduced[1]);
    } else if d > 1 {
        let lead = reduced[d];
        let mut companion = DMatrix::from_element(d, d, ZERO);
        for i in 1..d {
            companion[(i, i - 1)] = ONE;
        }
        for i in 0..d {
            companion[(i, d - 1)] = -reduced[i] / lead;
        }
        balance(&mut companion);
        let reduced_poly = ScalarPolynomial::new(reduced.to_vec());
        let values = eigenvalues(&ComplexMatrix::from_na(companion)?)?;
        raw.extend(values.into_iter().map(|z| polish(&reduced_poly, z)));
    }
    let mut roots = cluster_roots(&raw);
    if roots.iter().any(|r| r.multiplicity > 1) {
        let reduced_poly = ScalarPolynomial::new(reduced.to_vec());
        for r in roots
            .iter_mut()
            .filter(|r| r.multiplicity > 1 && r.value != ZERO)
        {
            // a root of multiplicity k is a simple root of the (k−1)-th derivative
            let mut q = reduced_poly.clone();
            for _ in 1..r.multiplicity {
                q = q.derivative();
            }
            let polished = polish(&q, r.value);
            if (polished - r.value).norm() <= ROOT_CLUSTER_TOL * (1.0 + r.value.norm()) {
                r.value = polished;
            }
        }
        roots.sort_by(|a, b| cmp_complex(&a.value, &b.value));
    }
    Ok(roots)
}

/// Groups values closer than the cluster tolerance (transitively) into single roots.
pub fn cluster_roots(values: &[C64]) -> Vec<Root> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let tol = ROOT_CLUSTER_TOL * (1.0 + values[i].norm().max(values[j].norm()));
            if (values[i] - values[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<C64>> = Default::default();
    for (i, &v) in values.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(v);
    }
    let mut roots: Vec<Root> = groups
        .into_values()
        .map(|g| {
            let sum: C64 = g.iter().sum();
            Root {
                value: sum / C64::new(g.len() as f64, 0.0),
                multiplicity: g.len(),
            }
        })
        .collect();
    roots.sort_by(|a, b| cmp_complex(&a.value, &b.value));
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn assert_roots(p: &ScalarPolynomial, expected: &[(C64, usize)]) {
        let roots = poly_roots(p).unwrap();
        assert_eq!(roots.len(), expected.len(), "{roots:?}");
        for (r, (v, m)) in roots.iter().zip(expected) {
            assert!(close(r.value, *v, 1e-9), "{roots:?}");
            assert_eq!(r.multiplicity, *m, "{roots:?}");
        }
    }

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn factored_quadratic() {
        assert_roots(
            &ScalarPolynomial::from_real(&[2.0, -3.0, 1.0]),
            &[(re(1.0), 1), (re(2.0), 1)],
        );
    }

    #[test]
    fn biquadratic() {
        assert_roots(
            &ScalarPolynomial::from_real(&[4.0, 0.0, -5.0, 0.0, 1.0]),
            &[(re(-2.0), 1), (re(-1.0), 1), (re(1.0), 1), (re(2.0), 1)],
        );
    }

    #[test]
    fn double_root_is_merged() {
        assert_roots(
            &ScalarPolynomial::from_real(&[1.0, -2.0, 1.0]),
            &[(re(1.0), 2)],
        );
        // (μ²−1)²
        assert_roots(
            &ScalarPolynomial::from_real(&[1.0, 0.0, -2.0, 0.0, 1.0]),
            &[(re(-1.0), 2), (re(1.0), 2)],
        );
    }

    #[test]
    fn cubic_with_zero_root() {
        assert_roots(
            &ScalarPolynomial::from_real(&[0.0, -1.0, 0.0, 1.0]),
            &[(re(-1.0), 1), (re(0.0), 1), (re(1.0), 1)],
        );
    }

    #[test]
    fn complex_pair() {
        assert_roots(
            &ScalarPolynomial::from_real(&[1.0, 0.0, 1.0]),
            &[(C64::new(0.0, -1.0), 1), (C64::new(0.0, 1.0), 1)],
        );
    }

    #[test]
    fn badly_scaled_coefficients() {
        // (μ − 1e-3)(μ − 1e3)
        let p = ScalarPolynomial::from_real(&[1.0, -(1e3 + 1e-3), 1.0]);
        let roots = poly_roots(&p).unwrap();
        assert!((roots[0].value.re - 1e-3).abs() < 1e-15);
        assert!((roots[1].value.re - 1e3).abs() < 1e-9);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(
            poly_roots(&ScalarPolynomial::from_real(&[3.0])),
            Err(Error::DegreeZero)
        );
        assert_eq!(
            poly_roots(&ScalarPolynomial::from_real(&[0.0, 0.0])),
            Err(Error::IdenticallySingular)
        );
        assert_eq!(
            ScalarPolynomial::from_real(&[1.0, 0.0, 0.0]).degree(),
            Some(0)
        );
    }
}
