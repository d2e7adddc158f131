//! Complex Schur form by shifted QR iteration on the Hessenberg form.

use nalgebra::{DMatrix, Hessenberg};

use super::matrix::{C64, ZERO};
use crate::error::{Error, Result};

const ITER_PER_EIGENVALUE: usize = 60;

fn abs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Rotation `[c s; -s̄ c]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    if b == ZERO {
        return (1.0, ZERO);
    }
    if a == ZERO {
        return (0.0, b.conj() / b.norm());
    }
    let r = a.norm().hypot(b.norm());
    let phase = a / a.norm();
    (a.norm() / r, phase * b.conj() / r)
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (l1, l2) = (mid + disc, mid - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Returns `(Q, T)` with `m = Q·T·Qᴴ`, `T` upper triangular. `Q` is only formed when
/// `want_q` is set (identity otherwise).
pub(crate) fn schur(m: &DMatrix<C64>, want_q: bool) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
    let n = m.nrows();
    let (mut q, mut h) = if n > 2 {
        let hess = Hessenberg::new(m.clone());
        let (q, h) = hess.unpack();
        (q, h)
    } else {
        (DMatrix::identity(n, n), m.clone())
    };
    if !want_q {
        q = DMatrix::identity(n, n);
    }
    // clear round-off below the subdiagonal
    for j in 0..n {
        for i in (j + 2)..n {
            h[(i, j)] = ZERO;
        }
    }
    let norm = h.iter().map(|z| abs1(*z)).fold(0.0, f64::max);
    if norm == 0.0 || n == 1 {
        return Ok((q, h));
    }
    let tiny = f64::MIN_POSITIVE * (n as f64) / f64::EPSILON;

    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let mut rotations: Vec<(f64, C64)> = Vec::with_capacity(n);
    while hi > 0 {
        // locate the active window [lo, hi]
        let mut lo = 0;
        for k in (1..=hi).rev() {
            let sub = abs1(h[(k, k - 1)]);
            let mut diag = abs1(h[(k - 1, k - 1)]) + abs1(h[(k, k)]);
            if diag == 0.0 {
                diag = norm;
            }
            if sub <= f64::EPSILON * diag || sub <= tiny {
                h[(k, k - 1)] = ZERO;
                lo = k;
                break;
            }
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > ITER_PER_EIGENVALUE * n {
            return Err(Error::ConvergenceFailure);
        }
        let shift = if iter.is_multiple_of(10) {
            h[(hi, hi)] + C64::new(0.75 * abs1(h[(hi, hi - 1)]), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for i in lo..=hi {
            h[(i, i)] -= shift;
        }
        rotations.clear();
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let (x, y) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = ZERO;
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            for i in 0..=(k + 1).min(hi) {
                let (x, y) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = x * c + s.conj() * y;
                h[(i, k + 1)] = -s * x + y * c;
            }
            if want_q {
                for i in 0..n {
                    let (x, y) = (q[(i, k)], q[(i, k + 1)]);
                    q[(i, k)] = x * c + s.conj() * y;
                    q[(i, k + 1)] = -s * x + y * c;
                }
            }
        }
        for i in lo..=hi {
            h[(i, i)] += shift;
        }
    }
    for j in 0..n {
        for i in (j + 1)..n {
            h[(i, j)] = ZERO;
        }
    }
    Ok((q, h))
}
