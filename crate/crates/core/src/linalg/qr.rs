use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Column is treated as dependent once its residual norm drops below this
/// fraction of its original norm.
pub const RANK_TOL: f64 = 1e-10;

/// Thin Householder QR of a tall matrix.
///
/// Returns `Q` (rows x cols, orthonormal columns) and `R` (cols x cols,
/// upper triangular with nonnegative diagonal) with `A = Q R`.
pub fn qr(a: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    a.ensure_finite()?;
    let (m, n) = a.shape();
    if m < n {
        return Err(Error::InvalidShape(format!("QR needs rows >= cols, got {m}x{n}")));
    }
    let col_norms: Vec<f64> = (0..n).map(|j| crate::matrix::norm(&a.column(j))).collect();

    let mut work = a.clone();
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(n);

    for k in 0..n {
        let x: Vec<f64> = (k..m).map(|i| work[(i, k)]).collect();
        let xnorm = crate::matrix::norm(&x);
        if col_norms[k] == 0.0 || xnorm < RANK_TOL * col_norms[k] {
            return Err(Error::RankDeficient { column: k });
        }
        let alpha = if x[0] >= 0.0 { -xnorm } else { xnorm };
        let mut v = x;
        v[0] -= alpha;
        let vnorm = crate::matrix::norm(&v);
        if vnorm > 0.0 {
            v.iter_mut().for_each(|x| *x /= vnorm);
            // work[k.., k..] -= 2 v (v^T work[k.., k..])
            for j in k..n {
                let s: f64 = v.iter().enumerate().map(|(t, vi)| vi * work[(k + t, j)]).sum();
                for (t, vi) in v.iter().enumerate() {
                    work[(k + t, j)] -= 2.0 * vi * s;
                }
            }
        }
        reflectors.push(v);
    }

    let mut r = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            r[(i, j)] = work[(i, j)];
        }
    }

    // Q = H_0 H_1 ... H_{n-1} applied to the first n columns of I.
    let mut q = DenseMatrix::zeros(m, n);
    for j in 0..n {
        q[(j, j)] = 1.0;
    }
    for (k, v) in reflectors.iter().enumerate().rev() {
        for j in 0..n {
            let s: f64 = v.iter().enumerate().map(|(t, vi)| vi * q[(k + t, j)]).sum();
            for (t, vi) in v.iter().enumerate() {
                q[(k + t, j)] -= 2.0 * vi * s;
            }
        }
    }

    for i in 0..n {
        if r[(i, i)] < 0.0 {
            for j in i..n {
                r[(i, j)] = -r[(i, j)];
            }
            for row in 0..m {
                q[(row, i)] = -q[(row, i)];
            }
        }
    }
    Ok((q, r))
}
