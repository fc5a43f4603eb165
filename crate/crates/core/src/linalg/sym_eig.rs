use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

const MAX_SWEEPS: usize = 100;

/// Relative asymmetry accepted before a matrix is rejected.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Returns `(Q, lambdas)` with `A = Q diag(lambdas) Q^T`, eigenvalues in
/// ascending order. Each eigenvector is signed so that its entry of largest
/// magnitude is positive (first such entry on ties).
pub fn sym_eig(a: &DenseMatrix) -> Result<(DenseMatrix, Vec<f64>)> {
    a.ensure_square()?;
    a.ensure_finite()?;
    let n = a.rows();
    let asym = a.asymmetry();
    if asym > SYMMETRY_TOL * a.max_abs().max(1.0) {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }

    let mut m = DenseMatrix::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    let mut v = DenseMatrix::identity(n);
    let scale = m.frobenius_norm();

    let mut converged = n <= 1 || scale == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut m, &mut v, p, q, c, s);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { iterations: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let lambdas: Vec<f64> = order.iter().map(|&i| m[(i, i)]).collect();
    let mut q = DenseMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    fix_signs(&mut q);
    Ok((q, lambdas))
}

/// Applies the Jacobi rotation in the (p, q) plane to `m` (two-sided) and
/// accumulates it into `v`.
fn rotate(m: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = m.rows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = c * mkp - s * mkq;
        m[(k, q)] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = c * mpk - s * mqk;
        m[(q, k)] = s * mpk + c * mqk;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Flips columns so the entry of largest magnitude in each is positive.
pub fn fix_signs(q: &mut DenseMatrix) {
    for j in 0..q.cols() {
        let mut best = 0usize;
        for i in 0..q.rows() {
            // strict comparison with a little slack keeps the first of near-ties
            if q[(i, j)].abs() > q[(best, j)].abs() * (1.0 + 1e-12) {
                best = i;
            }
        }
        if q[(best, j)] < 0.0 {
            for i in 0..q.rows() {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
}
