use num_complex::Complex64;

use super::schur::real_schur;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// An eigenvalue with a unit-norm (complex) eigenvector.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: Complex64,
    pub vector: Vec<Complex64>,
}

/// All eigenpairs of a real square matrix: eigenvalues from the real Schur
/// form, eigenvectors by shifted inverse iteration.
pub fn eigenpairs(a: &DenseMatrix) -> Result<Vec<Eigenpair>> {
    let schur = real_schur(a)?;
    schur
        .eigenvalues()
        .into_iter()
        .map(|lam| Ok(Eigenpair { value: lam, vector: inverse_iteration(a, lam)? }))
        .collect()
}

/// `||A x - lambda x||_2` for complex `x`.
pub fn eigen_residual(a: &DenseMatrix, lam: Complex64, x: &[Complex64]) -> f64 {
    let n = a.rows();
    (0..n)
        .map(|i| {
            let ax: Complex64 = a.row(i).iter().zip(x).map(|(&aij, &xj)| xj * aij).sum();
            (ax - lam * x[i]).norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

/// Inverse iteration with a slightly perturbed shift.
pub fn inverse_iteration(a: &DenseMatrix, lam: Complex64) -> Result<Vec<Complex64>> {
    a.ensure_square()?;
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = a.max_abs().max(1.0);
    let shift = lam + Complex64::new(1e-10 * scale, 1e-10 * scale * lam.im.signum());
    let mut m: Vec<Complex64> = a.as_slice().iter().map(|&x| Complex64::new(x, 0.0)).collect();
    for i in 0..n {
        m[i * n + i] -= shift;
    }
    let (lu, perm) = complex_lu(&mut m, n)?;

    let mut x: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + (i as f64) * 0.1, 0.0)).collect();
    normalize(&mut x);
    for _ in 0..3 {
        x = complex_solve(&lu, &perm, n, &x);
        normalize(&mut x);
    }
    Ok(x)
}

fn normalize(x: &mut [Complex64]) {
    let nrm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if nrm > 0.0 {
        x.iter_mut().for_each(|z| *z /= nrm);
    }
}

fn complex_lu(m: &mut [Complex64], n: usize) -> Result<(Vec<Complex64>, Vec<usize>)> {
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[i * n + k].norm().total_cmp(&m[j * n + k].norm())).unwrap();
        if m[p * n + k].norm() == 0.0 {
            // exactly singular shift: nudge the pivot
            m[p * n + k] = Complex64::new(f64::EPSILON, 0.0);
        }
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
        }
        let pkk = m[k * n + k];
        for i in (k + 1)..n {
            let f = m[i * n + k] / pkk;
            m[i * n + k] = f;
            for j in (k + 1)..n {
                let t = m[k * n + j];
                m[i * n + j] -= f * t;
            }
        }
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Singular);
    }
    Ok((m.to_vec(), perm))
}

fn complex_solve(lu: &[Complex64], perm: &[usize], n: usize, b: &[Complex64]) -> Vec<Complex64> {
    let mut y: Vec<Complex64> = perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        for k in 0..i {
            let t = lu[i * n + k] * y[k];
            y[i] -= t;
        }
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let t = lu[i * n + k] * y[k];
            y[i] -= t;
        }
        y[i] /= lu[i * n + i];
    }
    y
}
