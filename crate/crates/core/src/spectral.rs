//! Spectral consequences of `S^T S = G_alpha`: the structured inverse
//! `S^{-1} = beta G_{alpha'} S^T`, the geometry of its rows, and the bounds
//! on eigenvalue moduli.

use num_complex::Complex64;

use crate::cost::tally;
use crate::ea::EquiangularMatrix;
use crate::error::{Error, Result};
use crate::gram::{self, GramParams};
use crate::linalg::eigen_residual;
use crate::matrix::DenseMatrix;

/// Largest `||S x - lambda x||` accepted as an eigenpair.
pub const EIGENPAIR_TOL: f64 = 1e-6;

/// Row geometry of `S^{-1}` for `S` in `EM^n_alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseGeometry {
    /// Common cosine between distinct rows of `S^{-1}`.
    pub alpha_prime: f64,
    /// Norm of every row, `sqrt(beta)`.
    pub row_norm: f64,
    /// Cosine between column `s_i` and row `i` of the inverse.
    pub cos_tau: f64,
}

/// `S^{-1}` in Theta(n^2) operations using
/// `[S^{-1}]_ij = beta ((1 - alpha') s_ji + alpha' rowsum_j)`.
pub fn fast_inverse(s: &EquiangularMatrix) -> Result<DenseMatrix> {
    let m = s.matrix();
    m.ensure_square()?;
    let n = m.rows();
    if n == 1 {
        let v = m[(0, 0)];
        if v == 0.0 {
            return Err(Error::Singular);
        }
        tally(1);
        return Ok(DenseMatrix::identity(1).scale(1.0 / v));
    }
    let d = gram::dual_params(s.gram_params()?)?;
    let row_sums = m.row_sums();
    tally(n * n);
    let (diag, off) = (d.beta * (1.0 - d.alpha_prime), d.beta * d.alpha_prime);
    let out = DenseMatrix::from_fn(n, n, |i, j| diag * m[(j, i)] + off * row_sums[j]);
    tally(2 * n * n);
    Ok(out)
}

/// Row norms and angles of `S^{-1}`. Any valid alpha is accepted; for
/// negative alpha the rows meet at a positive cosine.
pub fn inverse_geometry(p: GramParams) -> Result<InverseGeometry> {
    let d = gram::dual_params(p)?;
    if d.beta <= 0.0 {
        return Err(Error::InvalidAlpha { alpha: p.alpha(), n: p.n() });
    }
    let row_norm = d.beta.sqrt();
    Ok(InverseGeometry { alpha_prime: d.alpha_prime, row_norm, cos_tau: 1.0 / row_norm })
}

/// `(min, max)` of `sqrt(1 - alpha)` and `sqrt(1 + (n-1) alpha)`: every
/// eigenvalue of an `S` in `EM^n_alpha` has modulus in this interval.
pub fn eigenvalue_bounds(p: GramParams) -> (f64, f64) {
    let (a, b) = gram::gram_eigenvalues(p);
    let (a, b) = (a.sqrt(), b.sqrt());
    (a.min(b), a.max(b))
}

/// Defect `| |lambda| - sqrt(alpha |e^T x|^2 + 1 - alpha) |` for an
/// eigenpair of `S`. `x` is normalized before use.
pub fn eig_relation_check(s: &EquiangularMatrix, lam: Complex64, x: &[Complex64]) -> Result<f64> {
    let m = s.matrix();
    m.ensure_square()?;
    if x.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: format!("vector of length {}", m.rows()),
            got: format!("length {}", x.len()),
        });
    }
    let nrm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !nrm.is_finite() || nrm <= 0.0 {
        return Err(Error::NotEigenpair { residual: f64::INFINITY });
    }
    let x: Vec<Complex64> = x.iter().map(|z| z / nrm).collect();
    let residual = eigen_residual(m, lam, &x);
    if residual > EIGENPAIR_TOL {
        return Err(Error::NotEigenpair { residual });
    }
    let ex: Complex64 = x.iter().sum();
    let alpha = s.alpha();
    let predicted = (alpha * ex.norm_sqr() + 1.0 - alpha).max(0.0).sqrt();
    Ok((lam.norm() - predicted).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ea::{sr_decompose_cos, triangular_equiangular};
    use crate::linalg::generic_inverse;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn orthogonal_inverse_is_transpose() {
        let q = DenseMatrix::from_rows(&[[0.6, -0.8], [0.8, 0.6]]).unwrap();
        let s = EquiangularMatrix::new(q.clone(), 0.0, 1e-12).unwrap();
        assert!(fast_inverse(&s).unwrap().distance(&q.transpose()) < 1e-15);
    }

    #[test]
    fn two_by_two_triangular() {
        let s = triangular_equiangular(GramParams::new(2, 0.5).unwrap()).unwrap();
        let inv = fast_inverse(&s).unwrap();
        let want = [[1.0, -0.5774], [0.0, 1.1547]];
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(inv[(i, j)], want[i][j], 5e-5));
            }
        }
        assert!(inv.distance(&generic_inverse(s.matrix()).unwrap()) < 1e-14);
    }

    #[test]
    fn agrees_with_generic_on_sr_factor() {
        let sr = sr_decompose_cos(&DenseMatrix::hilbert(6), 0.3).unwrap();
        let fast = fast_inverse(&sr.s).unwrap();
        let slow = generic_inverse(sr.s.matrix()).unwrap();
        assert!(fast.distance(&slow) < 1e-9);
    }

    #[test]
    fn geometry_examples() {
        let g = inverse_geometry(GramParams::new(2, 0.3).unwrap()).unwrap();
        assert!(close(g.alpha_prime, -0.3, 1e-15));
        let g = inverse_geometry(GramParams::new(5, 0.0).unwrap()).unwrap();
        assert_eq!((g.row_norm, g.cos_tau, g.alpha_prime), (1.0, 1.0, 0.0));
        let g = inverse_geometry(GramParams::new(4, 0.5).unwrap()).unwrap();
        assert!(close(g.row_norm, 1.6_f64.sqrt(), 1e-15) && close(g.alpha_prime, -0.25, 1e-15));
        assert!(close(g.row_norm * g.row_norm * g.cos_tau * g.cos_tau, 1.0, 1e-15));
    }

    #[test]
    fn bounds_examples() {
        let (lo, hi) = eigenvalue_bounds(GramParams::new(3, 0.5).unwrap());
        assert!(close(lo, 0.7071, 5e-5) && close(hi, 1.4142, 5e-5));
        assert_eq!(eigenvalue_bounds(GramParams::new(4, 0.0).unwrap()), (1.0, 1.0));
        let (lo, hi) = eigenvalue_bounds(GramParams::new(3, -0.4).unwrap());
        assert!(close(lo, 0.2_f64.sqrt(), 1e-15) && close(hi, 1.4_f64.sqrt(), 1e-15));
    }

    #[test]
    fn relation_at_extremes() {
        let p = GramParams::new(4, 0.3).unwrap();
        let (_, root) = gram::gram_principal_sqrt(p);
        let s = EquiangularMatrix::new(root, 0.3, 1e-12).unwrap();
        let e: Vec<Complex64> = vec![Complex64::new(0.5, 0.0); 4];
        let top = (1.0 + 3.0 * 0.3_f64).sqrt();
        assert!(eig_relation_check(&s, Complex64::new(top, 0.0), &e).unwrap() < 1e-14);
        let v: Vec<Complex64> = [1.0, -1.0, 0.0, 0.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        assert!(eig_relation_check(&s, Complex64::new(0.7_f64.sqrt(), 0.0), &v).unwrap() < 1e-14);
        assert!(matches!(eig_relation_check(&s, Complex64::new(5.0, 0.0), &v), Err(Error::NotEigenpair { .. })));
    }
}
