//! The equiangular algorithm: incremental construction of unit vectors with
//! a prescribed common inner product, the SR decomposition `A = S R`, the
//! unique upper-triangular equiangular matrix, certification, and the polar
//! bridge between equiangular and orthogonal matrices.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gram::{self, GramParams};
use crate::linalg::RANK_TOL;
use crate::matrix::{axpy, dot, norm, DenseMatrix};

/// Default certification tolerance for equiangular matrices.
pub const CERT_TOL: f64 = 1e-9;

/// `|cos theta|` below this is treated as exactly orthogonal.
const ORTHOGONAL_COS: f64 = 1e-15;

/// A matrix whose columns are unit vectors with common pairwise inner
/// product `alpha`, checked to `cert_tol` at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct EquiangularMatrix {
    mat: DenseMatrix,
    alpha: f64,
    cert_tol: f64,
}

impl EquiangularMatrix {
    /// Verifies unit columns and pairwise inner products `alpha` within `tol`.
    pub fn new(mat: DenseMatrix, alpha: f64, tol: f64) -> Result<Self> {
        mat.ensure_finite()?;
        let g = mat.gram();
        let m = mat.cols();
        for i in 0..m {
            for j in 0..m {
                let want = if i == j { 1.0 } else { alpha };
                if (g[(i, j)] - want).abs() > tol {
                    return Err(Error::NotEquiangular);
                }
            }
        }
        Ok(Self { mat, alpha, cert_tol: tol })
    }

    /// Certifies `mat` and records the measured alpha.
    pub fn certify(mat: DenseMatrix, tol: f64) -> Result<Self> {
        let alpha = certify_equiangular(&mat, tol).ok_or(Error::NotEquiangular)?;
        Ok(Self { mat, alpha, cert_tol: tol })
    }

    pub(crate) fn new_unchecked(mat: DenseMatrix, alpha: f64, cert_tol: f64) -> Self {
        Self { mat, alpha, cert_tol }
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.mat
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn cert_tol(&self) -> f64 {
        self.cert_tol
    }

    pub fn rows(&self) -> usize {
        self.mat.rows()
    }

    pub fn cols(&self) -> usize {
        self.mat.cols()
    }

    /// Gram parameters of the columns (needs at least two columns).
    pub fn gram_params(&self) -> Result<GramParams> {
        GramParams::new(self.cols(), self.alpha)
    }
}

/// `A = S R` with `S` equiangular and `R` upper triangular with positive diagonal.
#[derive(Debug, Clone)]
pub struct SRDecomposition {
    pub s: EquiangularMatrix,
    pub r: DenseMatrix,
    /// Frobenius norm of `A - S R`.
    pub residual: f64,
}

/// Coefficient of the normalized sum direction when adding a vector to `k`
/// equiangular ones at cosine `alpha`. Signed like `alpha`.
fn sum_coefficient(k: usize, alpha: f64) -> f64 {
    if alpha.abs() < ORTHOGONAL_COS || k == 0 {
        return 0.0;
    }
    let sec = 1.0 / alpha;
    let kf = k as f64;
    alpha.signum() * (kf / ((sec - 1.0) * (sec + kf))).sqrt()
}

fn check_cos(alpha: f64, k: usize) -> Result<()> {
    if !alpha.is_finite() || alpha >= 1.0 || alpha <= -1.0 {
        return Err(Error::InvalidAngle { theta: alpha.clamp(-1.0, 1.0).acos() });
    }
    // k prior vectors plus the new one stay independent only if 1 + k cos > 0
    if k > 0 && alpha < 0.0 && 1.0 + k as f64 * alpha <= 1e-12 {
        return Err(Error::DegenerateAngle { cos: alpha, k });
    }
    Ok(())
}

/// Orthogonalizes `a` against the orthonormal `basis` (two MGS passes) and
/// normalizes. Fails when the residual falls below the rank tolerance.
fn orthonormal_residual(basis: &[Vec<f64>], a: &[f64], column: usize) -> Result<Vec<f64>> {
    let a_norm = norm(a);
    let mut q = a.to_vec();
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, &q);
            axpy(-c, b, &mut q);
        }
    }
    let qn = norm(&q);
    if a_norm == 0.0 || qn < RANK_TOL * a_norm {
        return Err(Error::RankDeficient { column });
    }
    q.iter_mut().for_each(|x| *x /= qn);
    Ok(q)
}

/// One step of the algorithm given the orthonormal basis of the current span.
fn step(prev: &[Vec<f64>], basis: &[Vec<f64>], a: &[f64], alpha: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let k = prev.len();
    let q = orthonormal_residual(basis, a, k)?;
    if k == 0 {
        return Ok((q.clone(), q));
    }
    let coef = sum_coefficient(k, alpha);
    let mut v = q.clone();
    if coef != 0.0 {
        let kf = k as f64;
        // ||sum s_i|| from the Gram structure
        let sum_norm = (kf + kf * (kf - 1.0) * alpha).sqrt();
        for s in prev {
            axpy(coef / sum_norm, s, &mut v);
        }
    }
    let vn = norm(&v);
    v.iter_mut().for_each(|x| *x /= vn);
    Ok((v, q))
}

fn orthonormal_basis(s: &DenseMatrix) -> Result<Vec<Vec<f64>>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(s.cols());
    for j in 0..s.cols() {
        let q = orthonormal_residual(&basis, &s.column(j), j)?;
        basis.push(q);
    }
    Ok(basis)
}

/// Continues the algorithm from the equiangular columns of `prefix` through
/// the vectors `more`, returning all columns.
pub(crate) fn extend_columns(prefix: &DenseMatrix, more: &[Vec<f64>], alpha: f64) -> Result<DenseMatrix> {
    let mut basis = orthonormal_basis(prefix)?;
    let mut prev: Vec<Vec<f64>> = (0..prefix.cols()).map(|j| prefix.column(j)).collect();
    for a in more {
        check_cos(alpha, prev.len())?;
        let (s, q) = step(&prev, &basis, a, alpha)?;
        prev.push(s);
        basis.push(q);
    }
    DenseMatrix::from_columns(&prev)
}

fn next_vector(s_k: &EquiangularMatrix, a_next: &[f64], alpha: f64) -> Result<Vec<f64>> {
    if a_next.len() != s_k.rows() {
        return Err(Error::DimensionMismatch {
            expected: format!("vector of length {}", s_k.rows()),
            got: format!("length {}", a_next.len()),
        });
    }
    if a_next.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let k = s_k.cols();
    check_cos(alpha, k)?;
    let basis = orthonormal_basis(s_k.matrix())?;
    let prev: Vec<Vec<f64>> = (0..k).map(|j| s_k.matrix().column(j)).collect();
    Ok(step(&prev, &basis, a_next, alpha)?.0)
}

/// Next equiangular vector for an acute angle `theta` in `(0, pi/2]`.
///
/// Returns a unit vector in `span(S_k, a_next)` with inner product
/// `cos theta` against every column of `s_k`.
pub fn next_equiangular(s_k: &EquiangularMatrix, a_next: &[f64], theta: f64) -> Result<Vec<f64>> {
    if !(theta > 0.0 && theta <= std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidAngle { theta });
    }
    next_vector(s_k, a_next, snap_cos(theta))
}

/// Next equiangular vector for an obtuse angle `big_theta` in `(pi/2, pi)`.
///
/// With `k` prior vectors the new set stays independent only while
/// `cos big_theta > -1/k`; at or below that bound `DegenerateAngle` is
/// returned (the `-1/n` configuration is the simplex frame).
pub fn next_equiangular_obtuse(s_k: &EquiangularMatrix, a_next: &[f64], big_theta: f64) -> Result<Vec<f64>> {
    if !(big_theta > std::f64::consts::FRAC_PI_2 && big_theta < std::f64::consts::PI) {
        return Err(Error::InvalidAngle { theta: big_theta });
    }
    next_vector(s_k, a_next, big_theta.cos())
}

fn snap_cos(theta: f64) -> f64 {
    let c = theta.cos();
    if c.abs() < ORTHOGONAL_COS {
        0.0
    } else {
        c
    }
}

/// SR decomposition for an angle `theta` in radians.
pub fn sr_decompose(a: &DenseMatrix, theta: f64) -> Result<SRDecomposition> {
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return Err(Error::InvalidAngle { theta });
    }
    sr_decompose_cos(a, snap_cos(theta))
}

/// SR decomposition for a cosine `alpha` in `(-1/(m-1), 1)`; positive alpha
/// uses the acute rule, negative the obtuse rule, zero reduces to QR.
pub fn sr_decompose_cos(a: &DenseMatrix, alpha: f64) -> Result<SRDecomposition> {
    a.ensure_finite()?;
    let (n, m) = a.shape();
    if m == 0 || n < m {
        return Err(Error::InvalidShape(format!("SR needs rows >= cols >= 1, got {n}x{m}")));
    }
    if !alpha.is_finite() || alpha >= 1.0 || (m > 1 && alpha <= -1.0 / (m as f64 - 1.0)) {
        return Err(Error::InvalidAlpha { alpha, n: m });
    }

    let mut prev: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
    for j in 0..m {
        check_cos(alpha, j)?;
        let (s, q) = step(&prev, &basis, &a.column(j), alpha)?;
        prev.push(s);
        basis.push(q);
    }
    let s = DenseMatrix::from_columns(&prev)?;
    let r = sr_triangular_factor(&s, a, alpha)?;
    let residual = a.distance(&s.matmul(&r));
    Ok(SRDecomposition { s: EquiangularMatrix::new_unchecked(s, alpha, CERT_TOL), r, residual })
}

/// `R = G_alpha^{-1} S^T A`, upper triangular because each `a_k` lies in the
/// span of the first `k` columns of `S`.
fn sr_triangular_factor(s: &DenseMatrix, a: &DenseMatrix, alpha: f64) -> Result<DenseMatrix> {
    let m = s.cols();
    let sta = s.transpose().matmul(a);
    let mut r = if m == 1 {
        sta
    } else {
        let ginv = gram::gram_inverse(GramParams::new(m, alpha)?)?;
        ginv.matmul(&sta)
    };
    for i in 0..m {
        for j in 0..i {
            r[(i, j)] = 0.0;
        }
    }
    Ok(r)
}

/// The unique upper-triangular equiangular matrix with positive diagonal,
/// `S^T S = G_alpha`, built row by row from `s_11 = 1`,
/// `s_ij = s_ii - (1 - alpha) / s_ii` for `j > i`, and unit columns.
pub fn triangular_equiangular(p: GramParams) -> Result<EquiangularMatrix> {
    let (n, alpha) = (p.n(), p.alpha());
    if alpha < 0.0 {
        return Err(Error::InvalidAlpha { alpha, n });
    }
    let mut s = DenseMatrix::zeros(n, n);
    for i in 0..n {
        let above: f64 = (0..i).map(|l| s[(l, i)] * s[(l, i)]).sum();
        let d = (1.0 - above).sqrt();
        s[(i, i)] = d;
        let off = d - (1.0 - alpha) / d;
        for j in (i + 1)..n {
            s[(i, j)] = off;
        }
    }
    Ok(EquiangularMatrix::new_unchecked(s, alpha, CERT_TOL))
}

/// Common off-diagonal value of `M^T M` when `M` has unit columns and a
/// constant pairwise inner product (both within `tol`); `None` otherwise.
///
/// Needs at least two columns, since alpha is undefined for one.
pub fn certify_equiangular(m: &DenseMatrix, tol: f64) -> Option<f64> {
    if m.cols() < 2 || m.ensure_finite().is_err() {
        return None;
    }
    let g = m.gram();
    let k = m.cols();
    if (0..k).any(|i| (g[(i, i)] - 1.0).abs() > tol) {
        return None;
    }
    let offs: Vec<f64> =
        (0..k).flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| g[(i, j)]).collect();
    let mean = offs.iter().sum::<f64>() / offs.len() as f64;
    if offs.iter().all(|x| (x - mean).abs() <= tol) {
        Some(mean)
    } else {
        None
    }
}

/// Orthogonal factor `Q = S S_alpha^{-1}` of the polar decomposition
/// `S = Q S_alpha`, where `S_alpha` is the principal root of `G_alpha`.
pub fn polar_orthogonal_factor(s: &EquiangularMatrix) -> Result<DenseMatrix> {
    s.matrix().ensure_square()?;
    let p = s.gram_params().map_err(|_| Error::Singular)?;
    let sp = gram::principal_sqrt_params(p);
    // S_alpha = (s - t) I + t e e^T
    let (a, b) = gram::rank_one_identity_inverse(p.n(), sp.s - sp.t, sp.t)?;
    let m = s.matrix();
    let n = p.n();
    let row_sums = m.row_sums();
    Ok(DenseMatrix::from_fn(n, n, |i, j| a * m[(i, j)] + b * row_sums[i]))
}

/// A random member of `EM^n_alpha`: `H_1 ... H_k S_alpha` for a few random
/// Householder reflections `H_i`. O(n^2 k) to build.
pub fn random_equiangular<R: Rng + ?Sized>(p: GramParams, reflections: usize, rng: &mut R) -> EquiangularMatrix {
    let n = p.n();
    let (_, mut m) = gram::gram_principal_sqrt(p);
    for _ in 0..reflections {
        let u: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let un2 = dot(&u, &u);
        if un2 == 0.0 {
            continue;
        }
        // m <- (I - 2 u u^T / u^T u) m
        let utm = m.transpose().matvec(&u);
        for (i, ui) in u.iter().enumerate() {
            let f = 2.0 * ui / un2;
            for (x, c) in m.row_mut(i).iter_mut().zip(&utm) {
                *x -= f * c;
            }
        }
    }
    EquiangularMatrix::new_unchecked(m, p.alpha(), CERT_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn single(v: &[f64]) -> EquiangularMatrix {
        EquiangularMatrix::new(DenseMatrix::from_columns(&[v]).unwrap(), 0.0, 1e-12).unwrap()
    }

    #[test]
    fn first_vector_is_normalized() {
        let empty = EquiangularMatrix::new(DenseMatrix::zeros(3, 0), 0.5, 1e-12).unwrap();
        let v = next_equiangular(&empty, &[0.0, 3.0, 4.0], FRAC_PI_3).unwrap();
        assert!(close(v[1], 0.6, 1e-15) && close(v[2], 0.8, 1e-15));
    }

    #[test]
    fn right_angle_gives_gram_schmidt() {
        let s1 = single(&[1.0, 0.0]);
        let v = next_equiangular(&s1, &[1.0, 1.0], FRAC_PI_2).unwrap();
        assert!(close(v[0], 0.0, 1e-15) && close(v[1], 1.0, 1e-15));
        assert_eq!(sum_coefficient(3, 1e-17), 0.0);
        assert!(sum_coefficient(3, 1e-6) < 1e-5);
    }

    #[test]
    fn plane_geometry() {
        let s1 = single(&[1.0, 0.0]);
        let v = next_equiangular(&s1, &[0.0, 1.0], FRAC_PI_3).unwrap();
        assert!(close(v[0], 0.5, 1e-15) && close(v[1], 3.0_f64.sqrt() / 2.0, 1e-15));
        let w = next_equiangular_obtuse(&s1, &[0.0, 1.0], 2.0 * PI / 3.0).unwrap();
        assert!(close(w[0], -0.5, 1e-15) && close(w[1], 3.0_f64.sqrt() / 2.0, 1e-15));
    }

    #[test]
    fn obtuse_bound() {
        let s1 = single(&[1.0, 0.0, 0.0]);
        let c: f64 = -0.25;
        let v2 = next_equiangular_obtuse(&s1, &[0.0, 1.0, 0.0], c.acos()).unwrap();
        let s2 =
            EquiangularMatrix::new(DenseMatrix::from_columns(&[vec![1.0, 0.0, 0.0], v2]).unwrap(), c, 1e-12).unwrap();
        let v3 = next_equiangular_obtuse(&s2, &[0.0, 0.0, 1.0], c.acos()).unwrap();
        for j in 0..2 {
            assert!(close(dot(&s2.matrix().column(j), &v3), c, 1e-14));
        }
        let half: f64 = -0.5;
        let v2 = next_equiangular_obtuse(&s1, &[0.0, 1.0, 0.0], half.acos()).unwrap();
        let s2 = EquiangularMatrix::new(DenseMatrix::from_columns(&[vec![1.0, 0.0, 0.0], v2]).unwrap(), half, 1e-12)
            .unwrap();
        assert!(matches!(
            next_equiangular_obtuse(&s2, &[0.0, 0.0, 1.0], half.acos()),
            Err(Error::DegenerateAngle { k: 2, .. })
        ));
    }

    #[test]
    fn angle_ranges() {
        let s1 = single(&[1.0, 0.0]);
        assert!(matches!(next_equiangular(&s1, &[0.0, 1.0], 2.0), Err(Error::InvalidAngle { .. })));
        assert!(matches!(next_equiangular(&s1, &[0.0, 1.0], 0.0), Err(Error::InvalidAngle { .. })));
        assert!(matches!(next_equiangular_obtuse(&s1, &[0.0, 1.0], 1.0), Err(Error::InvalidAngle { .. })));
        assert!(matches!(next_equiangular(&s1, &[2.0, 0.0], 1.0), Err(Error::RankDeficient { column: 1 })));
    }

    #[test]
    fn hilbert_fixture() {
        let sr = sr_decompose(&DenseMatrix::hilbert(4), FRAC_PI_3).unwrap();
        let row0 = [0.8381, -0.0336, 0.3939, 0.2788];
        for (j, want) in row0.iter().enumerate() {
            assert!(close(sr.s.matrix()[(0, j)], *want, 5e-5));
        }
        let rdiag = [1.1932, 0.1369, 0.0076, 0.0002];
        for (i, want) in rdiag.iter().enumerate() {
            assert!(close(sr.r[(i, i)], *want, 5e-5));
        }
        assert!(sr.residual <= 1e-12);
    }

    #[test]
    fn orthogonal_input_at_right_angle() {
        let q = DenseMatrix::from_rows(&[[0.6, -0.8], [0.8, 0.6]]).unwrap();
        let sr = sr_decompose(&q, FRAC_PI_2).unwrap();
        assert!(sr.s.matrix().distance(&q) < 1e-15);
        assert!(sr.r.distance_to_identity() < 1e-15);
    }

    #[test]
    fn circulant_fixture() {
        let q =
            DenseMatrix::from_rows(&[[3.0, -2.0, 6.0], [6.0, 3.0, -2.0], [-2.0, 6.0, 3.0]]).unwrap().scale(1.0 / 7.0);
        let sr = sr_decompose(&q, FRAC_PI_3).unwrap();
        for (j, want) in [0.4286, -0.0332, 0.8317].iter().enumerate() {
            assert!(close(sr.s.matrix()[(0, j)], *want, 5e-5));
        }
        assert!(close(sr.r[(0, 1)], -0.5774, 5e-5));
    }

    #[test]
    fn triangular_examples() {
        let s = triangular_equiangular(GramParams::new(4, FRAC_PI_4.cos()).unwrap()).unwrap();
        let want = [
            [1.0, 0.7071, 0.7071, 0.7071],
            [0.0, 0.7071, 0.2929, 0.2929],
            [0.0, 0.0, 0.6436, 0.1885],
            [0.0, 0.0, 0.0, 0.6154],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!(close(s.matrix()[(i, j)], want[i][j], 5e-5));
            }
        }
        let s = triangular_equiangular(GramParams::new(3, 0.5).unwrap()).unwrap();
        let want = [[1.0, 0.5, 0.5], [0.0, 0.8660, 0.2887], [0.0, 0.0, 0.8165]];
        for i in 0..3 {
            for j in 0..3 {
                assert!(close(s.matrix()[(i, j)], want[i][j], 5e-5));
            }
        }
        let s = triangular_equiangular(GramParams::new(5, 0.0).unwrap()).unwrap();
        assert!(s.matrix().distance_to_identity() < 1e-15);
        assert!(triangular_equiangular(GramParams::new(3, -0.2).unwrap()).is_err());
    }

    #[test]
    fn certification() {
        assert_eq!(certify_equiangular(&DenseMatrix::identity(4), 1e-12), Some(0.0));
        assert_eq!(certify_equiangular(&DenseMatrix::hilbert(4), 1e-6), None);
        assert_eq!(certify_equiangular(&DenseMatrix::identity(1), 1e-12), None);
        let sr = sr_decompose(&DenseMatrix::hilbert(5), 1.1).unwrap();
        let a = certify_equiangular(sr.s.matrix(), 1e-9).unwrap();
        assert!(close(a, 1.1_f64.cos(), 1e-9));
    }

    #[test]
    fn polar_factor() {
        let p = GramParams::new(3, 0.5).unwrap();
        let (_, root) = gram::gram_principal_sqrt(p);
        let s = EquiangularMatrix::new(root, 0.5, 1e-12).unwrap();
        assert!(polar_orthogonal_factor(&s).unwrap().distance_to_identity() < 1e-14);

        let hat = triangular_equiangular(p).unwrap();
        let q = polar_orthogonal_factor(&hat).unwrap();
        assert!(q.gram().distance_to_identity() <= 1e-10);
        let (_, root) = gram::gram_principal_sqrt(p);
        assert!(q.matmul(&root).distance(hat.matrix()) <= 1e-10);
    }

    #[test]
    fn rectangular_polar_rejected() {
        let sr = sr_decompose(&DenseMatrix::hilbert(4).columns_range(0, 2), 1.0).unwrap();
        assert!(matches!(polar_orthogonal_factor(&sr.s), Err(Error::NotSquare { .. })));
    }
}
