//! Doubly equiangular matrices: square `S` with both `S` and `S^T` in
//! `EM^n_alpha` and `S e = S^T e = sqrt(1 + (n-1) alpha) e`. At alpha = 0
//! these are the orthogonal matrices having `e` as an eigenvector.

use crate::ea::{self, certify_equiangular, EquiangularMatrix, SRDecomposition, CERT_TOL};
use crate::error::{Error, Result};
use crate::gram::{self, GramParams};
use crate::linalg::qr;
use crate::matrix::{dot, DenseMatrix};

/// `||u||` below `SKIP_TOL * sqrt(n)` leaves `S` unreflected.
pub const SKIP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DoublyEquiangular {
    mat: DenseMatrix,
    alpha: f64,
    cert_tol: f64,
}

impl DoublyEquiangular {
    /// Certifies `mat` as doubly equiangular within `tol`.
    pub fn new(mat: DenseMatrix, tol: f64) -> Result<Self> {
        let alpha = certify_doubly(&mat, tol).ok_or(Error::NotEquiangular)?;
        Ok(Self { mat, alpha, cert_tol: tol })
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

    /// Common row and column sum `sqrt(1 + (n-1) alpha)`.
    pub fn line_sum(&self) -> f64 {
        (1.0 + (self.mat.rows() as f64 - 1.0) * self.alpha).sqrt()
    }
}

fn sr_or_qr(a: &DenseMatrix, alpha: f64) -> Result<DenseMatrix> {
    if alpha == 0.0 {
        let (q, _) = qr(a)?;
        return Ok(q);
    }
    let SRDecomposition { s, .. } = ea::sr_decompose_cos(a, alpha)?;
    Ok(s.into_matrix())
}

/// Householder step of the construction: reflects `S` so that `e` becomes
/// an eigenvector, using `u = S e - sqrt(1 + (n-1) alpha) e`.
pub fn reflect_to_doubly(s: &DenseMatrix, alpha: f64) -> DenseMatrix {
    let n = s.rows();
    let c = (1.0 + (n as f64 - 1.0) * alpha).sqrt();
    let u: Vec<f64> = s.row_sums().iter().map(|x| x - c).collect();
    let uu = dot(&u, &u);
    if uu.sqrt() <= SKIP_TOL * (n as f64).sqrt() {
        return s.clone();
    }
    let uts = s.transpose().matvec(&u);
    DenseMatrix::from_fn(n, s.cols(), |i, j| s[(i, j)] - 2.0 * u[i] * uts[j] / uu)
}

/// Doubly equiangular matrix from a nonsingular `A`: the SR factor of `A`
/// at `alpha` (the QR factor when alpha is 0), reflected so that `e`
/// becomes an eigenvector.
pub fn dea(a: &DenseMatrix, alpha: f64) -> Result<DoublyEquiangular> {
    a.ensure_square()?;
    let n = a.rows();
    if n < 2 {
        return Err(Error::InvalidShape("need n >= 2".into()));
    }
    GramParams::new(n, alpha)?;
    let s = sr_or_qr(a, alpha).map_err(|e| match e {
        Error::RankDeficient { .. } => Error::Singular,
        other => other,
    })?;
    let mat = reflect_to_doubly(&s, alpha);
    Ok(DoublyEquiangular { mat, alpha, cert_tol: CERT_TOL })
}

/// Alpha when `M` and `M^T` both certify equiangular at a common alpha and
/// `e` is an eigenvector: `|e^T M e / n - c| <= tol` and every row and
/// column sum within `tol` of `c = sqrt(1 + (n-1) alpha)`.
pub fn certify_doubly(m: &DenseMatrix, tol: f64) -> Option<f64> {
    if !m.is_square() {
        return None;
    }
    let a_cols = certify_equiangular(m, tol)?;
    let a_rows = certify_equiangular(&m.transpose(), tol)?;
    if (a_cols - a_rows).abs() > tol {
        return None;
    }
    let n = m.rows();
    let inner = 1.0 + (n as f64 - 1.0) * a_cols;
    if inner < 0.0 {
        return None;
    }
    let c = inner.sqrt();
    let rows = m.row_sums();
    let cols = m.col_sums();
    let mean = rows.iter().sum::<f64>() / n as f64;
    if (mean - c).abs() > tol || rows.iter().chain(&cols).any(|x| (x - c).abs() > tol) {
        return None;
    }
    Some(a_cols)
}

/// `S_alpha = (s - t) I + t e e^T`, which commutes with every doubly
/// equiangular matrix of the same size.
pub fn canonical_commuter(p: GramParams) -> DenseMatrix {
    gram::gram_principal_sqrt(p).1
}

/// `(c, alpha_out)` with `S1 S2 (S1 S2)^T = c G_{alpha_out}` for doubly
/// equiangular `S1`, `S2` at `alpha1`, `alpha2`. `OutOfRange` when the
/// result is not a valid alpha for `n`.
pub fn dem_product_params(alpha1: f64, alpha2: f64, n: usize) -> Result<(f64, f64)> {
    GramParams::new(n, alpha1)?;
    GramParams::new(n, alpha2)?;
    let nf = n as f64;
    let c = 1.0 + (nf - 1.0) * alpha1 * alpha2;
    if c.abs() <= 1e-14 {
        return Err(Error::OutOfRange { alpha: f64::INFINITY, n });
    }
    let out = (alpha1 + alpha2 + (nf - 2.0) * alpha1 * alpha2) / c;
    if GramParams::new(n, out).is_err() {
        return Err(Error::OutOfRange { alpha: out, n });
    }
    Ok((c, out))
}

impl From<DoublyEquiangular> for EquiangularMatrix {
    fn from(d: DoublyEquiangular) -> Self {
        EquiangularMatrix::new_unchecked(d.mat, d.alpha, d.cert_tol)
    }
}
