//! Closed-form algebra of the equiangular Gram matrix
//! `G_alpha = (1 - alpha) I + alpha e e^T`.
//!
//! `G_alpha` is carried symbolically as `(n, alpha)`; every scalar query is
//! O(1) and the dense matrix is only built on request.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Minimum distance from either end of the admissible alpha interval.
pub const ALPHA_BOUNDARY_TOL: f64 = 1e-9;

/// `(n, alpha)` with `n >= 2` and `-1/(n-1) < alpha < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramParams {
    n: usize,
    alpha: f64,
}

impl GramParams {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n < 2 || !alpha.is_finite() {
            return Err(Error::InvalidAlpha { alpha, n });
        }
        let lower = -1.0 / (n as f64 - 1.0);
        if (1.0 - alpha).min(alpha - lower) <= ALPHA_BOUNDARY_TOL {
            return Err(Error::InvalidAlpha { alpha, n });
        }
        Ok(Self { n, alpha })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }
}

/// Scalars with `G_alpha^{-1} = beta * G_{alpha'}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualParams {
    pub beta: f64,
    pub alpha_prime: f64,
}

/// Diagonal value `s` and off-diagonal value `t` of a symmetric square
/// root `(s - t) I + t e e^T` of `G_alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqrtParams {
    pub s: f64,
    pub t: f64,
}

impl SqrtParams {
    pub fn matrix(&self, n: usize) -> DenseMatrix {
        DenseMatrix::from_fn(n, n, |i, j| if i == j { self.s } else { self.t })
    }

    /// `(s - t, s + (n-1) t)`: eigenvalue on `e^perp` and on `e`.
    pub fn eigenvalues(&self, n: usize) -> (f64, f64) {
        (self.s - self.t, self.s + (n as f64 - 1.0) * self.t)
    }
}

/// Dense `G_alpha`.
pub fn gram_matrix(p: GramParams) -> DenseMatrix {
    let a = p.alpha;
    DenseMatrix::from_fn(p.n, p.n, |i, j| if i == j { 1.0 } else { a })
}

/// `(1 - alpha, 1 + (n-1) alpha)`: the eigenvalue of multiplicity `n - 1`
/// and the one belonging to `e`. Not sorted; for negative alpha the first
/// is the larger.
pub fn gram_eigenvalues(p: GramParams) -> (f64, f64) {
    (1.0 - p.alpha, 1.0 + (p.nf() - 1.0) * p.alpha)
}

pub fn dual_params(p: GramParams) -> Result<DualParams> {
    let (n, a) = (p.nf(), p.alpha);
    let den = (1.0 - a) * (1.0 + (n - 1.0) * a);
    let mid = 1.0 + (n - 2.0) * a;
    if den.abs() <= 1e-12 || mid.abs() <= 1e-12 {
        return Err(Error::InvalidAlpha { alpha: a, n: p.n });
    }
    Ok(DualParams { beta: mid / den, alpha_prime: -a / mid })
}

/// `G_alpha^{-1}` as `beta * G_{alpha'}`.
pub fn gram_inverse(p: GramParams) -> Result<DenseMatrix> {
    let d = dual_params(p)?;
    Ok(DenseMatrix::from_fn(p.n, p.n, |i, j| d.beta * if i == j { 1.0 } else { d.alpha_prime }))
}

/// Parameters of the principal (symmetric positive definite) square root.
pub fn principal_sqrt_params(p: GramParams) -> SqrtParams {
    let n = p.nf();
    let big = (1.0 + (n - 1.0) * p.alpha).sqrt();
    let small = (1.0 - p.alpha).sqrt();
    SqrtParams { s: (big + (n - 1.0) * small) / n, t: (big - small) / n }
}

/// Principal square root `S_alpha = (s - t) I + t e e^T` of `G_alpha`.
pub fn gram_principal_sqrt(p: GramParams) -> (SqrtParams, DenseMatrix) {
    let sp = principal_sqrt_params(p);
    (sp, sp.matrix(p.n))
}

/// Both symmetric roots of the form `(s - t) I + t e e^T` with `s >= 0`.
///
/// The first entry is always the principal root. The second flips the sign
/// of the `sqrt(1 - alpha)` branch (eigenvalues `-sqrt(1-alpha)` and
/// `sqrt(1+(n-1)alpha)`); it is listed only when its diagonal value is
/// nonnegative, which happens exactly for `alpha >= (n-2)/(n-1)`.
pub fn gram_sqrt_variants(p: GramParams) -> Vec<SqrtParams> {
    let n = p.nf();
    let big = (1.0 + (n - 1.0) * p.alpha).sqrt();
    let small = (1.0 - p.alpha).sqrt();
    let principal = principal_sqrt_params(p);
    let mut out = vec![principal];
    let s = (big - (n - 1.0) * small) / n;
    let t = (big + small) / n;
    if s >= -1e-12 {
        let alt = SqrtParams { s: s.max(0.0), t };
        if (alt.s - principal.s).abs() > 1e-12 || (alt.t - principal.t).abs() > 1e-12 {
            out.push(alt);
        }
    }
    out
}

/// Spectral condition number of any `S` whose Gram matrix is `G_alpha`.
pub fn gram_condition(p: GramParams) -> f64 {
    let (n, a) = (p.nf(), p.alpha);
    if a > 0.0 {
        (1.0 + n * a / (1.0 - a)).sqrt()
    } else if a < 0.0 {
        (1.0 + n * a.abs() / (1.0 - (n - 1.0) * a.abs())).sqrt()
    } else {
        1.0
    }
}

/// `(a I + b e e^T)^{-1}` for the two-parameter family, as `(a', b')`.
pub(crate) fn rank_one_identity_inverse(n: usize, a: f64, b: f64) -> Result<(f64, f64)> {
    let top = a + n as f64 * b;
    if a.abs() <= 1e-14 || top.abs() <= 1e-14 {
        return Err(Error::Singular);
    }
    Ok((1.0 / a, -b / (a * top)))
}
