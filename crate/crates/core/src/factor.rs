//! Equiangular analogues of the Schur forms: similarity to a block
//! triangular matrix through an equiangular `S`, equiangular eigenbases,
//! the factorization `A = S D S^T` and its two-eigenvalue special case
//! `A = r S S^T`.

use crate::ea::{self, triangular_equiangular, EquiangularMatrix, CERT_TOL};
use crate::error::{Error, MultiplicityHint, Result};
use crate::gram::{self, GramParams};
use crate::linalg::{count_nonreal, generic_inverse, poly_roots, real_schur, sym_eig};
use crate::matrix::DenseMatrix;

/// Relative tolerance for deciding two eigenvalues are equal.
pub const EIGEN_MERGE_TOL: f64 = 1e-8;

/// Relative tolerance for the reconstruction check of `S D S^T`.
pub const RECONSTRUCTION_TOL: f64 = 1e-7;

/// Grid step of the scan in [`alpha_real_root_bound`].
const BOUND_GRID: usize = 1000;

/// Width at which the bound bisection stops.
const BOUND_WIDTH: f64 = 1e-6;

/// `A = S diag(d) S^T`.
#[derive(Debug, Clone)]
pub struct SDSTFactorization {
    pub s: EquiangularMatrix,
    pub d: Vec<f64>,
    /// Frobenius norm of `S D S^T - A`.
    pub residual: f64,
}

/// Which family a coefficient polynomial was built for. The coefficients
/// coincide; the tag records how the caller meant them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolySource {
    /// Polynomial whose roots are the diagonal of `D` in `A = S D S^T`.
    Gn,
    /// The same form viewed as a family of real polynomials in `lambda` and `alpha`.
    Fn,
}

/// Monic polynomial, coefficients in descending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySpec {
    pub coeffs: Vec<f64>,
    pub alpha: f64,
    pub source: PolySource,
}

/// `A = S T S^{-1}` with `S` equiangular at `alpha` and `T` quasi upper
/// triangular, obtained as `Q = S R`, `T = R T_Q R^{-1}` from the real Schur
/// form `A = Q T_Q Q^T`. The 2x2 blocks of `T` sit where those of `T_Q` do.
pub fn schur_equiangular(a: &DenseMatrix, alpha: f64) -> Result<(EquiangularMatrix, DenseMatrix)> {
    a.ensure_square()?;
    let schur = real_schur(a)?;
    if a.rows() == 1 {
        let s = EquiangularMatrix::new(DenseMatrix::identity(1), alpha, CERT_TOL)?;
        return Ok((s, schur.t));
    }
    let sr = ea::sr_decompose_cos(&schur.q, alpha)?;
    let r_inv = generic_inverse(&sr.r)?;
    let mut t = sr.r.matmul(&schur.t).matmul(&r_inv);
    // R T R^{-1} keeps the quasi-triangular pattern; clear rounding below it
    let n = a.rows();
    let mut i = 0;
    while i < n {
        let size = if schur.blocks.contains(&i) { 2 } else { 1 };
        for r in (i + size)..n {
            for c in i..(i + size) {
                t[(r, c)] = 0.0;
            }
        }
        i += size;
    }
    Ok((sr.s, t))
}

/// Eigenvector matrix of an upper-triangular `T` with unit diagonal entries;
/// `None` when two diagonal values coincide.
fn triangular_eigenvectors(t: &DenseMatrix) -> Option<DenseMatrix> {
    let n = t.rows();
    let scale = t.max_abs().max(1.0);
    let mut x = DenseMatrix::identity(n);
    for j in 0..n {
        for i in (0..j).rev() {
            let gap = t[(j, j)] - t[(i, i)];
            if gap.abs() <= 1e-12 * scale {
                return None;
            }
            let s: f64 = ((i + 1)..=j).map(|k| t[(i, k)] * x[(k, j)]).sum();
            x[(i, j)] = s / gap;
        }
    }
    Some(x)
}

/// Ratio `s_{i,i+1} / s_{i+1,i+1}` of the triangular equiangular matrix.
fn shat_ratio(n: usize, alpha: f64, i: usize) -> f64 {
    match GramParams::new(n, alpha).and_then(triangular_equiangular) {
        Ok(s) => s.matrix()[(i, i + 1)] / s.matrix()[(i + 1, i + 1)],
        Err(_) => f64::NAN,
    }
}

/// An equiangular basis of eigenvectors of `A`, with its alpha in `(0, 1)`.
///
/// Works on the real Schur form `A = Q T Q^T`: the eigenvector matrix of `T`
/// must be the triangular equiangular matrix at some alpha, after flipping
/// the signs of Schur vectors. Alpha is found by bisection on the ratio of
/// two neighbouring entries and then checked against `T S = S diag(T)`.
/// A multiple of the identity returns alpha 0.5 by convention.
pub fn equiangular_eigenvectors(a: &DenseMatrix) -> Result<Option<(f64, EquiangularMatrix)>> {
    a.ensure_square()?;
    let n = a.rows();
    if n < 2 {
        return Ok(None);
    }
    let schur = real_schur(a)?;
    if schur.has_complex_blocks() {
        return Err(Error::ComplexSpectrum);
    }
    let (q, t) = (schur.q, schur.t);
    let scale = t.max_abs().max(1.0);
    let diag = t.diagonal();
    if diag.iter().any(|d| d.abs() <= 1e-12 * scale) {
        return Err(Error::Singular);
    }

    let all_equal = diag.iter().all(|d| (d - diag[0]).abs() <= 1e-10 * scale);
    if all_equal {
        if !t.is_upper_triangular(0.0) || (0..n).any(|i| ((i + 1)..n).any(|j| t[(i, j)].abs() > 1e-10 * scale)) {
            return Ok(None);
        }
        let hat = triangular_equiangular(GramParams::new(n, 0.5)?)?;
        let s = q.matmul(hat.matrix());
        return Ok(Some((0.5, EquiangularMatrix::new_unchecked(s, 0.5, CERT_TOL))));
    }

    let Some(x) = triangular_eigenvectors(&t) else {
        return Ok(None);
    };
    // flip Schur vectors so the first row of the eigenvector matrix is positive
    let mut signs = vec![1.0; n];
    for j in 1..n {
        if x[(0, j)] == 0.0 {
            return Ok(None);
        }
        signs[j] = x[(0, j)].signum();
    }
    let t2 = DenseMatrix::from_fn(n, n, |i, j| signs[i] * t[(i, j)] * signs[j]);
    let q2 = DenseMatrix::from_fn(n, n, |i, j| q[(i, j)] * signs[j]);

    let Some(i) = (0..n - 1).find(|&i| (t2[(i + 1, i + 1)] - t2[(i, i)]).abs() > 1e-10 * scale) else {
        return Ok(None);
    };
    let target = t2[(i, i + 1)] / (t2[(i + 1, i + 1)] - t2[(i, i)]);
    let (mut lo, mut hi) = (1e-6, 1.0 - 1e-6);
    let (f_lo, f_hi) = (shat_ratio(n, lo, i), shat_ratio(n, hi, i));
    if !(target >= f_lo && target <= f_hi) {
        return Ok(None);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if shat_ratio(n, mid, i) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let alpha = 0.5 * (lo + hi);
    let hat = triangular_equiangular(GramParams::new(n, alpha)?)?;
    let hm = hat.matrix();
    let lhs = t2.matmul(hm);
    let rhs = DenseMatrix::from_fn(n, n, |r, c| hm[(r, c)] * t2[(c, c)]);
    if lhs.distance(&rhs) > 1e-8 * scale {
        return Ok(None);
    }
    let s = q2.matmul(hm);
    Ok(Some((alpha, EquiangularMatrix::new_unchecked(s, alpha, CERT_TOL))))
}

/// Eigenvalues grouped by value: `(value, multiplicity)` in ascending order.
fn group_eigenvalues(lambdas: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut groups: Vec<(f64, usize)> = Vec::new();
    for &l in lambdas {
        match groups.last_mut() {
            Some((v, m)) if (l - *v).abs() <= tol => {
                *v = (*v * *m as f64 + l) / (*m as f64 + 1.0);
                *m += 1;
            }
            _ => groups.push((l, 1)),
        }
    }
    groups
}

fn two_eigenvalue_split(lambdas: &[f64], scale: f64) -> Result<(f64, f64)> {
    let n = lambdas.len();
    let groups = group_eigenvalues(lambdas, EIGEN_MERGE_TOL * scale);
    let pick = match groups.as_slice() {
        [(a, 1), (b, 1)] if n == 2 => {
            // either may play the repeated role; take the smaller modulus
            if a.abs() <= b.abs() {
                (*a, *b)
            } else {
                (*b, *a)
            }
        }
        [(a, ma), (b, 1)] if *ma == n - 1 => (*a, *b),
        [(a, 1), (b, mb)] if *mb == n - 1 => (*b, *a),
        _ => {
            return Err(Error::WrongSpectrum(format!(
                "expected one eigenvalue of multiplicity {} and one simple eigenvalue",
                n - 1
            )))
        }
    };
    let (l1, l2) = pick;
    if l1.abs() <= 1e-12 * scale || l2.abs() <= 1e-12 * scale {
        return Err(Error::WrongSpectrum("matrix is singular".into()));
    }
    if l1.signum() != l2.signum() {
        return Err(Error::WrongSpectrum("eigenvalues have opposite signs".into()));
    }
    Ok(pick)
}

/// `(alpha, r)` for eigenvalue `l1` of multiplicity `n - 1` and simple `l2`.
///
/// With `|l1| < |l2|` this is the direct formula. Otherwise the inverse has
/// the first shape; its parameters `(alpha, r')` give `alpha' ` and
/// `r = beta / r'`.
fn two_eigenvalue_params(n: usize, l1: f64, l2: f64) -> Result<(f64, f64)> {
    let nf = n as f64;
    let direct = |l1: f64, l2: f64| {
        let top = l2 - l1 + nf * l1;
        ((l2 - l1) / top, top / nf)
    };
    if l1.abs() <= l2.abs() {
        return Ok(direct(l1, l2));
    }
    let (a_inv, r_inv) = direct(1.0 / l1, 1.0 / l2);
    let d = gram::dual_params(GramParams::new(n, a_inv)?)?;
    Ok((d.alpha_prime, d.beta / r_inv))
}

/// `A = r S S^T` for symmetric nonsingular `A` with one eigenvalue of
/// multiplicity `n - 1` and one simple eigenvalue of the same sign.
///
/// `S = P S_alpha` where `P` maps the eigenvectors of `r G_alpha` onto those
/// of `A` (both in ascending order).
pub fn two_eigenvalue_factor(a: &DenseMatrix) -> Result<(f64, EquiangularMatrix)> {
    a.ensure_square()?;
    let n = a.rows();
    if n < 2 {
        return Err(Error::WrongSpectrum("need n >= 2".into()));
    }
    let (qa, lambdas) = sym_eig(a)?;
    let scale = lambdas.iter().fold(1.0_f64, |m, l| m.max(l.abs()));
    let (l1, l2) = two_eigenvalue_split(&lambdas, scale)?;
    let (alpha, r) = two_eigenvalue_params(n, l1, l2)?;
    let p = GramParams::new(n, alpha)?;
    let (qg, _) = sym_eig(&gram::gram_matrix(p).scale(r))?;
    let (_, root) = gram::gram_principal_sqrt(p);
    let s = qa.matmul(&qg.transpose()).matmul(&root);
    let residual = s.matmul(&s.transpose()).scale(r).distance(a);
    if residual > 1e-8 * a.frobenius_norm().max(1.0) {
        return Err(Error::ReconstructionFailed { residual });
    }
    Ok((r, EquiangularMatrix::new_unchecked(s, alpha, CERT_TOL)))
}

/// Elementary symmetric polynomials `e_0..e_n` of `lambdas`.
fn elementary_symmetric(lambdas: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; lambdas.len() + 1];
    e[0] = 1.0;
    for (i, &l) in lambdas.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] += l * e[k - 1];
        }
    }
    e
}

fn check_alpha(n: usize, alpha: f64) -> Result<()> {
    if n >= 2 {
        GramParams::new(n, alpha)?;
    } else if !alpha.is_finite() || alpha >= 1.0 {
        return Err(Error::InvalidAlpha { alpha, n });
    }
    Ok(())
}

/// `c_k = e_k(lambda) / ((1 - alpha)^{k-1} (1 + (k-1) alpha))` for `k = 1..n`.
pub fn sdst_coefficients(lambdas: &[f64], alpha: f64) -> Result<Vec<f64>> {
    let n = lambdas.len();
    if n == 0 {
        return Err(Error::DegreeZero);
    }
    if lambdas.iter().any(|l| !l.is_finite()) {
        return Err(Error::NonFinite);
    }
    check_alpha(n, alpha)?;
    let e = elementary_symmetric(lambdas);
    Ok((1..=n)
        .map(|k| {
            let kf = k as f64;
            e[k] / ((1.0 - alpha).powi(k as i32 - 1) * (1.0 + (kf - 1.0) * alpha))
        })
        .collect())
}

/// `x^n - c_1 x^{n-1} + c_2 x^{n-2} - ... + (-1)^n c_n`.
pub fn build_poly(lambdas: &[f64], alpha: f64, source: PolySource) -> Result<PolySpec> {
    let c = sdst_coefficients(lambdas, alpha)?;
    let mut coeffs = Vec::with_capacity(c.len() + 1);
    coeffs.push(1.0);
    for (k, ck) in c.iter().enumerate() {
        coeffs.push(if k % 2 == 0 { -ck } else { *ck });
    }
    Ok(PolySpec { coeffs, alpha, source })
}

/// Number of non-real roots of `poly` (after snapping).
pub fn nonreal_root_certificate(poly: &PolySpec) -> Result<usize> {
    Ok(count_nonreal(&poly_roots(&poly.coeffs)?))
}

fn all_real(lambdas: &[f64], alpha: f64) -> bool {
    build_poly(lambdas, alpha, PolySource::Gn)
        .and_then(|p| nonreal_root_certificate(&p))
        .map(|c| c == 0)
        .unwrap_or(false)
}

/// Largest alpha up to which the coefficient polynomial keeps only real
/// roots: scan a grid of step 1e-3, then bisect the first failing cell to
/// width 1e-6. Returns 0 when even alpha = 1e-6 fails.
pub fn alpha_real_root_bound(lambdas: &[f64]) -> f64 {
    if !all_real(lambdas, BOUND_WIDTH) {
        return 0.0;
    }
    let step = 1.0 / BOUND_GRID as f64;
    let Some(i) = (1..BOUND_GRID).find(|&i| !all_real(lambdas, i as f64 * step)) else {
        return (BOUND_GRID - 1) as f64 * step;
    };
    let (mut lo, mut hi) = (((i - 1) as f64 * step).max(BOUND_WIDTH), i as f64 * step);
    while hi - lo > BOUND_WIDTH {
        let mid = 0.5 * (lo + hi);
        if all_real(lambdas, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `A = S D S^T` with `S` equiangular at `alpha` and `D` real diagonal, for
/// symmetric `A` with distinct nonzero eigenvalues (at most `n - 2` zeros).
///
/// Multiplicity patterns outside that hypothesis are refused:
/// a multiple of the identity (or a single repeated nonzero value next to
/// zeros) reports its non-real roots, the `(n-1, 1)` pattern points to
/// [`two_eigenvalue_factor`], and a value repeated 2..=n-2 times has no
/// real factorization at all.
pub fn sdst_factor(a: &DenseMatrix, alpha: f64) -> Result<SDSTFactorization> {
    sdst_factor_impl(a, alpha, true)
}

/// [`sdst_factor`] without the multiplicity gate: the coefficient
/// polynomial and reconstruction decide. Meant for probing spectra the
/// gate would refuse.
pub fn sdst_factor_unchecked(a: &DenseMatrix, alpha: f64) -> Result<SDSTFactorization> {
    sdst_factor_impl(a, alpha, false)
}

fn sdst_factor_impl(a: &DenseMatrix, alpha: f64, gate: bool) -> Result<SDSTFactorization> {
    a.ensure_square()?;
    let n = a.rows();
    if !(alpha.is_finite() && (0.0..1.0).contains(&alpha)) {
        return Err(Error::InvalidAlpha { alpha, n });
    }
    let (q, lambdas) = sym_eig(a)?;
    let scale = lambdas.iter().fold(1.0_f64, |m, l| m.max(l.abs()));
    if n == 1 || alpha == 0.0 {
        return finish(a, q, lambdas, alpha);
    }

    let zero_tol = 1e-10 * scale;
    let nonzero: Vec<usize> = (0..n).filter(|&i| lambdas[i].abs() > zero_tol).collect();
    let zeros: Vec<usize> = (0..n).filter(|&i| lambdas[i].abs() <= zero_tol).collect();
    let k = nonzero.len();
    if zeros.len() > n - 2 {
        return Err(Error::MultiplicityUnsupported { hint: MultiplicityHint::Unsupported });
    }
    let lam_nz: Vec<f64> = nonzero.iter().map(|&i| lambdas[i]).collect();

    if gate {
        let groups = group_eigenvalues(&lam_nz, EIGEN_MERGE_TOL * scale);
        let top = groups.iter().map(|g| g.1).max().unwrap_or(0);
        if top == k {
            let count = nonreal_root_certificate(&build_poly(&lambdas, alpha, PolySource::Gn)?)?;
            return Err(Error::NonRealRoots { count });
        }
        if top == k - 1 && k >= 3 {
            let hint = if zeros.is_empty() { MultiplicityHint::TwoEigenvalue } else { MultiplicityHint::Unsupported };
            return Err(Error::MultiplicityUnsupported { hint });
        }
        if top >= 2 {
            return Err(Error::MultiplicityUnsupported { hint: MultiplicityHint::Impossible });
        }
    }

    let poly = build_poly(&lam_nz, alpha, PolySource::Gn)?;
    let roots = poly_roots(&poly.coeffs)?;
    let count = count_nonreal(&roots);
    if count > 0 {
        return Err(Error::NonRealRoots { count });
    }
    let mut d: Vec<f64> = roots.iter().map(|z| z.re).collect();
    d.sort_by(f64::total_cmp);

    // S_alpha diag(d) S_alpha is orthogonally similar to diag(lam_nz)
    let p = GramParams::new(k, alpha)?;
    let (_, root) = gram::gram_principal_sqrt(p);
    let m = DenseMatrix::from_fn(k, k, |i, j| root[(i, j)] * d[j]).matmul(&root);
    let (qm, mu) = sym_eig(&m)?;
    let gap = mu.iter().zip(&lam_nz).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    if gap > RECONSTRUCTION_TOL * scale {
        return Err(Error::ReconstructionFailed { residual: gap });
    }
    let s_k = qm.transpose().matmul(&root);

    // pad to n x n and continue the equiangular sequence through e_{k+1}..e_n
    let mut padded = DenseMatrix::zeros(n, k);
    for i in 0..k {
        padded.row_mut(i).copy_from_slice(s_k.row(i));
    }
    let more: Vec<Vec<f64>> = (k..n)
        .map(|j| {
            let mut v = vec![0.0; n];
            v[j] = 1.0;
            v
        })
        .collect();
    let s_full = ea::extend_columns(&padded, &more, alpha)?;
    d.resize(n, 0.0);

    let order: Vec<usize> = nonzero.iter().chain(&zeros).copied().collect();
    let v = DenseMatrix::from_fn(n, n, |i, j| q[(i, order[j])]);
    let s = v.matmul(&s_full);
    finish(a, s, d, alpha)
}

fn finish(a: &DenseMatrix, s: DenseMatrix, d: Vec<f64>, alpha: f64) -> Result<SDSTFactorization> {
    let sd = DenseMatrix::from_fn(s.rows(), s.cols(), |i, j| s[(i, j)] * d[j]);
    let residual = sd.matmul(&s.transpose()).distance(a);
    if residual > RECONSTRUCTION_TOL * a.frobenius_norm().max(1.0) {
        return Err(Error::ReconstructionFailed { residual });
    }
    Ok(SDSTFactorization { s: EquiangularMatrix::new_unchecked(s, alpha, CERT_TOL), d, residual })
}
