use num_complex::Complex64;

use super::schur::real_schur;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Roots with `|im| <= SNAP_TOL * (1 + |re|)` are reported as real.
pub const SNAP_TOL: f64 = 1e-8;

/// All complex roots of the polynomial with coefficients in descending
/// powers (`coeffs[0]` is the leading coefficient).
///
/// Roots are the eigenvalues of the balanced companion matrix, polished
/// with a few guarded Newton steps, snapped to the real axis when their
/// imaginary part is negligible, and sorted by real then imaginary part.
pub fn poly_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite);
    }
    let first = coeffs.iter().position(|&c| c != 0.0).ok_or(Error::DegreeZero)?;
    let coeffs = &coeffs[first..];
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Err(Error::DegreeZero);
    }
    let monic: Vec<f64> = coeffs.iter().map(|c| c / coeffs[0]).collect();

    // zero roots split off exactly
    let trailing = monic.iter().rev().take_while(|&&c| c == 0.0).count();
    let core = &monic[..monic.len() - trailing];
    let mut roots = vec![Complex64::new(0.0, 0.0); trailing];

    let d = core.len() - 1;
    if d > 0 {
        let mut companion = DenseMatrix::zeros(d, d);
        for j in 0..d {
            companion[(0, j)] = -core[j + 1];
        }
        for i in 1..d {
            companion[(i, i - 1)] = 1.0;
        }
        balance(&mut companion);
        let schur = real_schur(&companion)?;
        for z in schur.eigenvalues() {
            roots.push(polish(core, z));
        }
    }

    for z in &mut roots {
        if z.im.abs() <= SNAP_TOL * (1.0 + z.re.abs()) {
            z.im = 0.0;
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

/// Number of roots with a non-negligible imaginary part.
pub fn count_nonreal(roots: &[Complex64]) -> usize {
    roots.iter().filter(|z| z.im != 0.0).count()
}

/// Horner evaluation of a real polynomial (descending powers) at a complex point.
pub fn eval_poly(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Monic coefficients (descending) of `prod (x - r_i)`.
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k] += ck;
            next[k + 1] -= ck * r;
        }
        c = next;
    }
    c
}

fn polish(coeffs: &[f64], mut z: Complex64) -> Complex64 {
    let deriv: Vec<f64> = {
        let d = coeffs.len() - 1;
        coeffs[..d].iter().enumerate().map(|(k, &c)| c * (d - k) as f64).collect()
    };
    let mut pz = eval_poly(coeffs, z);
    for _ in 0..5 {
        let dz = eval_poly(&deriv, z);
        if dz.norm() == 0.0 {
            break;
        }
        let cand = z - pz / dz;
        let pc = eval_poly(coeffs, cand);
        if pc.norm().is_nan() || pc.norm() >= pz.norm() {
            break;
        }
        z = cand;
        pz = pc;
    }
    z
}

/// Parlett-Reinsch diagonal balancing (radix 2) in place.
fn balance(a: &mut DenseMatrix) {
    let n = a.rows();
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[(i, j)] *= g;
                    }
                    for j in 0..n {
                        a[(j, i)] *= f;
                    }
                }
            }
        }
    }
}
