//! Real Schur form: Householder reduction to Hessenberg form followed by
//! Francis double-shift QR sweeps with accumulated transformations.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Iteration budget per unit of dimension.
pub const SCHUR_ITERATIONS_PER_ROW: usize = 50;

/// Real Schur decomposition `A = Q T Q^T`.
#[derive(Debug, Clone)]
pub struct RealSchur {
    pub q: DenseMatrix,
    pub t: DenseMatrix,
    /// Start indices of the 2x2 diagonal blocks (complex conjugate pairs).
    pub blocks: Vec<usize>,
}

impl RealSchur {
    /// Eigenvalues read off the diagonal blocks, in diagonal order.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        block_eigenvalues(&self.t, &self.blocks)
    }

    pub fn has_complex_blocks(&self) -> bool {
        !self.blocks.is_empty()
    }
}

/// Computes the real Schur form of a square matrix.
pub fn real_schur(a: &DenseMatrix) -> Result<RealSchur> {
    a.ensure_square()?;
    a.ensure_finite()?;
    let n = a.rows();
    let (mut h, mut v) = hessenberg(a);
    let blocks = francis(&mut h, &mut v, SCHUR_ITERATIONS_PER_ROW * n.max(1))?;
    Ok(RealSchur { q: v, t: h, blocks })
}

/// Returns `(H, V)` with `A = V H V^T` and `H` upper Hessenberg.
pub fn hessenberg(a: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut v = DenseMatrix::identity(n);
    if n < 3 {
        return (h, v);
    }
    for k in 0..n - 2 {
        let x: Vec<f64> = ((k + 1)..n).map(|i| h[(i, k)]).collect();
        let xnorm = crate::matrix::norm(&x);
        if xnorm == 0.0 {
            continue;
        }
        let alpha = if x[0] >= 0.0 { -xnorm } else { xnorm };
        let mut u = x;
        u[0] -= alpha;
        let unorm = crate::matrix::norm(&u);
        if unorm == 0.0 {
            continue;
        }
        u.iter_mut().for_each(|x| *x /= unorm);
        let off = k + 1;
        // H <- P H P with P = I - 2 u u^T acting on rows/cols off..n
        for j in 0..n {
            let s: f64 = u.iter().enumerate().map(|(t, ui)| ui * h[(off + t, j)]).sum();
            for (t, ui) in u.iter().enumerate() {
                h[(off + t, j)] -= 2.0 * ui * s;
            }
        }
        for i in 0..n {
            let s: f64 = u.iter().enumerate().map(|(t, ui)| ui * h[(i, off + t)]).sum();
            for (t, ui) in u.iter().enumerate() {
                h[(i, off + t)] -= 2.0 * ui * s;
            }
        }
        for i in 0..n {
            let s: f64 = u.iter().enumerate().map(|(t, ui)| ui * v[(i, off + t)]).sum();
            for (t, ui) in u.iter().enumerate() {
                v[(i, off + t)] -= 2.0 * ui * s;
            }
        }
        for i in (k + 2)..n {
            h[(i, k)] = 0.0;
        }
    }
    (h, v)
}

/// Francis double-shift iteration on an upper Hessenberg `h`, accumulating
/// into `v`. On return `h` is quasi-upper-triangular with everything below
/// the diagonal zeroed except the subdiagonal entry of each complex 2x2 block.
fn francis(h: &mut DenseMatrix, v: &mut DenseMatrix, max_iter: usize) -> Result<Vec<usize>> {
    let nn = h.rows();
    if nn == 0 {
        return Ok(Vec::new());
    }
    let eps = f64::EPSILON;
    let mut exshift = 0.0;
    let mut complex_at = vec![false; nn];

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[(i, j)].abs();
        }
    }

    let mut n = nn as isize - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let (mut p, mut q, mut r, mut s, mut z);
    let (mut x, mut y, mut w);

    while n >= 0 {
        let nu = n as usize;
        // look for a single small subdiagonal element
        let mut l = nu;
        while l > 0 {
            s = h[(l - 1, l - 1)].abs() + h[(l, l)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[(l, l - 1)].abs() < eps * s {
                h[(l, l - 1)] = 0.0;
                break;
            }
            l -= 1;
        }

        if l == nu {
            // one root
            h[(nu, nu)] += exshift;
            n -= 1;
            iter = 0;
        } else if l + 1 == nu {
            // two roots
            w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
            p = (h[(nu - 1, nu - 1)] - h[(nu, nu)]) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            h[(nu, nu)] += exshift;
            h[(nu - 1, nu - 1)] += exshift;

            if q >= 0.0 {
                // real pair: rotate the block to triangular form
                z = if p >= 0.0 { p + z } else { p - z };
                x = h[(nu, nu - 1)];
                s = x.abs() + z.abs();
                p = x / s;
                q = z / s;
                r = (p * p + q * q).sqrt();
                p /= r;
                q /= r;
                for j in (nu - 1)..nn {
                    z = h[(nu - 1, j)];
                    h[(nu - 1, j)] = q * z + p * h[(nu, j)];
                    h[(nu, j)] = q * h[(nu, j)] - p * z;
                }
                for i in 0..=nu {
                    z = h[(i, nu - 1)];
                    h[(i, nu - 1)] = q * z + p * h[(i, nu)];
                    h[(i, nu)] = q * h[(i, nu)] - p * z;
                }
                for i in 0..nn {
                    z = v[(i, nu - 1)];
                    v[(i, nu - 1)] = q * z + p * v[(i, nu)];
                    v[(i, nu)] = q * v[(i, nu)] - p * z;
                }
                h[(nu, nu - 1)] = 0.0;
            } else {
                complex_at[nu - 1] = true;
            }
            n -= 2;
            iter = 0;
        } else {
            x = h[(nu, nu)];
            y = h[(nu - 1, nu - 1)];
            w = h[(nu, nu - 1)] * h[(nu - 1, nu)];

            // exceptional shifts
            if iter == 10 {
                exshift += x;
                for i in 0..=nu {
                    h[(i, i)] -= x;
                }
                s = h[(nu, nu - 1)].abs() + h[(nu - 1, nu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in 0..=nu {
                        h[(i, i)] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }

            iter += 1;
            total += 1;
            if total > max_iter {
                return Err(Error::NoConvergence { iterations: total });
            }

            // look for two consecutive small subdiagonal elements
            let mut m = nu - 2;
            loop {
                z = h[(m, m)];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[(m + 1, m)] + h[(m, m + 1)];
                q = h[(m + 1, m + 1)] - z - r - s;
                r = h[(m + 2, m + 1)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[(m, m - 1)].abs() * (q.abs() + r.abs())
                    < eps * (p.abs() * (h[(m - 1, m - 1)].abs() + z.abs() + h[(m + 1, m + 1)].abs()))
                {
                    break;
                }
                m -= 1;
            }

            for i in (m + 2)..=nu {
                h[(i, i - 2)] = 0.0;
                if i > m + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }

            // double QR step on rows l..=n, columns m..=n
            let mut k = m;
            while k < nu {
                let notlast = k != nu - 1;
                if k != m {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        k += 1;
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                } else {
                    x = 0.0;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != m {
                        h[(k, k - 1)] = -s * x;
                    } else if l != m {
                        h[(k, k - 1)] = -h[(k, k - 1)];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in k..nn {
                        p = h[(k, j)] + q * h[(k + 1, j)];
                        if notlast {
                            p += r * h[(k + 2, j)];
                            h[(k + 2, j)] -= p * z;
                        }
                        h[(k, j)] -= p * x;
                        h[(k + 1, j)] -= p * y;
                    }
                    for i in 0..=nu.min(k + 3) {
                        p = x * h[(i, k)] + y * h[(i, k + 1)];
                        if notlast {
                            p += z * h[(i, k + 2)];
                            h[(i, k + 2)] -= p * r;
                        }
                        h[(i, k)] -= p;
                        h[(i, k + 1)] -= p * q;
                    }
                    for i in 0..nn {
                        p = x * v[(i, k)] + y * v[(i, k + 1)];
                        if notlast {
                            p += z * v[(i, k + 2)];
                            v[(i, k + 2)] -= p * r;
                        }
                        v[(i, k)] -= p;
                        v[(i, k + 1)] -= p * q;
                    }
                }
                k += 1;
            }
        }
    }

    // clean everything below the block diagonal
    for i in 1..nn {
        for j in 0..i {
            let keep = j + 1 == i && complex_at[j];
            if !keep {
                h[(i, j)] = 0.0;
            }
        }
    }
    Ok((0..nn).filter(|&i| complex_at[i]).collect())
}

/// Eigenvalues of a quasi-triangular matrix given its 2x2 block starts.
pub fn block_eigenvalues(t: &DenseMatrix, blocks: &[usize]) -> Vec<Complex64> {
    let n = t.rows();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if blocks.contains(&i) {
            let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let p = 0.5 * (a - d);
            let disc = p * p + b * c;
            let mid = 0.5 * (a + d);
            if disc < 0.0 {
                let im = (-disc).sqrt();
                out.push(Complex64::new(mid, im));
                out.push(Complex64::new(mid, -im));
            } else {
                let r = disc.sqrt();
                out.push(Complex64::new(mid + r, 0.0));
                out.push(Complex64::new(mid - r, 0.0));
            }
            i += 2;
        } else {
            out.push(Complex64::new(t[(i, i)], 0.0));
            i += 1;
        }
    }
    out
}
