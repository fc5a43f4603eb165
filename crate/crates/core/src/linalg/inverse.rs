use crate::cost::tally;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

use super::sym_eig::sym_eig;

/// LU factorization with partial pivoting, stored compactly.
struct Lu {
    lu: DenseMatrix,
    perm: Vec<usize>,
    sign: f64,
}

fn lu(a: &DenseMatrix) -> Result<Lu> {
    a.ensure_square()?;
    a.ensure_finite()?;
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let tol = n.max(1) as f64 * f64::EPSILON * a.max_abs();
    for k in 0..n {
        let (p, pivot) =
            (k..n).map(|i| (i, lu[(i, k)].abs())).fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot <= tol || pivot == 0.0 {
            return Err(Error::Singular);
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pkk = lu[(k, k)];
        for i in (k + 1)..n {
            let f = lu[(i, k)] / pkk;
            lu[(i, k)] = f;
            if f != 0.0 {
                for j in (k + 1)..n {
                    lu[(i, j)] -= f * lu[(k, j)];
                }
            }
            tally(n - k);
        }
    }
    Ok(Lu { lu, perm, sign })
}

/// General O(n^3) inverse via LU with partial pivoting.
///
/// This is the baseline the structured inverse is measured against; its
/// arithmetic is recorded by [`crate::cost`].
pub fn generic_inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    let f = lu(a)?;
    let n = a.rows();
    let mut inv = DenseMatrix::zeros(n, n);
    let mut col = vec![0.0; n];
    for j in 0..n {
        // solve L U x = P e_j
        for (i, c) in col.iter_mut().enumerate() {
            *c = if f.perm[i] == j { 1.0 } else { 0.0 };
        }
        for i in 0..n {
            let mut s = col[i];
            for (l, c) in f.lu.row(i)[..i].iter().zip(&col[..i]) {
                s -= l * c;
            }
            col[i] = s;
            tally(i);
        }
        for i in (0..n).rev() {
            let mut s = col[i];
            for (u, c) in f.lu.row(i)[(i + 1)..].iter().zip(&col[(i + 1)..]) {
                s -= u * c;
            }
            col[i] = s / f.lu[(i, i)];
            tally(n - i);
        }
        inv.set_column(j, &col);
    }
    Ok(inv)
}

/// Determinant via LU; zero for numerically singular input.
pub fn determinant(a: &DenseMatrix) -> Result<f64> {
    match lu(a) {
        Ok(f) => Ok(f.sign * f.lu.diagonal().iter().product::<f64>()),
        Err(Error::Singular) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Matrix 2-norm, `sqrt(lambda_max(A^T A))`.
pub fn spectral_norm(a: &DenseMatrix) -> Result<f64> {
    a.ensure_finite()?;
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(0.0);
    }
    let g = if a.rows() >= a.cols() { a.gram() } else { a.matmul(&a.transpose()) };
    let (_, l) = sym_eig(&g)?;
    Ok(l.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// Singular values in descending order, from the eigenvalues of the smaller Gram matrix.
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    let g = if a.rows() >= a.cols() { a.gram() } else { a.matmul(&a.transpose()) };
    let (_, l) = sym_eig(&g)?;
    Ok(l.iter().rev().map(|x| x.max(0.0).sqrt()).collect())
}
