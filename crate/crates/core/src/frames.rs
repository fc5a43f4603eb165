//! Frames in `R^n`, and the simplex frame: the `n + 1` unit vectors with
//! pairwise inner product `-1/n`, which is the largest equiangular set with
//! an obtuse angle and a tight frame with bound `(n+1)/n`.

use crate::ea::{EquiangularMatrix, CERT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{sym_eig, RANK_TOL};
use crate::matrix::{dot, DenseMatrix};

/// Columns `f_i` of an `n x m` matrix, with optional frame bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSet {
    vectors: DenseMatrix,
    bounds: Option<(f64, f64)>,
}

impl FrameSet {
    pub fn new(vectors: DenseMatrix) -> Self {
        Self { vectors, bounds: None }
    }

    /// Computes and stores the optimal bounds.
    pub fn with_bounds(vectors: DenseMatrix) -> Result<Self> {
        let mut f = Self::new(vectors);
        f.bounds = Some(frame_bounds(&f)?);
        Ok(f)
    }

    pub fn vectors(&self) -> &DenseMatrix {
        &self.vectors
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        self.bounds
    }

    pub fn dim(&self) -> usize {
        self.vectors.rows()
    }

    pub fn len(&self) -> usize {
        self.vectors.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.cols() == 0
    }
}

/// The `n x (n+1)` simplex frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexFrame {
    s: DenseMatrix,
}

impl SimplexFrame {
    pub fn matrix(&self) -> &DenseMatrix {
        &self.s
    }

    pub fn n(&self) -> usize {
        self.s.rows()
    }

    /// Common inner product, `-1/n`.
    pub fn alpha(&self) -> f64 {
        -1.0 / self.n() as f64
    }

    pub fn to_frame(&self) -> FrameSet {
        FrameSet::new(self.s.clone())
    }
}

/// Builds `S_n = [[1, -(1/n) e^T], [0, rho S_{n-1}]]` with
/// `rho = sqrt(n^2 - 1) / n`, starting from `S_1 = [1, -1]`.
pub fn simplex_frame(n: usize) -> Result<SimplexFrame> {
    if n == 0 {
        return Err(Error::InvalidShape("simplex frame needs n >= 1".into()));
    }
    let mut s = DenseMatrix::from_rows(&[[1.0, -1.0]])?;
    for k in 2..=n {
        let kf = k as f64;
        let rho = (kf * kf - 1.0).sqrt() / kf;
        let mut next = DenseMatrix::zeros(k, k + 1);
        next[(0, 0)] = 1.0;
        for j in 1..=k {
            next[(0, j)] = -1.0 / kf;
        }
        for i in 0..k - 1 {
            for j in 0..k {
                next[(i + 1, j + 1)] = rho * s[(i, j)];
            }
        }
        s = next;
    }
    Ok(SimplexFrame { s })
}

/// Optimal frame bounds: the extreme eigenvalues of `F F^T`.
pub fn frame_bounds(f: &FrameSet) -> Result<(f64, f64)> {
    let v = f.vectors();
    if v.rows() == 0 {
        return Err(Error::NotSpanning);
    }
    let (_, l) = sym_eig(&v.matmul(&v.transpose()))?;
    let (lo, hi) = (l[0], l[l.len() - 1]);
    if lo <= RANK_TOL * hi.max(1.0) {
        return Err(Error::NotSpanning);
    }
    Ok((lo, hi))
}

/// Outcome of the tight-frame test, one flag per condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtfReport {
    pub unit_norm: bool,
    pub equal_angles: bool,
    pub tight: bool,
    /// `|<f_i, f_j>|` shared by all pairs (mean), when there are pairs.
    pub coherence: Option<f64>,
}

impl EtfReport {
    pub fn is_etf(&self) -> bool {
        self.unit_norm && self.equal_angles && self.tight
    }

    /// Names of the failed conditions.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.unit_norm {
            out.push("unit norm");
        }
        if !self.equal_angles {
            out.push("equal angles");
        }
        if !self.tight {
            out.push("tight");
        }
        out
    }
}

/// Equiangular tight frame test: unit columns, constant `|<f_i, f_j>|`
/// and `F F^T = (m/n) I`, each within `tol`.
pub fn is_etf(f: &FrameSet, tol: f64) -> EtfReport {
    let v = f.vectors();
    let (n, m) = v.shape();
    let g = v.gram();
    let unit_norm = (0..m).all(|i| (g[(i, i)] - 1.0).abs() <= tol);
    let offs: Vec<f64> = (0..m).flat_map(|i| ((i + 1)..m).map(move |j| (i, j))).map(|(i, j)| g[(i, j)].abs()).collect();
    let coherence = (!offs.is_empty()).then(|| offs.iter().sum::<f64>() / offs.len() as f64);
    let equal_angles = coherence.is_none_or(|c| offs.iter().all(|x| (x - c).abs() <= tol));
    let tight = n > 0 && {
        let ratio = m as f64 / n as f64;
        v.matmul(&v.transpose()).distance(&DenseMatrix::identity(n).scale(ratio)) <= tol
    };
    EtfReport { unit_norm, equal_angles, tight, coherence }
}

/// `sqrt((m - n) / (n (m - 1)))`, the least common `|<f_i, f_j>|` of `m`
/// unit vectors in `R^n`.
pub fn welch_alpha(n: usize, m: usize) -> Result<f64> {
    if n == 0 || m < n {
        return Err(Error::InvalidShape(format!("need m >= n >= 1, got n = {n}, m = {m}")));
    }
    if m == n {
        return Ok(0.0);
    }
    let (n, m) = (n as f64, m as f64);
    Ok(((m - n) / (n * (m - 1.0))).sqrt())
}

/// `| sum_i (x^T s_i)^2 - ((n+1)/n) ||x||^2 |`.
pub fn tight_frame_identity_defect(sf: &SimplexFrame, x: &[f64]) -> Result<f64> {
    let n = sf.n();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("vector of length {n}"),
            got: format!("length {}", x.len()),
        });
    }
    let s = sf.matrix();
    let total: f64 = (0..=n).map(|j| (0..n).map(|i| x[i] * s[(i, j)]).sum::<f64>().powi(2)).sum();
    Ok((total - (n as f64 + 1.0) / n as f64 * dot(x, x)).abs())
}

/// Appends the row `(1/sqrt(n)) e^T`, giving `M` with
/// `M^T M = M M^T = ((n+1)/n) I`.
pub fn augment_to_orthogonal(sf: &SimplexFrame) -> DenseMatrix {
    let n = sf.n();
    let s = sf.matrix();
    let w = 1.0 / (n as f64).sqrt();
    DenseMatrix::from_fn(n + 1, n + 1, |i, j| if i < n { s[(i, j)] } else { w })
}

/// The simplex frame without its first column `e_1`: a square equiangular
/// matrix at `-1/n` with `S S^T = diag(1/n, (n+1)/n, ..., (n+1)/n)`.
/// Returns `S` and `S S^T`.
pub fn relate_to_sdst(n: usize) -> Result<(EquiangularMatrix, DenseMatrix)> {
    if n < 2 {
        return Err(Error::InvalidShape("need n >= 2".into()));
    }
    let sf = simplex_frame(n)?;
    let s = sf.matrix().columns_range(1, n + 1);
    let a = s.matmul(&s.transpose());
    Ok((EquiangularMatrix::new_unchecked(s, sf.alpha(), CERT_TOL), a))
}
