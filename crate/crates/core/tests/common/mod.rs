#![allow(dead_code)]

use eqkit_core::{sr_decompose_cos, DenseMatrix, EquiangularMatrix};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Alpha drawn uniformly from `(-1/(n-1) + margin, hi)`.
pub fn random_alpha(rng: &mut impl Rng, n: usize, margin: f64, hi: f64) -> f64 {
    let lo = -1.0 / (n as f64 - 1.0) + margin;
    rng.random_range(lo..hi)
}

/// An equiangular matrix from the SR factor of a Gaussian matrix.
pub fn random_em(rng: &mut impl Rng, n: usize, alpha: f64) -> EquiangularMatrix {
    loop {
        let a = gaussian(rng, n, n);
        if let Ok(sr) = sr_decompose_cos(&a, alpha) {
            return sr.s;
        }
    }
}

/// Singular values by one-sided Jacobi on the columns, descending.
pub fn svd_values(a: &DenseMatrix) -> Vec<f64> {
    let (m, n) = a.shape();
    let mut u: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    for _ in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = u[p].iter().map(|x| x * x).sum();
                let beta: f64 = u[q].iter().map(|x| x * x).sum();
                let gamma: f64 = u[p].iter().zip(&u[q]).map(|(x, y)| x * y).sum();
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (x, y) = (u[p][i], u[q][i]);
                    u[p][i] = c * x - s * y;
                    u[q][i] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = u.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

pub fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
