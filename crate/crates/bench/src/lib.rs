//! Size sweeps comparing [`fast_inverse`] with [`generic_inverse`] on
//! synthetic equiangular matrices.
//!
//! Timings are the median of [`REPS`] runs on the monotonic clock. The
//! operation counts from [`eqkit_core::cost`] are deterministic and are what
//! the complexity fits should normally be taken from.

use std::hint::black_box;
use std::time::Instant;

use eqkit_core::cost::{count_ops, fit_exponent};
use eqkit_core::linalg::generic_inverse;
use eqkit_core::{fast_inverse, random_equiangular, EquiangularMatrix, GramParams, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const REPS: usize = 5;
pub const DEFAULT_SIZES: [usize; 4] = [64, 128, 256, 512];
pub const SWEEP_ALPHA: f64 = 0.3;
const REFLECTIONS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    /// Median seconds.
    pub t_fast: f64,
    pub t_generic: f64,
    pub ops_fast: u64,
    pub ops_generic: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents {
    pub fast: f64,
    pub generic: f64,
}

/// Deterministic member of `EM^n` at [`SWEEP_ALPHA`]; the seed is mixed with `n`
/// so each size gets its own matrix.
pub fn synthetic(n: usize, seed: u64) -> Result<EquiangularMatrix> {
    let p = GramParams::new(n, SWEEP_ALPHA)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    Ok(random_equiangular(p, REFLECTIONS, &mut rng))
}

/// Median wall time of `reps` calls to `f`, in seconds.
pub fn median_seconds<T>(reps: usize, mut f: impl FnMut() -> T) -> f64 {
    let mut times: Vec<f64> = (0..reps.max(1))
        .map(|_| {
            let start = Instant::now();
            black_box(f());
            start.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_by(f64::total_cmp);
    times[times.len() / 2]
}

pub fn measure(n: usize, seed: u64, reps: usize) -> Result<SweepRow> {
    let s = synthetic(n, seed)?;
    let (fast, ops_fast) = count_ops(|| fast_inverse(&s));
    fast?;
    let (generic, ops_generic) = count_ops(|| generic_inverse(s.matrix()));
    generic?;
    let t_fast = median_seconds(reps, || fast_inverse(&s));
    let t_generic = median_seconds(reps, || generic_inverse(s.matrix()));
    Ok(SweepRow { n, t_fast, t_generic, ops_fast, ops_generic })
}

/// One row per size, sizes run one after another so timings do not compete.
pub fn sweep(sizes: &[usize], seed: u64, reps: usize) -> Result<Vec<SweepRow>> {
    sizes.iter().map(|&n| measure(n, seed, reps)).collect()
}

/// Log-log slopes of operation count against `n`.
pub fn op_exponents(rows: &[SweepRow]) -> Option<Exponents> {
    let fast: Vec<_> = rows.iter().map(|r| (r.n as f64, r.ops_fast as f64)).collect();
    let generic: Vec<_> = rows.iter().map(|r| (r.n as f64, r.ops_generic as f64)).collect();
    Some(Exponents { fast: fit_exponent(&fast)?, generic: fit_exponent(&generic)? })
}

/// Log-log slopes of median wall time against `n`.
pub fn time_exponents(rows: &[SweepRow]) -> Option<Exponents> {
    let fast: Vec<_> = rows.iter().map(|r| (r.n as f64, r.t_fast)).collect();
    let generic: Vec<_> = rows.iter().map(|r| (r.n as f64, r.t_generic)).collect();
    Some(Exponents { fast: fit_exponent(&fast)?, generic: fit_exponent(&generic)? })
}

/// `n,t_fast,t_generic,ops_fast,ops_generic` with a header line.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("n,t_fast,t_generic,ops_fast,ops_generic\n");
    for r in rows {
        out.push_str(&format!("{},{:e},{:e},{},{}\n", r.n, r.t_fast, r.t_generic, r.ops_fast, r.ops_generic));
    }
    out
}
