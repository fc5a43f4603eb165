//! Arithmetic-operation accounting for the inverse routines and a
//! log-log least-squares fit for empirical complexity exponents.
//!
//! The counter is thread-local: it only sees work done on the calling
//! thread, so concurrent measurements do not interfere.

use std::cell::Cell;

thread_local! {
    static OPS: Cell<u64> = const { Cell::new(0) };
}

/// Adds `n` scalar multiply-add operations to this thread's counter.
#[inline]
pub(crate) fn tally(n: usize) {
    OPS.with(|c| c.set(c.get() + n as u64));
}

/// Resets the counter and returns its previous value.
pub fn reset_ops() -> u64 {
    OPS.with(|c| c.replace(0))
}

pub fn ops() -> u64 {
    OPS.with(Cell::get)
}

/// Runs `f` and returns its result together with the operations it tallied.
pub fn count_ops<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let before = ops();
    let out = f();
    (out, ops() - before)
}

/// Slope of the least-squares line through `(ln x, ln y)`.
///
/// Returns `None` with fewer than two points or non-positive values.
pub fn fit_exponent(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}
