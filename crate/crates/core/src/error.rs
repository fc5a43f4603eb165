use thiserror::Error;

/// Which alternative applies when [`crate::factor::sdst_factor`] refuses a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiplicityHint {
    /// One eigenvalue of multiplicity n-1 next to a simple one: use
    /// [`crate::factor::two_eigenvalue_factor`].
    TwoEigenvalue,
    /// A repeated eigenvalue of multiplicity between 2 and n-2: no real
    /// `S D S^T` factorization exists for any alpha in (0, 1).
    Impossible,
    /// Too many zero eigenvalues, or a multiplicity pattern on the nonzero
    /// block that this crate does not factor.
    Unsupported,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("column {column} is linearly dependent on the previous columns")]
    RankDeficient { column: usize },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("polynomial has degree zero")]
    DegreeZero,

    #[error("alpha = {alpha} is outside (-1/(n-1), 1) for n = {n}")]
    InvalidAlpha { alpha: f64, n: usize },

    #[error("angle {theta} rad is outside the admissible range")]
    InvalidAngle { theta: f64 },

    #[error("cos = {cos} <= -1/{k}: {k} prior vectors admit no further independent equiangular vector")]
    DegenerateAngle { cos: f64, k: usize },

    #[error("matrix does not certify as equiangular")]
    NotEquiangular,

    #[error("not an eigenpair (residual {residual:e})")]
    NotEigenpair { residual: f64 },

    #[error("real Schur form has 2x2 blocks (complex spectrum)")]
    ComplexSpectrum,

    #[error("spectrum does not fit: {0}")]
    WrongSpectrum(String),

    #[error("coefficient polynomial has {count} non-real roots")]
    NonRealRoots { count: usize },

    #[error("eigenvalue multiplicities are not supported ({hint:?})")]
    MultiplicityUnsupported { hint: MultiplicityHint },

    #[error("reconstruction residual {residual:e} exceeds tolerance")]
    ReconstructionFailed { residual: f64 },

    #[error("product parameter alpha = {alpha} leaves the valid range for n = {n}")]
    OutOfRange { alpha: f64, n: usize },

    #[error("frame vectors do not span the space")]
    NotSpanning,

    #[error("invalid shape: {0}")]
    InvalidShape(String),
}

pub type Result<T> = std::result::Result<T, Error>;
