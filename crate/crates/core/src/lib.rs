//! Equiangular matrices and the factorizations built on them.
//!
//! The core object is a matrix whose columns are unit vectors with a common
//! pairwise inner product `alpha`. Its Gram matrix is always
//! `G_alpha = (1 - alpha) I + alpha e e^T`, and most results here follow from
//! that single fact: the SR decomposition `A = S R`, an O(n^2) inverse,
//! eigenvalue bounds, equiangular analogues of the Schur forms, doubly
//! equiangular matrices and the simplex tight frames.

pub mod cost;
pub mod doubly;
pub mod ea;
pub mod error;
pub mod factor;
pub mod frames;
pub mod gram;
pub mod linalg;
pub mod matrix;
pub mod spectral;

pub use num_complex::Complex64;

pub use doubly::{canonical_commuter, certify_doubly, dea, dem_product_params, DoublyEquiangular};
pub use ea::{
    certify_equiangular, next_equiangular, next_equiangular_obtuse, polar_orthogonal_factor, random_equiangular,
    sr_decompose, sr_decompose_cos, triangular_equiangular, EquiangularMatrix, SRDecomposition,
};
pub use error::{Error, MultiplicityHint, Result};
pub use factor::{
    alpha_real_root_bound, build_poly, equiangular_eigenvectors, nonreal_root_certificate, schur_equiangular,
    sdst_coefficients, sdst_factor, two_eigenvalue_factor, PolySource, PolySpec, SDSTFactorization,
};
pub use frames::{
    augment_to_orthogonal, frame_bounds, is_etf, relate_to_sdst, simplex_frame, tight_frame_identity_defect,
    welch_alpha, EtfReport, FrameSet, SimplexFrame,
};
pub use gram::{DualParams, GramParams, SqrtParams};
pub use matrix::DenseMatrix;
pub use spectral::{eig_relation_check, eigenvalue_bounds, fast_inverse, inverse_geometry, InverseGeometry};
