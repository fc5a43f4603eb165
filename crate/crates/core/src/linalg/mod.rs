//! Dense kernels shared by the equiangular algorithms: Householder QR,
//! Jacobi symmetric eigensolver, real Schur form, polynomial roots and a
//! general LU-based inverse.

mod eigvec;
mod inverse;
mod qr;
mod roots;
mod schur;
mod sym_eig;

pub use eigvec::{eigen_residual, eigenpairs, inverse_iteration, Eigenpair};
pub use inverse::{determinant, generic_inverse, singular_values, spectral_norm};
pub use qr::{qr, RANK_TOL};
pub use roots::{count_nonreal, eval_poly, poly_from_roots, poly_roots, SNAP_TOL};
pub use schur::{block_eigenvalues, hessenberg, real_schur, RealSchur, SCHUR_ITERATIONS_PER_ROW};
pub use sym_eig::{fix_signs, sym_eig, SYMMETRY_TOL};
