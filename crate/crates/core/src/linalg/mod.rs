//! Dense complex linear algebra used throughout the crate.

mod eigen;
mod general;
mod matrix;
mod poly;

pub use eigen::{hermitian_eigen, lanczos_max, largest_eigenpair, HermitianEigen};
pub use general::real_eigenvalues;
pub use matrix::{inner, kron, kron_all, vec_norm, ComplexMatrix, HERMITIAN_TOL};
pub use poly::{poly_roots, RealPolynomial, REAL_ROOT_TOL, TRIM_TOL};
