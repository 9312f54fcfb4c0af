//! Dense complex linear algebra kernels: matrix storage, LU, QR,
//! Schur/eigenvalues, and singular values. Self-contained so the
//! crate stays free of platform linear algebra backends.

mod matrix;

pub mod eig;
pub mod lu;
pub mod qr;
pub mod svd;

pub use eig::{eigen_projector, eigenvalues, hessenberg, schur, Schur};
pub use lu::{condition_one_norm, lu, Lu};
pub use matrix::Matrix;
pub use qr::{complete_basis, qr};
pub use svd::{
    rank_with_tolerance, singular_values, smallest_singular_value, spectral_norm,
};
