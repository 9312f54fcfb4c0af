//! A numerical laboratory for spectra of operators with invariant
//! subspaces.
//!
//! The crate constructs bounded operators on concrete sequence spaces
//! (finite matrices, Laurent and Toeplitz operators given by
//! trigonometric-polynomial symbols, and their compositions), computes
//! spectra, essential spectra, polynomial hulls, and contour-integral
//! spectral projections, and mechanically verifies the inclusion of
//! the induced essential spectra
//! `sigma_e(T|F) and sigma_e(T/F) inside hull(sigma_e(T))`
//! together with its supporting identities on concrete operator
//! families.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats, and the
//! command-line front end live in the companion `indspec-cli` crate.
//!
//! All values are immutable after construction and all operations are
//! pure functions of their inputs, so everything here is safe to share
//! across threads.

#![no_std]
// `!(x > 0.0)` style checks are deliberate: they reject NaN parameters
// along with out-of-range ones
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cplane;
pub mod corpus;
mod error;
pub mod linalg;
pub mod operators;
pub mod projections;
pub mod spectra;
pub mod symbols;
pub mod theoremlab;

pub use error::{Error, Result};
pub use num_complex::Complex64;
