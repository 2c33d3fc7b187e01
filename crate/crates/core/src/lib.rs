//! Exact polynomial-reproduction certificates for univariate binary Hermite
//! subdivision schemes of order 2 and 3.
//!
//! The crate evaluates the algebraic reproduction conditions on the matrix
//! symbol of a mask ([`reproduction`]), runs the subdivision cascade itself
//! as an independent check ([`cascade`]), ships the known scheme families
//! ([`catalog`]) and solves for new masks with a prescribed degree
//! ([`construct`]). All arithmetic is exact.

pub mod algebra;
pub mod cascade;
pub mod catalog;
pub mod construct;
pub mod families;
pub mod reproduction;
pub mod symbol;

pub use algebra::{Matrix, Poly, Rational};
pub use reproduction::{certify, infer_tau, ReproductionReport};
pub use symbol::{load_mask, save_mask, HermiteMask};
