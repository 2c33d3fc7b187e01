//! Exact arithmetic layer: rationals, small dense matrices, univariate
//! polynomials and a rational linear solver.
//!
//! Every quantity in this crate is an exact fraction. Nothing here ever
//! touches floating point except the decimal formatting helper used for CSV
//! output.

mod matrix;
mod poly;
mod rational;
mod solve;

pub use matrix::Matrix;
pub use poly::Poly;
pub use rational::{
    binomial, factorial, falling_factorial, fmt_rational, int, parse_rational, pow2, rat,
    to_decimal, Rational,
};
pub use solve::{solve_linear, Solution};

use thiserror::Error;

/// Errors raised by the arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("dimension mismatch: {op} of {left} and {right}")]
    DimensionMismatch {
        op: &'static str,
        left: String,
        right: String,
    },
    #[error("matrix entries length {len} does not match {rows}x{cols}")]
    BadShape {
        rows: usize,
        cols: usize,
        len: usize,
    },
}

/// Dense vector of rationals.
pub type Vector = Vec<Rational>;

/// Returns true if every entry of `v` is zero.
pub fn is_zero_vec(v: &[Rational]) -> bool {
    use num_traits::Zero;
    v.iter().all(Zero::is_zero)
}
