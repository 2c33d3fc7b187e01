//! Matrix masks, their Laurent symbols and sub-symbols.
//!
//! For a mask `{A_l}` the k-th symbol derivative at `z` is
//! `Σ_l (l)_k A_l z^{l−k}` with the falling factorial `(l)_k`. Public
//! evaluation is restricted to `z = ±1`, where `z^{l−k}` is just a sign.

pub(crate) mod json;

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{falling_factorial, int, Matrix, Rational};

pub use json::{load_mask, save_mask, MaskFormatError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MaskError {
    #[error("unsupported order d = {0}; expected 2 or 3")]
    UnsupportedOrder(usize),
    #[error("matrix at offset {offset} is {rows}x{cols}, expected {d}x{d}")]
    WrongShape {
        offset: i64,
        rows: usize,
        cols: usize,
        d: usize,
    },
    #[error("mask has no nonzero matrix")]
    AllZero,
}

/// One of the two evaluation points used by the reproduction conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnitPoint {
    /// z = +1
    Plus,
    /// z = −1
    Minus,
}

impl UnitPoint {
    /// `z^e` for this point.
    fn power_sign(self, e: i64) -> i64 {
        match self {
            UnitPoint::Plus => 1,
            UnitPoint::Minus => {
                if e.rem_euclid(2) == 0 {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Finitely supported sequence of d×d rational matrices.
///
/// Offsets inside `[lo, hi]` without an entry are zero matrices. Explicit
/// zero matrices are allowed and only widen the stored window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteMask {
    d: usize,
    matrices: BTreeMap<i64, Matrix>,
    name: Option<String>,
    tau_hint: Option<Rational>,
}

impl HermiteMask {
    pub fn new(
        d: usize,
        matrices: impl IntoIterator<Item = (i64, Matrix)>,
    ) -> Result<Self, MaskError> {
        if d != 2 && d != 3 {
            return Err(MaskError::UnsupportedOrder(d));
        }
        let matrices: BTreeMap<i64, Matrix> = matrices.into_iter().collect();
        for (&offset, m) in &matrices {
            if m.rows() != d || m.cols() != d {
                return Err(MaskError::WrongShape {
                    offset,
                    rows: m.rows(),
                    cols: m.cols(),
                    d,
                });
            }
        }
        if matrices.values().all(Matrix::is_zero) {
            return Err(MaskError::AllZero);
        }
        Ok(HermiteMask {
            d,
            matrices,
            name: None,
            tau_hint: None,
        })
    }

    /// Skips the nonzero check; used for the linear pieces of a template,
    /// which may legitimately vanish.
    pub(crate) fn from_parts_unchecked(d: usize, matrices: BTreeMap<i64, Matrix>) -> Self {
        HermiteMask {
            d,
            matrices,
            name: None,
            tau_hint: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_tau_hint(mut self, tau: Rational) -> Self {
        self.tau_hint = Some(tau);
        self
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn tau_hint(&self) -> Option<&Rational> {
        self.tau_hint.as_ref()
    }

    /// Lowest stored offset.
    pub fn lo(&self) -> i64 {
        self.matrices.keys().next().copied().unwrap_or(0)
    }

    /// Highest stored offset.
    pub fn hi(&self) -> i64 {
        self.matrices.keys().next_back().copied().unwrap_or(0)
    }

    /// Offsets of nonzero matrices, ascending.
    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.matrices
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(&l, _)| l)
    }

    /// `(first, last)` nonzero offsets.
    pub fn support_bounds(&self) -> (i64, i64) {
        let mut s = self.support();
        let first = s.next().unwrap_or(0);
        let last = s.last().unwrap_or(first);
        (first, last)
    }

    /// `A_l`, or `None` when it is absent (a zero matrix).
    pub fn matrix(&self, l: i64) -> Option<&Matrix> {
        self.matrices.get(&l)
    }

    /// `A_l` with absent offsets materialised as zero.
    pub fn matrix_or_zero(&self, l: i64) -> Matrix {
        self.matrices
            .get(&l)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.d, self.d))
    }

    pub fn matrices(&self) -> &BTreeMap<i64, Matrix> {
        &self.matrices
    }

    /// Mask `B` with `B_l = A_{l−s}`.
    pub fn shifted(&self, s: i64) -> HermiteMask {
        HermiteMask {
            d: self.d,
            matrices: self
                .matrices
                .iter()
                .map(|(&l, m)| (l + s, m.clone()))
                .collect(),
            name: self.name.clone(),
            tau_hint: self.tau_hint.as_ref().map(|t| t + int(s)),
        }
    }

    /// Same mask with explicit zero matrices added on `[lo, hi]`.
    pub fn padded(&self, lo: i64, hi: i64) -> HermiteMask {
        let mut out = self.clone();
        for l in lo..=hi {
            out.matrices
                .entry(l)
                .or_insert_with(|| Matrix::zeros(self.d, self.d));
        }
        out
    }

    fn weighted_sum<'a>(
        &'a self,
        k: usize,
        z: UnitPoint,
        terms: impl Iterator<Item = (&'a i64, &'a Matrix)>,
    ) -> Matrix {
        let mut acc = Matrix::zeros(self.d, self.d);
        for (&l, m) in terms {
            let w = falling_factorial(&int(l), k);
            if w.is_zero() || m.is_zero() {
                continue;
            }
            let w = w * int(z.power_sign(l - k as i64));
            acc = acc.add(&m.scale(&w)).expect("mask matrices are d x d");
        }
        acc
    }
}

/// `A^{(k)}(z)` for `z = ±1`.
pub fn symbol_deriv(mask: &HermiteMask, k: usize, z: UnitPoint) -> Matrix {
    mask.weighted_sum(k, z, mask.matrices.iter())
}

/// k-th derivative of the even or odd sub-symbol at `z = ±1`.
pub fn subsymbol_deriv(mask: &HermiteMask, parity: Parity, k: usize, z: UnitPoint) -> Matrix {
    let want = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    mask.weighted_sum(
        k,
        z,
        mask.matrices
            .iter()
            .filter(|(l, _)| l.rem_euclid(2) == want),
    )
}

/// `A^{(k)}(z)` at both points for `k = 0..=kmax`, computed once.
#[derive(Clone, Debug)]
pub struct SymbolJet {
    plus: Vec<Matrix>,
    minus: Vec<Matrix>,
}

impl SymbolJet {
    pub fn new(mask: &HermiteMask, kmax: usize) -> Self {
        SymbolJet {
            plus: (0..=kmax)
                .map(|k| symbol_deriv(mask, k, UnitPoint::Plus))
                .collect(),
            minus: (0..=kmax)
                .map(|k| symbol_deriv(mask, k, UnitPoint::Minus))
                .collect(),
        }
    }

    pub fn kmax(&self) -> usize {
        self.plus.len() - 1
    }

    pub fn get(&self, k: usize, z: UnitPoint) -> &Matrix {
        match z {
            UnitPoint::Plus => &self.plus[k],
            UnitPoint::Minus => &self.minus[k],
        }
    }
}
