//! Auxiliary polynomial families and their coefficient ladders.
//!
//! * `q_{k}(x; s) = ∏_{r=0}^{k-1} (2x + 2s - r)`, where the shift `s` plays
//!   the role of `i/2` (integer `i`) or of `τ` in the reproduction conditions.
//! * `γ` are the coefficients of `q_k(-x; s)` in the monomial basis.
//! * `α¹`, `α²` are the triangular ladders weighting the derivative columns
//!   of the symbol; `q̃` and `q̂` are the companion families built from them.
//!
//! Only the recursive definitions feed the reproduction checker. The closed
//! form for `α¹` is kept separately and compared in tests.

use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    binomial, factorial, falling_factorial, fmt_rational, int, pow2, Poly, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamiliesError {
    #[error("unsupported order d = {0}; only d = 2 and d = 3 have coefficient ladders")]
    UnsupportedOrder(usize),
    #[error("degree k must be at least 1")]
    ZeroDegree,
    #[error("right-hand side entry {entry} disagrees between routes at k = {k}: {a} vs {b}")]
    RhsMismatch {
        entry: usize,
        k: usize,
        a: String,
        b: String,
    },
}

/// `∏_{r=0}^{k-1}(2x + 2·shift − r)`; the constant 1 for `k = 0`.
pub fn q_poly(k: usize, shift: &Rational) -> Poly {
    let two_shift = shift * int(2);
    (0..k).fold(Poly::one(), |acc, r| {
        &acc * &Poly::linear(int(2), &two_shift - int(r as i64))
    })
}

/// Coefficients of `q_k(−x; shift)`: `values[n]` multiplies `x^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaTable {
    pub k: usize,
    pub shift: Rational,
    pub values: Vec<Rational>,
}

impl GammaTable {
    pub fn get(&self, n: usize) -> Rational {
        self.values.get(n).cloned().unwrap_or_else(Rational::zero)
    }
}

/// Runs the three-case coefficient recursion in `k` with `i = 2·shift`.
pub fn gamma_table(k: usize, shift: &Rational) -> GammaTable {
    let i = shift * int(2);
    let mut g = vec![Rational::one()];
    for kk in 1..=k {
        let c = &i - int(kk as i64 - 1);
        let mut next = Vec::with_capacity(kk + 1);
        next.push(&c * &g[0]);
        for n in 1..kk {
            next.push(int(-2) * &g[n - 1] + &c * &g[n]);
        }
        next.push(int(-2) * &g[kk - 1]);
        g = next;
    }
    GammaTable {
        k,
        shift: shift.clone(),
        values: g,
    }
}

/// `Σ_{r=n}^{k} (−1)^{r+n} γ_r^k C(r,n) shift^{r−n}`, which must agree with
/// `gamma_table(k, shift).values[n]`.
pub fn gamma_shift_identity(k: usize, n: usize, shift: &Rational) -> Rational {
    assert!(n <= k, "coefficient index {n} exceeds degree {k}");
    let base = gamma_table(k, &Rational::zero());
    let mut acc = Rational::zero();
    let mut power = Rational::one();
    for r in n..=k {
        let term = &base.values[r] * Rational::from_integer(binomial(r as u64, n as u64)) * &power;
        if (r + n).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
        power *= shift;
    }
    acc
}

/// Which coefficient ladder a table holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaFamily {
    /// `α¹`, rows `k ≥ 1`, columns `ℓ = 1..=k`; weights the first derivative.
    First,
    /// `α²`, rows `k ≥ 2`, columns `ℓ = 2..=k`; weights the second derivative.
    Second,
}

impl AlphaFamily {
    /// First valid row and column index.
    pub fn start(self) -> usize {
        match self {
            AlphaFamily::First => 1,
            AlphaFamily::Second => 2,
        }
    }
}

/// Triangular table of `α_{k,ℓ}` values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaTable {
    family: AlphaFamily,
    rows: Vec<Vec<Rational>>,
}

impl AlphaTable {
    pub fn family(&self) -> AlphaFamily {
        self.family
    }

    /// Largest row index held, or `None` for an empty table.
    pub fn kmax(&self) -> Option<usize> {
        (!self.rows.is_empty()).then(|| self.rows.len() + self.family.start() - 1)
    }

    /// Row `k`, entries for `ℓ = start..=k`.
    pub fn row(&self, k: usize) -> Option<&[Rational]> {
        k.checked_sub(self.family.start())
            .and_then(|r| self.rows.get(r))
            .map(Vec::as_slice)
    }

    pub fn get(&self, k: usize, l: usize) -> Option<&Rational> {
        let row = self.row(k)?;
        l.checked_sub(self.family.start()).and_then(|c| row.get(c))
    }

    /// Iterates `(k, row)` pairs.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &[Rational])> {
        let start = self.family.start();
        self.rows
            .iter()
            .enumerate()
            .map(move |(r, row)| (r + start, row.as_slice()))
    }

    /// `(k, ℓ)` positions holding non-integers. Integrality is observed, not
    /// proven, so callers report rather than assume.
    pub fn non_integral_entries(&self) -> Vec<(usize, usize)> {
        let start = self.family.start();
        self.rows()
            .flat_map(|(k, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_integer())
                    .map(move |(c, _)| (k, c + start))
            })
            .collect()
    }

    /// Positions where this table differs from `other`.
    pub fn mismatches(&self, other: &AlphaTable) -> Vec<(usize, usize)> {
        let start = self.family.start();
        let kmax = self.kmax().max(other.kmax()).unwrap_or(0);
        let mut out = Vec::new();
        for k in start..=kmax {
            for l in start..=k {
                if self.get(k, l) != other.get(k, l) {
                    out.push((k, l));
                }
            }
        }
        out
    }

    /// Rows rendered as `"p/q"` strings, for JSON output.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|row| row.iter().map(fmt_rational).collect())
            .collect()
    }
}

/// `γ_n^k` (shift 0) for `k = 0..=kmax`, built incrementally.
fn gamma_rows(kmax: usize) -> Vec<Vec<Rational>> {
    let mut rows = vec![vec![Rational::one()]];
    for k in 1..=kmax {
        let prev = &rows[k - 1];
        let c = int(1 - k as i64);
        let mut next = Vec::with_capacity(k + 1);
        next.push(&c * &prev[0]);
        for n in 1..k {
            next.push(int(-2) * &prev[n - 1] + &c * &prev[n]);
        }
        next.push(int(-2) * &prev[k - 1]);
        rows.push(next);
    }
    rows
}

fn sign(e: usize) -> Rational {
    if e.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// First ladder from its defining recursion: `α_{k,1} = 2k`, then
/// `α_{k,k−n+1}` for `n = k−1` down to `1`.
pub fn alpha1(kmax: usize) -> AlphaTable {
    let gamma = gamma_rows(kmax);
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        // row[l - 1] = α_{k,l}
        let mut row = vec![Rational::zero(); k];
        row[0] = int(2 * k as i64);
        for n in (1..k).rev() {
            let mut sum = Rational::zero();
            for j in 1..=k - n {
                sum += sign(j) * &row[j - 1] * &gamma[k - j][n - 1];
            }
            let inner = int(n as i64) * &gamma[k][n] - sum;
            row[k - n] = sign(k) * pow2(1 - n as i64) * inner;
        }
        rows.push(row);
    }
    AlphaTable {
        family: AlphaFamily::First,
        rows,
    }
}

/// First ladder from the conjectured direct rules. Never used by the checker.
pub fn alpha1_closed(kmax: usize) -> AlphaTable {
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        let mut row = vec![Rational::zero(); k];
        row[0] = int(2 * k as i64);
        for l in 2..k {
            // Σ_{i=l}^{k-2} α_{i+1, l-1}; empty when l = k - 1.
            let tail: Rational = (l..k.saturating_sub(1))
                .map(|i| rows[i][l - 2].clone())
                .sum();
            row[l - 1] = int(2 * (l as i64 + 1)) * Rational::from_integer(factorial(l as u64 - 1))
                + int(l as i64 - 1) * tail;
        }
        row[k - 1] = int(2) * Rational::from_integer(factorial(k as u64 - 1));
        rows.push(row);
    }
    AlphaTable {
        family: AlphaFamily::First,
        rows,
    }
}

/// Second ladder: `α²_{k,2} = 4k(k−1)`, then `α²_{k,k−n+2}` for
/// `n = k−1` down to `2`.
pub fn alpha2(kmax: usize) -> AlphaTable {
    let gamma = gamma_rows(kmax);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for k in 2..=kmax {
        // row[l - 2] = α²_{k,l}
        let mut row = vec![Rational::zero(); k - 1];
        row[0] = int(4 * k as i64 * (k as i64 - 1));
        for n in (2..k).rev() {
            let mut sum = Rational::zero();
            for j in 2..=k - n + 1 {
                sum += sign(j) * &row[j - 2] * &gamma[k - j][n - 2];
            }
            let inner = int((n * (n - 1)) as i64) * &gamma[k][n] - sum;
            row[k - n] = sign(k) * pow2(2 - n as i64) * inner;
        }
        rows.push(row);
    }
    AlphaTable {
        family: AlphaFamily::Second,
        rows,
    }
}

/// Both ladders up to a common `kmax`.
#[derive(Debug)]
pub struct Ladders {
    pub kmax: usize,
    pub alpha1: AlphaTable,
    pub alpha2: AlphaTable,
}

static LADDERS: RwLock<Option<Arc<Ladders>>> = RwLock::new(None);

/// Shared ladders covering at least `kmax`. Built once and rebuilt only when
/// a larger `kmax` is requested.
pub fn ladders(kmax: usize) -> Arc<Ladders> {
    if let Some(l) = LADDERS.read().unwrap().as_ref() {
        if l.kmax >= kmax {
            return Arc::clone(l);
        }
    }
    let mut slot = LADDERS.write().unwrap();
    if let Some(l) = slot.as_ref() {
        if l.kmax >= kmax {
            return Arc::clone(l);
        }
    }
    let built = Arc::new(Ladders {
        kmax,
        alpha1: alpha1(kmax),
        alpha2: alpha2(kmax),
    });
    *slot = Some(Arc::clone(&built));
    built
}

/// `q̃_k(x; s) = Σ_{n=1}^{k} (−1)^n α¹_{k,n} q_{k−n}(x; s)`; zero for `k = 0`.
pub fn qtilde_poly(k: usize, shift: &Rational) -> Poly {
    if k == 0 {
        return Poly::zero();
    }
    let lad = ladders(k);
    (1..=k).fold(Poly::zero(), |acc, n| {
        let w = sign(n) * lad.alpha1.get(k, n).expect("ladder covers k");
        &acc + &q_poly(k - n, shift).scale(&w)
    })
}

/// `q̂_k(x; s) = Σ_{n=2}^{k} (−1)^n α²_{k,n} q_{k−n}(x; s)`; zero for `k < 2`.
pub fn qhat_poly(k: usize, shift: &Rational) -> Poly {
    if k < 2 {
        return Poly::zero();
    }
    let lad = ladders(k);
    (2..=k).fold(Poly::zero(), |acc, n| {
        let w = sign(n) * lad.alpha2.get(k, n).expect("ladder covers k");
        &acc + &q_poly(k - n, shift).scale(&w)
    })
}

/// Right-hand side of the `z = +1` reproduction condition at degree `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhsVector {
    pub d: usize,
    pub k: usize,
    pub tau: Rational,
    pub entries: Vec<Rational>,
}

/// `[2 q_k(−τ/2; τ), q̃_k(−τ/2; τ), (½ q̂_k(−τ/2; τ))]`.
///
/// The first two entries are also computed from their product forms and the
/// two routes must agree.
pub fn rhs_vector(d: usize, k: usize, tau: &Rational) -> Result<RhsVector, FamiliesError> {
    if d != 2 && d != 3 {
        return Err(FamiliesError::UnsupportedOrder(d));
    }
    if k == 0 {
        return Err(FamiliesError::ZeroDegree);
    }
    let at = -(tau / int(2));
    let first = int(2) * q_poly(k, tau).eval(&at);
    let first_product = int(2) * falling_factorial(tau, k);
    if first != first_product {
        return Err(FamiliesError::RhsMismatch {
            entry: 1,
            k,
            a: fmt_rational(&first),
            b: fmt_rational(&first_product),
        });
    }
    let second = qtilde_poly(k, tau).eval(&at);
    let lad = ladders(k);
    let second_product: Rational = (1..=k)
        .map(|n| sign(n) * lad.alpha1.get(k, n).unwrap() * falling_factorial(tau, k - n))
        .sum();
    if second != second_product {
        return Err(FamiliesError::RhsMismatch {
            entry: 2,
            k,
            a: fmt_rational(&second),
            b: fmt_rational(&second_product),
        });
    }
    let mut entries = vec![first, second];
    if d == 3 {
        entries.push(qhat_poly(k, tau).eval(&at) / int(2));
    }
    Ok(RhsVector {
        d,
        k,
        tau: tau.clone(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn r(p: i64, q: i64) -> Rational {
        rat(p, q).unwrap()
    }

    #[test]
    fn q_poly_small_cases() {
        assert_eq!(q_poly(0, &r(7, 3)), Poly::one());
        assert_eq!(q_poly(2, &int(0)), Poly::from_coeffs(ints(&[0, -2, 4])));
    }

    #[test]
    fn gamma_tables_match_worked_values() {
        assert_eq!(gamma_table(1, &int(0)).values, ints(&[0, -2]));
        assert_eq!(gamma_table(2, &int(0)).values, ints(&[0, 2, 4]));
        assert_eq!(gamma_table(3, &int(0)).values, ints(&[0, -4, -12, -8]));
        assert_eq!(gamma_table(0, &r(5, 2)).values, ints(&[1]));
    }

    #[test]
    fn shift_identity_examples() {
        assert_eq!(gamma_shift_identity(2, 2, &int(5)), int(4));
        // q_2(x + 1/2) = 4x^2 + 2x, so q(-x) = 4x^2 - 2x.
        assert_eq!(gamma_shift_identity(2, 0, &r(1, 2)), int(0));
        assert_eq!(gamma_table(2, &r(1, 2)).values, ints(&[0, -2, 4]));
        assert_eq!(gamma_shift_identity(3, 1, &int(0)), int(-4));
    }

    #[test]
    fn alpha1_rows() {
        let t = alpha1(7);
        assert_eq!(t.row(1).unwrap(), ints(&[2]).as_slice());
        assert_eq!(t.row(3).unwrap(), ints(&[6, 6, 4]).as_slice());
        assert_eq!(
            t.row(7).unwrap(),
            ints(&[14, 42, 140, 420, 1008, 1680, 1440]).as_slice()
        );
        assert_eq!(t.kmax(), Some(7));
        assert_eq!(t.get(3, 4), None);
        assert_eq!(t.get(0, 1), None);
    }

    #[test]
    fn alpha1_closed_rows() {
        let t = alpha1_closed(7);
        assert_eq!(t.row(5).unwrap(), ints(&[10, 20, 40, 60, 48]).as_slice());
        assert_eq!(t.row(2).unwrap(), ints(&[4, 2]).as_slice());
        assert_eq!(t.get(7, 7).unwrap(), &int(1440));
    }

    #[test]
    fn alpha2_rows() {
        let t = alpha2(4);
        assert_eq!(t.get(2, 2).unwrap(), &int(8));
        assert_eq!(t.get(3, 2).unwrap(), &int(24));
        assert_eq!(t.get(3, 3).unwrap(), &int(24));
        assert_eq!(t.get(3, 1), None);
        assert_eq!(t.kmax(), Some(4));
        assert_eq!(alpha2(1).kmax(), None);
    }

    #[test]
    fn companion_polynomials() {
        assert_eq!(qtilde_poly(1, &r(3, 7)), Poly::constant(int(-2)));
        assert_eq!(qtilde_poly(0, &int(1)), Poly::zero());
        assert_eq!(qtilde_poly(2, &r(-1, 2)).eval(&r(1, 4)), int(4));
        assert_eq!(qhat_poly(2, &r(5, 3)), Poly::constant(int(8)));
        assert!(qhat_poly(1, &int(0)).is_zero());
    }

    #[test]
    fn rhs_examples() {
        let tau = r(-1, 2);
        assert_eq!(rhs_vector(2, 1, &tau).unwrap().entries, ints(&[-1, -2]));
        assert_eq!(
            rhs_vector(2, 2, &tau).unwrap().entries,
            vec![r(3, 2), int(4)]
        );
        // Only the n = k term survives at τ = 0: (+1)·α¹_{2,2}·1 = 2.
        assert_eq!(rhs_vector(2, 2, &int(0)).unwrap().entries, ints(&[0, 2]));
        assert_eq!(rhs_vector(3, 3, &int(0)).unwrap().entries.len(), 3);
    }

    #[test]
    fn rhs_rejects_bad_input() {
        assert_eq!(
            rhs_vector(4, 1, &int(0)),
            Err(FamiliesError::UnsupportedOrder(4))
        );
        assert_eq!(rhs_vector(2, 0, &int(0)), Err(FamiliesError::ZeroDegree));
    }

    #[test]
    fn ladders_cache_grows() {
        let small = ladders(3);
        assert!(small.kmax >= 3);
        let big = ladders(9);
        assert!(big.kmax >= 9);
        assert_eq!(big.alpha1.row(3), alpha1(3).row(3));
    }
}
