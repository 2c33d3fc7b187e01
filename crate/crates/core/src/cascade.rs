//! The subdivision operator and the brute-force reproduction oracle.
//!
//! One refinement step maps level-`n` data to level `n + 1` by
//!
//! ```text
//! D^{n+1} f_{n+1}(i) = Σ_j A_{i−2j} D^n f_n(j),   D = diag(1, 1/2, 1/4)
//! ```
//!
//! truncated to the first `d` entries of `D`. Sequences are finite windows;
//! an output index is kept only if every `j` its stencil touches is inside
//! the input window, so no value is ever computed from invented data.

use std::io;

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{fmt_rational, int, pow2, to_decimal, Poly, Rational, Vector};
use crate::symbol::HermiteMask;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CascadeError {
    #[error("sequence has order {seq} but the mask has order {mask}")]
    OrderMismatch { mask: usize, seq: usize },
    #[error("window of {width} entries at level {level} is too narrow; refinement needs at least {required}")]
    WindowTooNarrow {
        level: usize,
        width: usize,
        required: usize,
    },
    #[error("empty window [{lo}, {hi}]")]
    EmptyWindow { lo: i64, hi: i64 },
    #[error("component {s} out of range 1..={d}")]
    BadComponent { s: usize, d: usize },
    #[error("entry {index} has {len} components, expected {d}")]
    BadEntry { index: i64, len: usize, d: usize },
}

/// `(1, 1/2, …, 2^{−(d−1)})`
pub fn diag_scale(d: usize) -> Vec<Rational> {
    (0..d as i64).map(|s| pow2(-s)).collect()
}

/// Level-`n` Hermite data `f_n(j)` for `j = base..base + len − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteSequence {
    pub d: usize,
    pub level: usize,
    pub base: i64,
    pub values: Vec<Vector>,
}

impl HermiteSequence {
    pub fn new(
        d: usize,
        level: usize,
        base: i64,
        values: Vec<Vector>,
    ) -> Result<Self, CascadeError> {
        if values.is_empty() {
            return Err(CascadeError::EmptyWindow {
                lo: base,
                hi: base - 1,
            });
        }
        for (off, v) in values.iter().enumerate() {
            if v.len() != d {
                return Err(CascadeError::BadEntry {
                    index: base + off as i64,
                    len: v.len(),
                    d,
                });
            }
        }
        Ok(HermiteSequence {
            d,
            level,
            base,
            values,
        })
    }

    pub fn zeros(d: usize, level: usize, lo: i64, hi: i64) -> Result<Self, CascadeError> {
        if hi < lo {
            return Err(CascadeError::EmptyWindow { lo, hi });
        }
        let len = (hi - lo + 1) as usize;
        Ok(HermiteSequence {
            d,
            level,
            base: lo,
            values: vec![vec![Rational::zero(); d]; len],
        })
    }

    /// Level-0 data with `e_s` at index 0 and zero elsewhere on `[lo, hi]`.
    pub fn delta(d: usize, s: usize, lo: i64, hi: i64) -> Result<Self, CascadeError> {
        if s == 0 || s > d {
            return Err(CascadeError::BadComponent { s, d });
        }
        let mut seq = Self::zeros(d, 0, lo, hi)?;
        if let Some(v) = seq.get_mut(0) {
            v[s - 1] = int(1);
        }
        Ok(seq)
    }

    pub fn lo(&self) -> i64 {
        self.base
    }

    pub fn hi(&self) -> i64 {
        self.base + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, j: i64) -> Option<&Vector> {
        if j < self.base {
            return None;
        }
        self.values.get((j - self.base) as usize)
    }

    fn get_mut(&mut self, j: i64) -> Option<&mut Vector> {
        if j < self.base {
            return None;
        }
        self.values.get_mut((j - self.base) as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Vector)> {
        (self.base..).zip(self.values.iter())
    }

    /// Same data re-indexed by `j ↦ j + s`.
    pub fn shifted(&self, s: i64) -> HermiteSequence {
        HermiteSequence {
            base: self.base + s,
            ..self.clone()
        }
    }

    /// Restriction to `[lo, hi]`, which must lie inside the window.
    pub fn restricted(&self, lo: i64, hi: i64) -> Option<HermiteSequence> {
        if lo < self.lo() || hi > self.hi() || hi < lo {
            return None;
        }
        let start = (lo - self.base) as usize;
        let end = (hi - self.base) as usize;
        Some(HermiteSequence {
            values: self.values[start..=end].to_vec(),
            base: lo,
            ..self.clone()
        })
    }

    /// `a·self + b·other` on identical windows.
    pub fn combine(&self, a: &Rational, other: &HermiteSequence, b: &Rational) -> Option<Self> {
        if (self.d, self.level, self.base, self.len())
            != (other.d, other.level, other.base, other.len())
        {
            return None;
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(u, v)| u.iter().zip(v).map(|(x, y)| a * x + b * y).collect())
            .collect();
        Some(HermiteSequence {
            values,
            ..self.clone()
        })
    }
}

/// Shortest input window (entries) that leaves a nonempty output.
fn required_width(mask: &HermiteMask) -> usize {
    let mut best: Option<i64> = None;
    for parity in 0..2 {
        let offs: Vec<i64> = mask
            .support()
            .filter(|l| l.rem_euclid(2) == parity)
            .collect();
        if let (Some(first), Some(last)) = (offs.first(), offs.last()) {
            let need = (last - first + 1) / 2 + 1;
            best = Some(best.map_or(need, |b: i64| b.min(need)));
        }
    }
    best.unwrap_or(1) as usize
}

/// Output window of one refinement of input `[a, b]`, or `None` when empty.
///
/// Index `i` is valid when `i − l ∈ [2a, 2b]` for every nonzero `A_l` with
/// `l ≡ i (mod 2)`. If the valid set has gaps (only possible with a single
/// parity in the support), the longest contiguous run wins; indices with an
/// empty stencil inside it simply evaluate to zero.
pub fn refined_window(mask: &HermiteMask, a: i64, b: i64) -> Option<(i64, i64)> {
    let support: Vec<i64> = mask.support().collect();
    let (lo_s, hi_s) = mask.support_bounds();
    let valid = |i: i64| {
        support
            .iter()
            .filter(|&&l| (i - l).rem_euclid(2) == 0)
            .all(|&l| 2 * a <= i - l && i - l <= 2 * b)
    };
    let mut best: Option<(i64, i64)> = None;
    let mut run: Option<i64> = None;
    for i in (2 * a + lo_s)..=(2 * b + hi_s + 1) {
        let ok = i <= 2 * b + hi_s && valid(i);
        match (ok, run) {
            (true, None) => run = Some(i),
            (false, Some(start)) => {
                let cand = (start, i - 1);
                if best.is_none_or(|(s, e)| cand.1 - cand.0 > e - s) {
                    best = Some(cand);
                }
                run = None;
            }
            _ => {}
        }
    }
    best
}

/// One step of the cascade, shrinking the window at both ends.
pub fn refine(mask: &HermiteMask, seq: &HermiteSequence) -> Result<HermiteSequence, CascadeError> {
    if mask.d() != seq.d {
        return Err(CascadeError::OrderMismatch {
            mask: mask.d(),
            seq: seq.d,
        });
    }
    let d = seq.d;
    let (lo, hi) =
        refined_window(mask, seq.lo(), seq.hi()).ok_or(CascadeError::WindowTooNarrow {
            level: seq.level,
            width: seq.len(),
            required: required_width(mask),
        })?;
    let n = seq.level as i64;
    // D^n f_n(j), computed once per input index
    let scaled: Vec<Vector> = seq
        .values
        .iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .map(|(s, x)| x * pow2(-(s as i64) * n))
                .collect()
        })
        .collect();
    let undo: Vec<Rational> = (0..d as i64).map(|r| pow2(r * (n + 1))).collect();
    let mut values = Vec::with_capacity((hi - lo + 1) as usize);
    for i in lo..=hi {
        let mut acc = vec![Rational::zero(); d];
        for (&l, m) in mask.matrices() {
            if (i - l).rem_euclid(2) != 0 || m.is_zero() {
                continue;
            }
            let j = (i - l) / 2;
            let x = &scaled[(j - seq.base) as usize];
            for (r, slot) in acc.iter_mut().enumerate() {
                for (c, xc) in x.iter().enumerate() {
                    let e = m.get(r, c);
                    if !e.is_zero() && !xc.is_zero() {
                        *slot += e * xc;
                    }
                }
            }
        }
        for (slot, u) in acc.iter_mut().zip(&undo) {
            *slot *= u;
        }
        values.push(acc);
    }
    Ok(HermiteSequence {
        d,
        level: seq.level + 1,
        base: lo,
        values,
    })
}

/// `[p(t), p′(t), p″(t)]` truncated to `d` entries.
pub fn hermite_data(p: &Poly, d: usize, t: &Rational) -> Vector {
    let mut out = Vec::with_capacity(d);
    let mut q = p.clone();
    for _ in 0..d {
        out.push(q.eval(t));
        q = q.derivative();
    }
    out
}

/// Level-0 samples `f₀(j) = [p(j+τ), p′(j+τ), …]` on `[lo, hi]`.
pub fn sample_poly(
    p: &Poly,
    d: usize,
    tau: &Rational,
    lo: i64,
    hi: i64,
) -> Result<HermiteSequence, CascadeError> {
    if hi < lo {
        return Err(CascadeError::EmptyWindow { lo, hi });
    }
    let values = (lo..=hi)
        .map(|j| hermite_data(p, d, &(int(j) + tau)))
        .collect();
    HermiteSequence::new(d, 0, lo, values)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Pass,
    Fail {
        /// Exponent of the monomial whose samples were not reproduced.
        degree: usize,
        level: usize,
        index: i64,
        expected: Vector,
        got: Vector,
    },
}

impl OracleVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, OracleVerdict::Pass)
    }
}

/// Windows `[lo, hi]` at levels `0..=levels`, or the first level that
/// cannot be refined.
pub fn window_schedule(
    mask: &HermiteMask,
    levels: usize,
    lo: i64,
    hi: i64,
) -> Result<Vec<(i64, i64)>, CascadeError> {
    if hi < lo {
        return Err(CascadeError::EmptyWindow { lo, hi });
    }
    let mut out = vec![(lo, hi)];
    for level in 0..levels {
        let (a, b) = out[level];
        let next = refined_window(mask, a, b).ok_or(CascadeError::WindowTooNarrow {
            level,
            width: (b - a + 1) as usize,
            required: required_width(mask),
        })?;
        out.push(next);
    }
    Ok(out)
}

/// Smallest symmetric window `[−w, w]` whose last level still holds at
/// least one full mask span of entries.
pub fn auto_window(mask: &HermiteMask, levels: usize) -> (i64, i64) {
    let (lo_s, hi_s) = mask.support_bounds();
    let span = hi_s - lo_s + 1;
    let mut w = span.max(1);
    loop {
        if let Ok(s) = window_schedule(mask, levels, -w, w) {
            let (a, b) = s[levels];
            if b - a + 1 >= span {
                return (-w, w);
            }
        }
        w += 1;
    }
}

/// Runs the cascade on samples of `1, x, …, x^m` and compares every
/// surviving entry at every level with the exact Hermite data at
/// `(j + τ)/2^ℓ`. Monomials are checked in ascending degree, so a failure
/// names the lowest offending degree.
pub fn oracle_reproduces(
    mask: &HermiteMask,
    tau: &Rational,
    m: usize,
    levels: usize,
    lo: i64,
    hi: i64,
) -> Result<OracleVerdict, CascadeError> {
    window_schedule(mask, levels, lo, hi)?;
    let d = mask.d();
    for degree in 0..=m {
        let p = Poly::monomial(degree);
        let mut seq = sample_poly(&p, d, tau, lo, hi)?;
        for level in 0..=levels {
            if level > 0 {
                seq = refine(mask, &seq)?;
            }
            let h = pow2(-(level as i64));
            for (j, got) in seq.iter() {
                let expected = hermite_data(&p, d, &((int(j) + tau) * &h));
                if *got != expected {
                    return Ok(OracleVerdict::Fail {
                        degree,
                        level,
                        index: j,
                        expected,
                        got: got.clone(),
                    });
                }
            }
        }
    }
    Ok(OracleVerdict::Pass)
}

/// Point `t` of the dyadic grid with its Hermite data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitSample {
    pub t: Rational,
    pub value: Vector,
}

/// Basic limit function data: `e_s` at index 0, refined `n` times, with
/// samples at `t = (i + τ)/2ⁿ`. The level-0 window `[−w, w]`, `w = hi − lo + 1`
/// over the support, keeps every index the delta can reach, so all samples
/// carry exact values of the infinite cascade.
pub fn basic_limit_samples(
    mask: &HermiteMask,
    s: usize,
    n: usize,
    tau: &Rational,
) -> Result<Vec<LimitSample>, CascadeError> {
    let (lo_s, hi_s) = mask.support_bounds();
    let w = hi_s - lo_s + 1;
    let mut seq = HermiteSequence::delta(mask.d(), s, -w, w)?;
    for _ in 0..n {
        seq = refine(mask, &seq)?;
    }
    let h = pow2(-(n as i64));
    Ok(seq
        .iter()
        .map(|(i, v)| LimitSample {
            t: (int(i) + tau) * &h,
            value: v.clone(),
        })
        .collect())
}

/// CSV with header `t,f,f1[,f2]`; exact `p/q` by default, 17 significant
/// digits with `decimal`.
pub fn write_limit_csv<W: io::Write>(
    out: W,
    d: usize,
    samples: &[LimitSample],
    decimal: bool,
) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string(), "f".to_string()];
    header.extend((1..d).map(|s| format!("f{s}")));
    w.write_record(&header)?;
    let show = |x: &Rational| {
        if decimal {
            to_decimal(x)
        } else {
            fmt_rational(x)
        }
    };
    for sample in samples {
        let mut row = vec![show(&sample.t)];
        row.extend(sample.value.iter().map(show));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Matrix};
    use crate::catalog;

    fn r(p: i64, q: i64) -> Rational {
        rat(p, q).unwrap()
    }

    fn lazy() -> HermiteMask {
        HermiteMask::new(2, [(0, Matrix::diag(diag_scale(2)))]).unwrap()
    }

    #[test]
    fn scale_entries() {
        assert_eq!(diag_scale(3), vec![int(1), r(1, 2), r(1, 4)]);
    }

    #[test]
    fn sampling_examples() {
        let x = Poly::monomial(1);
        let seq = sample_poly(&x, 2, &int(0), -2, 2).unwrap();
        let want: Vec<Vector> = (-2..=2).map(|j| vec![int(j), int(1)]).collect();
        assert_eq!(seq.values, want);
        let x2 = Poly::monomial(2);
        let seq = sample_poly(&x2, 2, &r(-1, 2), 0, 0).unwrap();
        assert_eq!(seq.values[0], vec![r(1, 4), int(-1)]);
        let one = sample_poly(&Poly::one(), 3, &r(2, 3), -1, 1).unwrap();
        assert!(one
            .values
            .iter()
            .all(|v| *v == vec![int(1), int(0), int(0)]));
    }

    #[test]
    fn lazy_scheme_keeps_even_entries() {
        let seq = sample_poly(&Poly::monomial(2), 2, &int(0), -3, 3).unwrap();
        let out = refine(&lazy(), &seq).unwrap();
        assert_eq!((out.lo(), out.hi()), (-6, 6));
        for j in -3..=3 {
            assert_eq!(out.get(2 * j), seq.get(j));
        }
        assert!(out.get(1).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn merrien_one_step_on_square() {
        let m = catalog::merrien(&r(-1, 8), &r(-1, 2));
        let p = Poly::monomial(2);
        let seq = sample_poly(&p, 2, &int(0), -6, 6).unwrap();
        let out = refine(&m, &seq).unwrap();
        assert_eq!(out.get(1).unwrap(), &vec![r(1, 4), int(1)]);
        for (i, v) in out.iter() {
            assert_eq!(*v, hermite_data(&p, 2, &r(i, 2)));
        }
    }

    #[test]
    fn derham_one_step_on_line() {
        let m = catalog::derham(&r(-1, 8), &r(-1, 2));
        let tau = r(-1, 2);
        let seq = sample_poly(&Poly::monomial(1), 2, &tau, -5, 5).unwrap();
        let out = refine(&m, &seq).unwrap();
        for (i, v) in out.iter() {
            assert_eq!(*v, vec![(int(i) - r(1, 2)) / int(2), int(1)]);
        }
    }

    #[test]
    fn narrow_window_is_reported() {
        let m = catalog::merrien(&r(-1, 8), &r(-1, 2));
        let seq = sample_poly(&Poly::one(), 2, &int(0), 0, 0).unwrap();
        // the even stencil of this mask is {0}: one entry still refines
        assert_eq!(refine(&m, &seq).unwrap().len(), 1);
        let m = catalog::derham(&r(-1, 8), &r(-1, 2));
        assert!(matches!(
            refine(&m, &seq),
            Err(CascadeError::WindowTooNarrow { required: 2, .. })
        ));
        assert!(oracle_reproduces(&m, &r(-1, 2), 1, 5, 0, 0).is_err());
    }

    #[test]
    fn merrien_oracle_verdicts() {
        let m = catalog::merrien(&r(-1, 8), &r(-1, 2));
        assert!(oracle_reproduces(&m, &int(0), 3, 3, -20, 20)
            .unwrap()
            .passed());
        match oracle_reproduces(&m, &int(0), 4, 3, -24, 24).unwrap() {
            OracleVerdict::Fail { degree, level, .. } => assert_eq!((degree, level), (4, 1)),
            OracleVerdict::Pass => panic!("degree 4 must fail"),
        }
    }

    #[test]
    fn derham_oracle_cubic() {
        let m = catalog::derham(&r(-1, 8), &r(-1, 2));
        assert!(oracle_reproduces(&m, &r(-1, 2), 3, 3, -20, 20)
            .unwrap()
            .passed());
    }

    #[test]
    fn auto_window_survives() {
        for m in catalog::reference_instances() {
            let (lo, hi) = auto_window(&m, 3);
            assert!(window_schedule(&m, 3, lo, hi).is_ok());
        }
    }

    #[test]
    fn basic_limit_examples() {
        let m = catalog::merrien(&r(-1, 8), &r(-1, 2));
        let samples = basic_limit_samples(&m, 1, 4, &int(0)).unwrap();
        let at0 = samples.iter().find(|s| s.t.is_zero()).unwrap();
        assert_eq!(at0.value, vec![int(1), int(0)]);
        // hat-like support: nothing outside [−1, 1]
        for s in &samples {
            if s.t <= int(-1) || s.t >= int(1) {
                assert!(s.value.iter().all(Zero::is_zero), "t = {}", s.t);
            }
        }
        let samples = basic_limit_samples(&lazy(), 2, 3, &int(0)).unwrap();
        let at0 = samples.iter().find(|s| s.t.is_zero()).unwrap();
        assert_eq!(at0.value, vec![int(0), int(1)]);
        assert!(basic_limit_samples(&m, 3, 1, &int(0)).is_err());
    }

    #[test]
    fn csv_layout() {
        let samples = vec![LimitSample {
            t: r(-1, 2),
            value: vec![r(1, 3), int(0)],
        }];
        let mut buf = Vec::new();
        write_limit_csv(&mut buf, 2, &samples, false).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,f,f1\n-1/2,1/3,0\n");
        let mut buf = Vec::new();
        write_limit_csv(&mut buf, 2, &samples, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("3.3333333333333331e-1"));
    }
}
