//! Algebraic reproduction conditions on the symbol at `z = ±1`.
//!
//! A scheme of order `d ∈ {2, 3}` with parametrization `τ` reproduces
//! constants iff `A(−1)e₁ = 0` and `A(1)e₁ = 2e₁`. It then reproduces `Π_m`
//! iff for every `k = 1..=m`
//!
//! ```text
//! A⁽ᵏ⁾(−1)e₁ + Σ_{ℓ≥1} α¹_{k,ℓ} A⁽ᵏ⁻ˡ⁾(−1)e₂ + Σ_{ℓ≥2} α²_{k,ℓ} A⁽ᵏ⁻ˡ⁾(−1)e₃ = 0
//! A⁽ᵏ⁾(+1)e₁ + Σ_{ℓ≥1} (−1)ˡα¹_{k,ℓ} A⁽ᵏ⁻ˡ⁾(1)e₂ + Σ_{ℓ≥2} (−1)ˡα²_{k,ℓ} A⁽ᵏ⁻ˡ⁾(1)e₃ = q_d(k, τ)
//! ```
//!
//! where the `e₃` sums only exist for `d = 3` and `q_d` is
//! [`rhs_vector`](crate::families::rhs_vector).

use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{fmt_rational, int, is_zero_vec, Rational, Vector};
use crate::families::{ladders, rhs_vector, FamiliesError, Ladders};
use crate::symbol::{HermiteMask, SymbolJet, UnitPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReproductionError {
    #[error("constants are not reproduced, so tau cannot be inferred")]
    ConstantsNotReproduced,
    #[error("degree k must be at least 1")]
    ZeroDegree,
    #[error(transparent)]
    Families(#[from] FamiliesError),
}

/// Result of the constant-reproduction test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantsCheck {
    pub ok: bool,
    /// `A(−1)e₁`
    pub residual_minus: Vector,
    /// `A(1)e₁ − 2e₁`
    pub residual_plus: Vector,
}

/// Left-hand sides of both conditions at degree `k`, the `+1` one already
/// reduced by its right-hand side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeResidual {
    pub k: usize,
    pub minus: Vector,
    pub plus: Vector,
}

impl DegreeResidual {
    pub fn passed(&self) -> bool {
        is_zero_vec(&self.minus) && is_zero_vec(&self.plus)
    }
}

fn constants_from_jet(jet: &SymbolJet) -> ConstantsCheck {
    let residual_minus = jet.get(0, UnitPoint::Minus).column(0);
    let mut residual_plus = jet.get(0, UnitPoint::Plus).column(0);
    residual_plus[0] -= int(2);
    ConstantsCheck {
        ok: is_zero_vec(&residual_minus) && is_zero_vec(&residual_plus),
        residual_minus,
        residual_plus,
    }
}

pub fn check_constants(mask: &HermiteMask) -> ConstantsCheck {
    constants_from_jet(&SymbolJet::new(mask, 0))
}

/// Left side of the degree-`k` condition at `z` (no right-hand side).
/// Linear in the mask, which the construction module relies on.
pub(crate) fn condition_lhs(
    jet: &SymbolJet,
    d: usize,
    k: usize,
    z: UnitPoint,
    lad: &Ladders,
) -> Vector {
    let flip = |l: usize| {
        if z == UnitPoint::Plus && l % 2 == 1 {
            -Rational::one()
        } else {
            Rational::one()
        }
    };
    let mut acc = jet.get(k, z).column(0);
    let mut add_column = |weight: Rational, order: usize, col: usize| {
        if weight.is_zero() {
            return;
        }
        for (a, v) in acc.iter_mut().zip(jet.get(order, z).column(col)) {
            *a += &weight * v;
        }
    };
    for l in 1..=k {
        let w = flip(l) * lad.alpha1.get(k, l).expect("ladder covers k");
        add_column(w, k - l, 1);
    }
    if d == 3 {
        for l in 2..=k {
            let w = flip(l) * lad.alpha2.get(k, l).expect("ladder covers k");
            add_column(w, k - l, 2);
        }
    }
    acc
}

fn residual_from_jet(
    jet: &SymbolJet,
    d: usize,
    tau: &Rational,
    k: usize,
    lad: &Ladders,
) -> Result<DegreeResidual, ReproductionError> {
    if k == 0 {
        return Err(ReproductionError::ZeroDegree);
    }
    let minus = condition_lhs(jet, d, k, UnitPoint::Minus, lad);
    let rhs = rhs_vector(d, k, tau)?;
    let plus = condition_lhs(jet, d, k, UnitPoint::Plus, lad)
        .into_iter()
        .zip(rhs.entries)
        .map(|(a, b)| a - b)
        .collect();
    Ok(DegreeResidual { k, minus, plus })
}

pub fn degree_residual(
    mask: &HermiteMask,
    tau: &Rational,
    k: usize,
) -> Result<DegreeResidual, ReproductionError> {
    let jet = SymbolJet::new(mask, k);
    residual_from_jet(&jet, mask.d(), tau, k, &ladders(k.max(1)))
}

/// Parametrization from the first component of the `k = 1` condition at
/// `z = +1`: `(A'(1))₁₁ − 2(A(1))₁₂ = 2τ`.
pub fn infer_tau(mask: &HermiteMask) -> Result<Rational, ReproductionError> {
    let jet = SymbolJet::new(mask, 1);
    if !constants_from_jet(&jet).ok {
        return Err(ReproductionError::ConstantsNotReproduced);
    }
    Ok(tau_from_jet(&jet))
}

fn tau_from_jet(jet: &SymbolJet) -> Rational {
    let d1 = jet.get(1, UnitPoint::Plus).get(0, 0);
    let a12 = jet.get(0, UnitPoint::Plus).get(0, 1);
    (d1 - int(2) * a12) / int(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TauSource {
    Given,
    Inferred,
}

/// Certificate for one mask: all residuals up to `kmax` plus the verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReproductionReport {
    pub name: Option<String>,
    pub d: usize,
    pub tau: Rational,
    pub tau_source: TauSource,
    /// Set when the mask carries a τ hint that differs from `tau`.
    pub tau_hint_mismatch: Option<Rational>,
    pub kmax: usize,
    pub constants: ConstantsCheck,
    /// Residuals for `k = 1..=kmax`, recorded past the first failure.
    pub residuals: Vec<DegreeResidual>,
    /// `None` when constants fail; else the longest passing prefix.
    pub certified_degree: Option<usize>,
}

impl ReproductionReport {
    /// True when reproduction of `Π_m` is certified.
    pub fn reproduces(&self, m: usize) -> bool {
        self.certified_degree.is_some_and(|c| c >= m)
    }

    pub fn verdict_line(&self) -> String {
        let deg = match self.certified_degree {
            Some(m) => m.to_string(),
            None => "none (constants not reproduced)".to_string(),
        };
        format!("certified degree: {deg}, tau: {}", fmt_rational(&self.tau))
    }

    pub fn to_table(&self) -> String {
        fn vec_str(v: &[Rational]) -> String {
            let parts: Vec<String> = v.iter().map(fmt_rational).collect();
            format!("[{}]", parts.join(", "))
        }
        let mut out = String::new();
        if let Some(name) = &self.name {
            out.push_str(&format!("scheme: {name}\n"));
        }
        let source = match self.tau_source {
            TauSource::Given => "given",
            TauSource::Inferred => "inferred",
        };
        out.push_str(&format!(
            "order d: {}\ntau: {} ({source})\n",
            self.d,
            fmt_rational(&self.tau)
        ));
        if let Some(h) = &self.tau_hint_mismatch {
            out.push_str(&format!("warning: mask declares tau {}\n", fmt_rational(h)));
        }
        out.push_str(&format!(
            "constants: {}  A(-1)e1 = {}  A(1)e1 - 2e1 = {}\n",
            if self.constants.ok { "ok" } else { "FAIL" },
            vec_str(&self.constants.residual_minus),
            vec_str(&self.constants.residual_plus)
        ));
        let rows: Vec<[String; 4]> = self
            .residuals
            .iter()
            .map(|r| {
                [
                    r.k.to_string(),
                    vec_str(&r.minus),
                    vec_str(&r.plus),
                    if r.passed() { "pass" } else { "fail" }.to_string(),
                ]
            })
            .collect();
        let header = [
            "k".to_string(),
            "z=-1 residual".to_string(),
            "z=+1 residual".to_string(),
            "verdict".to_string(),
        ];
        let mut widths = header.clone().map(|h| h.len());
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        for row in std::iter::once(&header).chain(&rows) {
            let cells: Vec<String> = row
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            out.push_str(cells.join(" | ").trim_end());
            out.push('\n');
        }
        out.push_str(&self.verdict_line());
        out.push('\n');
        out
    }

    pub fn to_json(&self) -> Value {
        fn strs(v: &[Rational]) -> Vec<String> {
            v.iter().map(fmt_rational).collect()
        }
        json!({
            "name": self.name,
            "d": self.d,
            "tau": fmt_rational(&self.tau),
            "tau_source": match self.tau_source {
                TauSource::Given => "given",
                TauSource::Inferred => "inferred",
            },
            "tau_hint_mismatch": self.tau_hint_mismatch.as_ref().map(fmt_rational),
            "kmax": self.kmax,
            "constants": {
                "ok": self.constants.ok,
                "minus": strs(&self.constants.residual_minus),
                "plus": strs(&self.constants.residual_plus),
            },
            "residuals": self.residuals.iter().map(|r| json!({
                "k": r.k,
                "minus": strs(&r.minus),
                "plus": strs(&r.plus),
                "passed": r.passed(),
            })).collect::<Vec<_>>(),
            "certified_degree": self.certified_degree,
        })
    }
}

/// Evaluates all conditions for `k ≤ kmax`. Without an explicit `tau` the
/// parametrization is inferred, which fails when constants fail.
pub fn certify(
    mask: &HermiteMask,
    tau: Option<&Rational>,
    kmax: usize,
) -> Result<ReproductionReport, ReproductionError> {
    let jet = SymbolJet::new(mask, kmax.max(1));
    let constants = constants_from_jet(&jet);
    let (tau, tau_source) = match tau {
        Some(t) => (t.clone(), TauSource::Given),
        None if constants.ok => (tau_from_jet(&jet), TauSource::Inferred),
        None => return Err(ReproductionError::ConstantsNotReproduced),
    };
    let lad = ladders(kmax.max(1));
    let residuals = (1..=kmax)
        .map(|k| residual_from_jet(&jet, mask.d(), &tau, k, &lad))
        .collect::<Result<Vec<_>, _>>()?;
    let certified_degree = constants
        .ok
        .then(|| residuals.iter().take_while(|r| r.passed()).count());
    let tau_hint_mismatch = mask.tau_hint().filter(|h| **h != tau).cloned();
    Ok(ReproductionReport {
        name: mask.name().map(str::to_string),
        d: mask.d(),
        tau,
        tau_source,
        tau_hint_mismatch,
        kmax,
        constants,
        residuals,
        certified_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Matrix};
    use crate::catalog;

    fn r(p: i64, q: i64) -> Rational {
        rat(p, q).unwrap()
    }

    #[test]
    fn constants_examples() {
        assert!(check_constants(&catalog::merrien(&r(1, 7), &r(2, 5))).ok);
        assert!(check_constants(&catalog::derham(&r(1, 7), &r(2, 5))).ok);
        let lazy = HermiteMask::new(2, [(0, Matrix::identity(2))]).unwrap();
        let c = check_constants(&lazy);
        assert!(!c.ok);
        assert_eq!(c.residual_plus, vec![int(-1), int(0)]);
    }

    #[test]
    fn merrien_degree_four_residual_is_e1() {
        let m = catalog::merrien(&r(-1, 8), &r(-1, 2));
        let res = degree_residual(&m, &int(0), 4).unwrap();
        assert_eq!(res.minus, vec![int(1), int(0)]);
    }

    #[test]
    fn derham_low_degree_residuals() {
        let (l, mu) = (r(1, 7), r(2, 5));
        let m = catalog::derham(&l, &mu);
        let tau = r(-1, 2);
        let k1 = degree_residual(&m, &tau, 1).unwrap();
        assert!(k1.passed());
        let k2 = degree_residual(&m, &tau, 2).unwrap();
        let second = int(2) - int(2) * &mu + int(16) * &l - int(16) * &l * &mu;
        assert_eq!(k2.minus, vec![int(0), second]);
        assert_eq!(k2.plus, vec![int(3) + int(12) * &l - r(3, 2), int(0)]);
    }

    #[test]
    fn inferred_parametrizations() {
        assert_eq!(
            infer_tau(&catalog::merrien(&r(3, 7), &r(-5, 3))).unwrap(),
            int(0)
        );
        assert_eq!(
            infer_tau(&catalog::derham(&r(3, 7), &r(-5, 3))).unwrap(),
            r(-1, 2)
        );
        let p = catalog::cubic_constraints(&r(1, 3), &r(1, 5), &r(1, 7));
        assert_eq!(infer_tau(&catalog::primal3(&p)).unwrap(), int(0));
        let lazy = HermiteMask::new(2, [(0, Matrix::identity(2))]).unwrap();
        assert_eq!(
            infer_tau(&lazy),
            Err(ReproductionError::ConstantsNotReproduced)
        );
    }

    #[test]
    fn merrien_ladder() {
        let cert = |l, m| {
            certify(&catalog::merrien(&l, &m), None, 5)
                .unwrap()
                .certified_degree
        };
        assert_eq!(cert(r(-1, 8), r(-1, 2)), Some(3));
        assert_eq!(cert(r(-1, 8), r(2, 5)), Some(2));
        assert_eq!(cert(r(1, 7), r(2, 5)), Some(1));
    }

    #[test]
    fn wrong_tau_breaks_linear_reproduction() {
        let m = catalog::derham(&r(-1, 8), &r(-1, 2));
        assert_eq!(
            certify(&m, Some(&int(0)), 4).unwrap().certified_degree,
            Some(0)
        );
        let rep = certify(&m, None, 4).unwrap();
        assert_eq!(rep.certified_degree, Some(3));
        assert_eq!(rep.tau_source, TauSource::Inferred);
        let m = catalog::merrien(&r(-1, 8), &r(-1, 2));
        let rep = certify(&m, Some(&r(1, 3)), 4).unwrap();
        assert_eq!(rep.certified_degree, Some(0));
        assert_eq!(rep.tau_hint_mismatch, Some(int(0)));
        // first component of the k = 1 plus residual is 2(τ* − τ)
        assert_eq!(rep.residuals[0].plus[0], r(-2, 3));
    }

    #[test]
    fn failed_constants_report_no_degree() {
        let lazy = HermiteMask::new(2, [(0, Matrix::identity(2))]).unwrap();
        assert_eq!(
            certify(&lazy, None, 3),
            Err(ReproductionError::ConstantsNotReproduced)
        );
        let rep = certify(&lazy, Some(&int(0)), 3).unwrap();
        assert_eq!(rep.certified_degree, None);
        assert_eq!(rep.residuals.len(), 3);
        assert!(rep.verdict_line().contains("none"));
    }

    #[test]
    fn zero_kmax_certifies_constants_only() {
        let rep = certify(&catalog::merrien(&r(1, 7), &r(2, 5)), None, 0).unwrap();
        assert_eq!(rep.certified_degree, Some(0));
        assert!(rep.residuals.is_empty());
        assert_eq!(
            degree_residual(&catalog::merrien(&r(1, 7), &r(2, 5)), &int(0), 0),
            Err(ReproductionError::ZeroDegree)
        );
    }

    #[test]
    fn table_and_json_shapes() {
        let rep = certify(&catalog::merrien(&r(-1, 8), &r(-1, 2)), None, 4).unwrap();
        let table = rep.to_table();
        assert!(table.contains("certified degree: 3, tau: 0"));
        assert!(table.contains("| fail"));
        let v = rep.to_json();
        assert_eq!(v["certified_degree"], 3);
        assert_eq!(v["residuals"][3]["minus"][0], "1");
        assert_eq!(v["tau"], "0");
    }
}
