//! Mask synthesis from a template with unknown entries.
//!
//! Every reproduction condition is linear in the mask entries once `τ` is
//! fixed, so a template whose entries are affine in a set of named unknowns
//! yields a linear system. Template files mirror the mask format:
//!
//! ```json
//! {
//!   "d": 2,
//!   "unknowns": ["lambda", "mu"],
//!   "matrices": {
//!     "-1": [["1/2", "?lambda"], ["1/2 - 1/2?mu", "1/4?mu"]],
//!     "0": [["1", "0"], ["0", "1/2"]],
//!     "1": [["1/2", "-?lambda"], ["-1/2 + 1/2?mu", "1/4?mu"]]
//!   }
//! }
//! ```
//!
//! An entry is a sum of terms `p/q` and `[p/q]?name`, so `"?a"`, `"-?a"` and
//! plain rationals are the common cases. `unknowns` fixes the column order
//! (and with it which names come out free); without it names are ordered by
//! first appearance.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::algebra::{
    fmt_rational, int, parse_rational, solve_linear, AlgebraError, Matrix, Rational, Solution,
    Vector,
};
use crate::cascade::{auto_window, oracle_reproduces, CascadeError, OracleVerdict};
use crate::families::{ladders, rhs_vector, FamiliesError};
use crate::reproduction::{certify, condition_lhs, ReproductionError};
use crate::symbol::json::{check_grid, parse_offset, MaskFormatError};
use crate::symbol::{HermiteMask, MaskError, SymbolJet, UnitPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("malformed template document: {0}")]
    Json(String),
    #[error(transparent)]
    Format(#[from] MaskFormatError),
    #[error("entry ({row}, {col}) at offset {offset}: cannot parse {text:?}")]
    BadEntry {
        offset: i64,
        row: usize,
        col: usize,
        text: String,
    },
    #[error("unknown {0:?} is used but missing from the declared order")]
    Undeclared(String),
    #[error("declared unknown {0:?} does not appear in any entry")]
    Unused(String),
    #[error("unknown {0:?} is declared twice")]
    Duplicate(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error("binding for {0:?}, which is not an unknown of the template")]
    UnknownBinding(String),
    #[error("cannot bind {0:?}: the reproduction conditions already determine it")]
    PinnedBinding(String),
    #[error("cannot parse binding {0:?}; expected name=p/q")]
    BadBinding(String),
    #[error(transparent)]
    Families(#[from] FamiliesError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<AlgebraError> for ConstructError {
    fn from(e: AlgebraError) -> Self {
        ConstructError::Internal(e.to_string())
    }
}

impl From<ReproductionError> for ConstructError {
    fn from(e: ReproductionError) -> Self {
        ConstructError::Internal(e.to_string())
    }
}

impl From<CascadeError> for ConstructError {
    fn from(e: CascadeError) -> Self {
        ConstructError::Internal(e.to_string())
    }
}

/// `constant + Σ coeff·unknown`
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AffineEntry {
    pub constant: Rational,
    pub terms: BTreeMap<String, Rational>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl AffineEntry {
    pub fn parse(text: &str) -> Option<AffineEntry> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return None;
        }
        let mut pieces = Vec::new();
        let mut current = String::new();
        for c in compact.chars() {
            if (c == '+' || c == '-') && !current.is_empty() && current != "+" && current != "-" {
                pieces.push(std::mem::take(&mut current));
            }
            current.push(c);
        }
        pieces.push(current);

        let mut out = AffineEntry::default();
        for piece in pieces {
            let (negative, body) = match piece.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, piece.strip_prefix('+').unwrap_or(&piece)),
            };
            let (coeff, name) = match body.split_once('?') {
                Some((c, name)) => {
                    let c = c.strip_suffix('*').unwrap_or(c);
                    let coeff = if c.is_empty() {
                        Rational::one()
                    } else {
                        parse_rational(c).ok()?
                    };
                    if !valid_name(name) {
                        return None;
                    }
                    (coeff, Some(name))
                }
                None if body.is_empty() => return None,
                None => (parse_rational(body).ok()?, None),
            };
            let coeff = if negative { -coeff } else { coeff };
            match name {
                Some(n) => *out.terms.entry(n.to_string()).or_default() += coeff,
                None => out.constant += coeff,
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        Some(out)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TemplateDoc {
    d: usize,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    unknowns: Option<Vec<String>>,
    matrices: BTreeMap<String, Vec<Vec<String>>>,
}

/// A mask whose entries are affine in named unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaskTemplate {
    d: usize,
    name: Option<String>,
    names: Vec<String>,
    entries: BTreeMap<i64, Vec<Vec<AffineEntry>>>,
}

impl MaskTemplate {
    pub fn load(bytes: &[u8]) -> Result<MaskTemplate, TemplateError> {
        let doc: TemplateDoc =
            serde_json::from_slice(bytes).map_err(|e| TemplateError::Json(e.to_string()))?;
        if doc.d != 2 && doc.d != 3 {
            return Err(MaskFormatError::UnsupportedOrder(doc.d).into());
        }
        let mut entries = BTreeMap::new();
        let mut seen: Vec<String> = Vec::new();
        for (key, rows) in &doc.matrices {
            let offset = parse_offset(key)?;
            check_grid(offset, rows, doc.d)?;
            let mut parsed = Vec::with_capacity(doc.d);
            for (r, row) in rows.iter().enumerate() {
                let mut out = Vec::with_capacity(doc.d);
                for (c, text) in row.iter().enumerate() {
                    let e = AffineEntry::parse(text).ok_or_else(|| TemplateError::BadEntry {
                        offset,
                        row: r,
                        col: c,
                        text: text.clone(),
                    })?;
                    for name in e.terms.keys() {
                        if !seen.contains(name) {
                            seen.push(name.clone());
                        }
                    }
                    out.push(e);
                }
                parsed.push(out);
            }
            entries.insert(offset, parsed);
        }
        let names = match doc.unknowns {
            None => seen,
            Some(declared) => {
                let mut set = BTreeSet::new();
                for n in &declared {
                    if !set.insert(n.clone()) {
                        return Err(TemplateError::Duplicate(n.clone()));
                    }
                }
                if let Some(n) = seen.iter().find(|n| !set.contains(*n)) {
                    return Err(TemplateError::Undeclared(n.clone()));
                }
                if let Some(n) = declared.iter().find(|n| !seen.contains(n)) {
                    return Err(TemplateError::Unused(n.clone()));
                }
                declared
            }
        };
        Ok(MaskTemplate {
            d: doc.d,
            name: doc.name,
            names,
            entries,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Unknowns in column order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn piece(&self, pick: impl Fn(&AffineEntry) -> Rational) -> HermiteMask {
        let matrices = self
            .entries
            .iter()
            .map(|(&l, rows)| {
                let rows = rows
                    .iter()
                    .map(|row| row.iter().map(&pick).collect())
                    .collect();
                (l, Matrix::from_rows(rows).expect("grid checked on load"))
            })
            .collect();
        HermiteMask::from_parts_unchecked(self.d, matrices)
    }

    /// Constant part and one coefficient mask per unknown.
    fn linear_pieces(&self) -> (HermiteMask, Vec<HermiteMask>) {
        let base = self.piece(|e| e.constant.clone());
        let parts = self
            .names
            .iter()
            .map(|n| self.piece(|e| e.terms.get(n).cloned().unwrap_or_default()))
            .collect();
        (base, parts)
    }

    /// Substitutes `values` (in column order).
    pub fn instantiate(&self, values: &[Rational]) -> Result<HermiteMask, MaskError> {
        let lookup: BTreeMap<&str, &Rational> =
            self.names.iter().map(String::as_str).zip(values).collect();
        let m = self.piece(|e| {
            let mut v = e.constant.clone();
            for (n, c) in &e.terms {
                if let Some(x) = lookup.get(n.as_str()) {
                    v += c * *x;
                }
            }
            v
        });
        let mut mask = HermiteMask::new(self.d, m.matrices().clone())?;
        if let Some(name) = &self.name {
            mask = mask.with_name(name.clone());
        }
        Ok(mask)
    }
}

pub fn merrien_template() -> MaskTemplate {
    MaskTemplate::load(include_bytes!("../templates/merrien.json")).expect("bundled template")
}

pub fn extended_template() -> MaskTemplate {
    MaskTemplate::load(include_bytes!("../templates/extended.json")).expect("bundled template")
}

pub fn primal3_template() -> MaskTemplate {
    MaskTemplate::load(include_bytes!("../templates/primal3.json")).expect("bundled template")
}

/// `matrix · x = rhs` over the template unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub names: Vec<String>,
    pub rows: Vec<Vector>,
    pub rhs: Vector,
    /// e.g. `k=2 z=+1 component 1`, or `bind b2`.
    pub labels: Vec<String>,
}

impl LinearSystem {
    pub fn matrix(&self) -> Matrix {
        let data = self.rows.iter().flatten().cloned().collect();
        Matrix::new(self.rows.len(), self.names.len(), data).expect("rows have one entry per name")
    }
}

fn z_label(z: UnitPoint) -> &'static str {
    match z {
        UnitPoint::Minus => "-1",
        UnitPoint::Plus => "+1",
    }
}

/// Rows: constants at `z = −1` then `+1`, then `k = 1..=m`, each with
/// `z = −1` before `z = +1` and components ascending.
pub fn build_system(
    template: &MaskTemplate,
    tau: &Rational,
    m: usize,
) -> Result<LinearSystem, ConstructError> {
    let d = template.d;
    let lad = ladders(m.max(1));
    let (base, parts) = template.linear_pieces();
    let base_jet = SymbolJet::new(&base, m);
    let part_jets: Vec<SymbolJet> = parts.iter().map(|p| SymbolJet::new(p, m)).collect();

    let mut sys = LinearSystem {
        names: template.names.clone(),
        rows: Vec::new(),
        rhs: Vec::new(),
        labels: Vec::new(),
    };
    let mut push_block = |label: String, lhs: &dyn Fn(&SymbolJet) -> Vector, target: Vector| {
        let constant = lhs(&base_jet);
        let cols: Vec<Vector> = part_jets.iter().map(lhs).collect();
        for c in 0..d {
            sys.rows.push(cols.iter().map(|v| v[c].clone()).collect());
            sys.rhs.push(&target[c] - &constant[c]);
            sys.labels.push(format!("{label} component {}", c + 1));
        }
    };
    let mut two_e1 = vec![Rational::zero(); d];
    two_e1[0] = int(2);
    for (z, target) in [
        (UnitPoint::Minus, vec![Rational::zero(); d]),
        (UnitPoint::Plus, two_e1),
    ] {
        push_block(
            format!("constants z={}", z_label(z)),
            &|jet: &SymbolJet| jet.get(0, z).column(0),
            target,
        );
    }
    for k in 1..=m {
        let rhs = rhs_vector(d, k, tau)?;
        for (z, target) in [
            (UnitPoint::Minus, vec![Rational::zero(); d]),
            (UnitPoint::Plus, rhs.entries.clone()),
        ] {
            push_block(
                format!("k={k} z={}", z_label(z)),
                &|jet: &SymbolJet| condition_lhs(jet, d, k, z, &lad),
                target,
            );
        }
    }
    Ok(sys)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructionStatus {
    Solved,
    Parametric,
    Infeasible { row: usize, label: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionResult {
    pub status: ConstructionStatus,
    /// Present unless infeasible; free unknowns are set to zero.
    pub mask: Option<HermiteMask>,
    /// `(name, value)` in column order, unless infeasible.
    pub values: Vec<(String, Rational)>,
    pub free_names: Vec<String>,
    /// Dimension of the solution set before bindings.
    pub family_dimension: usize,
    /// Names that stay undetermined by the conditions alone.
    pub unpinned: Vec<String>,
    pub constraints_used: usize,
    pub certified_degree: Option<usize>,
}

impl ConstructionResult {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.status {
            ConstructionStatus::Solved => out.push_str("status: solved\n"),
            ConstructionStatus::Parametric => out.push_str("status: parametric\n"),
            ConstructionStatus::Infeasible { row, label } => {
                out.push_str(&format!("status: infeasible (row {row}: {label})\n"));
            }
        }
        out.push_str(&format!(
            "constraints: {}\nsolution dimension: {}\n",
            self.constraints_used, self.family_dimension
        ));
        if !self.free_names.is_empty() {
            out.push_str(&format!(
                "free (set to 0): {}\n",
                self.free_names.join(", ")
            ));
        }
        for (n, v) in &self.values {
            out.push_str(&format!("{n} = {}\n", fmt_rational(v)));
        }
        if let Some(deg) = self.certified_degree {
            out.push_str(&format!("certified degree: {deg}\n"));
        }
        out
    }
}

/// Parses `name=p/q`.
pub fn parse_binding(text: &str) -> Result<(String, Rational), ConstructError> {
    let bad = || ConstructError::BadBinding(text.to_string());
    let (name, value) = text.split_once('=').ok_or_else(bad)?;
    let value = parse_rational(value.trim()).map_err(|_| bad())?;
    Ok((name.trim().to_string(), value))
}

fn solve(sys: &LinearSystem) -> Result<Solution, ConstructError> {
    if sys.names.is_empty() {
        return Ok(match sys.rhs.iter().position(|v| !v.is_zero()) {
            Some(row) => Solution::Infeasible { row },
            None => Solution::Unique(Vec::new()),
        });
    }
    if sys.rows.is_empty() {
        let n = sys.names.len();
        let nullspace = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { int(1) } else { int(0) })
                    .collect()
            })
            .collect();
        return Ok(Solution::Parametric {
            particular: vec![Rational::zero(); n],
            nullspace,
            free_columns: (0..n).collect(),
        });
    }
    Ok(solve_linear(&sys.matrix(), &sys.rhs)?)
}

/// Solves the degree-`m` system, applies `bindings` as extra equations and
/// verifies the result with both the certificate and the cascade oracle.
///
/// A binding may only name an unknown the conditions leave undetermined.
/// A verification failure is returned as [`ConstructError::Internal`].
pub fn construct(
    template: &MaskTemplate,
    tau: &Rational,
    m: usize,
    bindings: &[(String, Rational)],
) -> Result<ConstructionResult, ConstructError> {
    let mut sys = build_system(template, tau, m)?;
    let constraints_used = sys.rows.len();
    let n = sys.names.len();

    let (family_dimension, unpinned) = match solve(&sys)? {
        Solution::Infeasible { row } => {
            return Ok(ConstructionResult {
                status: ConstructionStatus::Infeasible {
                    row,
                    label: sys.labels[row].clone(),
                },
                mask: None,
                values: Vec::new(),
                free_names: Vec::new(),
                family_dimension: 0,
                unpinned: Vec::new(),
                constraints_used,
                certified_degree: None,
            });
        }
        Solution::Unique(_) => (0, Vec::new()),
        Solution::Parametric { nullspace, .. } => {
            let unpinned = (0..n)
                .filter(|&c| nullspace.iter().any(|v| !v[c].is_zero()))
                .map(|c| sys.names[c].clone())
                .collect();
            (nullspace.len(), unpinned)
        }
    };

    for (name, value) in bindings {
        let col = sys
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| ConstructError::UnknownBinding(name.clone()))?;
        if !unpinned.contains(name) {
            return Err(ConstructError::PinnedBinding(name.clone()));
        }
        let mut row = vec![Rational::zero(); n];
        row[col] = int(1);
        sys.rows.push(row);
        sys.rhs.push(value.clone());
        sys.labels.push(format!("bind {name}"));
    }

    let (status, values, free_names) = match solve(&sys)? {
        Solution::Unique(x) => (ConstructionStatus::Solved, x, Vec::new()),
        Solution::Parametric {
            particular,
            free_columns,
            ..
        } => (
            ConstructionStatus::Parametric,
            particular,
            free_columns.iter().map(|&c| sys.names[c].clone()).collect(),
        ),
        Solution::Infeasible { row } => {
            // contradictory bindings on dependent unknowns
            return Ok(ConstructionResult {
                status: ConstructionStatus::Infeasible {
                    row,
                    label: sys.labels[row].clone(),
                },
                mask: None,
                values: Vec::new(),
                free_names: Vec::new(),
                family_dimension,
                unpinned,
                constraints_used,
                certified_degree: None,
            });
        }
    };

    let mask = template
        .instantiate(&values)
        .map_err(|e| ConstructError::Internal(format!("solved mask is invalid: {e}")))?
        .with_tau_hint(tau.clone());
    let report = certify(&mask, Some(tau), m.max(1))?;
    if !report.reproduces(m) {
        return Err(ConstructError::Internal(format!(
            "solved mask certifies only {:?}, expected {m}",
            report.certified_degree
        )));
    }
    let (lo, hi) = auto_window(&mask, 2);
    if let OracleVerdict::Fail {
        degree,
        level,
        index,
        ..
    } = oracle_reproduces(&mask, tau, m, 2, lo, hi)?
    {
        return Err(ConstructError::Internal(format!(
            "cascade rejects the solved mask: degree {degree}, level {level}, index {index}"
        )));
    }

    Ok(ConstructionResult {
        status,
        mask: Some(mask),
        values: sys.names.iter().cloned().zip(values).collect(),
        free_names,
        family_dimension,
        unpinned,
        constraints_used,
        certified_degree: report.certified_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::catalog;

    fn r(p: i64, q: i64) -> Rational {
        rat(p, q).unwrap()
    }

    #[test]
    fn entry_grammar() {
        let e = AffineEntry::parse("?a").unwrap();
        assert_eq!(e.terms["a"], int(1));
        let e = AffineEntry::parse("-?a").unwrap();
        assert_eq!(e.terms["a"], int(-1));
        let e = AffineEntry::parse("-1/2 + 1/2?mu").unwrap();
        assert_eq!(
            (e.constant.clone(), e.terms["mu"].clone()),
            (r(-1, 2), r(1, 2))
        );
        let e = AffineEntry::parse("3/4").unwrap();
        assert!(e.terms.is_empty());
        let e = AffineEntry::parse("?x - ?x").unwrap();
        assert!(e.terms.is_empty());
        assert_eq!(AffineEntry::parse("2*?b").unwrap().terms["b"], int(2));
        for bad in ["", "?", "?1a", "1/0", "abc", "1/2?", "+"] {
            assert!(AffineEntry::parse(bad).is_none(), "{bad}");
        }
    }

    #[test]
    fn template_name_checks() {
        let doc = r#"{"d": 2, "unknowns": ["a"], "matrices": {"0": [["?a","?b"],["0","1"]]}}"#;
        assert_eq!(
            MaskTemplate::load(doc.as_bytes()),
            Err(TemplateError::Undeclared("b".into()))
        );
        let doc = r#"{"d": 2, "unknowns": ["a", "c"], "matrices": {"0": [["?a","0"],["0","1"]]}}"#;
        assert_eq!(
            MaskTemplate::load(doc.as_bytes()),
            Err(TemplateError::Unused("c".into()))
        );
        let doc = r#"{"d": 2, "matrices": {"0": [["?z","?a"],["0","?z"]]}}"#;
        assert_eq!(
            MaskTemplate::load(doc.as_bytes()).unwrap().names(),
            ["z", "a"]
        );
    }

    #[test]
    fn instantiate_matches_catalog() {
        let t = merrien_template();
        let m = t.instantiate(&[r(1, 7), r(2, 5)]).unwrap();
        assert_eq!(
            m.matrices(),
            catalog::merrien(&r(1, 7), &r(2, 5)).matrices()
        );
        let c = catalog::extended_coefficients(&r(2, 3), &r(-1, 5));
        let [a1, a2, a3, a4] = c.a.clone();
        let [b1, b2, b3, b4] = c.b.clone();
        let m = extended_template()
            .instantiate(&[a1, a2, a3, a4, b1, b4, b2, b3])
            .unwrap();
        assert_eq!(m.matrices(), catalog::extended_from(&c).matrices());
    }

    #[test]
    fn system_is_affine_in_unknowns() {
        // residuals of an instance equal A·x − b of the assembled system
        let t = merrien_template();
        let sys = build_system(&t, &int(0), 3).unwrap();
        let x = vec![r(3, 11), r(-2, 7)];
        let mask = t.instantiate(&x).unwrap();
        let rep = certify(&mask, Some(&int(0)), 3).unwrap();
        let mut expected = Vec::new();
        expected.extend(rep.constants.residual_minus.clone());
        expected.extend(rep.constants.residual_plus.clone());
        for res in &rep.residuals {
            expected.extend(res.minus.clone());
            expected.extend(res.plus.clone());
        }
        let got: Vec<Rational> = sys
            .rows
            .iter()
            .zip(&sys.rhs)
            .map(|(row, b)| row.iter().zip(&x).map(|(a, v)| a * v).sum::<Rational>() - b)
            .collect();
        assert_eq!(got, expected);
        assert_eq!(sys.labels[4], "k=1 z=-1 component 1");
    }

    #[test]
    fn merrien_constructions() {
        let t = merrien_template();
        let res = construct(&t, &int(0), 1, &[]).unwrap();
        assert_eq!(res.status, ConstructionStatus::Parametric);
        assert_eq!(res.family_dimension, 2);
        let res = construct(&t, &int(0), 2, &[]).unwrap();
        assert_eq!(res.family_dimension, 1);
        assert_eq!(res.values[0], ("lambda".to_string(), r(-1, 8)));
        assert_eq!(res.free_names, ["mu"]);
        let res = construct(&t, &int(0), 3, &[]).unwrap();
        assert_eq!(res.status, ConstructionStatus::Solved);
        assert_eq!(res.values[1].1, r(-1, 2));
        assert_eq!(res.certified_degree, Some(3));
        let res = construct(&t, &int(0), 4, &[]).unwrap();
        assert!(matches!(res.status, ConstructionStatus::Infeasible { .. }));
    }

    #[test]
    fn extended_construction() {
        let t = extended_template();
        let res = construct(&t, &int(0), 5, &[]).unwrap();
        assert_eq!(res.family_dimension, 2);
        assert_eq!(res.free_names, ["b2", "b3"]);
        let bind = [("b2".to_string(), r(1, 384)), ("b3".to_string(), int(0))];
        let res = construct(&t, &int(0), 5, &bind).unwrap();
        assert_eq!(res.status, ConstructionStatus::Solved);
        let mask = res.mask.unwrap();
        assert_eq!(
            mask.matrices(),
            catalog::extended(&r(1, 384), &int(0)).matrices()
        );
        assert!(res.certified_degree.unwrap() >= 5);
    }

    #[test]
    fn primal3_construction() {
        let res = construct(&primal3_template(), &int(0), 3, &[]).unwrap();
        assert_eq!(res.status, ConstructionStatus::Parametric);
        assert_eq!(res.free_names, ["mu1", "eps2", "lambda2"]);
        let val = |n: &str| res.values.iter().find(|(k, _)| k == n).unwrap().1.clone();
        // free names are zero, so the dependents follow the constraint formulas
        assert_eq!(val("lambda1"), r(1, 2));
        assert_eq!(val("mu2"), r(1, 2));
        assert_eq!(val("mu3"), r(-1, 8));
        assert_eq!(val("eps3"), r(1, 2));
        assert_eq!(val("lambda3"), r(-1, 16));
    }

    #[test]
    fn binding_rules() {
        let t = merrien_template();
        let err = construct(&t, &int(0), 2, &[("lambda".into(), int(1))]).unwrap_err();
        assert_eq!(err, ConstructError::PinnedBinding("lambda".into()));
        let err = construct(&t, &int(0), 2, &[("nu".into(), int(1))]).unwrap_err();
        assert_eq!(err, ConstructError::UnknownBinding("nu".into()));
        let res = construct(&t, &int(0), 2, &[("mu".into(), r(2, 5))]).unwrap();
        assert_eq!(res.status, ConstructionStatus::Solved);
        assert_eq!(
            parse_binding("b2 = 1/384").unwrap(),
            ("b2".into(), r(1, 384))
        );
        assert!(parse_binding("b2").is_err());
    }
}
