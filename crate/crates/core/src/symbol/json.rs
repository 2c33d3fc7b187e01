//! Mask file format.
//!
//! ```json
//! {
//!   "d": 2,
//!   "name": "merrien",
//!   "tau": "0",
//!   "matrices": {
//!     "-1": [["1/2", "-1/8"], ["3/4", "-1/8"]],
//!     "0": [["1", "0"], ["0", "1/2"]],
//!     "1": [["1/2", "1/8"], ["-3/4", "-1/8"]]
//!   }
//! }
//! ```
//!
//! Entries are `"p/q"` or `"p"` strings, keys are decimal offsets, `name`
//! and `tau` are optional and unknown fields are rejected. `save_mask`
//! writes exactly this layout, so loading and saving a canonical file is the
//! identity on bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use super::{HermiteMask, MaskError};
use crate::algebra::{fmt_rational, parse_rational, Matrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MaskFormatError {
    #[error("malformed mask document: {0}")]
    Json(String),
    #[error("unsupported order d = {0}; expected 2 or 3")]
    UnsupportedOrder(usize),
    #[error("offset key {0:?} is not a decimal integer")]
    BadOffset(String),
    #[error("matrix at offset {offset} is not square ({detail})")]
    NotSquare { offset: i64, detail: String },
    #[error("matrix at offset {offset} is {n}x{n}, expected {d}x{d}")]
    WrongOrder { offset: i64, n: usize, d: usize },
    #[error("entry ({row}, {col}) at offset {offset}: cannot parse rational {text:?}")]
    BadEntry {
        offset: i64,
        row: usize,
        col: usize,
        text: String,
    },
    #[error("cannot parse tau {0:?}")]
    BadTau(String),
    #[error("mask has no nonzero matrix")]
    AllZero,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MaskDoc {
    d: usize,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    tau: Option<String>,
    matrices: BTreeMap<String, Vec<Vec<String>>>,
}

pub(crate) fn parse_offset(key: &str) -> Result<i64, MaskFormatError> {
    key.trim()
        .parse::<i64>()
        .map_err(|_| MaskFormatError::BadOffset(key.to_string()))
}

/// Checks that `rows` is a d×d grid and returns it, reporting `offset`.
pub(crate) fn check_grid<T>(offset: i64, rows: &[Vec<T>], d: usize) -> Result<(), MaskFormatError> {
    let n = rows.len();
    if let Some(bad) = rows.iter().position(|r| r.len() != n) {
        return Err(MaskFormatError::NotSquare {
            offset,
            detail: format!("{n} rows but row {bad} has {} entries", rows[bad].len()),
        });
    }
    if n != d {
        return Err(MaskFormatError::WrongOrder { offset, n, d });
    }
    Ok(())
}

pub fn load_mask(bytes: &[u8]) -> Result<HermiteMask, MaskFormatError> {
    let doc: MaskDoc =
        serde_json::from_slice(bytes).map_err(|e| MaskFormatError::Json(e.to_string()))?;
    if doc.d != 2 && doc.d != 3 {
        return Err(MaskFormatError::UnsupportedOrder(doc.d));
    }
    let mut matrices = BTreeMap::new();
    for (key, rows) in &doc.matrices {
        let offset = parse_offset(key)?;
        check_grid(offset, rows, doc.d)?;
        let mut parsed = Vec::with_capacity(doc.d);
        for (r, row) in rows.iter().enumerate() {
            let mut out = Vec::with_capacity(doc.d);
            for (c, text) in row.iter().enumerate() {
                let v = parse_rational(text).map_err(|_| MaskFormatError::BadEntry {
                    offset,
                    row: r,
                    col: c,
                    text: text.clone(),
                })?;
                out.push(v);
            }
            parsed.push(out);
        }
        let m = Matrix::from_rows(parsed).expect("grid checked");
        matrices.insert(offset, m);
    }
    let tau: Option<Rational> = doc
        .tau
        .as_deref()
        .map(|t| parse_rational(t).map_err(|_| MaskFormatError::BadTau(t.to_string())))
        .transpose()?;
    let mut mask = HermiteMask::new(doc.d, matrices).map_err(|e| match e {
        MaskError::UnsupportedOrder(d) => MaskFormatError::UnsupportedOrder(d),
        MaskError::AllZero => MaskFormatError::AllZero,
        MaskError::WrongShape {
            offset, rows, d, ..
        } => MaskFormatError::WrongOrder { offset, n: rows, d },
    })?;
    if let Some(name) = doc.name {
        mask = mask.with_name(name);
    }
    if let Some(tau) = tau {
        mask = mask.with_tau_hint(tau);
    }
    Ok(mask)
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// Canonical layout: one line per offset, offsets ascending.
pub fn save_mask(mask: &HermiteMask) -> Vec<u8> {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"d\": {},", mask.d());
    if let Some(name) = mask.name() {
        let _ = writeln!(out, "  \"name\": {},", json_str(name));
    }
    if let Some(tau) = mask.tau_hint() {
        let _ = writeln!(out, "  \"tau\": {},", json_str(&fmt_rational(tau)));
    }
    out.push_str("  \"matrices\": {\n");
    let n = mask.matrices().len();
    for (i, (l, m)) in mask.matrices().iter().enumerate() {
        let rows: Vec<String> = m
            .to_rows()
            .iter()
            .map(|row| {
                let cells: Vec<String> = row.iter().map(|v| json_str(&fmt_rational(v))).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        let sep = if i + 1 < n { "," } else { "" };
        let _ = writeln!(out, "    \"{l}\": [{}]{sep}", rows.join(", "));
    }
    out.push_str("  }\n}\n");
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};
    use crate::catalog;

    const MERRIEN: &str = r#"{
  "d": 2,
  "name": "merrien",
  "tau": "0",
  "matrices": {
    "-1": [["1/2", "-1/8"], ["3/4", "-1/8"]],
    "0": [["1", "0"], ["0", "1/2"]],
    "1": [["1/2", "1/8"], ["-3/4", "-1/8"]]
  }
}
"#;

    #[test]
    fn canonical_document_round_trips() {
        let mask = load_mask(MERRIEN.as_bytes()).unwrap();
        assert_eq!((mask.lo(), mask.hi()), (-1, 1));
        assert_eq!(mask.name(), Some("merrien"));
        assert_eq!(mask.tau_hint(), Some(&int(0)));
        assert_eq!(String::from_utf8(save_mask(&mask)).unwrap(), MERRIEN);
        let cat = catalog::merrien(&rat(-1, 8).unwrap(), &rat(-1, 2).unwrap());
        assert_eq!(mask.matrices(), cat.matrices());
    }

    #[test]
    fn zero_denominator_names_offset() {
        let doc = MERRIEN.replace("\"3/4\"", "\"1/0\"");
        let err = load_mask(doc.as_bytes()).unwrap_err();
        assert_eq!(
            err,
            MaskFormatError::BadEntry {
                offset: -1,
                row: 1,
                col: 0,
                text: "1/0".into()
            }
        );
        assert!(err.to_string().contains("offset -1"));
    }

    #[test]
    fn gaps_are_zero_matrices() {
        let doc =
            r#"{"d": 2, "matrices": {"-1": [["1","0"],["0","0"]], "1": [["1","0"],["0","0"]]}}"#;
        let mask = load_mask(doc.as_bytes()).unwrap();
        assert_eq!((mask.lo(), mask.hi()), (-1, 1));
        assert!(mask.matrix(0).is_none());
        assert!(mask.matrix_or_zero(0).is_zero());
    }

    #[test]
    fn malformed_inputs_have_distinct_errors() {
        type Check = fn(&MaskFormatError) -> bool;
        let cases: Vec<(&str, Check)> = vec![
            ("{not json", |e| matches!(e, MaskFormatError::Json(_))),
            (r#"{"d": 2, "matrices": {}, "extra": 1}"#, |e| {
                matches!(e, MaskFormatError::Json(_))
            }),
            (r#"{"d": 4, "matrices": {"0": [["1"]]}}"#, |e| {
                matches!(e, MaskFormatError::UnsupportedOrder(4))
            }),
            (
                r#"{"d": 2, "matrices": {"x": [["1","0"],["0","1"]]}}"#,
                |e| matches!(e, MaskFormatError::BadOffset(_)),
            ),
            (r#"{"d": 2, "matrices": {"2": [["1","0"],["0"]]}}"#, |e| {
                matches!(e, MaskFormatError::NotSquare { offset: 2, .. })
            }),
            (r#"{"d": 2, "matrices": {"5": [["1"]]}}"#, |e| {
                matches!(
                    e,
                    MaskFormatError::WrongOrder {
                        offset: 5,
                        n: 1,
                        d: 2
                    }
                )
            }),
            (
                r#"{"d": 2, "tau": "half", "matrices": {"0": [["1","0"],["0","1"]]}}"#,
                |e| matches!(e, MaskFormatError::BadTau(_)),
            ),
            (
                r#"{"d": 2, "matrices": {"0": [["0","0"],["0","0"]]}}"#,
                |e| matches!(e, MaskFormatError::AllZero),
            ),
        ];
        for (doc, check) in cases {
            let err = load_mask(doc.as_bytes()).unwrap_err();
            assert!(check(&err), "{doc}: unexpected {err:?}");
        }
    }
}
