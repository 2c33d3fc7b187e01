//! Built-in parametric scheme families.
//!
//! * `merrien(λ, μ)`: interpolatory two-point Hermite scheme, d = 2, support [−1, 1].
//! * `derham(λ, μ)`: its de Rham transform, a dual scheme (τ = −1/2), support [−2, 1].
//! * `extended(b₂, b₃)`: interpolatory d = 2 scheme on [−3, 3] solved for
//!   reproduction of degree 5, with `b₂, b₃` the free parameters.
//! * `primal3(...)`: interpolatory d = 3 scheme on [−1, 1] with nine parameters.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::{fmt_rational, int, parse_rational, rat, Matrix, Rational};
use crate::symbol::HermiteMask;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown scheme family {0:?} (expected merrien, derham, extended or primal3)")]
    UnknownFamily(String),
    #[error("family {family} has no parameter {name:?}; known: {known}")]
    UnknownParam {
        family: SchemeFamily,
        name: String,
        known: String,
    },
    #[error("cannot parse parameter assignment {0:?}; expected name=p/q")]
    BadAssignment(String),
}

fn r(p: i64, q: i64) -> Rational {
    rat(p, q).expect("nonzero literal denominator")
}

fn mat(rows: Vec<Vec<Rational>>) -> Matrix {
    Matrix::from_rows(rows).expect("literal rows are rectangular")
}

fn build(d: usize, parts: Vec<(i64, Matrix)>, name: &str, tau: Rational) -> HermiteMask {
    HermiteMask::new(d, parts)
        .expect("catalog masks are well formed")
        .with_name(name)
        .with_tau_hint(tau)
}

pub fn merrien(lambda: &Rational, mu: &Rational) -> HermiteMask {
    let half = r(1, 2);
    let quarter_mu = mu / int(4);
    let a_m1 = mat(vec![
        vec![half.clone(), lambda.clone()],
        vec![(int(1) - mu) / int(2), quarter_mu.clone()],
    ]);
    let a0 = Matrix::diag(vec![int(1), half.clone()]);
    let a1 = mat(vec![
        vec![half, -lambda.clone()],
        vec![(mu - int(1)) / int(2), quarter_mu],
    ]);
    build(2, vec![(-1, a_m1), (0, a0), (1, a1)], "merrien", int(0))
}

pub fn derham(lambda: &Rational, mu: &Rational) -> HermiteMask {
    let l = lambda;
    let one_m = int(1) - mu;
    let mu2 = mu * mu;
    let eighth = r(1, 8);
    let outer_00 = int(2) + int(4) * l * &one_m;
    let inner_00 = int(6) - int(4) * l * &one_m;
    let row1_0 = int(4) - int(2) * mu - int(2) * &mu2;
    let outer_11 = &mu2 + int(8) * l * &one_m;
    let inner_11 = &mu2 - int(8) * l * &one_m + int(2) * mu;
    let a_m2 = mat(vec![
        vec![outer_00.clone(), int(4) * l + int(2) * l * mu],
        vec![row1_0.clone(), outer_11.clone()],
    ]);
    let a_m1 = mat(vec![
        vec![inner_00.clone(), int(8) * l - int(2) * l * mu],
        vec![row1_0.clone(), inner_11.clone()],
    ]);
    let a0 = mat(vec![
        vec![inner_00, int(-8) * l + int(2) * l * mu],
        vec![-row1_0.clone(), inner_11],
    ]);
    let a1 = mat(vec![
        vec![outer_00, int(-4) * l - int(2) * l * mu],
        vec![-row1_0, outer_11],
    ]);
    build(
        2,
        vec![
            (-2, a_m2.scale(&eighth)),
            (-1, a_m1.scale(&eighth)),
            (0, a0.scale(&eighth)),
            (1, a1.scale(&eighth)),
        ],
        "derham",
        r(-1, 2),
    )
}

/// Entries `a₁..a₄`, `b₁..b₄` of the extended scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedCoefficients {
    pub a: [Rational; 4],
    pub b: [Rational; 4],
}

/// Applies the degree-5 relations in order: b₁, b₄, a₁, a₃, a₄, a₂.
pub fn extended_coefficients(b2: &Rational, b3: &Rational) -> ExtendedCoefficients {
    let b1 = r(1, 128) - int(3) * b2;
    let b4 = r(1, 1408) - r(384, 1408) * b3;
    let a1 = r(1, 2) - &b1;
    let a3 = int(24) * &b4 + int(9) * b3 + r(3, 4);
    let a4 = r(1, 4) - &b4 - &a3 / int(2) - r(3, 2) * b3;
    let a2 = r(-1, 8) - int(3) * b2 - int(2) * &b1;
    ExtendedCoefficients {
        a: [a1, a2, a3, a4],
        b: [b1, b2.clone(), b3.clone(), b4],
    }
}

/// Assembles the extended mask from its eight entries.
pub fn extended_from(c: &ExtendedCoefficients) -> HermiteMask {
    let [a1, a2, a3, a4] = c.a.clone();
    let [b1, b2, b3, b4] = c.b.clone();
    let parts = vec![
        (
            -3,
            mat(vec![
                vec![b1.clone(), b2.clone()],
                vec![b3.clone(), b4.clone()],
            ]),
        ),
        (
            -1,
            mat(vec![
                vec![a1.clone(), a2.clone()],
                vec![a3.clone(), a4.clone()],
            ]),
        ),
        (0, Matrix::diag(vec![int(1), r(1, 2)])),
        (1, mat(vec![vec![a1, -a2], vec![-a3, a4.clone()]])),
        (3, mat(vec![vec![b1, -b2], vec![-b3, b4]])),
    ];
    build(2, parts, "extended", int(0))
}

pub fn extended(b2: &Rational, b3: &Rational) -> HermiteMask {
    extended_from(&extended_coefficients(b2, b3))
}

/// Rows `λ`, `μ`, `ε` of the d = 3 primal scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Primal3Params {
    pub lambda: [Rational; 3],
    pub mu: [Rational; 3],
    pub eps: [Rational; 3],
}

pub fn primal3(p: &Primal3Params) -> HermiteMask {
    let dscale = Matrix::diag(vec![int(1), r(1, 2), r(1, 4)]);
    let [l1, l2, l3] = p.lambda.clone();
    let [m1, m2, m3] = p.mu.clone();
    let [e1, e2, e3] = p.eps.clone();
    let left = mat(vec![
        vec![l1.clone(), l2.clone(), l3.clone()],
        vec![m1.clone(), m2.clone(), m3.clone()],
        vec![e1.clone(), e2.clone(), e3.clone()],
    ]);
    let right = mat(vec![
        vec![l1, -l2, l3],
        vec![-m1, m2, -m3],
        vec![e1, -e2, e3],
    ]);
    let parts = vec![
        (-1, dscale.mul(&left).unwrap()),
        (0, dscale.clone()),
        (1, dscale.mul(&right).unwrap()),
    ];
    build(3, parts, "primal3", int(0))
}

/// Which entry the cubic constraint on `μ₃` reads from. Only `FromMu1`
/// gives degree 3 for every `μ₁`; `FromMu2` agrees with it at `μ₁ = 1/3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mu3Rule {
    /// μ₃ = (2μ₁ − 3)/24
    FromMu1,
    /// μ₃ = (2μ₂ − 3)/24
    FromMu2,
}

/// Fills the six dependent parameters from the free triple `(μ₁, ε₂, λ₂)`.
pub fn cubic_constraints(mu1: &Rational, eps2: &Rational, lambda2: &Rational) -> Primal3Params {
    constrained_primal3(mu1, eps2, lambda2, Mu3Rule::FromMu1)
}

pub fn constrained_primal3(
    mu1: &Rational,
    eps2: &Rational,
    lambda2: &Rational,
    rule: Mu3Rule,
) -> Primal3Params {
    let mu2 = (int(1) - mu1) / int(2);
    let mu3_source = match rule {
        Mu3Rule::FromMu1 => mu1.clone(),
        Mu3Rule::FromMu2 => mu2.clone(),
    };
    let mu3 = (int(2) * mu3_source - int(3)) / int(24);
    Primal3Params {
        lambda: [
            r(1, 2),
            lambda2.clone(),
            (int(-1) - int(8) * lambda2) / int(16),
        ],
        mu: [mu1.clone(), mu2, mu3],
        eps: [int(0), eps2.clone(), (int(1) - eps2) / int(2)],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeFamily {
    Merrien,
    DeRham,
    Extended,
    Primal3,
}

impl SchemeFamily {
    pub const ALL: [SchemeFamily; 4] = [
        SchemeFamily::Merrien,
        SchemeFamily::DeRham,
        SchemeFamily::Extended,
        SchemeFamily::Primal3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeFamily::Merrien => "merrien",
            SchemeFamily::DeRham => "derham",
            SchemeFamily::Extended => "extended",
            SchemeFamily::Primal3 => "primal3",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            SchemeFamily::Merrien | SchemeFamily::DeRham => &["lambda", "mu"],
            SchemeFamily::Extended => &["b2", "b3"],
            SchemeFamily::Primal3 => &[
                "lambda1", "lambda2", "lambda3", "mu1", "mu2", "mu3", "eps1", "eps2", "eps3",
            ],
        }
    }
}

impl fmt::Display for SchemeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeFamily {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| CatalogError::UnknownFamily(s.to_string()))
    }
}

/// A family plus parameter overrides. Unset parameters take the family
/// defaults: λ = −1/8, μ = −1/2 for merrien/derham; b₂ = 1/384, b₃ = 0 for
/// extended; for primal3 the six dependent parameters follow from
/// `(mu1, eps2, lambda2) = (1/3, 1/5, 1/7)` unless overridden themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeSpec {
    pub family: SchemeFamily,
    pub params: BTreeMap<String, Rational>,
}

impl SchemeSpec {
    pub fn new(family: SchemeFamily) -> Self {
        SchemeSpec {
            family,
            params: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, name: &str, value: Rational) -> Result<&mut Self, CatalogError> {
        if !self.family.param_names().contains(&name) {
            return Err(CatalogError::UnknownParam {
                family: self.family,
                name: name.to_string(),
                known: self.family.param_names().join(", "),
            });
        }
        self.params.insert(name.to_string(), value);
        Ok(self)
    }

    /// Parses `name=p/q`.
    pub fn set_assignment(&mut self, assignment: &str) -> Result<&mut Self, CatalogError> {
        let bad = || CatalogError::BadAssignment(assignment.to_string());
        let (name, value) = assignment.split_once('=').ok_or_else(bad)?;
        let value = parse_rational(value).map_err(|_| bad())?;
        self.set(name.trim(), value)
    }

    fn get_or(&self, name: &str, default: Rational) -> Rational {
        self.params.get(name).cloned().unwrap_or(default)
    }

    pub fn build(&self) -> HermiteMask {
        match self.family {
            SchemeFamily::Merrien => merrien(
                &self.get_or("lambda", r(-1, 8)),
                &self.get_or("mu", r(-1, 2)),
            ),
            SchemeFamily::DeRham => derham(
                &self.get_or("lambda", r(-1, 8)),
                &self.get_or("mu", r(-1, 2)),
            ),
            SchemeFamily::Extended => {
                extended(&self.get_or("b2", r(1, 384)), &self.get_or("b3", int(0)))
            }
            SchemeFamily::Primal3 => {
                let base = cubic_constraints(
                    &self.get_or("mu1", r(1, 3)),
                    &self.get_or("eps2", r(1, 5)),
                    &self.get_or("lambda2", r(1, 7)),
                );
                let pick = |name: &str, v: &Rational| self.get_or(name, v.clone());
                let p = Primal3Params {
                    lambda: [
                        pick("lambda1", &base.lambda[0]),
                        pick("lambda2", &base.lambda[1]),
                        pick("lambda3", &base.lambda[2]),
                    ],
                    mu: [
                        pick("mu1", &base.mu[0]),
                        pick("mu2", &base.mu[1]),
                        pick("mu3", &base.mu[2]),
                    ],
                    eps: [
                        pick("eps1", &base.eps[0]),
                        pick("eps2", &base.eps[1]),
                        pick("eps3", &base.eps[2]),
                    ],
                };
                primal3(&p)
            }
        }
    }

    /// Human-readable parameter list, e.g. `lambda=-1/8, mu=-1/2`.
    pub fn describe(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={}", fmt_rational(v)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// A fixed set of instances covering every family, used for identity checks.
pub fn reference_instances() -> Vec<HermiteMask> {
    vec![
        merrien(&r(1, 7), &r(2, 5)),
        merrien(&r(-1, 8), &r(2, 5)),
        merrien(&r(-1, 8), &r(-1, 2)),
        derham(&r(1, 7), &r(2, 5)),
        derham(&r(-1, 8), &r(2, 5)),
        derham(&r(-1, 8), &r(-1, 2)),
        extended(&r(1, 384), &int(0)),
        extended(&r(-2, 5), &r(3, 7)),
        primal3(&cubic_constraints(&r(1, 3), &r(1, 5), &r(1, 7))),
        primal3(&cubic_constraints(&r(2, 9), &r(-3, 4), &r(5, 11))),
    ]
}
