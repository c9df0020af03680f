//! Quadratic extensions `K = C(s)[t]/(t^2 - f(s))` of a module's base field.
//!
//! The structure on `K` is fixed by `T(x) = Y(t, x)`, the root of
//! `Z^2 - f(S(x))` lifted from `sqrt(f(S^[0](x)))`. Whether the structure is
//! twisted by `sigma: t -> -t` is read off the parity of the valuation of
//! `f(S^[0])`, and cross-checked against a closed-form predicate per case.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lift::{lift_root, LiftProblem};
use crate::modbuild::{CaseL, ModuleData};
use crate::numeric::{squarefree_check, Poly};
use crate::series::{poly_at_series, MatrixSeries, ScalarSeries, EXACT};
use crate::utmatrix::UTMatrix;

/// `t^2 = f(s)` with `f` square-free of degree at least 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct QuadExt {
    f: Poly,
}

impl QuadExt {
    pub fn new(f: Poly) -> Result<Self> {
        match f.degree() {
            None | Some(0) => Err(Error::InvalidInput(format!(
                "f = {} must have degree >= 1",
                f
            ))),
            _ if !squarefree_check(&f) => Err(Error::NotSquarefree(f.to_string())),
            _ => Ok(QuadExt { f }),
        }
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.f.degree().expect("nonconstant")
    }

    /// Set when `deg f < 3`, outside the hyperelliptic range.
    pub fn degree_relaxed(&self) -> bool {
        self.degree() < 3
    }
}

impl<'de> Deserialize<'de> for QuadExt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        QuadExt::new(Poly::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Twist {
    Id,
    Sigma,
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Twist::Id => "id",
            Twist::Sigma => "sigma",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistReport {
    pub g: Twist,
    /// `ld(f(S^[0]))`.
    pub valuation: i64,
    /// `"f0_zero"`, `"f_alpha_zero"` or `"deg_f_odd"`.
    pub predicate: String,
    pub predicate_holds: bool,
    pub degree_relaxed: bool,
}

/// `f(S^[0](x))` for the semisimple part of the module.
fn f_at_semisimple(ext: &QuadExt, m: &ModuleData) -> Result<ScalarSeries> {
    let s0 = m.semisimple()?;
    if s0.ram() != 1 {
        return Err(Error::InvalidInput(
            "base module must have integer exponents".into(),
        ));
    }
    let fs = poly_at_series(ext.f(), &s0);
    if fs.is_zero() {
        return Err(Error::PrecisionExhausted(format!(
            "f(S^[0]) vanishes modulo x^{}",
            fs.precision()
        )));
    }
    Ok(fs)
}

/// Valuation of `f(S^[0])` and the twist it implies.
pub fn valuation_twist(ext: &QuadExt, m: &ModuleData) -> Result<(i64, Twist)> {
    let valuation = f_at_semisimple(ext, m)?.ld_num().expect("nonzero");
    let g = if valuation.rem_euclid(2) == 1 {
        Twist::Sigma
    } else {
        Twist::Id
    };
    Ok((valuation, g))
}

/// Closed-form twist predicate for the module's case: its name and value.
pub fn twist_predicate(ext: &QuadExt, m: &ModuleData) -> (&'static str, bool) {
    let f = ext.f();
    match m.case {
        CaseL::One => ("f0_zero", f.coeff(0).is_zero()),
        CaseL::Zero => ("f_alpha_zero", f.eval(&m.alpha).is_zero()),
        CaseL::MinusOne => ("deg_f_odd", ext.degree() % 2 == 1),
    }
}

/// Decides whether `K` carries an untwisted or a `sigma`-twisted structure.
pub fn twist_classify(ext: &QuadExt, m: &ModuleData) -> Result<TwistReport> {
    let (valuation, g) = valuation_twist(ext, m)?;
    let (predicate, holds) = twist_predicate(ext, m);
    if holds != (g == Twist::Sigma) {
        return Err(Error::PredicateMismatch(format!(
            "case {}, f = {}: valuation {} gives {}, {} is {}",
            m.case,
            ext.f(),
            valuation,
            g,
            predicate,
            holds
        )));
    }
    Ok(TwistReport {
        g,
        valuation,
        predicate: predicate.to_string(),
        predicate_holds: holds,
        degree_relaxed: ext.degree_relaxed(),
    })
}

/// A module over `K`: the base module together with `T(x) = Y(t, x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistedStructure {
    pub base: ModuleData,
    pub f: QuadExt,
    pub g: Twist,
    pub ram: u32,
    #[serde(rename = "T")]
    pub t: MatrixSeries,
}

impl TwistedStructure {
    /// Shape checks for structures read from disk.
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.t.n() != self.base.n {
            return Err(Error::InvalidInput(format!(
                "T has dimension {}, base module has {}",
                self.t.n(),
                self.base.n
            )));
        }
        if !matches!(self.ram, 1 | 2) {
            return Err(Error::RamificationLimit(self.ram));
        }
        Ok(())
    }
}

/// Lifts `sqrt(f(S^[0]))` to `T` with `T^2 = f(S)`. `trunc` bounds the
/// exponent of the result; `None` keeps every determined term.
pub fn build_twisted_structure(
    ext: &QuadExt,
    m: &ModuleData,
    trunc: Option<i64>,
) -> Result<TwistedStructure> {
    let report = twist_classify(ext, m)?;
    let (t0, ramified) = f_at_semisimple(ext, m)?.sqrt()?;
    let n = m.n;
    let phat = vec![
        poly_at_series(ext.f(), &m.s).neg(),
        MatrixSeries::zero(n, 1, EXACT),
        MatrixSeries::constant(UTMatrix::identity(n)),
    ];
    let t = lift_root(&LiftProblem::new(phat, t0)?, trunc)?;
    debug_assert_eq!(ramified, report.g == Twist::Sigma);
    Ok(TwistedStructure {
        base: m.clone(),
        f: ext.clone(),
        g: report.g,
        ram: if ramified { 2 } else { 1 },
        t,
    })
}

/// The structure `Y o sigma`: `T -> -T`.
pub fn galois_conjugate(ts: &TwistedStructure) -> TwistedStructure {
    TwistedStructure {
        t: ts.t.neg(),
        ..ts.clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equivalence {
    Equal,
    Conjugate,
    Distinct,
}

/// Compares two structures over the same base module and extension.
pub fn structures_equivalent(a: &TwistedStructure, b: &TwistedStructure) -> Result<Equivalence> {
    if a.base != b.base || a.f != b.f {
        return Err(Error::Incompatible(
            "structures over different bases".into(),
        ));
    }
    Ok(if a.t.eq_to_precision(&b.t) {
        Equivalence::Equal
    } else if a.t.eq_to_precision(&b.t.neg()) {
        Equivalence::Conjugate
    } else {
        Equivalence::Distinct
    })
}
