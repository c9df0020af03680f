//! Finite-dimensional indecomposable modules for `D = (p/q) d/ds` on `C(s)`.
//!
//! A module is determined by `S(x) = Y_M(s, x)`, an upper-triangular matrix
//! series solving `q(S) S' = p(S)` whose coefficients commute. The diagonal
//! (semisimple) part of `S` has valuation `L` in `{1, 0, -1}`:
//!
//! | case | admissible iff                         | forced `lc(S^[0])`   |
//! |------|----------------------------------------|----------------------|
//! | 1    | `p(0) q(0) != 0`                       | `p(0)/q(0)`          |
//! | 0    | `alpha != 0`, `p(alpha) q(alpha) != 0` | `alpha` (free)       |
//! | -1   | `deg p = deg q + 2`                    | `-lc(q)/lc(p)`       |
//!
//! Case 1 is solved directly from `S_(0) = J_n`; the other two cases reduce
//! to it by `s -> s - alpha` and `s -> 1/s`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{poly_gcd, Poly, Scalar};
use crate::series::{MatrixSeries, ScalarSeries};
use crate::utmatrix::{check_dim, UTMatrix};

/// `D = (p(s)/q(s)) d/ds` with `p`, `q` nonzero and coprime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivationSpec {
    p: Poly,
    q: Poly,
}

impl DerivationSpec {
    pub fn new(p: Poly, q: Poly) -> Result<Self> {
        if p.is_zero() || q.is_zero() {
            return Err(Error::InvalidInput("p and q must be nonzero".into()));
        }
        let g = poly_gcd(&p, &q);
        if !g.is_constant() {
            return Err(Error::NotCoprime(g.to_string()));
        }
        Ok(DerivationSpec { p, q })
    }

    pub fn p(&self) -> &Poly {
        &self.p
    }

    pub fn q(&self) -> &Poly {
        &self.q
    }

    /// `D(u)` for a polynomial `u`, as the fraction `(p u', q)`.
    pub fn apply_poly(&self, u: &Poly) -> (Poly, Poly) {
        (self.p.mul(&u.derivative()), self.q.clone())
    }
}

impl<'de> Deserialize<'de> for DerivationSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            p: Poly,
            q: Poly,
        }
        let r = Raw::deserialize(d)?;
        DerivationSpec::new(r.p, r.q).map_err(serde::de::Error::custom)
    }
}

/// Valuation `L` of the semisimple part of `S(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum CaseL {
    One,
    Zero,
    MinusOne,
}

impl CaseL {
    pub const ALL: [CaseL; 3] = [CaseL::One, CaseL::Zero, CaseL::MinusOne];

    pub fn as_i8(self) -> i8 {
        match self {
            CaseL::One => 1,
            CaseL::Zero => 0,
            CaseL::MinusOne => -1,
        }
    }
}

impl TryFrom<i8> for CaseL {
    type Error = Error;
    fn try_from(v: i8) -> Result<Self> {
        match v {
            1 => Ok(CaseL::One),
            0 => Ok(CaseL::Zero),
            -1 => Ok(CaseL::MinusOne),
            other => Err(Error::InvalidInput(format!(
                "case must be 1, 0 or -1, got {}",
                other
            ))),
        }
    }
}

impl From<CaseL> for i8 {
    fn from(c: CaseL) -> i8 {
        c.as_i8()
    }
}

impl std::fmt::Display for CaseL {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_i8())
    }
}

/// Which leading data admit a module, for one derivation.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseReport {
    pub derivation: DerivationSpec,
    /// `Some(p(0)/q(0))` when case 1 is admissible.
    pub case1: Option<Scalar>,
    /// `Some(-lc(q)/lc(p))` when case -1 is admissible.
    pub case_minus1: Option<Scalar>,
}

impl CaseReport {
    /// Case 0 predicate: `alpha != 0` and `p(alpha) q(alpha) != 0`.
    pub fn case0_admissible(&self, alpha: &Scalar) -> bool {
        !alpha.is_zero()
            && !self.derivation.p.eval(alpha).is_zero()
            && !self.derivation.q.eval(alpha).is_zero()
    }

    pub fn admissible(&self, case: CaseL, alpha: &Scalar) -> bool {
        match case {
            CaseL::One => self.case1.as_ref() == Some(alpha),
            CaseL::Zero => self.case0_admissible(alpha),
            CaseL::MinusOne => self.case_minus1.as_ref() == Some(alpha),
        }
    }

    /// The forced leading coefficient, for the cases that have one.
    pub fn forced_alpha(&self, case: CaseL) -> Option<&Scalar> {
        match case {
            CaseL::One => self.case1.as_ref(),
            CaseL::Zero => None,
            CaseL::MinusOne => self.case_minus1.as_ref(),
        }
    }

    /// JSON summary; `alphas` are case-0 candidates to evaluate.
    pub fn to_json(&self, alphas: &[Scalar]) -> serde_json::Value {
        let forced = |a: &Option<Scalar>| match a {
            Some(a) => serde_json::json!({"admissible": true, "alpha": a.to_string()}),
            None => serde_json::json!({"admissible": false, "alpha": null}),
        };
        let evals: Vec<_> = alphas
            .iter()
            .map(|a| serde_json::json!({"alpha": a.to_string(), "admissible": self.case0_admissible(a)}))
            .collect();
        serde_json::json!({
            "p": self.derivation.p.to_string(),
            "q": self.derivation.q.to_string(),
            "case1": forced(&self.case1),
            "case0": {
                "predicate": "alpha != 0 and p(alpha)*q(alpha) != 0",
                "candidates": evals,
            },
            "case-1": forced(&self.case_minus1),
        })
    }
}

pub fn classify_cases(d: &DerivationSpec) -> CaseReport {
    let p0 = d.p.coeff(0);
    let q0 = d.q.coeff(0);
    let case1 = (!p0.is_zero() && !q0.is_zero()).then(|| &p0 / &q0);
    let np = d.p.degree().expect("nonzero p");
    let nq = d.q.degree().expect("nonzero q");
    let case_minus1 = (np == nq + 2)
        .then(|| -(d.q.leading().expect("nonzero q") / d.p.leading().expect("nonzero p")));
    CaseReport {
        derivation: d.clone(),
        case1,
        case_minus1,
    }
}

/// An `n`-dimensional indecomposable module, given by `S(x) = Y_M(s, x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleData {
    pub n: usize,
    #[serde(flatten)]
    pub derivation: DerivationSpec,
    pub case: CaseL,
    pub alpha: Scalar,
    #[serde(rename = "S")]
    pub s: MatrixSeries,
}

impl ModuleData {
    pub fn trunc(&self) -> i64 {
        self.s.trunc()
    }

    /// The scalar series on the (constant) diagonal of `S`.
    pub fn semisimple(&self) -> Result<ScalarSeries> {
        self.s.scalar_diagonal().ok_or_else(|| {
            Error::InvalidInput("diagonal of S(x) is not a multiple of the identity".into())
        })
    }

    /// Shape checks for modules read from disk.
    pub fn validate(&self) -> Result<()> {
        check_dim(self.n)?;
        if self.s.n() != self.n {
            return Err(Error::InvalidInput(format!(
                "S has dimension {}, expected {}",
                self.s.n(),
                self.n
            )));
        }
        if self.s.ram() != 1 {
            return Err(Error::InvalidInput(
                "S(x) must have integer exponents".into(),
            ));
        }
        Ok(())
    }

    pub fn identity(&self) -> MatrixSeries {
        MatrixSeries::constant(UTMatrix::identity(self.n))
    }
}

/// Builds the unique `n`-dimensional indecomposable module for `(case, alpha)`,
/// with `S(x)` known modulo `x^trunc`. `alpha` may be omitted in cases 1 and
/// -1, where it is forced.
pub fn build_module(
    d: &DerivationSpec,
    case: CaseL,
    alpha: Option<&Scalar>,
    n: usize,
    trunc: i64,
) -> Result<ModuleData> {
    check_dim(n)?;
    if trunc < 2 {
        return Err(Error::InvalidInput(format!(
            "trunc must be at least 2, got {}",
            trunc
        )));
    }
    let report = classify_cases(d);
    let inadmissible = |a: Option<&Scalar>, reason: &str| Error::Inadmissible {
        case: case.as_i8(),
        alpha: a.map(|a| a.to_string()).unwrap_or_else(|| "-".into()),
        reason: reason.into(),
    };
    let alpha = match (case, alpha) {
        (CaseL::Zero, None) => return Err(inadmissible(None, "case 0 needs an explicit alpha")),
        (CaseL::Zero, Some(a)) => {
            if !report.case0_admissible(a) {
                return Err(inadmissible(
                    Some(a),
                    "need alpha != 0 and p(alpha) q(alpha) != 0",
                ));
            }
            a.clone()
        }
        (_, given) => {
            let forced = report.forced_alpha(case).ok_or_else(|| {
                inadmissible(
                    given,
                    if case == CaseL::One {
                        "need p(0) q(0) != 0"
                    } else {
                        "need deg p = deg q + 2"
                    },
                )
            })?;
            if let Some(a) = given {
                if a != forced {
                    return Err(inadmissible(
                        Some(a),
                        &format!("alpha is forced to {}", forced),
                    ));
                }
            }
            forced.clone()
        }
    };
    let s = match case {
        CaseL::One => solve_case1(&d.p, &d.q, n, trunc)?,
        CaseL::Zero => {
            solve_case1(&d.p.shift(&alpha), &d.q.shift(&alpha), n, trunc)?.add_constant(&alpha)
        }
        CaseL::MinusOne => solve_case_minus1(d, n, trunc)?,
    };
    Ok(ModuleData {
        n,
        derivation: d.clone(),
        case,
        alpha,
        s,
    })
}

/// Solves `q(S) S' = p(S)` with `S_(0) = J_n`, assuming `p(0) q(0) != 0`.
///
/// Comparing coefficients of `x^(m-1)` gives
/// `m q(S_(0)) S_(m) = [p(S)]_(m-1) - sum_{a>=1} [q(S)]_a (m-a) S_(m-a)`,
/// where the right side only involves `S_(0..m)`. The coefficients of the
/// powers `S^i` are extended incrementally as each `S_(m)` becomes known.
fn solve_case1(p: &Poly, q: &Poly, n: usize, trunc: i64) -> Result<MatrixSeries> {
    let terms = trunc as usize;
    let deg = p.degree().unwrap_or(0).max(q.degree().unwrap_or(0));
    let j = UTMatrix::jordan(n);
    let q0_inv = j.eval_poly(q).ut_inverse()?;

    let mut s: Vec<UTMatrix> = vec![j.clone()];
    // pows[i][k] = coefficient of x^k in S^i
    let mut pows: Vec<Vec<UTMatrix>> = (0..=deg).map(|i| vec![j.pow(i as u32)]).collect();
    let combine = |poly: &Poly, pows: &[Vec<UTMatrix>], k: usize| {
        poly.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(UTMatrix::zero(n), |acc, (i, c)| {
                acc.add(&pows[i][k].scale(c))
            })
    };
    let mut qs: Vec<UTMatrix> = vec![combine(q, &pows, 0)];

    for m in 1..terms {
        let mut rhs = combine(p, &pows, m - 1);
        for a in 1..m {
            let b = m - a;
            let term = qs[a].mul(&s[b]).scale(&Scalar::from_int(b as i64));
            rhs = rhs.sub(&term);
        }
        let sm = q0_inv.mul(&rhs).scale(&Scalar::from_frac(1, m as i64));
        s.push(sm);
        pows[0].push(UTMatrix::zero(n));
        for i in 1..=deg {
            let mut acc = UTMatrix::zero(n);
            for a in 0..=m {
                let prev = &pows[i - 1][m - a];
                if !prev.is_zero() && !s[a].is_zero() {
                    acc = acc.add(&s[a].mul(prev));
                }
            }
            pows[i].push(acc);
        }
        qs.push(combine(q, &pows, m));
    }
    MatrixSeries::new(1, 0, trunc, s, n)
}

/// The derivation seen by `s~ = 1/s`: `D = -s~^2 p(1/s~)/q(1/s~) d/ds~`,
/// cleared of denominators and reduced to coprime form.
fn inverted_derivation(d: &DerivationSpec) -> Result<DerivationSpec> {
    let np = d.p.degree().expect("nonzero");
    let nq = d.q.degree().expect("nonzero");
    let k = np.max(nq + 2);
    // s~^k * s~^2 p(1/s~) = s~^(k+2-np) rev(p);  s~^k q(1/s~) = s~^(k-nq) rev(q)
    let num = d.p.reversal(np).shift_up(k + 2 - np).neg();
    let den = d.q.reversal(nq).shift_up(k - nq);
    let g = poly_gcd(&num, &den);
    let (num, _) = num.div_rem(&g)?;
    let (den, _) = den.div_rem(&g)?;
    DerivationSpec::new(num, den)
}

fn solve_case_minus1(d: &DerivationSpec, n: usize, trunc: i64) -> Result<MatrixSeries> {
    let dt = inverted_derivation(d)?;
    let mut inner = trunc + n as i64 + 2;
    loop {
        let s_tilde = solve_case1(&dt.p, &dt.q, n, inner)?;
        let s = s_tilde.inv()?;
        if s.trunc() >= trunc {
            return Ok(s.truncate(trunc));
        }
        inner += n as i64 + 1;
    }
}

/// `Y_M(num/den, x) = num(S) den(S)^-1`.
pub fn eval_rational(num: &Poly, den: &Poly, m: &ModuleData) -> Result<MatrixSeries> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let top = m.s.eval_poly(num);
    if den.is_constant() {
        return Ok(top.scale(&den.coeff(0).inv()?));
    }
    Ok(top.mul(&m.s.eval_poly(den).inv()?))
}

/// `q(S) S' - p(S)`.
pub fn ode_residual(m: &ModuleData) -> MatrixSeries {
    let d = &m.derivation;
    m.s.eval_poly(&d.q)
        .mul(&m.s.derivative())
        .sub(&m.s.eval_poly(&d.p))
}
