//! Axiom checks at the available precision.
//!
//! Untwisted modules are checked through `S(x)` alone: `S - alpha` is
//! invertible, the coefficients of `S` commute, and `q(S) S' = p(S)`.
//! Twisted structures are checked on generators and on a list of sample
//! elements `(num/den) t^e` of `K`. Every failed check carries a nonzero
//! witness series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lift::derivation_compat_check;
use crate::modbuild::{eval_rational, ode_residual, DerivationSpec, ModuleData};
use crate::numeric::{Poly, Scalar};
use crate::series::{poly_at_series, MatrixSeries, PuiseuxSeries};
use crate::twist::{Twist, TwistedStructure};
use crate::utmatrix::UTMatrix;

pub const REPORT_HEADER: &str =
    "generator-level conditions only; the full twisted Borcherds identity is not checked";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
    pub witness: Option<MatrixSeries>,
}

impl Check {
    fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: true,
            detail: detail.into(),
            witness: None,
        }
    }

    /// Passes iff `residual` vanishes to its precision.
    fn residual(name: impl Into<String>, residual: MatrixSeries) -> Self {
        if residual.is_zero() {
            Check::pass(name, format!("zero modulo x^({})", residual.precision()))
        } else {
            Check {
                name: name.into(),
                pass: false,
                detail: "nonzero residual".into(),
                witness: Some(residual),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub header: String,
    pub checks: Vec<Check>,
    /// Exponent bound of the inputs, e.g. `"8"` or `"15/2"`.
    pub precision_used: String,
}

impl VerifyReport {
    fn new(precision: String) -> Self {
        VerifyReport {
            header: REPORT_HEADER.into(),
            checks: Vec::new(),
            precision_used: precision,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// First nonzero commutator between stored coefficients of `a` and `b`.
fn first_commutator(a: &MatrixSeries, b: &MatrixSeries) -> Option<(i64, i64, UTMatrix)> {
    for (ea, ca) in a.terms() {
        for (eb, cb) in b.terms() {
            let c = ca.commutator(cb);
            if !c.is_zero() {
                return Some((ea, eb, c));
            }
        }
    }
    None
}

fn commutativity_check(name: &str, a: &MatrixSeries, b: &MatrixSeries) -> Check {
    match first_commutator(a, b) {
        None => Check::pass(name, ""),
        Some((ea, eb, c)) => Check {
            name: name.into(),
            pass: false,
            detail: format!(
                "coefficients at x^({}/{}) and x^({}/{}) do not commute",
                ea,
                a.ram(),
                eb,
                b.ram()
            ),
            witness: Some(MatrixSeries::constant(c)),
        },
    }
}

pub fn default_alphas() -> Vec<Scalar> {
    [0, 1, -1, 2].into_iter().map(Scalar::from_int).collect()
}

pub fn check_untwisted(m: &ModuleData, alphas: &[Scalar]) -> VerifyReport {
    let mut report = VerifyReport::new(m.s.precision().to_string());
    for a in alphas {
        let shifted = m.s.add_constant(&-a);
        let name = format!("invertible(S-({}))", a);
        report.checks.push(match shifted.inv() {
            Ok(_) => Check::pass(name, ""),
            Err(e) => Check {
                name,
                pass: false,
                detail: e.to_string(),
                witness: Some(shifted),
            },
        });
    }
    report
        .checks
        .push(commutativity_check("commutativity(S,S)", &m.s, &m.s));
    report
        .checks
        .push(Check::residual("ode(qS'-p(S))", ode_residual(m)));
    report
}

/// `(num/den) t^tdeg` with `tdeg` in `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KElement {
    pub num: Poly,
    pub den: Poly,
    pub tdeg: u8,
}

impl KElement {
    pub fn new(num: Poly, den: Poly, tdeg: u8) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if tdeg > 1 {
            return Err(Error::InvalidInput("t-degree must be 0 or 1".into()));
        }
        Ok(KElement { num, den, tdeg })
    }

    pub fn poly(p: Poly) -> Self {
        KElement {
            num: p,
            den: Poly::one(),
            tdeg: 0,
        }
    }

    /// Product, reduced with `t^2 = f`.
    pub fn mul(&self, o: &KElement, f: &Poly) -> KElement {
        let mut num = self.num.mul(&o.num);
        let mut tdeg = self.tdeg + o.tdeg;
        if tdeg == 2 {
            num = num.mul(f);
            tdeg = 0;
        }
        KElement {
            num,
            den: self.den.mul(&o.den),
            tdeg,
        }
    }

    /// `D` extended to `K` by `Dt = p f' / (2 q t)`.
    pub fn derive(&self, d: &DerivationSpec, f: &Poly) -> KElement {
        let (n, dd) = (&self.num, &self.den);
        let quot = n.derivative().mul(dd).sub(&n.mul(&dd.derivative()));
        if self.tdeg == 0 {
            return KElement {
                num: d.p().mul(&quot),
                den: d.q().mul(&dd.mul(dd)),
                tdeg: 0,
            };
        }
        // D((n/d) t) = p [2 f (n'd - n d') + n d f'] / (2 q f d^2) t
        let two = Scalar::from_int(2);
        let top = f
            .mul(&quot)
            .scale(&two)
            .add(&n.mul(dd).mul(&f.derivative()));
        KElement {
            num: d.p().mul(&top),
            den: d.q().mul(f).mul(&dd.mul(dd)).scale(&two),
            tdeg: 1,
        }
    }

    /// `Y(self, x)` on a twisted structure.
    pub fn eval(&self, ts: &TwistedStructure) -> Result<MatrixSeries> {
        let base = eval_rational(&self.num, &self.den, &ts.base)?;
        Ok(if self.tdeg == 1 {
            base.mul(&ts.t)
        } else {
            base
        })
    }
}

impl std::fmt::Display for KElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})/({})", self.num, self.den)?;
        if self.tdeg == 1 {
            write!(f, "*t")?;
        }
        Ok(())
    }
}

/// Sample point avoiding roots of `q` and `f` and the constant term of `S`.
fn sample_alpha(ts: &TwistedStructure) -> Scalar {
    let q = ts.base.derivation.q();
    let f = ts.f.f();
    let c0 = ts.base.s.coeff(0).get(0, 0).clone();
    (2..)
        .map(Scalar::from_int)
        .find(|a| !q.eval(a).is_zero() && !f.eval(a).is_zero() && *a != c0)
        .expect("finitely many roots")
}

/// `s, t, st, 1/(s - a0), t/(s - a0)`.
pub fn default_samples(ts: &TwistedStructure) -> Vec<KElement> {
    let a0 = sample_alpha(ts);
    let lin = Poly::var().sub(&Poly::constant(a0));
    vec![
        KElement::poly(Poly::var()),
        KElement {
            num: Poly::one(),
            den: Poly::one(),
            tdeg: 1,
        },
        KElement {
            num: Poly::var(),
            den: Poly::one(),
            tdeg: 1,
        },
        KElement {
            num: Poly::one(),
            den: lin.clone(),
            tdeg: 0,
        },
        KElement {
            num: Poly::one(),
            den: lin,
            tdeg: 1,
        },
    ]
}

fn eval_check(name: String, f: impl FnOnce() -> Result<MatrixSeries>) -> Check {
    match f() {
        Ok(r) => Check::residual(name, r),
        Err(e) => Check {
            name,
            pass: false,
            detail: e.to_string(),
            witness: None,
        },
    }
}

pub fn check_twisted(ts: &TwistedStructure, samples: &[KElement]) -> VerifyReport {
    let prec = ts.t.precision().min(ts.base.s.precision());
    let mut report = VerifyReport::new(prec.to_string());
    let f = ts.f.f();
    let d = &ts.base.derivation;
    let s = &ts.base.s;
    let t = &ts.t;

    let lows = [s.ld(), t.ld()];
    report.checks.push(Check::pass(
        "lower_bounded",
        format!(
            "lowest exponents: S {}, T {}",
            lows[0]
                .as_ref()
                .map(|v| v.to_string())
                .unwrap_or("none".into()),
            lows[1]
                .as_ref()
                .map(|v| v.to_string())
                .unwrap_or("none".into())
        ),
    ));

    let one = KElement::poly(Poly::one());
    report.checks.push(eval_check("vacuum(Y(1)=I)".into(), || {
        Ok(one.eval(ts)?.sub(&ts.base.identity()))
    }));

    report
        .checks
        .push(commutativity_check("commutativity(S,T)", s, t));
    report
        .checks
        .push(commutativity_check("commutativity(T,T)", t, t));

    report.checks.push(Check::residual(
        "multiplicative(t*t=f)",
        t.mul(t).sub(&poly_at_series(f, s)),
    ));
    let images: Vec<Result<MatrixSeries>> = samples.iter().map(|a| a.eval(ts)).collect();
    let image = |i: usize| images[i].clone();
    for (i, a) in samples.iter().enumerate() {
        for (j, b) in samples.iter().enumerate().skip(i) {
            let name = format!("multiplicative({} * {})", a, b);
            report.checks.push(eval_check(name, || {
                Ok(a.mul(b, f).eval(ts)?.sub(&image(i)?.mul(&image(j)?)))
            }));
        }
    }

    report
        .checks
        .push(Check::residual("derivation(s)", ode_residual(&ts.base)));
    let dt = || -> Result<MatrixSeries> {
        let top = s.eval_poly(&d.p().mul(&f.derivative()));
        let bottom = s.eval_poly(d.q()).mul(t).scale(&Scalar::from_int(2));
        Ok(top.mul(&bottom.inv()?))
    };
    report.checks.push(match dt() {
        Ok(img) if derivation_compat_check(&img, t) => Check::pass("derivation(t)", ""),
        Ok(img) => Check {
            name: "derivation(t)".into(),
            pass: false,
            detail: "dT/dx differs from Y(Dt)".into(),
            witness: Some(t.derivative().sub(&img)),
        },
        Err(e) => Check {
            name: "derivation(t)".into(),
            pass: false,
            detail: e.to_string(),
            witness: None,
        },
    });
    for (i, a) in samples.iter().enumerate() {
        let name = format!("derivation({})", a);
        report.checks.push(eval_check(name, || {
            Ok(image(i)?.derivative().sub(&a.derive(d, f).eval(ts)?))
        }));
    }

    let (r, p) = match ts.g {
        Twist::Sigma => (1, 2),
        Twist::Id => (0, 1),
    };
    let ram_ok = ts.ram == p as u32;
    report.checks.push(if ram_ok && t.support_check(r, p) {
        Check::pass("support", format!("exponents of T in {}/{} + Z", r, p))
    } else {
        Check {
            name: "support".into(),
            pass: false,
            detail: format!(
                "g = {}, ram = {}: exponents of T not in {}/{} + Z",
                ts.g, ts.ram, r, p
            ),
            witness: Some(t.clone()),
        }
    });
    report
}

/// `Y(a, x) b = sum_i (D^i a) b x^i / i!` on `C[s]`, for `D` with constant `q`.
pub fn borcherds_adjoint(
    a: &Poly,
    b: &Poly,
    d: &DerivationSpec,
    order: usize,
) -> Result<PuiseuxSeries<Poly>> {
    if !d.q().is_constant() {
        return Err(Error::NonPolynomialDerivation(format!(
            "q = {} is not constant",
            d.q()
        )));
    }
    let qi = d.q().coeff(0).inv()?;
    let mut coeffs = Vec::with_capacity(order);
    let mut da = a.clone();
    let mut fact = Scalar::one();
    for i in 0..order {
        if i > 0 {
            da = d.p().mul(&da.derivative()).scale(&qi);
            fact = &fact * &Scalar::from_int(i as i64);
        }
        coeffs.push(da.mul(b).scale(&fact.inv()?));
    }
    PuiseuxSeries::new(1, 0, order as i64, coeffs, ())
}
