//! Lifting a semisimple root to an upper-triangular matrix series root.
//!
//! Given `P^(Z) = sum_i P^_i(x) Z^i` with upper-triangular matrix series
//! coefficients and a scalar series `T0` that annihilates the diagonal
//! polynomial, the root `T = T^(0) + T^(1) + ... + T^(n-1)` is built one
//! superdiagonal at a time:
//!
//! ```text
//! T^(0) = T0 I
//! T^(k) = -[dP^(0)/dZ (T^(0))]^-1 * [P^(T^(0) + ... + T^(k-1))]^(k)
//! ```
//!
//! The bracket `[.]^(k)` is the `k`-th superdiagonal component. Because the
//! partial sum has no component of degree `k` or higher, that component is
//! exactly the sum over compositions `j0 + j1 + ... + ji = k` with all
//! `j1..ji < k`. Grading multiplicativity makes `T^(k)` vanish for `k >= n`.

use crate::error::{Error, Result};
use crate::series::{MatrixSeries, ScalarSeries};
use crate::utmatrix::check_dim;

#[derive(Clone, Debug, PartialEq)]
pub struct LiftProblem {
    /// `phat[i]` is the coefficient of `Z^i`.
    pub phat: Vec<MatrixSeries>,
    /// Candidate semisimple root.
    pub t0: ScalarSeries,
    pub n: usize,
}

impl LiftProblem {
    pub fn new(phat: Vec<MatrixSeries>, t0: ScalarSeries) -> Result<Self> {
        if phat.len() < 2 {
            return Err(Error::InvalidInput(
                "P(Z) must have degree at least 1".into(),
            ));
        }
        let n = phat[0].n();
        check_dim(n)?;
        if phat.iter().any(|p| p.n() != n) {
            return Err(Error::InvalidInput(
                "coefficients of P(Z) differ in dimension".into(),
            ));
        }
        if phat.last().is_some_and(|p| p.is_zero()) {
            return Err(Error::InvalidInput(
                "leading coefficient of P(Z) vanishes".into(),
            ));
        }
        Ok(LiftProblem { phat, t0, n })
    }

    /// Degree `N` of `P(Z)`.
    pub fn degree(&self) -> usize {
        self.phat.len() - 1
    }

    /// `P^(T)` by Horner, coefficients acting on the left.
    pub fn eval(&self, t: &MatrixSeries) -> MatrixSeries {
        let mut acc = self.phat[self.degree()].clone();
        for c in self.phat.iter().rev().skip(1) {
            acc = acc.mul(t).add(c);
        }
        acc
    }

    /// `dP^/dZ` restricted to the diagonal and evaluated at `T0 I`.
    fn diagonal_derivative_at_root(&self) -> MatrixSeries {
        let t0 = self.t0.to_matrix(self.n);
        let mut acc: Option<MatrixSeries> = None;
        let mut power = MatrixSeries::constant(crate::UTMatrix::identity(self.n));
        for (i, c) in self.phat.iter().enumerate().skip(1) {
            let term = c
                .semisimple_part()
                .mul(&power)
                .scale(&crate::Scalar::from_int(i as i64));
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
            power = power.mul(&t0);
        }
        acc.expect("degree >= 1")
    }

    /// Checks that `T0` annihilates every diagonal entry of `P^`.
    fn check_root(&self) -> Result<()> {
        let t0 = self.t0.to_matrix(self.n);
        let diag: Vec<MatrixSeries> = self.phat.iter().map(|p| p.semisimple_part()).collect();
        let mut acc = diag[diag.len() - 1].clone();
        for c in diag.iter().rev().skip(1) {
            acc = acc.mul(&t0).add(c);
        }
        if !acc.is_zero() {
            return Err(Error::NotARoot(format!(
                "P^[0](T0) has a nonzero term at x^({}/{})",
                acc.lo(),
                acc.ram()
            )));
        }
        Ok(())
    }
}

/// Lifts `T0` to the unique root of `P^` with diagonal part `T0 I`.
///
/// With `precision = Some(k)` the result is truncated to `x^k`, and an error
/// is returned if the inputs do not determine it that far.
pub fn lift_root(prob: &LiftProblem, precision: Option<i64>) -> Result<MatrixSeries> {
    prob.check_root()?;
    let dinv = prob
        .diagonal_derivative_at_root()
        .inv()
        .map_err(|e| match e {
            Error::NotInvertible(w) => {
                Error::NotSeparable(format!("dP/dZ at T0 has leading coefficient {}", w))
            }
            other => other,
        })?;
    let mut t = prob.t0.to_matrix(prob.n);
    for k in 1..prob.n {
        let rk = prob.eval(&t).superdiag_part(k)?;
        let tk = dinv.mul(&rk).neg().superdiag_part(k)?;
        t = t.add(&tk);
    }
    match precision {
        None => Ok(t),
        Some(k) => {
            let want = k * t.ram() as i64;
            if t.trunc() < want {
                return Err(Error::PrecisionExhausted(format!(
                    "lift is known modulo x^({}), requested x^{}",
                    t.precision(),
                    k
                )));
            }
            Ok(t.truncate(want))
        }
    }
}

/// True iff `other` has diagonal part `T0 I` and equals the lift on the
/// shared precision window.
pub fn uniqueness_probe(prob: &LiftProblem, other: &MatrixSeries) -> Result<bool> {
    if other.n() != prob.n {
        return Ok(false);
    }
    if !other
        .semisimple_part()
        .eq_to_precision(&prob.t0.to_matrix(prob.n))
    {
        return Ok(false);
    }
    let lifted = lift_root(prob, None)?;
    Ok(lifted.eq_to_precision(other))
}

/// Every exponent of `B` lies in `-i/p + Z`.
pub fn descent_check(b: &MatrixSeries, i: i64, p: i64) -> bool {
    b.support_check(i, p)
}

/// `dT/dx` agrees with the image of `D theta` on the shared precision.
pub fn derivation_compat_check(dtheta_image: &MatrixSeries, t: &MatrixSeries) -> bool {
    t.derivative().eq_to_precision(dtheta_image)
}

/// Semisimple root for `deg P <= 2`, read off the diagonal entry `(0, 0)`.
///
/// Degree 1 gives `-P0/P1`; degree 2 takes the root
/// `(-P1 + sqrt(P1^2 - 4 P2 P0)) / (2 P2)`, which may ramify.
pub fn auto_semisimple_root(phat: &[MatrixSeries]) -> Result<ScalarSeries> {
    let d: Vec<ScalarSeries> = phat
        .iter()
        .map(|p| {
            p.scalar_diagonal()
                .ok_or_else(|| Error::InvalidInput("coefficient diagonal is not scalar".into()))
        })
        .collect::<Result<_>>()?;
    match d.len() {
        2 => Ok(d[0].mul(&d[1].inv()?).neg()),
        3 => {
            let disc = d[1]
                .mul(&d[1])
                .sub(&d[2].mul(&d[0]).scale(&crate::Scalar::from_int(4)));
            let (root, _) = disc.sqrt()?;
            let two_a = d[2].scale(&crate::Scalar::from_int(2));
            Ok(root.sub(&d[1]).mul(&two_a.inv()?))
        }
        _ => Err(Error::InvalidInput(
            "automatic semisimple root needs deg P <= 2; supply T0 explicitly".into(),
        )),
    }
}
