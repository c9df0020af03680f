//! Exact scalars in Q, Q(i), or a single quadratic layer Q(i)(sqrt(c)).
//!
//! Every value is stored as `u + v * sqrt(c)` with `u, v` Gaussian rationals.
//! The radicand `c` is attached only while `v != 0`; values from the base
//! field mix freely with extended ones. Mixing two *different* radicands is a
//! programming error and panics, because the pipeline never adjoins more than
//! one root (see [`adjoin_sqrt`]).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use dashu_int::ops::{Gcd, SquareRoot, UnsignedAbs};
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use dashu_int::Sign;

use crate::error::{Error, Result};

/// A Gaussian rational `re + im*i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gauss {
    pub re: RBig,
    pub im: RBig,
}

impl Gauss {
    pub fn new(re: RBig, im: RBig) -> Self {
        Gauss { re, im }
    }

    pub fn real(re: RBig) -> Self {
        Gauss {
            re,
            im: RBig::ZERO,
        }
    }

    pub fn zero() -> Self {
        Gauss::real(RBig::ZERO)
    }

    pub fn one() -> Self {
        Gauss::real(RBig::ONE)
    }

    pub fn i() -> Self {
        Gauss::new(RBig::ZERO, RBig::ONE)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Gauss {
        Gauss::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm(&self) -> RBig {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn add(&self, o: &Gauss) -> Gauss {
        Gauss::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Gauss) -> Gauss {
        Gauss::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn neg(&self) -> Gauss {
        Gauss::new(-self.re.clone(), -self.im.clone())
    }

    pub fn mul(&self, o: &Gauss) -> Gauss {
        if self.im.is_zero() && o.im.is_zero() {
            return Gauss::real(&self.re * &o.re);
        }
        Gauss::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn scale(&self, r: &RBig) -> Gauss {
        Gauss::new(&self.re * r, &self.im * r)
    }

    /// Panics on zero.
    pub fn inv(&self) -> Gauss {
        assert!(!self.is_zero(), "inverse of zero");
        if self.im.is_zero() {
            return Gauss::real(RBig::ONE / &self.re);
        }
        let n = self.norm();
        Gauss::new(&self.re / &n, -(&self.im / &n))
    }

    /// Square root inside Q(i), if one exists.
    pub fn sqrt(&self) -> Option<Gauss> {
        if self.is_zero() {
            return Some(Gauss::zero());
        }
        if self.im.is_zero() {
            if self.re.sign() != Sign::Negative {
                return rational_sqrt(&self.re).map(Gauss::real);
            }
            return rational_sqrt(&-self.re.clone()).map(|r| Gauss::new(RBig::ZERO, r));
        }
        // (x + iy)^2 = a + bi  =>  x^2 = (a + |a+bi|)/2, y = b/(2x)
        let modulus = rational_sqrt(&self.norm())?;
        let two = RBig::from(2u8);
        let x2 = (&self.re + &modulus) / &two;
        let x = rational_sqrt(&x2)?;
        if x.is_zero() {
            return None;
        }
        let y = &self.im / (&x * &two);
        Some(Gauss::new(x, y))
    }
}

impl fmt::Display for Gauss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}", imag_term(&self.im));
        }
        if self.im.sign() == Sign::Negative {
            write!(f, "{}-{}", self.re, imag_term(&-self.im.clone()))
        } else {
            write!(f, "{}+{}", self.re, imag_term(&self.im))
        }
    }
}

fn imag_term(r: &RBig) -> String {
    if r.is_one() {
        "i".to_string()
    } else if *r == RBig::NEG_ONE {
        "-i".to_string()
    } else {
        format!("{}*i", r)
    }
}

/// Square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(r: &RBig) -> Option<RBig> {
    if r.sign() == Sign::Negative {
        return None;
    }
    let n = uint_sqrt_exact(r.numerator().unsigned_abs())?;
    let d = uint_sqrt_exact(r.denominator().clone())?;
    Some(RBig::from_parts(n.into(), d))
}

fn uint_sqrt_exact(n: UBig) -> Option<UBig> {
    let s = n.sqrt();
    if &s * &s == n {
        Some(s)
    } else {
        None
    }
}

/// Which field a scalar (or a computation) lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tower {
    Rat,
    Gauss,
    /// Q(i) adjoined a square root of the given non-square radicand.
    Ext(Gauss),
}

impl Tower {
    pub fn is_extended(&self) -> bool {
        matches!(self, Tower::Ext(_))
    }

    /// Smallest tower containing both.
    pub fn join(&self, other: &Tower) -> Tower {
        match (self, other) {
            (Tower::Ext(a), Tower::Ext(b)) => {
                assert_eq!(a, b, "incompatible quadratic extensions");
                Tower::Ext(a.clone())
            }
            (Tower::Ext(a), _) | (_, Tower::Ext(a)) => Tower::Ext(a.clone()),
            (Tower::Gauss, _) | (_, Tower::Gauss) => Tower::Gauss,
            _ => Tower::Rat,
        }
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tower::Rat => write!(f, "RAT"),
            Tower::Gauss => write!(f, "GAUSS"),
            Tower::Ext(c) => write!(f, "GAUSS(sqrt({}))", c),
        }
    }
}

/// An exact element of Q(i)(sqrt(c)).
#[derive(Clone, Debug)]
pub struct Scalar {
    base: Gauss,
    rad: Gauss,
    radicand: Option<Arc<Gauss>>,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.base != other.base || self.rad != other.rad {
            return false;
        }
        match (&self.radicand, &other.radicand) {
            (Some(a), Some(b)) => a == b,
            (None, None) => true,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Scalar {
    pub fn from_gauss(g: Gauss) -> Self {
        Scalar {
            base: g,
            rad: Gauss::zero(),
            radicand: None,
        }
    }

    pub fn from_rational(r: RBig) -> Self {
        Scalar::from_gauss(Gauss::real(r))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(RBig::from(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Scalar::from_rational(RBig::from_parts_signed(n.into(), d.into()))
    }

    pub fn gaussian(re: RBig, im: RBig) -> Self {
        Scalar::from_gauss(Gauss::new(re, im))
    }

    pub fn i() -> Self {
        Scalar::from_gauss(Gauss::i())
    }

    /// `u + v*sqrt(c)`. The radicand must already be normalized (see [`adjoin_sqrt`]).
    pub fn extended(u: Gauss, v: Gauss, radicand: Gauss) -> Self {
        Scalar {
            base: u,
            rad: v,
            radicand: Some(Arc::new(radicand)),
        }
        .normalized()
    }

    pub fn zero() -> Self {
        Scalar::from_gauss(Gauss::zero())
    }

    pub fn one() -> Self {
        Scalar::from_gauss(Gauss::one())
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.rad.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rad.is_zero() && self.base == Gauss::one()
    }

    /// Rational part `u` of `u + v*sqrt(c)`.
    pub fn base_part(&self) -> &Gauss {
        &self.base
    }

    pub fn radical_part(&self) -> &Gauss {
        &self.rad
    }

    pub fn radicand(&self) -> Option<&Gauss> {
        self.radicand.as_deref()
    }

    pub fn as_rational(&self) -> Option<&RBig> {
        if self.rad.is_zero() && self.base.im.is_zero() {
            Some(&self.base.re)
        } else {
            None
        }
    }

    pub fn tower(&self) -> Tower {
        if let Some(c) = &self.radicand {
            return Tower::Ext((**c).clone());
        }
        if self.base.im.is_zero() {
            Tower::Rat
        } else {
            Tower::Gauss
        }
    }

    fn normalized(mut self) -> Self {
        if self.rad.is_zero() {
            self.radicand = None;
        }
        self
    }

    fn common_radicand(&self, o: &Scalar) -> Option<Arc<Gauss>> {
        match (&self.radicand, &o.radicand) {
            (Some(a), Some(b)) => {
                assert!(
                    a == b,
                    "incompatible quadratic extensions: sqrt({}) and sqrt({})",
                    a,
                    b
                );
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match &self.radicand {
            None => Ok(Scalar::from_gauss(self.base.inv())),
            Some(c) => {
                // (u + v r)^-1 = (u - v r) / (u^2 - c v^2)
                let n = self
                    .base
                    .mul(&self.base)
                    .sub(&c.mul(&self.rad.mul(&self.rad)));
                let ni = n.inv();
                Ok(Scalar {
                    base: self.base.mul(&ni),
                    rad: self.rad.neg().mul(&ni),
                    radicand: Some(c.clone()),
                }
                .normalized())
            }
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale_rational(&self, r: &RBig) -> Scalar {
        Scalar {
            base: self.base.scale(r),
            rad: self.rad.scale(r),
            radicand: self.radicand.clone(),
        }
        .normalized()
    }

    /// Square root inside the current tower, without adjoining anything.
    pub fn sqrt_in_tower(&self) -> Option<Scalar> {
        match &self.radicand {
            None => self.base.sqrt().map(Scalar::from_gauss),
            Some(c) => {
                let two = RBig::from(2u8);
                let u = &self.base;
                let v = &self.rad;
                let norm = u.mul(u).sub(&c.mul(&v.mul(v)));
                let nr = norm.sqrt()?;
                for cand in [u.add(&nr), u.sub(&nr)] {
                    let x2 = cand.scale(&(RBig::ONE / &two));
                    if let Some(x) = x2.sqrt() {
                        if x.is_zero() {
                            continue;
                        }
                        let y = v.mul(&x.scale(&two).inv());
                        let root = Scalar {
                            base: x,
                            rad: y,
                            radicand: Some(c.clone()),
                        }
                        .normalized();
                        if &(&root * &root) == self {
                            return Some(root);
                        }
                    }
                }
                // u + v r with x = 0: (y r)^2 = c y^2, pure radical root
                if v.is_zero() {
                    if let Some(y) = u.mul(&c.inv()).sqrt() {
                        let root = Scalar {
                            base: Gauss::zero(),
                            rad: y,
                            radicand: Some(c.clone()),
                        }
                        .normalized();
                        if &(&root * &root) == self {
                            return Some(root);
                        }
                    }
                }
                None
            }
        }
    }
}

/// Square root of `c`, adjoining one if needed.
///
/// Returns the resulting tower together with a root. A square in the current
/// field leaves the tower unchanged. Over `RAT`, a negative rational square
/// lifts to `GAUSS`. Any other non-square adjoins `sqrt(c')` where `c'` is a
/// normalized radicand (integral, square factors stripped). A second
/// adjunction on an extended tower is refused with `TowerExhausted`.
pub fn adjoin_sqrt(tower: &Tower, c: &Scalar) -> Result<(Tower, Scalar)> {
    if c.is_zero() {
        return Err(Error::InvalidInput("cannot adjoin sqrt(0)".into()));
    }
    let tower = tower.join(&c.tower());
    if let Some(root) = c.sqrt_in_tower() {
        return Ok((tower.join(&root.tower()), root));
    }
    if let (Tower::Rat, Some(r)) = (&tower, c.as_rational()) {
        if let Some(root) = rational_sqrt(&-r) {
            return Ok((Tower::Gauss, Scalar::gaussian(RBig::ZERO, root)));
        }
    }
    if let Tower::Ext(k) = &tower {
        if c.radicand.is_none() {
            // c = y^2 k  =>  sqrt(c) = y sqrt(k)
            if let Some(y) = c.base.mul(&k.inv()).sqrt() {
                return Ok((tower.clone(), Scalar::extended(Gauss::zero(), y, k.clone())));
            }
        }
        return Err(Error::TowerExhausted(format!(
            "sqrt({}) needs a second extension over {}",
            c, tower
        )));
    }
    let (radicand, factor) = normalize_radicand(&c.base);
    let root = Scalar::extended(Gauss::zero(), factor, radicand.clone());
    debug_assert_eq!(&(&root * &root), c);
    Ok((Tower::Ext(radicand), root))
}

/// Writes `g = factor^2 * radicand` with `radicand` an integral Gaussian with
/// small square factors removed. Real radicands are made positive, moving the
/// sign into `factor` as a power of `i`.
fn normalize_radicand(g: &Gauss) -> (Gauss, Gauss) {
    let (dr, di) = (g.re.denominator(), g.im.denominator());
    let den = dr / dr.gcd(di) * di;
    // g = (g * den^2) / den^2
    let d2 = RBig::from(&den * &den);
    let scaled = g.scale(&d2);
    let mut re = scaled.re.numerator().clone();
    let mut im = scaled.im.numerator().clone();
    let mut factor = RBig::from_parts(IBig::ONE, den);
    let mut imag_factor = false;
    if im == IBig::ZERO && re.sign() == Sign::Negative {
        re = -re;
        imag_factor = true;
    }
    let mut content = IBig::from((&re).unsigned_abs().gcd((&im).unsigned_abs()));
    let mut p = IBig::from(2);
    let limit = IBig::from(10_000);
    while p <= limit && &p * &p <= content {
        let pp = &p * &p;
        while &content % &pp == IBig::ZERO {
            content /= &pp;
            re /= &pp;
            im /= &pp;
            factor *= RBig::from(p.clone());
        }
        p += 1;
    }
    let radicand = Gauss::new(RBig::from(re), RBig::from(im));
    let f = if imag_factor {
        Gauss::new(RBig::ZERO, factor)
    } else {
        Gauss::real(factor)
    };
    (radicand, f)
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        if self.radicand.is_none() && o.radicand.is_none() {
            return Scalar::from_gauss(self.base.add(&o.base));
        }
        let radicand = self.common_radicand(o);
        Scalar {
            base: self.base.add(&o.base),
            rad: self.rad.add(&o.rad),
            radicand,
        }
        .normalized()
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        if self.radicand.is_none() && o.radicand.is_none() {
            return Scalar::from_gauss(self.base.sub(&o.base));
        }
        let radicand = self.common_radicand(o);
        Scalar {
            base: self.base.sub(&o.base),
            rad: self.rad.sub(&o.rad),
            radicand,
        }
        .normalized()
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.radicand.is_none() && o.radicand.is_none() {
            return Scalar::from_gauss(self.base.mul(&o.base));
        }
        let radicand = self.common_radicand(o);
        let c = radicand.as_deref().expect("extended operand");
        let base = self.base.mul(&o.base).add(&c.mul(&self.rad.mul(&o.rad)));
        let rad = self.base.mul(&o.rad).add(&self.rad.mul(&o.base));
        Scalar {
            base,
            rad,
            radicand,
        }
        .normalized()
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero; use [`Scalar::inv`] for a checked inverse.
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv().expect("division by zero")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            base: self.base.neg(),
            rad: self.rad.neg(),
            radicand: self.radicand.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.radicand {
            None => write!(f, "{}", self.base),
            Some(c) => write!(f, "({})+({})*sqrt({})", self.base, self.rad, c),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Scalar> {
        crate::numeric::parse::parse_scalar(s)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_frac(n, d)
    }

    #[test]
    fn adjoin_perfect_square_keeps_tower() {
        let (t, r) = adjoin_sqrt(&Tower::Rat, &Scalar::from_int(4)).unwrap();
        assert_eq!(t, Tower::Rat);
        assert_eq!(r, Scalar::from_int(2));
    }

    #[test]
    fn adjoin_two_extends_rat() {
        let (t, r) = adjoin_sqrt(&Tower::Rat, &Scalar::from_int(2)).unwrap();
        assert!(t.is_extended());
        assert_eq!(&r * &r, Scalar::from_int(2));
        assert_eq!(r.to_string(), "(0)+(1)*sqrt(2)");
    }

    #[test]
    fn adjoin_minus_one_over_gauss_is_i() {
        let (t, r) = adjoin_sqrt(&Tower::Gauss, &Scalar::from_int(-1)).unwrap();
        assert_eq!(t, Tower::Gauss);
        assert_eq!(&r * &r, Scalar::from_int(-1));
        assert_eq!(r, Scalar::i());
    }

    #[test]
    fn adjoin_negative_rat_moves_to_gauss() {
        let (t, r) = adjoin_sqrt(&Tower::Rat, &q(-9, 4)).unwrap();
        assert_eq!(t, Tower::Gauss);
        assert_eq!(&r * &r, q(-9, 4));
    }

    #[test]
    fn adjoin_strips_square_factors() {
        let (t, r) = adjoin_sqrt(&Tower::Rat, &q(-12, 5)).unwrap();
        assert_eq!(
            t,
            Tower::Ext(Gauss::real(RBig::from(15)))
        );
        assert_eq!(&r * &r, q(-12, 5));
    }

    #[test]
    fn second_adjunction_refused() {
        let (t, r2) = adjoin_sqrt(&Tower::Rat, &Scalar::from_int(2)).unwrap();
        assert!(matches!(
            adjoin_sqrt(&t, &Scalar::from_int(3)),
            Err(Error::TowerExhausted(_))
        ));
        // 8 = (2 sqrt 2)^2 is already a square there
        let (t2, r8) = adjoin_sqrt(&t, &Scalar::from_int(8)).unwrap();
        assert_eq!(t2, t);
        assert_eq!(&r8 * &r8, Scalar::from_int(8));
        // 3 + 2 sqrt 2 = (1 + sqrt 2)^2
        let w = &Scalar::from_int(3) + &(&Scalar::from_int(2) * &r2);
        let root = w.sqrt_in_tower().unwrap();
        assert_eq!(&root * &root, w);
    }

    #[test]
    fn gaussian_sqrt() {
        // (1 + 2i)^2 = -3 + 4i
        let g = Gauss::new(
            RBig::from(-3),
            RBig::from(4),
        );
        let r = g.sqrt().unwrap();
        assert_eq!(r.mul(&r), g);
        let g = Gauss::new(
            RBig::from(1),
            RBig::from(1),
        );
        assert!(g.sqrt().is_none());
    }

    #[test]
    fn extended_inverse() {
        let (_, r) = adjoin_sqrt(
            &Tower::Gauss,
            &Scalar::gaussian(
                RBig::from(1),
                RBig::from(1),
            ),
        )
        .unwrap();
        let x = &(&Scalar::from_int(3) * &r) + &Scalar::i();
        let xi = x.inv().unwrap();
        assert!((&x * &xi).is_one());
    }

    #[test]
    fn display_forms() {
        assert_eq!(q(-1, 2).to_string(), "-1/2");
        let g = Scalar::gaussian(
            RBig::from_parts(1.into(), 2u8.into()),
            RBig::from_parts((-3).into(), 4u8.into()),
        );
        assert_eq!(g.to_string(), "1/2-3/4*i");
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(matches!(Scalar::zero().inv(), Err(Error::DivisionByZero)));
    }
}
