//! Truncated Puiseux series `sum_e c_e x^(e/ram)` over a [`Coeff`] ring.
//!
//! Each series carries its own precision: it is known modulo
//! `x^(trunc/ram)`. Coefficients are stored densely from exponent `lo/ram`;
//! stored entries past the end (up to `trunc`) are known zeros. Leading and
//! trailing zeros are stripped eagerly, so `lo/ram` is the valuation of any
//! nonzero series and `coeffs[0]` its leading coefficient. A series that is
//! zero to its precision has no coefficients and `lo == trunc`.
//!
//! Every binary operation reports only the precision its inputs guarantee.

use std::fmt;

use dashu_ratio::RBig;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{adjoin_sqrt, Poly, Scalar, Tower};
use crate::ring::Coeff;
use crate::utmatrix::UTMatrix;

/// Precision used for exactly known series (polynomials, constants).
pub const EXACT: i64 = 1 << 40;

/// Largest ramification index handled.
pub const MAX_RAM: u32 = 2;

#[derive(Clone, Debug)]
pub struct PuiseuxSeries<R: Coeff> {
    ram: u32,
    lo: i64,
    trunc: i64,
    coeffs: Vec<R>,
    shape: R::Shape,
}

pub type ScalarSeries = PuiseuxSeries<Scalar>;
pub type MatrixSeries = PuiseuxSeries<UTMatrix>;

fn check_ram(ram: u32) -> Result<()> {
    if ram == 0 || ram > MAX_RAM {
        return Err(Error::RamificationLimit(ram));
    }
    Ok(())
}

impl<R: Coeff> PuiseuxSeries<R> {
    /// Builds `sum_k coeffs[k] x^((lo+k)/ram)` known modulo `x^(trunc/ram)`.
    pub fn new(ram: u32, lo: i64, trunc: i64, coeffs: Vec<R>, shape: R::Shape) -> Result<Self> {
        check_ram(ram)?;
        if lo > trunc {
            return Err(Error::InvalidInput(format!(
                "lo {} exceeds trunc {}",
                lo, trunc
            )));
        }
        if let Some(c) = coeffs.iter().find(|c| c.shape() != shape) {
            return Err(Error::InvalidInput(format!(
                "coefficient shape {:?} != {:?}",
                c.shape(),
                shape
            )));
        }
        Ok(Self::raw(ram, lo, trunc, coeffs, shape))
    }

    fn raw(ram: u32, lo: i64, trunc: i64, coeffs: Vec<R>, shape: R::Shape) -> Self {
        let mut s = PuiseuxSeries {
            ram,
            lo,
            trunc,
            coeffs,
            shape,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let keep = (self.trunc - self.lo).max(0) as usize;
        self.coeffs.truncate(keep);
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.lo = self.trunc;
            }
            Some(k) => {
                self.coeffs.drain(..k);
                self.lo += k as i64;
            }
        }
    }

    pub fn zero(shape: R::Shape, ram: u32, trunc: i64) -> Self {
        Self::raw(ram, trunc, trunc, Vec::new(), shape)
    }

    /// `c x^(e/ram)` known modulo `x^(trunc/ram)`.
    pub fn monomial(c: R, e: i64, ram: u32, trunc: i64) -> Self {
        let shape = c.shape();
        Self::raw(ram, e, trunc.max(e), vec![c], shape)
    }

    /// A constant known exactly.
    pub fn constant(c: R) -> Self {
        Self::monomial(c, 0, 1, EXACT)
    }

    /// A polynomial in `x` with the given coefficients, known exactly.
    pub fn from_coeffs(coeffs: Vec<R>, shape: R::Shape) -> Self {
        Self::raw(1, 0, EXACT, coeffs, shape)
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    /// Numerator of the lowest stored exponent.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Numerator of the (exclusive) precision bound.
    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn shape(&self) -> R::Shape {
        self.shape
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn is_exact(&self) -> bool {
        self.trunc >= EXACT / 2
    }

    /// True iff every known coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Valuation numerator (`ld = lo/ram`), `None` for zero.
    pub fn ld_num(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.lo)
    }

    /// Valuation as a rational number.
    pub fn ld(&self) -> Option<RBig> {
        self.ld_num()
            .map(|l| RBig::from_parts_signed(l.into(), (self.ram as i64).into()))
    }

    /// Leading coefficient.
    pub fn lc(&self) -> Option<&R> {
        self.coeffs.first()
    }

    /// Precision as a rational exponent.
    pub fn precision(&self) -> RBig {
        RBig::from_parts_signed(self.trunc.into(), (self.ram as i64).into())
    }

    /// Coefficient of `x^(e/ram)`; zero outside the stored range.
    pub fn coeff(&self, e: i64) -> R {
        if e < self.lo {
            return R::zero(self.shape);
        }
        self.coeffs
            .get((e - self.lo) as usize)
            .cloned()
            .unwrap_or_else(|| R::zero(self.shape))
    }

    /// Coefficient of `x^(num/den)`; zero if that exponent is not on the grid.
    pub fn coeff_at(&self, num: i64, den: i64) -> R {
        let r = self.ram as i64;
        if (num * r) % den != 0 {
            return R::zero(self.shape);
        }
        self.coeff(num * r / den)
    }

    /// Nonzero terms as `(exponent numerator, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &R)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.lo + k as i64, c))
    }

    /// Re-expresses the series with ramification `ram`, a multiple of the current one.
    pub fn rescale(&self, ram: u32) -> Result<Self> {
        check_ram(ram)?;
        if ram == self.ram {
            return Ok(self.clone());
        }
        if ram % self.ram != 0 {
            return Err(Error::InvalidInput(format!(
                "cannot rescale ram {} to {}",
                self.ram, ram
            )));
        }
        let f = (ram / self.ram) as i64;
        let mut coeffs = Vec::with_capacity(self.coeffs.len() * f as usize);
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                for _ in 1..f {
                    coeffs.push(R::zero(self.shape));
                }
            }
            coeffs.push(c.clone());
        }
        Ok(Self::raw(
            ram,
            self.lo * f,
            self.trunc * f,
            coeffs,
            self.shape,
        ))
    }

    fn unify(&self, o: &Self) -> (Self, Self) {
        assert_eq!(self.shape, o.shape, "coefficient shape mismatch");
        let ram = lcm(self.ram, o.ram);
        (
            self.rescale(ram).expect("ramification within limit"),
            o.rescale(ram).expect("ramification within limit"),
        )
    }

    /// Keeps only exponents below `trunc/ram` (never raises precision).
    pub fn truncate(&self, trunc: i64) -> Self {
        let t = trunc.min(self.trunc);
        Self::raw(self.ram, self.lo.min(t), t, self.coeffs.clone(), self.shape)
    }

    fn combine(&self, o: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        let (a, b) = self.unify(o);
        let trunc = a.trunc.min(b.trunc);
        let span = |s: &Self| (!s.coeffs.is_empty()).then(|| (s.lo, s.lo + s.coeffs.len() as i64));
        let (lo, hi) = match (span(&a), span(&b)) {
            (None, None) => (trunc, trunc),
            (Some(x), None) | (None, Some(x)) => x,
            (Some(x), Some(y)) => (x.0.min(y.0), x.1.max(y.1)),
        };
        let lo = lo.min(trunc);
        let hi = hi.min(trunc);
        let coeffs = (lo..hi.max(lo))
            .map(|e| f(&a.coeff(e), &b.coeff(e)))
            .collect();
        Self::raw(a.ram, lo, trunc, coeffs, a.shape)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, |x, y| x.add(y))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, |x, y| x.sub(y))
    }

    pub fn neg(&self) -> Self {
        Self::raw(
            self.ram,
            self.lo,
            self.trunc,
            self.coeffs.iter().map(|c| c.neg()).collect(),
            self.shape,
        )
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::raw(
            self.ram,
            self.lo,
            self.trunc,
            self.coeffs.iter().map(|x| x.scale(c)).collect(),
            self.shape,
        )
    }

    pub fn map_coeffs(&self, f: impl Fn(&R) -> R) -> Self {
        Self::raw(
            self.ram,
            self.lo,
            self.trunc,
            self.coeffs.iter().map(f).collect(),
            self.shape,
        )
    }

    /// Multiply by `x^(k/ram)`.
    pub fn shift(&self, k: i64) -> Self {
        Self::raw(
            self.ram,
            self.lo + k,
            self.trunc + k,
            self.coeffs.clone(),
            self.shape,
        )
    }

    /// Adds `c` times the unit at exponent 0 (no effect beyond the precision).
    pub fn add_constant(&self, c: &Scalar) -> Self {
        if c.is_zero() || self.trunc <= 0 {
            return self.clone();
        }
        let one = R::one(self.shape).scale(c);
        let lo = self.lo.min(0);
        let hi = (self.lo + self.coeffs.len() as i64).max(1);
        let coeffs = (lo..hi)
            .map(|e| {
                let x = self.coeff(e);
                if e == 0 {
                    x.add(&one)
                } else {
                    x
                }
            })
            .collect();
        Self::raw(self.ram, lo, self.trunc, coeffs, self.shape)
    }

    /// Product; precision is `min(ld A + prec B, ld B + prec A)`.
    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = self.unify(o);
        let trunc = (a.lo + b.trunc).min(b.lo + a.trunc);
        let lo = a.lo + b.lo;
        if a.is_zero() || b.is_zero() || lo >= trunc {
            return Self::zero(a.shape, a.ram, trunc);
        }
        let len = ((trunc - lo) as usize).min(a.coeffs.len() + b.coeffs.len() - 1);
        let mut out: Vec<Option<R>> = vec![None; len];
        for (i, x) in a.coeffs.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(len - i) {
                if y.is_zero() {
                    continue;
                }
                match &mut out[i + j] {
                    Some(acc) => acc.mul_acc(x, y),
                    slot => *slot = Some(x.mul(y)),
                }
            }
        }
        let coeffs = out
            .into_iter()
            .map(|c| c.unwrap_or_else(|| R::zero(a.shape)))
            .collect();
        Self::raw(a.ram, lo, trunc, coeffs, a.shape)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(R::one(self.shape));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Termwise `d/dx`.
    pub fn derivative(&self) -> Self {
        let r = self.ram as i64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let e = self.lo + k as i64;
                c.scale(&Scalar::from_rational(RBig::from_parts_signed(e.into(), r.into())))
            })
            .collect();
        Self::raw(self.ram, self.lo - r, self.trunc - r, coeffs, self.shape)
    }

    /// `p(A)` by Horner, with coefficients of `p` acting as scalars.
    pub fn eval_poly(&self, p: &Poly) -> Self {
        let cs = p.coeffs();
        if cs.is_empty() {
            return Self::zero(self.shape, self.ram, EXACT);
        }
        let mut acc = Self::constant(R::one(self.shape).scale(&cs[cs.len() - 1]))
            .rescale(self.ram)
            .unwrap();
        for c in cs.iter().rev().skip(1) {
            acc = acc.mul(self).add_constant(c);
        }
        acc
    }

    /// Equality on the common precision window.
    pub fn eq_to_precision(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    /// True iff all nonzero exponents `e` satisfy `e + r/p` in Z.
    pub fn support_check(&self, r: i64, p: i64) -> bool {
        let rho = self.ram as i64;
        self.terms()
            .all(|(e, _)| (e * p + r * rho).rem_euclid(rho * p) == 0)
    }
}

impl<R: Coeff> PartialEq for PuiseuxSeries<R> {
    /// Structural equality: same ramification, precision and coefficients.
    fn eq(&self, o: &Self) -> bool {
        self.ram == o.ram
            && self.trunc == o.trunc
            && self.lo == o.lo
            && self.shape == o.shape
            && self.coeffs == o.coeffs
    }
}

/// `support_check(A, r, p)`: every exponent of `A` lies in `-r/p + Z`.
pub fn support_check<R: Coeff>(a: &PuiseuxSeries<R>, r: i64, p: i64) -> bool {
    a.support_check(r, p)
}

pub fn poly_at_series<R: Coeff>(p: &Poly, a: &PuiseuxSeries<R>) -> PuiseuxSeries<R> {
    a.eval_poly(p)
}

fn relative_precision<R: Coeff>(a: &PuiseuxSeries<R>) -> Result<usize> {
    let k = a.trunc - a.lo;
    if a.is_exact() && a.coeffs.len() > 1 {
        return Err(Error::PrecisionExhausted(
            "expansion of an exactly known non-monomial needs an explicit truncation".into(),
        ));
    }
    Ok(k as usize)
}

impl ScalarSeries {
    pub fn scalar_zero(ram: u32, trunc: i64) -> Self {
        Self::zero((), ram, trunc)
    }

    /// Exact polynomial `sum c_k x^k` from integer coefficients.
    pub fn from_ints(cs: &[i64], trunc: i64) -> Self {
        Self::raw(
            1,
            0,
            trunc,
            cs.iter().map(|&c| Scalar::from_int(c)).collect(),
            (),
        )
    }

    /// Field containing every coefficient.
    pub fn tower(&self) -> Tower {
        self.coeffs
            .iter()
            .fold(Tower::Rat, |t, c| t.join(&c.tower()))
    }

    /// Multiplicative inverse; `ld(A^-1) = -ld(A)`.
    pub fn inv(&self) -> Result<Self> {
        let a0 = self
            .lc()
            .ok_or_else(|| Error::NotInvertible("0".into()))?
            .clone();
        let a0i = a0.inv()?;
        if self.coeffs.len() == 1 {
            return Ok(Self::raw(
                self.ram,
                -self.lo,
                self.trunc - 2 * self.lo,
                vec![a0i],
                (),
            ));
        }
        let k = relative_precision(self)?;
        let mut b: Vec<Scalar> = Vec::with_capacity(k);
        b.push(a0i.clone());
        for m in 1..k {
            let mut acc = Scalar::zero();
            for j in 1..=m.min(self.coeffs.len() - 1) {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc = &acc + &(a * &b[m - j]);
                }
            }
            b.push(-(&acc * &a0i));
        }
        Ok(Self::raw(self.ram, -self.lo, -self.lo + k as i64, b, ()))
    }

    /// Square root with `B^2 = A`. Returns `(B, ramified)`; `ramified` is set
    /// when the valuation numerator is odd and `B` needs ramification `2*ram`.
    /// The leading coefficient's root may adjoin one square root.
    pub fn sqrt(&self) -> Result<(Self, bool)> {
        let a0 = self
            .lc()
            .ok_or_else(|| Error::InvalidInput("square root of zero series".into()))?;
        let (_, b0) = adjoin_sqrt(&self.tower(), a0)?;
        let k = if self.coeffs.len() == 1 && self.is_exact() {
            1
        } else {
            relative_precision(self)?
        };
        // B = b0 x^(lo/2) (1 + ...): b_m = (a_m - sum_{j=1}^{m-1} b_j b_{m-j}) / (2 b0)
        let two_b0_inv = (&b0 * &Scalar::from_int(2)).inv()?;
        let mut b: Vec<Scalar> = Vec::with_capacity(k);
        b.push(b0);
        for m in 1..k {
            let mut acc = self.coeff(self.lo + m as i64);
            for j in 1..m {
                acc = &acc - &(&b[j] * &b[m - j]);
            }
            b.push(&acc * &two_b0_inv);
        }
        let trunc_rel = if k == 1 && self.is_exact() {
            EXACT
        } else {
            k as i64
        };
        if self.lo % 2 == 0 {
            let lo = self.lo / 2;
            return Ok((Self::raw(self.ram, lo, lo + trunc_rel, b, ()), false));
        }
        let ram = self.ram * 2;
        check_ram(ram)?;
        // exponents (lo/2 + m)/ram_old = (lo + 2m)/ram
        let mut spread = Vec::with_capacity(2 * b.len());
        for (m, c) in b.into_iter().enumerate() {
            if m > 0 {
                spread.push(Scalar::zero());
            }
            spread.push(c);
        }
        let trunc = if trunc_rel == EXACT {
            EXACT
        } else {
            self.lo + 2 * trunc_rel
        };
        Ok((Self::raw(ram, self.lo, trunc, spread, ()), true))
    }

    /// `c * I` coefficientwise.
    pub fn to_matrix(&self, n: usize) -> MatrixSeries {
        PuiseuxSeries::raw(
            self.ram,
            self.lo,
            self.trunc,
            self.coeffs.iter().map(|c| UTMatrix::scalar(n, c)).collect(),
            n,
        )
    }
}

impl MatrixSeries {
    /// Field containing every entry.
    pub fn tower(&self) -> Tower {
        self.coeffs
            .iter()
            .flat_map(|m| m.rows().into_iter().flatten())
            .fold(Tower::Rat, |t, c| t.join(&c.tower()))
    }

    pub fn n(&self) -> usize {
        self.shape
    }

    /// The `(i, j)` entry as a scalar series.
    pub fn entry(&self, i: usize, j: usize) -> ScalarSeries {
        PuiseuxSeries::raw(
            self.ram,
            self.lo,
            self.trunc,
            self.coeffs.iter().map(|c| c.get(i, j).clone()).collect(),
            (),
        )
    }

    /// Coefficientwise `X^(k)`.
    pub fn superdiag_part(&self, k: usize) -> Result<Self> {
        if k >= self.shape {
            return Err(Error::IndexOutOfRange {
                index: k,
                n: self.shape,
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.superdiag_part(k))
            .collect::<Result<Vec<_>>>()?;
        Ok(PuiseuxSeries::raw(
            self.ram, self.lo, self.trunc, coeffs, self.shape,
        ))
    }

    /// The diagonal part, as a matrix series.
    pub fn semisimple_part(&self) -> Self {
        self.superdiag_part(0).expect("k = 0 is always in range")
    }

    /// Diagonal entry `(0, 0)`, used as the scalar semisimple part when the
    /// diagonal is constant.
    pub fn scalar_diagonal(&self) -> Option<ScalarSeries> {
        let d = self.entry(0, 0);
        (1..self.shape).all(|i| self.entry(i, i) == d).then_some(d)
    }

    /// Inverse of a matrix series whose diagonal entries are nonzero series.
    ///
    /// Splits `A = Dg + N` with `Dg` diagonal and `N` strictly upper
    /// triangular, then `A^-1 = sum_{k<n} (-Dg^-1 N)^k Dg^-1`. The leading
    /// coefficient itself may be singular (e.g. `J_n + x I`).
    pub fn inv(&self) -> Result<Self> {
        let n = self.shape;
        if self.is_zero() {
            return Err(Error::NotInvertible("0".into()));
        }
        let mut diag_inv: Option<Self> = None;
        for i in 0..n {
            let d = self.entry(i, i);
            if d.is_zero() {
                return Err(Error::NotInvertible(format!(
                    "{} (diagonal entry {} vanishes)",
                    self.lc().map(|c| c.to_string()).unwrap_or_default(),
                    i
                )));
            }
            let di = d.inv()?;
            let unit = UTMatrix::unit(n, i, i);
            let term = di.map_to_matrix(|c| unit.scale(c), n);
            diag_inv = Some(match diag_inv {
                None => term,
                Some(acc) => acc.add(&term),
            });
        }
        let dinv = diag_inv.expect("n >= 1");
        if n == 1 {
            return Ok(dinv);
        }
        let nil = self.sub(&self.semisimple_part());
        let step = dinv.mul(&nil).neg();
        let mut term = dinv.clone();
        let mut acc = dinv.clone();
        for _ in 1..n {
            term = step.mul(&term);
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}

impl ScalarSeries {
    fn map_to_matrix(&self, f: impl Fn(&Scalar) -> UTMatrix, n: usize) -> MatrixSeries {
        PuiseuxSeries::raw(
            self.ram,
            self.lo,
            self.trunc,
            self.coeffs.iter().map(f).collect(),
            n,
        )
    }
}

impl<R: Coeff + fmt::Display> fmt::Display for PuiseuxSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let ex = RBig::from_parts_signed(e.into(), (self.ram as i64).into());
            write!(f, "({})*x^({})", c, ex)?;
        }
        if first {
            write!(f, "0")?;
        }
        if !self.is_exact() {
            write!(f, " + O(x^({}))", self.precision())?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr<R> {
    ram: u32,
    lo: i64,
    trunc: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    coeffs: Vec<R>,
}

impl<R: Coeff + Serialize> Serialize for PuiseuxSeries<R> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            ram: self.ram,
            lo: self.lo,
            trunc: self.trunc,
            n: R::shape_dim(self.shape),
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de, R: Coeff + Deserialize<'de>> Deserialize<'de> for PuiseuxSeries<R> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = SeriesRepr::<R>::deserialize(d)?;
        let dim =
            r.n.or_else(|| r.coeffs.first().and_then(|c| R::shape_dim(c.shape())));
        let shape = R::shape_from_dim(dim).map_err(D::Error::custom)?;
        let known = (r.trunc - r.lo).max(0) as usize;
        if r.coeffs.iter().skip(known).any(|c| !c.is_zero()) {
            return Err(D::Error::custom("coefficients beyond the truncation bound"));
        }
        PuiseuxSeries::new(r.ram, r.lo, r.trunc, r.coeffs, shape).map_err(D::Error::custom)
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}
