//! Upper-triangular matrices over [`Scalar`] with the superdiagonal grading
//! `X = X^(0) + X^(1) + ... + X^(n-1)`, where `X^(k)` keeps only the entries
//! `x_{i,i+k}`.
//!
//! Indices are zero-based throughout: `E(0, 2)` in dimension 3 is the
//! matrix unit usually written `E_13`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{Poly, Scalar};
use crate::MAX_DIM;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "matrix dimension must be at least 1".into(),
        ));
    }
    if n > MAX_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UTMatrix {
    n: usize,
    /// Row-major, `n * n`; entries below the diagonal are always zero.
    entries: Vec<Scalar>,
}

impl UTMatrix {
    /// Panics if `n` is zero or above [`MAX_DIM`].
    pub fn zero(n: usize) -> Self {
        check_dim(n).expect("matrix dimension");
        UTMatrix {
            n,
            entries: vec![Scalar::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &Scalar::one())
    }

    /// `c * I`.
    pub fn scalar(n: usize, c: &Scalar) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = c.clone();
        }
        m
    }

    /// The nilpotent Jordan block `J_n` (ones on the first superdiagonal).
    pub fn jordan(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n.saturating_sub(1) {
            m.entries[i * n + i + 1] = Scalar::one();
        }
        m
    }

    /// Matrix unit with a one at `(i, j)`, `i <= j`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        assert!(i <= j && j < n, "matrix unit must be upper triangular");
        let mut m = Self::zero(n);
        m.entries[i * n + j] = Scalar::one();
        m
    }

    pub fn diagonal(diag: Vec<Scalar>) -> Self {
        let n = diag.len();
        let mut m = Self::zero(n);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        check_dim(n)?;
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "row {} has length {}, expected {}",
                    i,
                    row.len(),
                    n
                )));
            }
            for (j, v) in row.into_iter().enumerate() {
                if j < i && !v.is_zero() {
                    return Err(Error::InvalidInput(format!(
                        "entry ({}, {}) below the diagonal is nonzero",
                        i, j
                    )));
                }
                entries.push(v);
            }
        }
        Ok(UTMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    /// Sets an entry on or above the diagonal.
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(
            i <= j && j < self.n,
            "entry ({}, {}) is not upper triangular",
            i,
            j
        );
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn diag(&self) -> Vec<Scalar> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        self.superdiag_parts_above(1).all(|z| z)
    }

    fn superdiag_parts_above(&self, k0: usize) -> impl Iterator<Item = bool> + '_ {
        (k0..self.n).map(move |k| (0..self.n - k).all(|i| self.get(i, i + k).is_zero()))
    }

    fn zip(&self, o: &Self, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Self {
        assert_eq!(self.n, o.n, "dimension mismatch");
        let mut m = Self::zero(self.n);
        for i in 0..self.n {
            for j in i..self.n {
                m.entries[i * self.n + j] = f(self.get(i, j), o.get(i, j));
            }
        }
        m
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        UTMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_one() {
            return self.clone();
        }
        UTMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut m = Self::zero(self.n);
        m.mul_acc(self, o);
        m
    }

    /// `self += a * b`.
    pub fn mul_acc(&mut self, a: &Self, b: &Self) {
        assert!(self.n == a.n && a.n == b.n, "dimension mismatch");
        let n = self.n;
        for i in 0..n {
            for k in i..n {
                let x = a.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in k..n {
                    let y = b.get(k, j);
                    if y.is_zero() {
                        continue;
                    }
                    let e = &mut self.entries[i * n + j];
                    *e = &*e + &(x * y);
                }
            }
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// `p(X)` by Horner.
    pub fn eval_poly(&self, p: &Poly) -> Self {
        p.coeffs().iter().rev().fold(Self::zero(self.n), |acc, c| {
            acc.mul(self).add(&Self::scalar(self.n, c))
        })
    }

    /// The component `X^(k)` on the `k`-th superdiagonal.
    pub fn superdiag_part(&self, k: usize) -> Result<Self> {
        if k >= self.n {
            return Err(Error::IndexOutOfRange {
                index: k,
                n: self.n,
            });
        }
        let mut m = Self::zero(self.n);
        for i in 0..self.n - k {
            m.entries[i * self.n + i + k] = self.get(i, i + k).clone();
        }
        Ok(m)
    }

    /// Exact inverse by back substitution.
    pub fn ut_inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut inv_diag = Vec::with_capacity(n);
        for i in 0..n {
            inv_diag.push(self.get(i, i).inv().map_err(|_| Error::SingularMatrix(i))?);
        }
        let mut m = Self::zero(n);
        // column by column: (X Y)_{ij} = sum_{k=i..j} x_ik y_kj = delta_ij
        for j in 0..n {
            m.entries[j * n + j] = inv_diag[j].clone();
            for i in (0..j).rev() {
                let mut acc = Scalar::zero();
                for k in i + 1..=j {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc = &acc + &(a * m.get(k, j));
                    }
                }
                m.entries[i * n + j] = -(&acc * &inv_diag[i]);
            }
        }
        Ok(m)
    }

    /// True iff every superdiagonal is constant, i.e. `X` is a polynomial in `J_n`.
    pub fn toeplitz_check(&self) -> bool {
        (0..self.n).all(|k| {
            let first = self.get(0, k);
            (1..self.n - k).all(|i| self.get(i, i + k) == first)
        })
    }
}

impl fmt::Display for UTMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.chunks(self.n).enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            write!(f, "{}", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    rows: Vec<Vec<Scalar>>,
}

impl Serialize for UTMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            n: self.n,
            rows: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for UTMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MatrixRepr::deserialize(d)?;
        if r.rows.len() != r.n {
            return Err(serde::de::Error::custom(format!(
                "expected {} rows, got {}",
                r.n,
                r.rows.len()
            )));
        }
        UTMatrix::from_rows(r.rows).map_err(serde::de::Error::custom)
    }
}
