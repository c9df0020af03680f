//! The coefficient rings a [`crate::series::PuiseuxSeries`] can carry.

use std::fmt::Debug;

use crate::error::Result;
use crate::numeric::{Poly, Scalar};
use crate::utmatrix::UTMatrix;

/// A unital ring that is also a vector space over [`Scalar`].
///
/// `Shape` carries whatever is needed to build a zero of the right size
/// (the dimension for matrices, nothing for scalars).
pub trait Coeff: Clone + PartialEq + Debug {
    type Shape: Copy + Eq + Debug;

    fn shape(&self) -> Self::Shape;
    fn zero(shape: Self::Shape) -> Self;
    fn one(shape: Self::Shape) -> Self;
    fn is_zero(&self) -> bool;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Scalar) -> Self;

    /// `self += a * b`.
    fn mul_acc(&mut self, a: &Self, b: &Self) {
        *self = self.add(&a.mul(b));
    }

    /// Dimension recorded in JSON (`None` for scalar-like rings).
    fn shape_dim(shape: Self::Shape) -> Option<usize>;
    fn shape_from_dim(dim: Option<usize>) -> Result<Self::Shape>;
}

impl Coeff for Scalar {
    type Shape = ();

    fn shape(&self) {}
    fn zero(_: ()) -> Self {
        Scalar::zero()
    }
    fn one(_: ()) -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Scalar) -> Self {
        self * c
    }
    fn shape_dim(_: ()) -> Option<usize> {
        None
    }
    fn shape_from_dim(_: Option<usize>) -> Result<()> {
        Ok(())
    }
}

impl Coeff for Poly {
    type Shape = ();

    fn shape(&self) {}
    fn zero(_: ()) -> Self {
        Poly::zero()
    }
    fn one(_: ()) -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Poly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Poly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Poly::mul(self, o)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn scale(&self, c: &Scalar) -> Self {
        Poly::scale(self, c)
    }
    fn shape_dim(_: ()) -> Option<usize> {
        None
    }
    fn shape_from_dim(_: Option<usize>) -> Result<()> {
        Ok(())
    }
}

impl Coeff for UTMatrix {
    type Shape = usize;

    fn shape(&self) -> usize {
        self.n()
    }
    fn zero(n: usize) -> Self {
        UTMatrix::zero(n)
    }
    fn one(n: usize) -> Self {
        UTMatrix::identity(n)
    }
    fn is_zero(&self) -> bool {
        UTMatrix::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        UTMatrix::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        UTMatrix::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        UTMatrix::mul(self, o)
    }
    fn neg(&self) -> Self {
        UTMatrix::neg(self)
    }
    fn scale(&self, c: &Scalar) -> Self {
        UTMatrix::scale(self, c)
    }
    fn mul_acc(&mut self, a: &Self, b: &Self) {
        UTMatrix::mul_acc(self, a, b)
    }
    fn shape_dim(n: usize) -> Option<usize> {
        Some(n)
    }
    fn shape_from_dim(dim: Option<usize>) -> Result<usize> {
        let n =
            dim.ok_or_else(|| crate::Error::InvalidInput("matrix series needs \"n\"".into()))?;
        crate::utmatrix::check_dim(n)?;
        Ok(n)
    }
}
