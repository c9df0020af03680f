//! Exact scalars and univariate polynomials over them.

pub mod parse;
pub mod poly;
pub mod scalar;

pub use parse::{parse_poly_s, parse_poly_z, parse_scalar};
pub use poly::{poly_gcd, squarefree_check, Poly};
pub use scalar::{adjoin_sqrt, Gauss, Scalar, Tower};
