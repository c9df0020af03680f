//! Exact computation of finite-dimensional vertex-algebra modules over the
//! differential field `C(s)` with derivation `D = (p/q) d/ds`, and of their
//! twisted extensions to quadratic fields `C(s)[t]/(t^2 - f(s))`.
//!
//! The pipeline is
//!
//! 1. [`modbuild`]: classify the admissible leading data of `S(x) = Y_M(s, x)`
//!    and solve `q(S) S' = p(S)` for the unique indecomposable module of
//!    each dimension;
//! 2. [`lift`]: lift a semisimple Puiseux root of `P(Z)` to a full
//!    upper-triangular matrix series root, one superdiagonal at a time;
//! 3. [`twist`]: for `P(Z) = Z^2 - f`, decide whether the lifted structure is
//!    untwisted or twisted by `t -> -t`;
//! 4. [`verify`]: check the module axioms at the available precision.
//!
//! All arithmetic is exact over `Q(i)` with at most one adjoined square root.

pub mod error;
pub mod lift;
pub mod modbuild;
pub mod numeric;
pub mod ring;
pub mod series;
pub mod twist;
pub mod utmatrix;
pub mod verify;

pub use error::{Error, Result};
pub use lift::{
    auto_semisimple_root, derivation_compat_check, descent_check, lift_root, uniqueness_probe,
    LiftProblem,
};
pub use modbuild::{
    build_module, classify_cases, eval_rational, ode_residual, CaseL, CaseReport, DerivationSpec,
    ModuleData,
};
pub use numeric::{adjoin_sqrt, poly_gcd, squarefree_check, Poly, Scalar, Tower};
pub use ring::Coeff;
pub use series::{poly_at_series, support_check, MatrixSeries, PuiseuxSeries, ScalarSeries};
pub use twist::{
    build_twisted_structure, galois_conjugate, structures_equivalent, twist_classify,
    twist_predicate, valuation_twist, Equivalence, QuadExt, Twist, TwistReport, TwistedStructure,
};
pub use utmatrix::UTMatrix;
pub use verify::{
    borcherds_adjoint, check_twisted, check_untwisted, default_alphas, default_samples, Check,
    KElement, VerifyReport,
};

/// Largest module dimension accepted.
pub const MAX_DIM: usize = 16;
/// Default exponent bound for computed series.
pub const DEFAULT_TRUNC: i64 = 32;
