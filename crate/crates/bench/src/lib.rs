//! Fixed inputs shared by the benchmarks.

use twistmod::{
    auto_semisimple_root, build_module, poly_at_series, series::EXACT, CaseL, DerivationSpec,
    LiftProblem, MatrixSeries, ModuleData, Poly, QuadExt,
};

pub fn poly(s: &str) -> Poly {
    s.parse().expect("fixture polynomial")
}

/// `s^2 d/ds`, the derivation with a double pole at infinity.
pub fn square_derivation() -> DerivationSpec {
    DerivationSpec::new(poly("s^2"), Poly::one()).expect("coprime")
}

pub fn case_minus1_module(n: usize, trunc: i64) -> ModuleData {
    build_module(&square_derivation(), CaseL::MinusOne, None, n, trunc).expect("admissible")
}

pub fn dds_module(n: usize, trunc: i64) -> ModuleData {
    let d = DerivationSpec::new(Poly::one(), Poly::one()).expect("coprime");
    build_module(&d, CaseL::One, None, n, trunc).expect("admissible")
}

/// `Z^2 - f(S)` with its automatically chosen diagonal root.
pub fn sqrt_problem(m: &ModuleData, f: &Poly) -> LiftProblem {
    let fs = poly_at_series(f, &m.s);
    let phat = vec![fs.neg(), MatrixSeries::zero(m.n, 1, EXACT), m.identity()];
    let t0 = auto_semisimple_root(&phat).expect("semisimple root");
    LiftProblem::new(phat, t0).expect("valid problem")
}

pub fn hyperelliptic() -> QuadExt {
    QuadExt::new(poly("s^5-s+1")).expect("squarefree")
}
