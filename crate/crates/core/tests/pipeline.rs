use twistmod::numeric::parse::{parse_poly_s, parse_poly_z};
use twistmod::verify::{default_samples, KElement};
use twistmod::{
    build_module, build_twisted_structure, check_twisted, check_untwisted, default_alphas,
    eval_rational, galois_conjugate, lift_root, ode_residual, CaseL, DerivationSpec, LiftProblem,
    MatrixSeries, ModuleData, Poly, QuadExt, Scalar, ScalarSeries, TwistedStructure, UTMatrix,
    VerifyReport,
};

fn poly(s: &str) -> Poly {
    s.parse().unwrap()
}

fn der(p: &str, q: &str) -> DerivationSpec {
    DerivationSpec::new(poly(p), poly(q)).unwrap()
}

fn roundtrip<T: serde::Serialize + serde::de::DeserializeOwned + PartialEq + std::fmt::Debug>(v: &T) {
    let text = serde_json::to_string(v).unwrap();
    let back: T = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, v);
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
}

#[test]
fn modules_satisfy_ode_and_leading_data() {
    let cases = [
        (der("1", "1"), CaseL::Zero, Some(Scalar::from_int(3))),
        (der("1+s^2", "1"), CaseL::One, None),
        (der("s^2", "1"), CaseL::MinusOne, None),
        (der("1-s", "1+s"), CaseL::Zero, Some(Scalar::from_int(2))),
    ];
    for (d, case, alpha) in cases {
        for n in [1, 3] {
            let m = build_module(&d, case, alpha.as_ref(), n, 16).unwrap();
            assert!(ode_residual(&m).is_zero(), "{:?} n={}", case, n);
            let ss = m.semisimple().unwrap();
            assert_eq!(ss.ld_num(), Some(case.as_i8() as i64));
            if case == CaseL::One {
                assert!(m.s.lo() >= 0);
            }
            if let (CaseL::Zero, Some(a)) = (case, &alpha) {
                assert_eq!(ss.lc(), Some(a));
                let slope = &d.p().eval(a) / &d.q().eval(a);
                assert_eq!(ss.coeff(1), slope);
            }
            assert!(m.s.coeffs().iter().all(|c| c.toeplitz_check()));
            assert!(check_untwisted(&m, &default_alphas()).all_pass());
            roundtrip(&m);
        }
    }
}

#[test]
fn case0_shifted_equals_case1_of_shifted_derivation() {
    for alpha in [1, 2, -3] {
        let a = Scalar::from_int(alpha);
        for n in [1, 2, 3] {
            let m0 = build_module(&der("1", "1"), CaseL::Zero, Some(&a), n, 12).unwrap();
            let shifted = eval_rational(&Poly::from_ints(&[-alpha, 1]), &Poly::one(), &m0).unwrap();
            let m1 = build_module(&der("1", "1"), CaseL::One, None, n, 12).unwrap();
            assert_eq!(shifted.truncate(m1.trunc()), m1.s, "alpha={} n={}", alpha, n);
        }
    }
}

#[test]
fn build_is_deterministic() {
    let d = der("s^3-2", "1+s");
    let a = build_module(&d, CaseL::MinusOne, None, 4, 14);
    let b = build_module(&d, CaseL::MinusOne, None, 4, 14);
    assert_eq!(a, b);
}

fn sqrt_problem(m: &ModuleData, f: &Poly) -> LiftProblem {
    let fs = twistmod::poly_at_series(f, &m.s);
    let phat = vec![fs.neg(), MatrixSeries::zero(m.n, 1, twistmod::series::EXACT), m.identity()];
    let t0 = twistmod::auto_semisimple_root(&phat).unwrap();
    LiftProblem::new(phat, t0).unwrap()
}

#[test]
fn lift_diagonal_and_relift() {
    let m = build_module(&der("1", "1"), CaseL::Zero, Some(&Scalar::from_int(2)), 3, 16).unwrap();
    let prob = sqrt_problem(&m, &poly("s^3+1"));
    let t = lift_root(&prob, None).unwrap();
    assert!(prob.eval(&t).is_zero());
    assert_eq!(t.semisimple_part(), prob.t0.to_matrix(3).truncate(t.trunc()));

    let again = LiftProblem::new(prob.phat.clone(), t.entry(0, 0)).unwrap();
    assert_eq!(lift_root(&again, None).unwrap(), t);
}

#[test]
fn linear_lift_is_closed_form() {
    let m = build_module(&der("1+s", "1"), CaseL::One, None, 3, 12).unwrap();
    // (s + 2) Z - (s^2 - 1)
    let p1 = m.s.add_constant(&Scalar::from_int(2));
    let p0 = twistmod::poly_at_series(&poly("1-s^2"), &m.s);
    let expect = p0.neg().mul(&p1.inv().unwrap());
    let t0 = expect.entry(0, 0).truncate(1);
    let prob = LiftProblem::new(vec![p0, p1], t0).unwrap();
    let t = lift_root(&prob, None).unwrap();
    let bound = t.trunc().min(expect.trunc());
    assert_eq!(t.truncate(bound), expect.truncate(bound));
}

#[test]
fn restriction_to_base_field_is_unchanged() {
    let m = build_module(&der("s^2", "1"), CaseL::MinusOne, None, 2, 12).unwrap();
    let ts = build_twisted_structure(&QuadExt::new(poly("s^3+1")).unwrap(), &m, None).unwrap();
    for (num, den) in [("s", "1"), ("s^2-1", "s-3"), ("1", "s+5")] {
        let k = KElement::new(poly(num), poly(den), 0).unwrap();
        assert_eq!(k.eval(&ts).unwrap(), eval_rational(&poly(num), &poly(den), &m).unwrap());
    }
}

#[test]
fn reports_are_reproducible_and_roundtrip() {
    let m = build_module(&der("1", "1"), CaseL::One, None, 2, 10).unwrap();
    let ts = build_twisted_structure(&QuadExt::new(poly("s^3+2")).unwrap(), &m, None).unwrap();
    let a = check_twisted(&ts, &default_samples(&ts));
    let b = check_twisted(&ts, &default_samples(&ts));
    assert!(a.all_pass());
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    roundtrip::<VerifyReport>(&a);
    roundtrip::<TwistedStructure>(&ts);
    roundtrip::<TwistedStructure>(&galois_conjugate(&ts));
    roundtrip::<MatrixSeries>(&ts.t);
    roundtrip::<ScalarSeries>(&ts.t.entry(0, 0));
    roundtrip::<UTMatrix>(ts.t.coeffs().last().unwrap());
}

#[test]
fn parsers_keep_variables_apart() {
    assert!(parse_poly_s("s*Z+1").is_err());
    assert!(parse_poly_z("s^2+1").is_err());
    let z = parse_poly_z("Z^2-(s^3+1)").unwrap();
    assert_eq!(z, vec![poly("-s^3-1"), Poly::zero(), Poly::one()]);
}
