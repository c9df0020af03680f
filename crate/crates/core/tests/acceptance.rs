//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dashu_ratio::RBig;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twistmod::verify::default_samples;
use twistmod::{
    borcherds_adjoint, build_module, build_twisted_structure, check_twisted, classify_cases,
    galois_conjugate, lift_root, ode_residual, poly_at_series, squarefree_check,
    structures_equivalent, twist_classify, uniqueness_probe, CaseL, DerivationSpec, Equivalence,
    LiftProblem, MatrixSeries, ModuleData, Poly, QuadExt, Scalar, ScalarSeries, Twist,
    TwistedStructure, UTMatrix,
};

type Outcome = Result<String, String>;

fn poly(s: &str) -> Poly {
    s.parse().unwrap()
}

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The derivation corpus as `(label, p, q)`.
const CORPUS: [(&str, &str, &str); 5] = [
    ("d/ds", "1", "1"),
    ("s d/ds", "s", "1"),
    ("s^2 d/ds", "s^2", "1"),
    ("(1+s)/(1-s) d/ds", "1+s", "1-s"),
    ("s^3/(s+2) d/ds", "s^3", "s+2"),
];

fn derivation(p: &str, q: &str) -> DerivationSpec {
    DerivationSpec::new(poly(p), poly(q)).unwrap()
}

fn criterion_1() -> Outcome {
    // Hand-evaluated: (case 1 alpha, case -1 alpha, case-0 verdicts on SAMPLE).
    const SAMPLE: [i64; 6] = [-2, -1, 0, 1, 2, 3];
    let table: [(Option<i64>, Option<i64>, [bool; 6]); 5] = [
        (Some(1), None, [true, true, false, true, true, true]),
        (None, None, [true, true, false, true, true, true]),
        (None, Some(-1), [true, true, false, true, true, true]),
        (Some(1), None, [true, false, false, false, true, true]),
        (None, Some(-1), [false, true, false, true, true, true]),
    ];
    for ((label, p, q), (c1, cm1, c0)) in CORPUS.iter().zip(table) {
        let r = classify_cases(&derivation(p, q));
        ensure(r.case1 == c1.map(int), || format!("{}: case 1 gives {:?}", label, r.case1))?;
        ensure(r.case_minus1 == cm1.map(int), || {
            format!("{}: case -1 gives {:?}", label, r.case_minus1)
        })?;
        for (a, want) in SAMPLE.iter().zip(c0) {
            ensure(r.case0_admissible(&int(*a)) == want, || {
                format!("{}: case 0 at alpha = {} disagrees", label, a)
            })?;
        }
    }
    Ok("5 derivations, forced alphas and 30 case-0 verdicts match".into())
}

/// Every admissible `(case, alpha)` for the corpus, case 0 sampled at alpha = 2.
fn corpus_cases() -> Vec<(&'static str, DerivationSpec, CaseL, Option<Scalar>)> {
    let mut out = Vec::new();
    for (label, p, q) in CORPUS {
        let d = derivation(p, q);
        let r = classify_cases(&d);
        if r.case1.is_some() {
            out.push((label, d.clone(), CaseL::One, None));
        }
        out.push((label, d.clone(), CaseL::Zero, Some(int(2))));
        if r.case_minus1.is_some() {
            out.push((label, d, CaseL::MinusOne, None));
        }
    }
    out
}

fn criterion_2(modules: &[ModuleData]) -> Outcome {
    for m in modules {
        let res = ode_residual(m);
        ensure(res.is_zero(), || {
            format!("n={} case {}: residual {}", m.n, m.case, res)
        })?;
        ensure(m.trunc() >= 32, || format!("precision {} < 32", m.trunc()))?;
        if m.case == CaseL::Zero {
            let d = &m.derivation;
            let want = &d.p().eval(&m.alpha) / &d.q().eval(&m.alpha);
            let got = m.s.coeff(1).get(0, 0).clone();
            ensure(got == want, || format!("case 0 x-coefficient {} != {}", got, want))?;
        }
    }
    Ok(format!("{} modules, residual exactly zero modulo x^32", modules.len()))
}

fn criterion_3(modules: &[ModuleData], specs: &[(DerivationSpec, CaseL, Option<Scalar>, usize)]) -> Outcome {
    let mut checked = 0;
    for m in modules {
        for (e, c) in m.s.terms() {
            ensure(c.toeplitz_check(), || format!("S_({}) not Toeplitz for n={}", e, m.n))?;
            checked += 1;
        }
    }
    for ((d, case, alpha, n), m) in specs.iter().zip(modules) {
        let again = build_module(d, *case, alpha.as_ref(), *n, 32).map_err(|e| e.to_string())?;
        let a = serde_json::to_string(m).unwrap();
        let b = serde_json::to_string(&again).unwrap();
        ensure(a == b, || format!("rebuild differs for n={} case {}", n, case))?;
    }
    Ok(format!("{} coefficients Toeplitz, {} rebuilds byte-identical", checked, modules.len()))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn oracle_scalar(r: &BigRational) -> Scalar {
    r.to_string().parse().unwrap()
}

/// Generalized binomial coefficients `C(e, k)`, `k < count`.
fn binomials(e: BigRational, count: usize) -> Vec<BigRational> {
    let mut out = vec![rat(1, 1)];
    for k in 1..count {
        let prev = out[k - 1].clone();
        out.push(prev * (e.clone() - rat(k as i64 - 1, 1)) / rat(k as i64, 1));
    }
    out
}

/// Closed-form `a = sqrt(1+x^3)`, `b = (3/2) x^2 (1+x^3)^(-1/2)` as maps
/// exponent -> coefficient below `bound`.
fn oracle_cubic(bound: i64) -> (Vec<BigRational>, Vec<BigRational>) {
    let n = bound as usize;
    let mut a = vec![rat(0, 1); n];
    let mut b = vec![rat(0, 1); n];
    for (k, c) in binomials(rat(1, 2), n).into_iter().enumerate() {
        if 3 * k < n {
            a[3 * k] = c;
        }
    }
    for (k, c) in binomials(rat(-1, 2), n).into_iter().enumerate() {
        if 3 * k + 2 < n {
            b[3 * k + 2] = c * rat(3, 2);
        }
    }
    (a, b)
}

fn module_dds(n: usize, trunc: i64) -> ModuleData {
    build_module(&derivation("1", "1"), CaseL::One, None, n, trunc).unwrap()
}

fn z2_minus(f: &Poly, m: &ModuleData) -> Result<LiftProblem, String> {
    let n = m.n;
    let s0 = m.semisimple().map_err(|e| e.to_string())?;
    let (t0, _) = poly_at_series(f, &s0).sqrt().map_err(|e| e.to_string())?;
    let phat = vec![
        poly_at_series(f, &m.s).neg(),
        MatrixSeries::zero(n, 1, twistmod::series::EXACT),
        MatrixSeries::constant(UTMatrix::identity(n)),
    ];
    LiftProblem::new(phat, t0).map_err(|e| e.to_string())
}

fn criterion_4() -> Outcome {
    const PREC: i64 = 24;
    let mut problems: Vec<(String, LiftProblem)> = Vec::new();
    for n in [2, 4] {
        let m = module_dds(n, 32);
        let t0 = ScalarSeries::monomial(Scalar::one(), 1, 1, 32);
        let p = LiftProblem::new(vec![m.s.neg(), m.identity()], t0).map_err(|e| e.to_string())?;
        problems.push((format!("Z-s n={}", n), p));
    }
    for n in [1, 2, 4] {
        problems.push((format!("Z^2-(s^3+1) n={}", n), z2_minus(&poly("s^3+1"), &module_dds(n, 32))?));
    }
    for n in [1, 2] {
        problems.push((format!("Z^2-s n={}", n), z2_minus(&poly("s"), &module_dds(n, 32))?));
    }
    for (label, p) in &problems {
        let t = lift_root(p, Some(PREC)).map_err(|e| format!("{}: {}", label, e))?;
        ensure(t.precision() >= RBig::from(PREC), || format!("{}: precision {}", label, t.precision()))?;
        let res = p.eval(&t);
        ensure(res.is_zero() && res.precision() >= RBig::from(PREC - 1), || {
            format!("{}: residual {} (precision {})", label, res, res.precision())
        })?;
        for k in p.n..=p.n + 1 {
            ensure(t.superdiag_part(k.min(p.n - 1)).is_ok(), || format!("{}: grading", label))?;
        }
        ensure(t.semisimple_part() == p.t0.to_matrix(p.n).truncate(t.trunc()), || {
            format!("{}: diagonal part differs from T0 I", label)
        })?;
    }

    // n = 2 against the closed-form aI + bJ solutions.
    let j = UTMatrix::jordan(2);
    let id = UTMatrix::identity(2);
    let m = module_dds(2, 32);
    let t = lift_root(&z2_minus(&poly("s^3+1"), &m)?, Some(PREC)).map_err(|e| e.to_string())?;
    let (a, b) = oracle_cubic(PREC);
    for e in 0..PREC {
        let want = id
            .scale(&oracle_scalar(&a[e as usize]))
            .add(&j.scale(&oracle_scalar(&b[e as usize])));
        ensure(t.coeff(e) == want, || format!("Z^2-(s^3+1): coefficient of x^{} differs", e))?;
    }
    let t = lift_root(&z2_minus(&poly("s"), &m)?, Some(PREC)).map_err(|e| e.to_string())?;
    for e in -1..2 * PREC {
        let want = match e {
            1 => id.clone(),
            -1 => j.scale(&Scalar::from_frac(1, 2)),
            _ => UTMatrix::zero(2),
        };
        ensure(t.coeff(e) == want, || format!("Z^2-s: coefficient of x^({}/2) differs", e))?;
    }
    Ok(format!("{} problems, residual zero to x^{}, n=2 oracles match", problems.len(), PREC))
}

fn random_squarefree(rng: &mut ChaCha8Rng) -> Poly {
    loop {
        let deg = rng.gen_range(1..=7usize);
        let mut cs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-3..=3)).collect();
        while cs[deg] == 0 {
            cs[deg] = rng.gen_range(-3..=3);
        }
        let f = Poly::from_ints(&cs);
        if squarefree_check(&f) {
            return f;
        }
    }
}

/// Nonzero integer roots of `f` in `[-3, 3]`.
fn small_roots(f: &Poly) -> Vec<i64> {
    (-3..=3).filter(|r| *r != 0 && f.eval(&int(*r)).is_zero()).collect()
}

fn criterion_5() -> Outcome {
    const COUNT: usize = 150;
    let mut rng = ChaCha8Rng::seed_from_u64(20240917);
    let dds = derivation("1", "1");
    let s2 = derivation("s^2", "1");
    let case1 = build_module(&dds, CaseL::One, None, 2, 12).unwrap();
    let case_m1 = build_module(&s2, CaseL::MinusOne, None, 2, 12).unwrap();
    let mut sigma = [0usize; 3];
    let mut total = 0;
    for _ in 0..COUNT {
        let f = random_squarefree(&mut rng);
        let ext = QuadExt::new(f.clone()).map_err(|e| e.to_string())?;
        // Case 0 at a root of f half the time, so both outcomes occur.
        let roots = small_roots(&f);
        let alpha = if !roots.is_empty() && rng.gen_bool(0.5) {
            roots[rng.gen_range(0..roots.len())]
        } else {
            [1, -1, 2, -2][rng.gen_range(0..4)]
        };
        let case0 = build_module(&dds, CaseL::Zero, Some(&int(alpha)), 2, 12).unwrap();
        for (k, m) in [&case1, &case0, &case_m1].into_iter().enumerate() {
            let r = twist_classify(&ext, m).map_err(|e| format!("f = {}: {}", f, e))?;
            // Oracle: the closed-form predicate evaluated directly.
            let want = match k {
                0 => f.coeff(0).is_zero(),
                1 => f.eval(&int(alpha)).is_zero(),
                _ => f.degree().unwrap() % 2 == 1,
            };
            ensure((r.g == Twist::Sigma) == want, || format!("case {} f = {}", m.case, f))?;
            sigma[k] += (r.g == Twist::Sigma) as usize;
            total += 1;
        }
    }
    ensure(sigma.iter().all(|c| *c > 0 && *c < COUNT), || format!("degenerate corpus {:?}", sigma))?;
    Ok(format!(
        "{} instances agree; sigma counts by case 1/0/-1: {}/{}/{}",
        total, sigma[0], sigma[1], sigma[2]
    ))
}

fn structure_corpus() -> Result<Vec<TwistedStructure>, String> {
    let dds = derivation("1", "1");
    let mut out = Vec::new();
    let bases: Vec<(DerivationSpec, CaseL, Option<i64>)> = vec![
        (dds.clone(), CaseL::One, None),
        (dds.clone(), CaseL::Zero, Some(-1)),
        (derivation("s", "1"), CaseL::Zero, Some(1)),
        (derivation("s^2", "1"), CaseL::MinusOne, None),
        (derivation("1+s", "1-s"), CaseL::One, None),
    ];
    let fs = ["s", "s^3+1", "s^3+s", "s^2+1", "s^3-s", "s^5-s+1"];
    for (d, case, alpha) in &bases {
        for n in [1, 2, 3] {
            let m = build_module(d, *case, alpha.map(int).as_ref(), n, 12).map_err(|e| e.to_string())?;
            for f in fs {
                let ext = QuadExt::new(poly(f)).map_err(|e| e.to_string())?;
                let ts = build_twisted_structure(&ext, &m, None)
                    .map_err(|e| format!("f = {} over case {} n = {}: {}", f, case, n, e))?;
                out.push(ts);
            }
        }
    }
    Ok(out)
}

fn describe(ts: &TwistedStructure) -> String {
    format!("f = {}, case {}, n = {}", ts.f.f(), ts.base.case, ts.base.n)
}

fn criterion_6(corpus: &[TwistedStructure]) -> Outcome {
    let mut sigma = 0;
    for ts in corpus {
        let rep = check_twisted(ts, &default_samples(ts));
        let bad: Vec<&str> = rep.failures().map(|c| c.name.as_str()).collect();
        ensure(bad.is_empty(), || format!("{}: failed {:?}", describe(ts), bad))?;
        for required in ["multiplicative(t*t=f)", "support", "derivation(t)"] {
            ensure(rep.checks.iter().any(|c| c.name == required), || {
                format!("missing check {}", required)
            })?;
        }
        let t2 = ts.t.mul(&ts.t).sub(&poly_at_series(ts.f.f(), &ts.base.s));
        ensure(t2.is_zero(), || format!("{}: T^2 != f(S)", describe(ts)))?;
        if ts.g == Twist::Sigma {
            sigma += 1;
            ensure(ts.t.terms().all(|(e, _)| ts.ram == 2 && e.rem_euclid(2) == 1), || {
                format!("{}: exponent outside 1/2 + Z", describe(ts))
            })?;
        }
    }
    Ok(format!("{} structures pass ({} sigma-twisted)", corpus.len(), sigma))
}

fn criterion_7(corpus: &[TwistedStructure]) -> Outcome {
    for ts in corpus {
        let c = galois_conjugate(ts);
        ensure(c != *ts, || format!("{}: conjugate equals original", describe(ts)))?;
        ensure(galois_conjugate(&c) == *ts, || format!("{}: not an involution", describe(ts)))?;
        ensure(check_twisted(&c, &default_samples(&c)).all_pass(), || {
            format!("{}: conjugate fails checks", describe(ts))
        })?;
        let eq = structures_equivalent(ts, &c).map_err(|e| e.to_string())?;
        ensure(eq == Equivalence::Conjugate, || format!("{}: classified {:?}", describe(ts), eq))?;

        // Each of the two diagonal parts +-T0 determines exactly one root.
        let p = z2_minus(ts.f.f(), &ts.base)?;
        let neg = LiftProblem { t0: p.t0.neg(), ..p.clone() };
        let probe = |prob: &LiftProblem, t: &MatrixSeries| uniqueness_probe(prob, t).map_err(|e| e.to_string());
        ensure(probe(&p, &ts.t)? && !probe(&p, &c.t)?, || format!("{}: +T0 probe", describe(ts)))?;
        ensure(probe(&neg, &c.t)? && !probe(&neg, &ts.t)?, || format!("{}: -T0 probe", describe(ts)))?;
    }
    Ok(format!("{} orbits of size 2", corpus.len()))
}

fn criterion_8() -> Outcome {
    let dds = derivation("1", "1");
    let order = 6;
    for b in ["1", "s", "s^3-2*s+1/2"] {
        let y = borcherds_adjoint(&Poly::one(), &poly(b), &dds, order).map_err(|e| e.to_string())?;
        ensure(y.terms().count() == 1 && y.coeff(0) == poly(b), || format!("Y(1,x)({}) = {}", b, y))?;
    }
    for a in ["s", "s^2", "3*s^4-s"] {
        let y = borcherds_adjoint(&poly(a), &Poly::one(), &dds, order).map_err(|e| e.to_string())?;
        ensure(y.coeff(0) == poly(a), || format!("Y({},x)1 at x=0", a))?;
    }
    let y = borcherds_adjoint(&poly("s^2"), &Poly::one(), &dds, order).map_err(|e| e.to_string())?;
    let want = [poly("s^2"), poly("2*s"), Poly::one()];
    ensure((0..order as i64).all(|e| y.coeff(e) == *want.get(e as usize).unwrap_or(&Poly::zero())), || {
        format!("Y(s^2,x)1 = {}", y)
    })?;
    Ok("vacuum, creation and Y(s^2,x)1 = s^2+2sx+x^2 exact".into())
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |n: u32, budget: u64, start: Instant, out: Outcome| {
        let took = start.elapsed();
        let over = took > Duration::from_secs(budget);
        let (tag, msg) = match (&out, over) {
            (Ok(m), false) => ("PASS", m.clone()),
            (Ok(m), true) => ("FAIL", format!("over time budget; {}", m)),
            (Err(m), _) => ("FAIL", m.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("criterion {}: {} [{:.2}s / {}s] {}", n, tag, took.as_secs_f64(), budget, msg);
    };

    let t = Instant::now();
    report(1, 1, t, criterion_1());

    let t = Instant::now();
    let mut specs = Vec::new();
    for (_, d, case, alpha) in corpus_cases() {
        for n in [1, 2, 4, 8] {
            specs.push((d.clone(), case, alpha.clone(), n));
        }
    }
    let built: Result<Vec<ModuleData>, String> = specs
        .iter()
        .map(|(d, case, alpha, n)| build_module(d, *case, alpha.as_ref(), *n, 32).map_err(|e| e.to_string()))
        .collect();
    match built {
        Ok(modules) => {
            report(2, 10, t, criterion_2(&modules));
            let t = Instant::now();
            report(3, 5, t, criterion_3(&modules, &specs));
        }
        Err(e) => {
            report(2, 10, t, Err(e.clone()));
            report(3, 5, t, Err(e));
        }
    }

    let t = Instant::now();
    report(4, 10, t, criterion_4());
    let t = Instant::now();
    report(5, 30, t, criterion_5());

    let t = Instant::now();
    match structure_corpus() {
        Ok(corpus) => {
            report(6, 20, t, criterion_6(&corpus));
            let t = Instant::now();
            report(7, 5, t, criterion_7(&corpus));
        }
        Err(e) => {
            report(6, 20, t, Err(e.clone()));
            report(7, 5, t, Err(e));
        }
    }

    let t = Instant::now();
    report(8, 1, t, criterion_8());

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
