use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use twistmod::numeric::parse::parse_poly_z;
use twistmod::{
    auto_semisimple_root, build_module, build_twisted_structure, check_twisted, check_untwisted,
    classify_cases, default_alphas, default_samples, lift_root, poly_at_series, squarefree_check,
    twist_classify, twist_predicate, valuation_twist, CaseL, DerivationSpec, Error, LiftProblem,
    MatrixSeries, ModuleData, Poly, QuadExt, Scalar, ScalarSeries, Tower, Twist, TwistedStructure,
    VerifyReport, DEFAULT_TRUNC,
};

#[derive(Parser)]
#[command(
    name = "twistmod",
    version,
    about = "Exact vertex-algebra modules over C(s) and their quadratic twists"
)]
struct Cli {
    /// Exponent bound for computed series.
    #[arg(long, global = true)]
    trunc: Option<i64>,
    /// Largest scalar field an output may use.
    #[arg(long, global = true, value_enum, default_value_t = TowerLimit::Ext)]
    tower: TowerLimit,
    /// Seed for randomized corpora.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq, PartialOrd, Ord)]
enum TowerLimit {
    Rat,
    Gauss,
    Ext,
}

#[derive(Subcommand)]
enum Cmd {
    /// Report which leading data admit a module for D = (p/q) d/ds.
    Classify {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        /// Case-0 candidates to evaluate.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alpha: Vec<String>,
    },
    /// Build the n-dimensional module for a case.
    Build {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        case: i8,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long)]
        n: usize,
    },
    /// Lift a semisimple root of P(Z) over a module.
    Lift {
        #[arg(long)]
        module: PathBuf,
        /// Polynomial in Z with coefficients in C[s].
        #[arg(long)]
        poly: String,
        /// `auto` or a JSON file holding a scalar series.
        #[arg(long, default_value = "auto")]
        t0: String,
    },
    /// Classify and build the structure on C(s)[t]/(t^2 - f).
    Twist {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        f: String,
        /// Where to write the classification report (stdout when omitted).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check module axioms; exit status 1 when any check fails.
    Verify {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        structure: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Randomized twist-classification corpus, written as CSV.
    Sweep {
        /// Number of polynomials f; each is paired with one module per case.
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 7)]
        max_degree: usize,
        #[arg(long, default_value_t = 3)]
        coeff_bound: i64,
    },
}

enum Failure {
    Error(Error),
    ChecksFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("{}: {}", path.display(), e))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))
}

fn emit_to(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_err(p, e)),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{}", text.trim_end()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(Error::InvalidInput(e.to_string()))
                }
                _ => Ok(()),
            }
        }
    }
}

fn emit_json<T: Serialize>(path: Option<&Path>, v: &T) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(v).expect("serializable");
    text.push('\n');
    emit_to(path, &text)
}

fn tower_rank(t: &Tower) -> TowerLimit {
    match t {
        Tower::Rat => TowerLimit::Rat,
        Tower::Gauss => TowerLimit::Gauss,
        Tower::Ext(_) => TowerLimit::Ext,
    }
}

fn check_tower(limit: TowerLimit, s: &MatrixSeries) -> Result<(), Error> {
    let t = s.tower();
    if tower_rank(&t) > limit {
        return Err(Error::TowerExhausted(format!("result needs {}", t)));
    }
    Ok(())
}

fn load_module(path: &Path) -> Result<ModuleData, Error> {
    let m: ModuleData = read_json(path)?;
    m.validate()?;
    Ok(m)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let out = cli.out.as_deref();
    match cli.cmd {
        Cmd::Classify { p, q, alpha } => {
            let d = DerivationSpec::new(p.parse()?, q.parse()?)?;
            let alphas = alpha
                .iter()
                .map(|a| a.parse())
                .collect::<Result<Vec<Scalar>, _>>()?;
            emit_json(out, &classify_cases(&d).to_json(&alphas))?;
        }
        Cmd::Build {
            p,
            q,
            case,
            alpha,
            n,
        } => {
            let d = DerivationSpec::new(p.parse()?, q.parse()?)?;
            let case = CaseL::try_from(case)?;
            let alpha: Option<Scalar> = alpha.map(|a| a.parse()).transpose()?;
            let m = build_module(
                &d,
                case,
                alpha.as_ref(),
                n,
                cli.trunc.unwrap_or(DEFAULT_TRUNC),
            )?;
            check_tower(cli.tower, &m.s)?;
            emit_json(out, &m)?;
        }
        Cmd::Lift { module, poly, t0 } => {
            let m = load_module(&module)?;
            let phat: Vec<MatrixSeries> = parse_poly_z(&poly)?
                .iter()
                .map(|c| poly_at_series(c, &m.s))
                .collect();
            let t0: ScalarSeries = if t0 == "auto" {
                auto_semisimple_root(&phat)?
            } else {
                read_json(Path::new(&t0))?
            };
            let t = lift_root(&LiftProblem::new(phat, t0)?, cli.trunc)?;
            check_tower(cli.tower, &t)?;
            emit_json(out, &t)?;
        }
        Cmd::Twist { module, f, report } => {
            let m = load_module(&module)?;
            let ext = QuadExt::new(f.parse()?)?;
            let r = twist_classify(&ext, &m)?;
            let ts = build_twisted_structure(&ext, &m, cli.trunc)?;
            check_tower(cli.tower, &ts.t)?;
            emit_json(out, &ts)?;
            emit_json(report.as_deref(), &r)?;
        }
        Cmd::Verify {
            module,
            structure,
            report,
        } => {
            let m = load_module(&module)?;
            let mut rep = check_untwisted(&m, &default_alphas());
            if let Some(path) = structure {
                let ts: TwistedStructure = read_json(&path)?;
                ts.validate()?;
                if ts.base != m {
                    return Err(Error::Incompatible(
                        "structure was built over a different module".into(),
                    )
                    .into());
                }
                let tw = check_twisted(&ts, &default_samples(&ts));
                rep.checks.extend(tw.checks);
                rep.precision_used = tw.precision_used;
            }
            let pass = rep.all_pass();
            let path = report.as_deref().or(out);
            emit_json(path, &rep)?;
            if path.is_some() {
                print_summary(&rep);
            }
            if !pass {
                return Err(Failure::ChecksFailed);
            }
        }
        Cmd::Sweep {
            count,
            max_degree,
            coeff_bound,
        } => {
            let text = sweep(
                cli.seed,
                count,
                max_degree,
                coeff_bound,
                cli.trunc.unwrap_or(12),
            )?;
            emit_to(out, &text)?;
        }
    }
    Ok(())
}

fn print_summary(rep: &VerifyReport) {
    let failed: Vec<&str> = rep.failures().map(|c| c.name.as_str()).collect();
    println!(
        "{}",
        json!({"pass": failed.is_empty(), "checks": rep.checks.len(), "failed": failed})
    );
}

fn random_squarefree(rng: &mut ChaCha8Rng, max_degree: usize, bound: i64) -> Poly {
    loop {
        let deg = rng.gen_range(1..=max_degree);
        let mut cs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-bound..=bound)).collect();
        while cs[deg] == 0 {
            cs[deg] = rng.gen_range(-bound..=bound);
        }
        let f = Poly::from_ints(&cs);
        if squarefree_check(&f) {
            return f;
        }
    }
}

/// One module per case: `d/ds` for cases 1 and 0, `s^2 d/ds` for case -1.
fn sweep_modules(rng: &mut ChaCha8Rng, trunc: i64) -> Result<Vec<ModuleData>, Error> {
    let dds = DerivationSpec::new(Poly::one(), Poly::one())?;
    let s2 = DerivationSpec::new(Poly::from_ints(&[0, 0, 1]), Poly::one())?;
    let alpha = Scalar::from_int([1, -1, 2, -2][rng.gen_range(0..4)]);
    Ok(vec![
        build_module(&dds, CaseL::One, None, 2, trunc)?,
        build_module(&dds, CaseL::Zero, Some(&alpha), 2, trunc)?,
        build_module(&s2, CaseL::MinusOne, None, 2, trunc)?,
    ])
}

fn sweep(
    seed: u64,
    count: usize,
    max_degree: usize,
    bound: i64,
    trunc: i64,
) -> Result<String, Error> {
    if max_degree == 0 || bound <= 0 {
        return Err(Error::InvalidInput(
            "need max-degree >= 1 and coeff-bound >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidInput(e.to_string());
    w.write_record(["case", "f", "predicted", "computed", "agree"])
        .map_err(io)?;
    for _ in 0..count {
        let f = random_squarefree(&mut rng, max_degree, bound);
        let ext = QuadExt::new(f)?;
        for m in sweep_modules(&mut rng, trunc)? {
            let (_, holds) = twist_predicate(&ext, &m);
            let predicted = if holds { Twist::Sigma } else { Twist::Id };
            let (_, computed) = valuation_twist(&ext, &m)?;
            w.write_record([
                m.case.to_string(),
                ext.f().to_string(),
                predicted.to_string(),
                computed.to_string(),
                (predicted == computed).to_string(),
            ])
            .map_err(io)?;
        }
    }
    String::from_utf8(
        w.into_inner()
            .map_err(|e| Error::InvalidInput(e.to_string()))?,
    )
    .map_err(|e| Error::InvalidInput(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::ChecksFailed) => ExitCode::from(1),
        Err(Failure::Error(e)) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()}));
            ExitCode::from(2)
        }
    }
}
