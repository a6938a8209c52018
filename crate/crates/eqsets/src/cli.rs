//! The `eqsets` command line.
//!
//! Exit codes: 0 success, 1 verification failure (details on stderr),
//! 2 invalid input, 3 I/O failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eqsets_core::constructions::{
    construct_linf_canonical, construct_lp_basis_extension, construct_petty, construct_prop17, prop20_construction,
    smooth_unit_vector, table_row, ExtensionSign, OrderConditions, Regime,
};
use eqsets_core::fixed_point::{
    solve_linf_perturbation_with, solve_lp_approx_with, FixedPointConfig, LpApproxParams, NormOracle,
};
use eqsets_core::hadamard::{construct_hadamard, HadamardMethod};
use eqsets_core::space::check_equilateral;
use eqsets_core::verification::{
    check_maximal_with, extend_linf, FamilyHint, MaximalityStatus, MaximalityVerdict, SearchConfig, VerdictMethod,
};
use eqsets_core::{Error, SpaceSpec, Vector, DEFAULT_TOLERANCE};
use serde_json::{json, Value};

use crate::format::{points_from_json, points_to_json, space_from_json, ConstructionOutput};

#[derive(Debug, Parser)]
#[command(name = "eqsets", version, about = "Construct and certify equilateral sets in lp spaces and lq-sums")]
struct Cli {
    /// Absolute tolerance on distances.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Seed for every randomised search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an equilateral set from one of the known families.
    Construct(ConstructArgs),
    /// Check that a point set is equilateral, and optionally maximal.
    Verify(VerifyArgs),
    /// Extend an equilateral set of at most d points in ℓ∞^d by one point.
    Extend(ExtendArgs),
    /// Print a Hadamard matrix as rows of ±1.
    Hadamard(HadamardArgs),
    /// Tabulate the bounds m(ℓp^d) ≤ C for d ≥ d₀ as CSV.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Petty,
    Linf,
    LpBasis,
    Prop17,
    Prop20,
    FixedLinf,
    FixedLp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    k1: Option<usize>,
    #[arg(long)]
    k2: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    /// Built-in norm oracle for `fixed-linf`, e.g. `lp:4`.
    #[arg(long)]
    oracle: Option<String>,
    /// Which diagonal extension `lp-basis` adds.
    #[arg(long, value_enum, default_value_t = Sign::Plus)]
    sign: Sign,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    space: PathBuf,
    #[arg(long)]
    points: PathBuf,
    /// Also decide whether the set is maximal.
    #[arg(long)]
    maximal: bool,
    /// Family reduction to use: basis, prop20 or linf.
    #[arg(long, requires = "maximal")]
    hint: Option<String>,
}

#[derive(Debug, Args)]
struct ExtendArgs {
    #[arg(long)]
    points: PathBuf,
    #[arg(long)]
    lambda: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Sylvester,
    Paley,
    Kronecker,
}

#[derive(Debug, Args)]
struct HadamardArgs {
    #[arg(long)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long)]
    p_min: f64,
    #[arg(long)]
    p_max: f64,
    #[arg(long, default_value_t = 10)]
    steps: usize,
}

#[derive(Debug)]
enum Failure {
    Verification(String),
    Invalid(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Invalid(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotEquilateral { .. }
            | Error::Degenerate { .. }
            | Error::NoConvergence { .. }
            | Error::OracleBound(_) => Failure::Verification(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<crate::format::FormatError> for Failure {
    fn from(e: crate::format::FormatError) -> Self {
        Failure::Invalid(e.0)
    }
}

/// What a command produced: text for the output stream, plus an optional
/// verification failure to report after it is written.
struct Report {
    text: String,
    failure: Option<String>,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, failure: None }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = dispatch(&cli).and_then(|report| {
        write_output(cli.output.as_deref(), &report.text, stdout)?;
        match report.failure {
            Some(msg) => Err(Failure::Verification(msg)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.code()
        }
    }
}

fn write_output(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    let io = |e: io::Error| Failure::Io(format!("writing output: {e}"));
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(io),
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Io(format!("standard input: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn line(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string(v).expect("JSON values always serialise");
    s.push('\n');
    s
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    if !(cli.tolerance > 0.0 && cli.tolerance.is_finite()) {
        return Err(Failure::Invalid(format!("tolerance {} must be positive", cli.tolerance)));
    }
    match &cli.command {
        Command::Construct(a) => construct(a, cli).map(Report::ok),
        Command::Verify(a) => verify(a, cli),
        Command::Extend(a) => {
            let points = points_from_json(&read_json(&a.points)?)?;
            let q = extend_linf(&points, a.lambda)?;
            Ok(Report::ok(line(&json!(q.coords()))))
        }
        Command::Hadamard(a) => {
            let method = match a.method {
                Method::Auto => HadamardMethod::Auto,
                Method::Sylvester => HadamardMethod::Sylvester,
                Method::Paley => HadamardMethod::Paley,
                Method::Kronecker => HadamardMethod::Kronecker,
            };
            let h = construct_hadamard(a.order, method)?;
            Ok(Report::ok(line(&h.rows())))
        }
        Command::Table(a) => table(a).map(Report::ok),
    }
}

fn need<T>(v: Option<T>, flag: &str, family: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Invalid(format!("--family {family} needs --{flag}")))
}

fn construct(a: &ConstructArgs, cli: &Cli) -> Result<String, Failure> {
    let (space, points, lambda): (SpaceSpec, Vec<Vector>, f64) = match a.family {
        Family::Petty => {
            let inner = SpaceSpec::lp(a.p.unwrap_or(2.0), a.d.unwrap_or(2));
            inner.validate()?;
            let u = smooth_unit_vector(&inner).ok_or_else(|| Failure::Invalid("no smooth unit vector known".into()))?;
            let c = construct_petty(&inner, &u)?;
            (c.space, c.points, c.common_distance)
        }
        Family::Linf => {
            let d = need(a.d, "d", "linf")?;
            (SpaceSpec::linf(d), construct_linf_canonical(d)?, 2.0)
        }
        Family::LpBasis => {
            let (p, d) = (need(a.p, "p", "lp-basis")?, need(a.d, "d", "lp-basis")?);
            let sign = match a.sign {
                Sign::Plus => ExtensionSign::Plus,
                Sign::Minus => ExtensionSign::Minus,
            };
            (SpaceSpec::lp(p, d), construct_lp_basis_extension(p, d, sign)?, 2f64.powf(1.0 / p))
        }
        Family::Prop17 => {
            let (p, d) = (need(a.p, "p", "prop17")?, need(a.d, "d", "prop17")?);
            let s = construct_prop17(p, d)?;
            (SpaceSpec::lp(p, d), s.points, s.common_distance)
        }
        Family::Prop20 => {
            let p = need(a.p, "p", "prop20")?;
            let (k1, k2) = match (a.k1, a.k2) {
                (Some(k1), Some(k2)) => (k1, k2),
                (None, None) => match table_row(p)?.regime {
                    Regime::TwoSimplex { k1, k2 } => (k1, k2),
                    Regime::FivePoint => {
                        return Err(Failure::Invalid(format!("p = {p} lies in the five-point range; pass --k1/--k2")))
                    }
                },
                _ => return Err(Failure::Invalid("--k1 and --k2 go together".into())),
            };
            let (_, c) = prop20_construction(p, k1, k2)?;
            (c.space, c.points, c.common_distance)
        }
        Family::FixedLinf => {
            let d = need(a.d, "d", "fixed-linf")?;
            let oracle = need(a.oracle.as_deref(), "oracle", "fixed-linf")?;
            let p = oracle
                .strip_prefix("lp:")
                .and_then(|s| f64::from_str(s).ok())
                .ok_or_else(|| Failure::Invalid(format!("unknown oracle {oracle:?}; expected lp:P")))?;
            let oracle = NormOracle::scaled_lp_near_linf(p, d)?;
            let cfg = FixedPointConfig { seed: cli.seed, ..FixedPointConfig::default() };
            let sol = solve_linf_perturbation_with(&oracle, d, &cfg)?;
            // The oracle is d^{−1/p}‖·‖_p; report the set in ℓp^d itself.
            (SpaceSpec::lp(p, d), sol.points, 2.0 * oracle.bound())
        }
        Family::FixedLp => {
            let (p, d, eps) = (need(a.p, "p", "fixed-lp")?, need(a.d, "d", "fixed-lp")?, need(a.eps, "eps", "fixed-lp")?);
            let params = LpApproxParams::new(p, d, eps)?;
            let oracle = NormOracle::exact_lp(p, d)?;
            let cfg = FixedPointConfig { seed: cli.seed, ..FixedPointConfig::default() };
            let sol = solve_lp_approx_with(&oracle, &params, &cfg)?;
            (SpaceSpec::lp(p, d), sol.points, sol.common_distance)
        }
    };
    check_equilateral(&space, &points, cli.tolerance)?;
    Ok(line(&ConstructionOutput::new(&space, &points, lambda)))
}

fn verdict_json(v: &MaximalityVerdict) -> Value {
    let status = match v.status {
        MaximalityStatus::ExtensionFound => "extension_found",
        MaximalityStatus::NoExtensionFound => "no_extension_found",
        MaximalityStatus::ProvenMaximal => "proven_maximal",
    };
    let method = match v.method {
        VerdictMethod::Structural => "structural",
        VerdictMethod::Numeric => "numeric",
        VerdictMethod::Combinatorial => "combinatorial",
    };
    json!({
        "status": status,
        "method": method,
        "heuristic": v.status == MaximalityStatus::NoExtensionFound,
        "witnesses": points_to_json(&v.witnesses),
        "search": v.search.map(|s| json!({"starts": s.starts, "best_objective": s.best_objective})),
        "notes": v.notes,
    })
}

fn verify(a: &VerifyArgs, cli: &Cli) -> Result<Report, Failure> {
    let space = space_from_json(&read_json(&a.space)?)?;
    let points = points_from_json(&read_json(&a.points)?)?;
    let hint = a.hint.as_deref().map(FamilyHint::from_str).transpose()?;
    let cert = check_equilateral(&space, &points, cli.tolerance)?;
    let mut out = json!({
        "equilateral": true,
        "lambda": cert.lambda,
        "max_deviation": cert.max_deviation,
        "tolerance": cert.tolerance,
    });
    let mut failure = None;
    if a.maximal {
        let cfg = SearchConfig { seed: cli.seed, ..SearchConfig::default() };
        let verdict = check_maximal_with(&space, &cert, hint, &cfg)?;
        if verdict.status == MaximalityStatus::ExtensionFound {
            failure = Some(format!("not maximal: extends by {:?}", verdict.witnesses[0].coords()));
        }
        out["maximal"] = verdict_json(&verdict);
    }
    Ok(Report { text: line(&out), failure })
}

fn table(a: &TableArgs) -> Result<String, Failure> {
    if !(a.p_min.is_finite() && a.p_max.is_finite() && a.p_min <= a.p_max) || a.steps == 0 {
        return Err(Failure::Invalid("need finite p-min ≤ p-max and steps ≥ 1".into()));
    }
    let mut csv = String::from("p,regime,k1,k2,C,d0,cond12,cond13,cond14\n");
    for i in 0..a.steps {
        let p = if a.steps == 1 { a.p_min } else { a.p_min + (a.p_max - a.p_min) * i as f64 / (a.steps - 1) as f64 };
        let row = table_row(p)?;
        let fields = match row.regime {
            Regime::FivePoint => format!("five-point,,,{},{},,,", row.c, row.d0),
            Regime::TwoSimplex { k1, k2 } => {
                let c = OrderConditions::evaluate(p, k1, k2);
                format!("two-simplex,{k1},{k2},{},{},{},{},{}", row.c, row.d0, c.c12(), c.c13, c.c14)
            }
        };
        csv.push_str(&format!("{p},{fields}\n"));
    }
    Ok(csv)
}
