//! Command-line front end: `solve`, `certify` and `ladder`.
//!
//! [`run`] does all the work and returns the exit code with the text meant
//! for stdout and stderr, so the binary stays a thin wrapper.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, ErrorClass, Result};
use crate::frame::{beta_ladder, BetaLadder, TwoIntervalSet};
use crate::oracle::{certify, CertificationReport, CertifyTolerance, OracleConfig};
use crate::poly::MonicPolynomial;
use crate::synthesis::{solve, ExtremalSolution, PELL_TOL};

/// An `f64` written with 17 significant digits; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for F17 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(F17(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN)))
    }
}

fn f17s(xs: &[f64]) -> Vec<F17> {
    xs.iter().copied().map(F17).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "akhiezer", version, about = "L1-minimal monic polynomials on [-1, alpha] ∪ [beta, 1]")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the minimal polynomial of one degree.
    Solve(SolveArgs),
    /// Compare the construction against the brute-force oracle.
    Certify(SolveArgs),
    /// List the degenerate values of beta for a fixed alpha and m.
    Ladder(LadderArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long)]
    pub degree: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also run the oracle and report the value gap.
    #[arg(long)]
    pub with_oracle: bool,
    /// Oracle trapezoid nodes per interval.
    #[arg(long, default_value_t = OracleConfig::default().grid_size)]
    pub grid: usize,
    /// Largest accepted scaled excess in the Pell identity.
    #[arg(long, default_value_t = PELL_TOL)]
    pub tol_pell: f64,
    /// Largest accepted relative value gap against the oracle.
    #[arg(long, default_value_t = CertifyTolerance::default().value)]
    pub tol_cert: f64,
}

#[derive(Debug, Clone, Args)]
pub struct LadderArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseBlock {
    pub branch: String,
    pub p: usize,
    pub sigma_over_k: F17,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub pell_excess: Option<F17>,
    pub max_moment_residual: F17,
    pub fit_distance: Option<F17>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_gap: Option<F17>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyBlock {
    pub gamma: F17,
    pub value: F17,
    /// Zeros of `(x - alpha) phi`.
    pub alpha_member_zeros: Vec<F17>,
    /// Zeros of `(x - beta) phi`.
    pub beta_member_zeros: Vec<F17>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResponse {
    pub alpha: F17,
    pub beta: F17,
    pub degree: usize,
    /// Highest power first.
    pub coefficients: Vec<F17>,
    pub zeros: Vec<F17>,
    pub case: CaseBlock,
    pub minimal_value: F17,
    pub tau: F17,
    pub diagnostics: Diagnostics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degenerate_family: Option<FamilyBlock>,
    pub warnings: Vec<String>,
}

impl SolveResponse {
    pub fn new(solution: &ExtremalSolution, oracle_gap: Option<f64>) -> Self {
        let member_zeros = |f: &MonicPolynomial| f17s(f.roots().unwrap_or_default());
        Self {
            alpha: F17(solution.set.alpha),
            beta: F17(solution.set.beta),
            degree: solution.degree(),
            coefficients: f17s(&solution.f.descending()),
            zeros: f17s(&solution.zeros),
            case: CaseBlock {
                branch: solution.case.branch.label().to_string(),
                p: solution.case.p,
                sigma_over_k: F17(solution.case.sigma_over_k),
            },
            minimal_value: F17(solution.minimal_value),
            tau: F17(solution.tau),
            diagnostics: Diagnostics {
                pell_excess: solution.pell_excess().map(F17),
                max_moment_residual: F17(solution.max_moment_residual()),
                fit_distance: solution.fit_distance.map(F17),
                oracle_gap: oracle_gap.map(F17),
            },
            degenerate_family: solution.family.as_ref().map(|fam| FamilyBlock {
                gamma: F17(fam.gamma),
                value: F17(fam.value),
                alpha_member_zeros: member_zeros(&fam.f1),
                beta_member_zeros: member_zeros(&fam.f2),
            }),
            warnings: solution.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyResponse {
    pub alpha: F17,
    pub beta: F17,
    pub degree: usize,
    pub branch: String,
    pub analytic_value: F17,
    pub oracle_value: F17,
    pub value_gap: F17,
    pub coeff_distance: F17,
    pub root_distance: F17,
    pub certified_gap: F17,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_value_gap: Option<F17>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_gap_zero: Option<F17>,
    pub analytic_coefficients: Vec<F17>,
    pub oracle_coefficients: Vec<F17>,
    pub passed: bool,
}

impl CertifyResponse {
    pub fn new(solution: &ExtremalSolution, report: &CertificationReport) -> Self {
        Self {
            alpha: F17(solution.set.alpha),
            beta: F17(solution.set.beta),
            degree: solution.degree(),
            branch: solution.case.branch.label().to_string(),
            analytic_value: F17(report.analytic_value),
            oracle_value: F17(report.oracle_value),
            value_gap: F17(report.value_gap),
            coeff_distance: F17(report.coeff_distance),
            root_distance: F17(report.root_distance),
            certified_gap: F17(report.oracle.certified_gap),
            family_value_gap: report.family_value_gap.map(F17),
            oracle_gap_zero: report.oracle_gap_zero.map(F17),
            analytic_coefficients: f17s(&solution.f.descending()),
            oracle_coefficients: f17s(&report.oracle.coeffs.descending()),
            passed: report.passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RungBlock {
    pub p: usize,
    pub beta: F17,
    pub k: F17,
    pub kprime: F17,
    pub inversion_residual: F17,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandBlock {
    pub lower: F17,
    pub upper: F17,
    pub p: usize,
    pub branch: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderResponse {
    pub alpha: F17,
    pub m: usize,
    pub rungs: Vec<RungBlock>,
    pub bands: Vec<BandBlock>,
    pub unresolved: Vec<usize>,
}

impl LadderResponse {
    pub fn new(ladder: &BetaLadder) -> Self {
        Self {
            alpha: F17(ladder.alpha),
            m: ladder.m,
            rungs: ladder
                .rungs
                .iter()
                .map(|r| RungBlock {
                    p: r.p,
                    beta: F17(r.beta),
                    k: F17(r.k),
                    kprime: F17(r.kprime),
                    inversion_residual: F17(r.inversion_residual),
                })
                .collect(),
            bands: ladder
                .bands()
                .iter()
                .map(|b| BandBlock {
                    lower: F17(b.lower),
                    upper: F17(b.upper),
                    p: b.p,
                    branch: b.branch.label().to_string(),
                })
                .collect(),
            unresolved: ladder.unresolved.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    class: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    analytic: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<String>,
}

/// Exit status and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(class: ErrorClass) -> i32 {
    match class {
        ErrorClass::Validation => 2,
        ErrorClass::Numerical => 3,
        ErrorClass::Certification => 4,
    }
}

fn error_outcome(err: &Error) -> Outcome {
    let class = err.class();
    let (analytic, oracle) = match err {
        Error::Certification { analytic, oracle, .. } => (Some(analytic.clone()), Some(oracle.clone())),
        _ => (None, None),
    };
    let body = ErrorBody {
        class: match class {
            ErrorClass::Validation => "validation",
            ErrorClass::Numerical => "numerical",
            ErrorClass::Certification => "certification",
        },
        message: err.to_string(),
        analytic,
        oracle,
    };
    let json = serde_json::to_string(&serde_json::json!({ "error": body })).expect("error body serializes");
    Outcome {
        code: exit_code(class),
        stdout: String::new(),
        stderr: json + "\n",
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Certify(args) => cmd_certify(&args),
        Command::Ladder(args) => cmd_ladder(&args),
    };
    match result {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => error_outcome(&e),
    }
}

fn check_tolerance(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive, got {value}")))
    }
}

fn oracle_config(args: &SolveArgs) -> Result<OracleConfig> {
    let cfg = OracleConfig {
        grid_size: args.grid,
        ..OracleConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn certify_tolerance(args: &SolveArgs) -> CertifyTolerance {
    CertifyTolerance {
        value: args.tol_cert,
        ..CertifyTolerance::default()
    }
}

fn solve_checked(args: &SolveArgs) -> Result<ExtremalSolution> {
    check_tolerance("--tol-pell", args.tol_pell)?;
    check_tolerance("--tol-cert", args.tol_cert)?;
    let set = TwoIntervalSet::new(args.alpha, args.beta)?;
    if args.degree == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let solution = solve(set, args.degree)?;
    if let Some(excess) = solution.pell_excess() {
        if excess > args.tol_pell {
            return Err(Error::Conditioning {
                residual: excess,
                limit: args.tol_pell,
            });
        }
    }
    Ok(solution)
}

pub fn cmd_solve(args: &SolveArgs) -> Result<String> {
    let cfg = if args.with_oracle { Some(oracle_config(args)?) } else { None };
    let solution = solve_checked(args)?;
    let oracle_gap = match cfg {
        Some(cfg) => Some(certify(&solution, &cfg, &certify_tolerance(args))?.value_gap),
        None => None,
    };
    let response = SolveResponse::new(&solution, oracle_gap);
    Ok(match args.format {
        Format::Json => to_json(&response),
        Format::Csv => solve_csv(&response),
        Format::Text => solve_text(&response),
    })
}

pub fn cmd_certify(args: &SolveArgs) -> Result<String> {
    let cfg = oracle_config(args)?;
    let solution = solve_checked(args)?;
    let report = certify(&solution, &cfg, &certify_tolerance(args))?;
    let response = CertifyResponse::new(&solution, &report);
    Ok(match args.format {
        Format::Json => to_json(&response),
        Format::Csv => coefficient_csv(&[
            ("analytic", &response.analytic_coefficients),
            ("oracle", &response.oracle_coefficients),
        ]),
        Format::Text => certify_text(&response),
    })
}

pub fn cmd_ladder(args: &LadderArgs) -> Result<String> {
    let ladder = beta_ladder(args.alpha, args.m)?;
    let response = LadderResponse::new(&ladder);
    Ok(match args.format {
        Format::Json => to_json(&response),
        Format::Csv => {
            let mut out = String::from("p,beta,k\n");
            for r in &response.rungs {
                let _ = writeln!(out, "{},{:.16e},{:.16e}", r.p, r.beta.0, r.k.0);
            }
            out
        }
        Format::Text => ladder_text(&response),
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("response serializes") + "\n"
}

fn coefficient_csv(columns: &[(&str, &Vec<F17>)]) -> String {
    let mut out = String::from("kind,index,value\n");
    for (kind, values) in columns {
        for (i, v) in values.iter().enumerate() {
            let _ = writeln!(out, "{kind},{i},{:.16e}", v.0);
        }
    }
    out
}

fn solve_csv(r: &SolveResponse) -> String {
    coefficient_csv(&[("coefficient", &r.coefficients), ("zero", &r.zeros)])
}

fn solve_text(r: &SolveResponse) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "E = [-1, {}] ∪ [{}, 1], degree {}", r.alpha.0, r.beta.0, r.degree);
    let _ = writeln!(out, "case: {} (p = {}, sigma/K = {:.3e})", r.case.branch, r.case.p, r.case.sigma_over_k.0);
    let _ = writeln!(out, "minimal value: {:.16e}", r.minimal_value.0);
    let _ = writeln!(out, "tau: {:.16e}", r.tau.0);
    let _ = writeln!(out, "coefficients (highest first):");
    for c in &r.coefficients {
        let _ = writeln!(out, "  {:+.16e}", c.0);
    }
    let _ = writeln!(out, "zeros:");
    for z in &r.zeros {
        let _ = writeln!(out, "  {:+.16e}", z.0);
    }
    if let Some(e) = r.diagnostics.pell_excess {
        let _ = writeln!(out, "pell excess: {:.3e}", e.0);
    }
    let _ = writeln!(out, "max moment residual: {:.3e}", r.diagnostics.max_moment_residual.0);
    if let Some(g) = r.diagnostics.oracle_gap {
        let _ = writeln!(out, "oracle gap: {:.3e}", g.0);
    }
    if let Some(fam) = &r.degenerate_family {
        let _ = writeln!(out, "degenerate family: gamma = {:.16e}, value = {:.16e}", fam.gamma.0, fam.value.0);
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

fn certify_text(r: &CertifyResponse) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "E = [-1, {}] ∪ [{}, 1], degree {} ({})", r.alpha.0, r.beta.0, r.degree, r.branch);
    let _ = writeln!(out, "analytic value: {:.16e}", r.analytic_value.0);
    let _ = writeln!(out, "oracle value:   {:.16e}", r.oracle_value.0);
    let _ = writeln!(out, "value gap: {:.3e}", r.value_gap.0);
    let _ = writeln!(out, "coefficient distance: {:.3e}", r.coeff_distance.0);
    let _ = writeln!(out, "root distance: {:.3e}", r.root_distance.0);
    if let Some(g) = r.family_value_gap {
        let _ = writeln!(out, "family value gap: {:.3e}", g.0);
    }
    if let Some(z) = r.oracle_gap_zero {
        let _ = writeln!(out, "oracle zero in the gap: {:.16e}", z.0);
    }
    let _ = writeln!(out, "{}", if r.passed { "PASS" } else { "FAIL" });
    out
}

fn ladder_text(r: &LadderResponse) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "alpha = {}, m = {}", r.alpha.0, r.m);
    for rung in &r.rungs {
        let _ = writeln!(out, "  p = {:2}  beta = {:.16e}  k = {:.16e}", rung.p, rung.beta.0, rung.k.0);
    }
    for band in &r.bands {
        let _ = writeln!(out, "  ({:.6}, {:.6}): {}", band.lower.0, band.upper.0, band.branch);
    }
    if !r.unresolved.is_empty() {
        let _ = writeln!(out, "  unresolved p: {:?}", r.unresolved);
    }
    out
}
