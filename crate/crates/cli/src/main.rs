//! `p2betti`: compute, invert and verify shifted Poincare polynomials of
//! moduli of one-dimensional sheaves on P2.
//!
//! Exit codes: 0 everything passed, 1 a check failed, 2 bad input or usage,
//! 3 the solver hit an invariant violation (non-palindromic output, failed
//! divisibility, non-integral invariants, disagreeing routes).

mod report;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use p2betti_core::data::{
    bundled_gv, bundled_omega_hat, bundled_refined, parse_gv, parse_omega_hat, parse_refined, DataError,
};
use p2betti_core::solver::{invert_to_gv, omega_from_hat, omega_hat, solve_all, RhsMethod, SolverError};
use p2betti_core::{GvTable, OmegaHat};

use report::{render_compute, render_gv, render_verify, CheckRecord, Format};
use verify::{VerifyInput, ALL_CHECKS};

#[derive(Parser)]
#[command(name = "p2betti", version, about = "Betti numbers of moduli of one-dimensional sheaves on P2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for Omega_d, d <= dmax, from Gopakumar-Vafa invariants.
    Compute(ComputeArgs),
    /// Recover Gopakumar-Vafa invariants from normalized polynomials.
    Invert(InvertArgs),
    /// Run consistency checks on normalized polynomials and invariants.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Trees,
    Functional,
    Both,
}

impl From<Method> for RhsMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Trees => RhsMethod::Trees,
            Method::Functional => RhsMethod::Functional,
            Method::Both => RhsMethod::Both,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Graph-sum assembly.
    #[arg(long, value_enum, default_value = "functional")]
    method: Method,
}

#[derive(Args)]
struct ComputeArgs {
    /// Invariants file; the bundled degree <= 6 table if omitted.
    #[arg(long)]
    gv: Option<PathBuf>,
    /// Normalized polynomials to compare the output against.
    #[arg(long)]
    golden: Option<PathBuf>,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    dmax: u32,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct InvertArgs {
    /// Normalized polynomials for degrees 1, 2, ...
    #[arg(long)]
    golden: PathBuf,
    /// Only use rows up to this degree.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    dmax: Option<u32>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    /// Normalized polynomials; the bundled degree <= 10 table if omitted.
    #[arg(long)]
    golden: Option<PathBuf>,
    /// Invariants file; the bundled degree <= 6 table if omitted.
    #[arg(long)]
    gv: Option<PathBuf>,
    /// Refined polynomials; the bundled degree <= 2 table if omitted.
    #[arg(long)]
    refined: Option<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    dmax: Option<u32>,
    /// Comma-separated check names, or `all`.
    #[arg(long, default_value = "all", value_delimiter = ',')]
    check: Vec<String>,
    /// Truncation order for series identities that take one.
    #[arg(long, default_value_t = 40)]
    trunc: i32,
    #[command(flatten)]
    common: Common,
}

/// A failure mapped to an exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<DataError> for Failure {
    fn from(e: DataError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        let code = match e {
            SolverError::MissingGv { .. } | SolverError::MissingOmega { .. } | SolverError::GenusTooLarge { .. } => 2,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_gv(path: Option<&Path>) -> Result<GvTable, Failure> {
    match path {
        Some(p) => Ok(parse_gv(&read(p)?)?),
        None => Ok(bundled_gv()),
    }
}

fn load_golden(path: Option<&Path>, dmax: Option<u32>) -> Result<Vec<OmegaHat>, Failure> {
    let mut rows = match path {
        Some(p) => parse_omega_hat(&read(p)?)?,
        None => bundled_omega_hat(),
    };
    if let Some(m) = dmax {
        rows.retain(|h| h.d <= m);
    }
    Ok(rows)
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Trees => "trees",
        Method::Functional => "functional",
        Method::Both => "both",
    }
}

/// Exit code from a list of check outcomes.
fn status(checks: &[CheckRecord]) -> u8 {
    if checks.iter().all(|c| c.pass) {
        0
    } else {
        1
    }
}

fn compute(args: &ComputeArgs) -> Result<u8, Failure> {
    let gv = load_gv(args.gv.as_deref())?;
    let golden = match &args.golden {
        Some(p) => Some(load_golden(Some(p), Some(args.dmax))?),
        None => None,
    };
    let omegas = solve_all(args.dmax, &gv, args.common.method.into())?;
    let rows = omegas
        .into_iter()
        .map(|o| omega_hat(&o).map(|h| (o, h)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut checks = Vec::new();
    if let Some(golden) = golden {
        for (_, h) in &rows {
            match golden.iter().find(|g| g.d == h.d) {
                Some(g) => checks.push(CheckRecord::coeffs("golden", h.d, &h.coeffs, &g.coeffs)),
                None => checks.push(CheckRecord::plain("golden", h.d, false, "no golden row".to_string())),
            }
        }
    }
    let text = render_compute(args.common.format, method_name(args.common.method), &rows, &checks);
    emit(&args.common, &text)?;
    Ok(status(&checks))
}

fn invert(args: &InvertArgs) -> Result<u8, Failure> {
    let golden = load_golden(Some(&args.golden), args.dmax)?;
    if golden.is_empty() {
        return Err(Failure::input(format!("{}: no rows to invert", args.golden.display())));
    }
    let omegas: Vec<_> = golden.iter().map(omega_from_hat).collect();
    let gv = invert_to_gv(&omegas, args.common.method.into())?;
    let provenance = format!("inverted from {}", args.golden.display());
    emit(&args.common, &render_gv(args.common.format, &gv, &provenance))?;
    Ok(0)
}

fn verify_cmd(args: &VerifyArgs) -> Result<u8, Failure> {
    let golden = load_golden(args.golden.as_deref(), args.dmax)?;
    let gv = load_gv(args.gv.as_deref())?;
    let refined = match &args.refined {
        Some(p) => parse_refined(&read(p)?)?,
        None => bundled_refined(),
    };
    let checks: Vec<String> = if args.check.iter().any(|c| c == "all") {
        ALL_CHECKS.iter().map(|s| s.to_string()).collect()
    } else {
        for c in &args.check {
            if !ALL_CHECKS.contains(&c.as_str()) {
                return Err(Failure::input(format!(
                    "unknown check {c:?}; known: {}",
                    ALL_CHECKS.join(", ")
                )));
            }
        }
        args.check.clone()
    };
    if args.trunc < 1 {
        return Err(Failure::input("--trunc must be positive"));
    }
    let input = VerifyInput {
        golden: &golden,
        gv: &gv,
        refined: &refined,
        method: args.common.method.into(),
        trunc: args.trunc,
    };
    let records = verify::run(&input, &checks);
    emit(&args.common, &render_verify(args.common.format, &records))?;
    Ok(status(&records))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute(a) => compute(a),
        Command::Invert(a) => invert(a),
        Command::Verify(a) => verify_cmd(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
