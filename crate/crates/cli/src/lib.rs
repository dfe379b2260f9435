//! Command-line front end: verify constructions, reproduce the catalog tables
//! and run critical-function searches.

mod commands;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::time::Instant;

pub use report::{fmt_complex, ReportDocument, WitnessOut, REPORT_SCHEMA, REPORT_SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "convsq", version, about = "Critical functions of f*f(2t) = λ·f(t)² on ℤ/dℤ")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Also write a CSV export to this path.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a closed-form witness and check all of its identities.
    Verify(VerifyArgs),
    /// Print catalog rows with their verification status.
    Table(TableArgs),
    /// Multistart search for critical functions.
    Search(SearchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructionArg {
    Gaussian,
    Dirichlet,
    Theta,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_modulus)]
    pub d: u64,
    #[arg(long, value_enum)]
    pub construction: ConstructionArg,
    /// Gaussian quadratic coefficient (a unit).
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub u: i64,
    /// Gaussian shift.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub v: i64,
    /// Theta parameter `a`; `λ₀ = √a + i√b`.
    #[arg(long)]
    pub a: Option<f64>,
    /// Theta parameter `b`, defaults to `d − a`.
    #[arg(long)]
    pub b: Option<f64>,
    /// Real sample points for the theta witness.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.1, 0.37])]
    pub r: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// `λ² − 2cλ + 17 = 0` over the degree-ten polynomial in `c`.
    #[value(alias = "eq4.3")]
    CQuadratic,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_parser = parse_modulus, conflicts_with = "range")]
    pub d: Option<u64>,
    /// Inclusive range of moduli, e.g. `3..11`.
    #[arg(long, value_parser = parse_range)]
    pub range: Option<(u64, u64)>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Re-run the verifications instead of reading the cached status.
    #[arg(long)]
    pub reproduce: bool,
    #[arg(long, default_value_t = 400)]
    pub starts: usize,
    #[arg(long, env = "CONVSQ_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SymmetryArg {
    None,
    Symmetric,
    Antisymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    FirstValueOne,
    UnitNorm,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, value_parser = parse_modulus)]
    pub d: u64,
    /// Exact form such as `-sqrt5+2*i*sqrt2`, or a decimal pair `re,im`.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "non_weil")]
    pub lambda: Option<String>,
    #[arg(long, value_enum, default_value_t = SymmetryArg::None)]
    pub symmetry: SymmetryArg,
    /// Normalization; fixed-point searches always use unit norm.
    #[arg(long, value_enum)]
    pub normalization: Option<NormalizationArg>,
    /// Require `conj_fourier(f) = f_q`.
    #[arg(long, conflicts_with_all = ["probe_bdo", "probe_bd"])]
    pub q: Option<u64>,
    #[arg(long, default_value_t = 2000)]
    pub starts: usize,
    #[arg(long, env = "CONVSQ_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Close the witness list under unit reindexings.
    #[arg(long)]
    pub orbit_closure: bool,
    /// Look for a conjugate Fourier fixed point.
    #[arg(long, conflicts_with = "probe_bd")]
    pub probe_bdo: bool,
    /// Look for a fixed point up to a unit reindexing.
    #[arg(long)]
    pub probe_bd: bool,
    /// Antisymmetric search at the non-Weil value of the `d = 17` family.
    #[arg(long, alias = "example-4-6", conflicts_with_all = ["lambda", "probe_bdo", "probe_bd", "q"])]
    pub non_weil: bool,
    /// Search every value of modulus `√17` in the family, not just the flagged one.
    #[arg(long, requires = "non_weil")]
    pub all_lambdas: bool,
}

fn parse_modulus(s: &str) -> Result<u64, String> {
    let d: u64 = s.parse().map_err(|_| format!("expected a positive integer, got {s:?}"))?;
    if d % 2 == 0 {
        return Err("modulus must be odd".into());
    }
    if d < 3 {
        return Err("modulus must be at least 3".into());
    }
    Ok(d)
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: u64 = a.parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b: u64 = b.trim_start_matches('=').parse().map_err(|_| format!("bad range end {b:?}"))?;
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok((a, b))
}

/// Result of one invocation.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub(crate) enum Failure {
    Usage(String),
    /// The command could not run at all (e.g. unknown modulus).
    NotFound(String),
    Io(String),
}

impl From<convsq::Error> for Failure {
    fn from(e: convsq::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// What a command hands back: the report, human lines, and CSV content.
pub(crate) struct Produced {
    pub report: ReportDocument,
    pub text: Vec<String>,
    pub csv: Option<Vec<u8>>,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            };
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).map(|s| s.to_string_lossy().into_owned()).collect();
    let start = Instant::now();
    let produced = match &cli.command {
        Command::Verify(a) => commands::verify(a, echo),
        Command::Table(a) => commands::table(a, echo),
        Command::Search(a) => commands::search(a, echo),
    };
    let mut produced = match produced {
        Ok(p) => p,
        Err(Failure::Usage(msg)) => {
            return Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") };
        }
        Err(Failure::NotFound(msg)) | Err(Failure::Io(msg)) => {
            return Outcome { code: 1, stdout: String::new(), stderr: format!("error: {msg}\n") };
        }
    };
    produced.report.finish(start.elapsed().as_secs_f64() * 1e3);
    let mut stderr = String::new();
    if let (Some(path), Some(bytes)) = (&cli.csv, &produced.csv) {
        if let Err(e) = std::fs::write(path, bytes) {
            return Outcome { code: 1, stdout: String::new(), stderr: format!("error: writing {}: {e}\n", path.display()) };
        }
        stderr.push_str(&format!("wrote {}\n", path.display()));
    }
    let stdout = match cli.format {
        Format::Json => produced.report.to_json() + "\n",
        Format::Text => produced.report.to_text(&produced.text),
    };
    Outcome { code: if produced.report.pass { 0 } else { 1 }, stdout, stderr }
}
