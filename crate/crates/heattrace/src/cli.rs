//! Argument parsing, dispatch and output for the `heattrace` binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use heattrace_core::catalog;
use heattrace_core::chambers::{choose_positive_system, PositiveSystem};
use heattrace_core::constants::Convention;
use heattrace_core::heattrace::Numerics;
use heattrace_core::novikov::FlatTwist;
use heattrace_core::rootdata::{check_k_dominant_integral, CartanDatum, HighestWeight};
use heattrace_core::{linalg, Error};
use serde::Serialize;

use crate::format::{self, ParseError};
use crate::report;
use crate::runner::{pool, TGrid};
use crate::verify::{run_suite, Check};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "heattrace", version, about = "Large-time heat-trace asymptotics from restricted root data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Built-in Cartan data.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Classification, asymptotic constants, spectrum and formal degree.
    Analyze(Common),
    /// Heat trace over a geometric t grid.
    Trace {
        #[command(flatten)]
        common: Common,
        #[arg(long = "t", default_value = "40:400:12")]
        grid: TGrid,
    },
    /// Least-squares fit of the trace against the closed-form constants.
    Fit {
        #[command(flatten)]
        common: Common,
        #[arg(long = "t", default_value = "40:400:12")]
        grid: TGrid,
        /// Number of t^-j correction columns in the fit.
        #[arg(long, default_value_t = 2)]
        corrections: usize,
    },
    /// Per-chamber constants and the ordering/sum checks.
    Chambers(Common),
    /// Novikov-Shubin numbers for a K-type bundle and a flat twist.
    Novikov {
        #[command(flatten)]
        common: Common,
        /// Flat twist on t, comma separated.
        #[arg(long)]
        twist: Option<String>,
        /// Flat twist on a, comma separated.
        #[arg(long)]
        twist_a: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        vol: f64,
    },
    /// Run the invariant suite.
    Verify(Common),
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List {
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Multiplicity,
    Plain,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Multiplicity => Convention::Multiplicity,
            ConventionArg::Plain => Convention::Plain,
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// Catalog name or path to a datum file.
    #[arg(long, default_value = "sl2R")]
    pub group: String,
    /// Highest weight on t, comma separated, or a weight file. Defaults to 0.
    #[arg(long, allow_hyphen_values = true)]
    pub weight: Option<String>,
    /// Component on a, comma separated. Defaults to 0.
    #[arg(long, allow_hyphen_values = true)]
    pub weight_a: Option<String>,
    #[arg(long, default_value_t = Numerics::default().seed)]
    pub seed: u64,
    #[arg(long, default_value_t = Numerics::default().tol)]
    pub tol: f64,
    #[arg(long, default_value_t = Numerics::default().mc_samples)]
    pub mc_samples: u64,
    #[arg(long, value_enum, default_value_t = ConventionArg::Multiplicity)]
    pub convention: ConventionArg,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A failed run: exit code plus message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DatumInvalid { .. }
            | Error::NotARoot
            | Error::InvalidWeight(_)
            | Error::IncompatibleSystem
            | Error::UnknownName(_)
            | Error::InvalidArgument(_) => EXIT_USAGE,
            Error::TheoremViolation { .. } => EXIT_FAILED,
            _ => EXIT_NUMERICAL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Self::usage(e.to_string())
    }
}

fn load_group(spec: &str) -> Result<CartanDatum, Failure> {
    if let Ok(e) = catalog::builtin(spec) {
        return Ok(e.datum);
    }
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        return format::parse_datum(&text)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())));
    }
    Err(Error::UnknownName(spec.into()).into())
}

fn parse_components(text: &str, want: usize, what: &str) -> Result<Vec<f64>, Failure> {
    let v = format::parse_list(text)?;
    if v.len() != want {
        return Err(Failure::usage(format!(
            "{what} needs {want} components, got {}",
            v.len()
        )));
    }
    Ok(v)
}

fn load_weight(c: &Common, d: &CartanDatum) -> Result<HighestWeight, Failure> {
    let mut hw = match &c.weight {
        None => HighestWeight::new(&vec![0.0; d.r0]),
        Some(w) if Path::new(w).is_file() => {
            let text = std::fs::read_to_string(w).map_err(|e| Failure::usage(format!("{w}: {e}")))?;
            format::parse_weight(&text).map_err(|e| Failure::usage(format!("{w}: {e}")))?
        }
        Some(w) => HighestWeight::new(&parse_components(w, d.r0, "--weight")?),
    };
    if let Some(a) = &c.weight_a {
        hw.lambda_a = parse_components(a, d.dim_a, "--weight-a")?;
    }
    if hw.lambda.len() != d.r0 {
        return Err(Failure::usage(format!("weight needs {} components on t", d.r0)));
    }
    if hw.lambda_a.is_empty() {
        hw.lambda_a = vec![0.0; d.dim_a];
    } else if hw.lambda_a.len() != d.dim_a {
        return Err(Failure::usage(format!("weight needs {} components on a", d.dim_a)));
    }
    Ok(hw)
}

struct Setup {
    ps: PositiveSystem,
    hw: HighestWeight,
    conv: Convention,
    num: Numerics,
}

fn setup(c: &Common) -> Result<Setup, Failure> {
    if !(c.tol > 0.0 && c.tol < 1.0) {
        return Err(Failure::usage(format!("--tol must lie in (0, 1), got {}", c.tol)));
    }
    if c.mc_samples == 0 {
        return Err(Failure::usage("--mc-samples must be positive"));
    }
    let d = load_group(&c.group)?;
    let hw = load_weight(c, &d)?;
    let ps = choose_positive_system(&d, None, &hw)?;
    check_k_dominant_integral(&d, &ps.pos_k, &hw.lambda)?;
    Ok(Setup {
        ps,
        hw,
        conv: c.convention.into(),
        num: Numerics {
            tol: c.tol,
            seed: c.seed,
            mc_samples: c.mc_samples,
        },
    })
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("reports serialize");
    out.push(b'\n');
    out
}

fn csv_table<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows serialize");
    }
    w.into_inner().expect("in-memory writer")
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(bytes).and_then(|_| s.flush()).map_err(|e| Failure {
                code: EXIT_FAILED,
                message: e.to_string(),
            })
        }
    }
}

#[derive(Serialize)]
struct TraceCsv {
    t: f64,
    trace: f64,
    trace_err: f64,
    asymptote: f64,
    ratio: f64,
}

fn trace_csv(rows: &[report::TraceRow]) -> Vec<u8> {
    csv_table(rows.iter().map(|r| TraceCsv {
        t: r.t,
        trace: r.trace,
        trace_err: r.trace_err,
        asymptote: r.asymptote,
        ratio: r.ratio,
    }))
}

#[derive(Serialize)]
struct CatalogRow {
    name: String,
    rank: usize,
    dim_a: usize,
    m: usize,
    n: usize,
    positive_roots: usize,
    provenance: &'static str,
}

#[derive(Serialize)]
struct QuantityRow {
    quantity: &'static str,
    value: f64,
    err: f64,
}

fn constants_csv(c: &report::ConstantsBlock) -> Vec<u8> {
    let q = |quantity, value, err| QuantityRow { quantity, value, err };
    csv_table([
        q("alpha0_bar", c.alpha0_bar.value, c.alpha0_bar.err),
        q("beta1_bar", c.beta1_bar, 0.0),
        q("gamma2_bar", c.gamma2_bar, 0.0),
        q("alpha0", c.alpha0.value, c.alpha0.err),
        q("alpha01", c.alpha01.value, c.alpha01.err),
        q("alpha12", c.alpha12.value, c.alpha12.err),
        q("alpha2", c.alpha2, 0.0),
        q("beta1", c.beta1, 0.0),
        q("gamma2", c.gamma2, 0.0),
    ])
}

#[derive(Serialize)]
struct ChamberCsv {
    w: usize,
    w1: usize,
    w2: usize,
    eps_w2: i8,
    alpha_w: f64,
    alpha_w_err: f64,
    beta_w: f64,
    gamma_w: f64,
}

#[derive(Serialize)]
struct DegreeCsv<'a> {
    degree: usize,
    case: &'a str,
    ns: &'a str,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub meta: report::Meta,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Catalog {
            action: CatalogAction::List { format, out },
        } => {
            let rows: Vec<CatalogRow> = catalog::all()
                .into_iter()
                .map(|e| CatalogRow {
                    rank: e.datum.r0,
                    dim_a: e.datum.dim_a,
                    m: e.datum.m(),
                    n: e.datum.n(),
                    positive_roots: e.datum.roots.len() / 2,
                    provenance: e.provenance,
                    name: e.datum.name,
                })
                .collect();
            let bytes = match format {
                OutputFormat::Json => json(&rows),
                OutputFormat::Csv => csv_table(rows),
            };
            emit(&out, &bytes)?;
            Ok(EXIT_OK)
        }
        Command::Analyze(c) => {
            let s = setup(&c)?;
            let r = report::analyze(&s.ps, &s.hw, s.conv, &s.num)?;
            let bytes = match c.format {
                OutputFormat::Json => json(&r),
                OutputFormat::Csv => constants_csv(&r.constants),
            };
            emit(&c.out, &bytes)?;
            Ok(EXIT_OK)
        }
        Command::Trace { common: c, grid } => {
            let s = setup(&c)?;
            let r = report::trace(&pool(None), &s.ps, &s.hw, &grid, s.conv, &s.num)?;
            let bytes = match c.format {
                OutputFormat::Json => json(&r),
                OutputFormat::Csv => trace_csv(&r.rows),
            };
            emit(&c.out, &bytes)?;
            Ok(EXIT_OK)
        }
        Command::Fit {
            common: c,
            grid,
            corrections,
        } => {
            if grid.count < 4 + corrections {
                return Err(Failure::usage(format!(
                    "a fit with {corrections} corrections needs at least {} points",
                    4 + corrections
                )));
            }
            let s = setup(&c)?;
            let r = report::fit(&pool(None), &s.ps, &s.hw, &grid, corrections, s.conv, &s.num)?;
            let bytes = match c.format {
                OutputFormat::Json => json(&r),
                OutputFormat::Csv => trace_csv(&r.rows),
            };
            emit(&c.out, &bytes)?;
            Ok(EXIT_OK)
        }
        Command::Chambers(c) => {
            let s = setup(&c)?;
            let r = report::chambers(&pool(None), &s.ps, &s.hw, s.conv, &s.num)?;
            let bytes = match c.format {
                OutputFormat::Json => json(&r),
                OutputFormat::Csv => csv_table(r.chambers.iter().map(|w| ChamberCsv {
                    w: w.w,
                    w1: w.w1,
                    w2: w.w2,
                    eps_w2: w.eps_w2,
                    alpha_w: w.alpha_w.value,
                    alpha_w_err: w.alpha_w.err,
                    beta_w: w.beta_w,
                    gamma_w: w.gamma_w,
                })),
            };
            emit(&c.out, &bytes)?;
            if let Some(f) = &r.theorems.failure {
                eprintln!("heattrace: {f}");
            }
            Ok(if r.theorems.passed { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Novikov {
            common: c,
            twist,
            twist_a,
            vol,
        } => {
            let s = setup(&c)?;
            let d = &s.ps.datum;
            let lt = match &twist {
                Some(t) => parse_components(t, d.r0, "--twist")?,
                None => vec![0.0; d.r0],
            };
            let la = match &twist_a {
                Some(t) => parse_components(t, d.dim_a, "--twist-a")?,
                None => vec![0.0; d.dim_a],
            };
            if !(vol > 0.0) {
                return Err(Failure::usage("--vol must be positive"));
            }
            let tw = FlatTwist::new(linalg::from_slice(&lt), la);
            let r = report::novikov(&s.ps, &s.hw, &tw, vol, s.conv, &s.num)?;
            let bytes = match c.format {
                OutputFormat::Json => json(&r),
                OutputFormat::Csv => csv_table(r.per_degree.iter().map(|e| DegreeCsv {
                    degree: e.degree,
                    case: e.case,
                    ns: &e.ns,
                })),
            };
            emit(&c.out, &bytes)?;
            Ok(EXIT_OK)
        }
        Command::Verify(c) => {
            let s = setup(&c)?;
            let checks = run_suite(&s.ps, &s.hw, s.conv, &s.num);
            let passed = checks.iter().all(|k| k.passed);
            let bytes = match c.format {
                OutputFormat::Json => json(&VerifyReport {
                    meta: report::Meta::new("verify", &s.ps, &s.hw, s.conv, &s.num),
                    passed,
                    checks,
                }),
                OutputFormat::Csv => csv_table(checks),
            };
            emit(&c.out, &bytes)?;
            Ok(if passed { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("heattrace: {}", f.message);
            f.code
        }
    }
}
