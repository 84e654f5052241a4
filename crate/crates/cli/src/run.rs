//! Command dispatch. Every command produces a JSON report and an exit code:
//! 0 definitive positive, 1 definitive negative, 2 undetermined, 3 for
//! input, I/O and usage errors.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use ncconvex_core::certify::{certify_a2, certify_xy, certify_xy_sdp_mu1, CertifyOptions, ConvexityCertificate};
use ncconvex_core::generic::amitsur_tuple;
use ncconvex_core::ncpoly::{FreePolynomial, Mode, VarClass};
use ncconvex_core::sampler::falsify;
use ncconvex_core::structure::exclusion_check;
use ncconvex_core::CertifyError;
use serde_json::{json, Value};

use crate::format::{matrix_to_file, parse_point, parse_polynomial, CertificateFile, CounterexampleFile, ModeName};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_POSITIVE: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_UNDETERMINED: u8 = 2;
pub const EXIT_ERROR: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "ncconvex", version, about = "Certify or refute partial convexity of free matrix polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// SDP feasibility tolerance.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,

    /// Seed for the falsifier's random trials.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Number of random falsifier trials.
    #[arg(long, global = true, default_value_t = 1000)]
    pub trials: usize,

    /// Iteration budget of each SDP solve.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub max_iters: usize,

    /// First-class degree of the Gram basis in certify-a2 (default: half the middle matrix degree).
    #[arg(long, global = true)]
    pub sos_degree: Option<usize>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Convexity notion for falsify (defaults to the file's mode).
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    A2,
    Xy,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::A2 => Mode::A2,
            ModeArg::Xy => Mode::XY,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree and excluded-word checks (necessary conditions).
    Check { input: PathBuf },
    /// Certify convexity in the second class: p = L + Λ*Λ.
    CertifyA2 { input: PathBuf },
    /// Certify xy-convexity: p = λ + Λ*Λ with xy-pencils λ, Λ.
    CertifyXy { input: PathBuf },
    /// Certify xy-convexity for one x and one y with a single 4d×4d Gram matrix.
    CertifyXySdp { input: PathBuf },
    /// Search for a convexity violation.
    Falsify { input: PathBuf },
    /// Evaluate a polynomial at a point file.
    Eval {
        input: PathBuf,
        #[arg(long)]
        point: PathBuf,
    },
    /// Print the shift-operator tuple on words of length at most `depth`.
    Amitsur {
        #[arg(long)]
        mu: usize,
        #[arg(long)]
        depth: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::CertifyA2 { .. } => "certify-a2",
            Command::CertifyXy { .. } => "certify-xy",
            Command::CertifyXySdp { .. } => "certify-xy-sdp",
            Command::Falsify { .. } => "falsify",
            Command::Eval { .. } => "eval",
            Command::Amitsur { .. } => "amitsur",
        }
    }
}

/// Exit code and JSON report of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: u8,
    pub report: Value,
}

struct Failure {
    code: u8,
    status: &'static str,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: EXIT_ERROR,
            status: "error",
            message: message.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    let result = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        fs::read_to_string(path)
    };
    result.map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(FreePolynomial, Mode), Failure> {
    parse_polynomial(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn validate(cli: &Cli) -> Result<(), Failure> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(Failure::input("--tol must be a positive number"));
    }
    if cli.trials == 0 {
        return Err(Failure::input("--trials must be at least 1"));
    }
    if cli.max_iters == 0 {
        return Err(Failure::input("--max-iters must be at least 1"));
    }
    Ok(())
}

fn flags(cli: &Cli) -> Value {
    json!({
        "tol": cli.tol,
        "seed": cli.seed,
        "trials": cli.trials,
        "max_iters": cli.max_iters,
        "sos_degree": cli.sos_degree,
        "mode": cli.mode.map(|m| ModeName::from(Mode::from(m))),
    })
}

fn certify_report(
    mode: Mode,
    result: Result<ConvexityCertificate, CertifyError>,
) -> Result<(u8, Value), Failure> {
    match result {
        Ok(cert) => Ok((
            EXIT_POSITIVE,
            json!({
                "status": "certified",
                "certificate": CertificateFile::new(&cert, mode),
            }),
        )),
        Err(err) => {
            let status = match &err {
                CertifyError::DegreeBound { .. } => "degree-bound",
                CertifyError::Structural { .. } => "structural",
                CertifyError::NotCertified { .. } => "not-certified",
                CertifyError::VerificationFailed { .. } => "verification-failed",
                _ => return Err(Failure::input(err)),
            };
            let code = if err.is_definitive() { EXIT_NEGATIVE } else { EXIT_UNDETERMINED };
            let mut report = json!({ "status": status, "message": err.to_string() });
            if let CertifyError::Structural { offending } = &err {
                report["offending_words"] = json!(offending.iter().map(|w| w.display(mode)).collect::<Vec<_>>());
            }
            if let CertifyError::DegreeBound { degree } = &err {
                report["degree"] = json!(degree);
            }
            Ok((code, report))
        }
    }
}

fn execute(cli: &Cli) -> Result<(u8, Value), Failure> {
    validate(cli)?;
    let opts = CertifyOptions {
        tol: cli.tol,
        max_iters: cli.max_iters,
        sos_degree: cli.sos_degree,
        ..CertifyOptions::default()
    };
    match &cli.command {
        Command::Check { input } => {
            let (p, mode) = load(input)?;
            let hermitian = p.rows() == p.cols() && p.is_hermitian(1e-10 * (1.0 + p.max_coeff_norm()));
            let first = p.degree_in_class(VarClass::First).unwrap_or(0);
            let second = p.degree_in_class(VarClass::Second).unwrap_or(0);
            let (passes, offending) = match mode {
                Mode::A2 => (second <= 2, Vec::new()),
                Mode::XY => {
                    let report = exclusion_check(&p);
                    let words: Vec<String> = report.offending_words.iter().map(|w| w.display(mode)).collect();
                    (report.passes, words)
                }
            };
            let code = if !hermitian || !passes { EXIT_NEGATIVE } else { EXIT_POSITIVE };
            Ok((
                code,
                json!({
                    "status": if code == EXIT_POSITIVE { "passes" } else { "fails" },
                    "hermitian": hermitian,
                    "degree_first": first,
                    "degree_second": second,
                    "offending_words": offending,
                }),
            ))
        }
        Command::CertifyA2 { input } => {
            let (p, mode) = load(input)?;
            certify_report(mode, certify_a2(&p, &opts))
        }
        Command::CertifyXy { input } => {
            let (p, mode) = load(input)?;
            certify_report(mode, certify_xy(&p, &opts))
        }
        Command::CertifyXySdp { input } => {
            let (p, mode) = load(input)?;
            certify_report(mode, certify_xy_sdp_mu1(&p, &opts))
        }
        Command::Falsify { input } => {
            let (p, file_mode) = load(input)?;
            let mode = cli.mode.map(Mode::from).unwrap_or(file_mode);
            let found = falsify(&p, mode, cli.trials, cli.seed).map_err(Failure::input)?;
            Ok(match found {
                Some(cx) => (
                    EXIT_NEGATIVE,
                    json!({
                        "status": "counterexample",
                        "falsify_mode": ModeName::from(mode),
                        "counterexample": CounterexampleFile::new(&cx, file_mode),
                    }),
                ),
                None => (
                    EXIT_UNDETERMINED,
                    json!({ "status": "none", "falsify_mode": ModeName::from(mode) }),
                ),
            })
        }
        Command::Eval { input, point } => {
            let (p, mode) = load(input)?;
            let pt = parse_point(&read(point)?, mode).map_err(|e| Failure::input(format!("{}: {e}", point.display())))?;
            let value = p.evaluate(&pt).map_err(Failure::input)?;
            Ok((EXIT_POSITIVE, json!({ "status": "ok", "value": matrix_to_file(&value) })))
        }
        Command::Amitsur { mu, depth } => {
            if *mu == 0 {
                return Err(Failure::input("--mu must be at least 1"));
            }
            let t = amitsur_tuple(*mu, *depth);
            Ok((
                EXIT_POSITIVE,
                json!({
                    "status": "ok",
                    "basis": t.basis.iter().map(|w| w.display(Mode::A2)).collect::<Vec<_>>(),
                    "matrices": t.matrices.iter().map(matrix_to_file).collect::<Vec<_>>(),
                    "vacuum": t.vacuum.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                }),
            ))
        }
    }
}

fn input_path(cmd: &Command) -> Option<String> {
    match cmd {
        Command::Check { input }
        | Command::CertifyA2 { input }
        | Command::CertifyXy { input }
        | Command::CertifyXySdp { input }
        | Command::Falsify { input }
        | Command::Eval { input, .. } => Some(input.display().to_string()),
        Command::Amitsur { .. } => None,
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let (code, body) = match execute(cli) {
        Ok(ok) => ok,
        Err(f) => (f.code, json!({ "status": f.status, "message": f.message })),
    };
    let mut report = json!({
        "tool": "ncconvex",
        "version": VERSION,
        "command": cli.command.name(),
        "input": input_path(&cli.command),
        "flags": flags(cli),
        "exit_code": code,
    });
    if let (Value::Object(dst), Value::Object(src)) = (&mut report, body) {
        dst.extend(src);
    }
    Outcome { code, report }
}
