//! `matgame` command-line front end.
//!
//! Subcommands: `solve`, `analyze`, `verify` and `oracle`. Every subcommand writes a single
//! JSON document (floats with 17 significant digits) to standard output or `--output`.
//!
//! Exit codes: 0 when every verdict is `Holds` or `NotApplicable`, 1 when any verdict is
//! `Violated`, 2 on bad input or usage, 3 on an internal numerical inconsistency.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use matgame::claims::{Auditor, ClaimId, ClaimReport, Verdict, VerdictSummary, DEFAULT_CLAIM_TOL};
use matgame::ensemble::{EnsembleFamily, EnsembleSpec};
use matgame::solver::{oracle_solve, solve_game, DEFAULT_SOLVE_TOL};
use matgame::spectral::{
    gordan, null_space, perron, stochastic_eigenvector, GordanBranch, KernelBasis, SpectralCert,
    DEFAULT_PERRON_TOL, DEFAULT_RANK_TOL,
};
use matgame::{parse_matrix, to_json, Error, GameMatrix, MatrixFormat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "matgame", version, about = "Zero-sum matrix games, spectra and claim audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Value and optimal strategies of a matrix game.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = DEFAULT_SOLVE_TOL)]
        tol: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Perron data, kernel dimension, Gordan branch and stochastic eigenvectors.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long = "lambda", allow_negative_numbers = true)]
        lambdas: Vec<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Audit one claim (or all) on a matrix file or a seeded ensemble.
    Verify(VerifyArgs),
    /// Support-enumeration equilibrium for games up to 5x5.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    /// csv or json; inferred from the file extension when omitted.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Claim identifier; all claims when omitted.
    #[arg(long)]
    claim: Option<String>,
    #[arg(long, conflicts_with = "ensemble", required_unless_present = "ensemble")]
    input: Option<PathBuf>,
    #[arg(long, requires = "input")]
    format: Option<String>,
    #[arg(long, requires_all = ["size", "trials", "seed"])]
    ensemble: Option<String>,
    #[arg(long)]
    size: Option<usize>,
    /// Column count for nonsquare `General` ensembles.
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    hi: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_CLAIM_TOL)]
    tol: f64,
    #[arg(long = "lambda", allow_negative_numbers = true)]
    lambdas: Vec<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// A failure that maps onto an exit code.
#[derive(Debug)]
enum CliError {
    Input(String),
    Internal(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    value: f64,
    row_strategy: &'a [f64],
    col_strategy: &'a [f64],
    duality_gap: f64,
    tolerance: f64,
}

#[derive(Serialize)]
struct OracleOutput<'a> {
    value: f64,
    row_support: &'a [usize],
    col_support: &'a [usize],
    row_strategy: &'a [f64],
    col_strategy: &'a [f64],
}

#[derive(Serialize)]
struct GordanOutput {
    branch: &'static str,
    witness: Vec<f64>,
}

#[derive(Serialize)]
struct EigenOutput {
    lambda: f64,
    witness: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct AnalyzeOutput {
    rows: usize,
    cols: usize,
    perron: Option<SpectralCert>,
    null_space: KernelBasis,
    gordan: GordanOutput,
    stochastic_eigenvectors: Vec<EigenOutput>,
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    reports: &'a [ClaimReport],
    summary: VerdictSummary,
}

fn read_matrix(input: &Path, format: Option<&str>) -> Result<GameMatrix, CliError> {
    let format = match format {
        Some(f) => f.parse::<MatrixFormat>()?,
        None => match input.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => MatrixFormat::Json,
            _ => MatrixFormat::Csv,
        },
    };
    let text = fs::read_to_string(input)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", input.display())))?;
    Ok(parse_matrix(&text, format)?)
}

fn emit(doc: String, output: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, doc + "\n")
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => writeln!(stdout, "{doc}").map_err(|e| CliError::Internal(e.to_string())),
    }
}

fn solve_cmd(input: &InputArgs, tol: f64, output: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let a = read_matrix(&input.input, input.format.as_deref())?;
    let s = solve_game(&a, tol)?;
    let doc = to_json(&SolveOutput {
        value: s.value,
        row_strategy: s.row_strategy.weights(),
        col_strategy: s.col_strategy.weights(),
        duality_gap: s.duality_gap,
        tolerance: s.tolerance,
    });
    emit(doc, output, out)?;
    Ok(EXIT_OK)
}

fn oracle_cmd(input: &InputArgs, output: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let a = read_matrix(&input.input, input.format.as_deref())?;
    let o = oracle_solve(&a)?;
    let doc = to_json(&OracleOutput {
        value: o.value,
        row_support: &o.row_support,
        col_support: &o.col_support,
        row_strategy: o.row_strategy.weights(),
        col_strategy: o.col_strategy.weights(),
    });
    emit(doc, output, out)?;
    Ok(EXIT_OK)
}

fn analyze_cmd(
    input: &InputArgs,
    lambdas: &[f64],
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let a = read_matrix(&input.input, input.format.as_deref())?;
    let perron = if a.is_square() && a.min_entry() > 0.0 {
        Some(perron(&a, DEFAULT_PERRON_TOL)?)
    } else {
        None
    };
    let g = gordan(&a)?;
    let mut eigen = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let witness = if a.is_square() {
            stochastic_eigenvector(&a, lambda)?.map(|w| w.weights().to_vec())
        } else {
            None
        };
        eigen.push(EigenOutput { lambda, witness });
    }
    let doc = to_json(&AnalyzeOutput {
        rows: a.rows(),
        cols: a.cols(),
        perron,
        null_space: null_space(&a, DEFAULT_RANK_TOL),
        gordan: GordanOutput {
            branch: match g.branch {
                GordanBranch::NonnegativeKernel => "NonnegativeKernel",
                GordanBranch::PositiveImage => "PositiveImage",
            },
            witness: g.witness,
        },
        stochastic_eigenvectors: eigen,
    });
    emit(doc, output, out)?;
    Ok(EXIT_OK)
}

fn verify_cmd(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let claims: Vec<ClaimId> = match &args.claim {
        Some(c) => vec![c.parse::<ClaimId>()?],
        None => ClaimId::ALL.to_vec(),
    };
    if !(args.tol > 0.0) {
        return Err(CliError::Input(format!("--tol must be positive, got {}", args.tol)));
    }
    let auditor = Auditor::new(args.tol);
    let reports = if let Some(path) = &args.input {
        let a = read_matrix(path, args.format.as_deref())?;
        auditor.audit_matrices(&claims, &[a], &args.lambdas)?
    } else {
        let family: EnsembleFamily = args
            .ensemble
            .as_deref()
            .ok_or_else(|| CliError::Input("either --input or --ensemble is required".into()))?
            .parse()?;
        let size = args.size.expect("clap enforces --size");
        let spec = EnsembleSpec::new(
            family,
            size,
            args.trials.expect("clap enforces --trials"),
            args.seed.expect("clap enforces --seed"),
        )
        .with_cols(args.cols.unwrap_or(size));
        let (lo, hi) = (args.lo.unwrap_or(spec.lo), args.hi.unwrap_or(spec.hi));
        let spec = spec.with_range(lo, hi);
        auditor.audit_ensemble(&claims, &spec, &args.lambdas)?
    };
    let summary = VerdictSummary::of(&reports);
    emit(
        to_json(&VerifyOutput {
            reports: &reports,
            summary,
        }),
        args.output.as_deref(),
        out,
    )?;
    Ok(if reports.iter().any(|r| r.verdict == Verdict::Violated) {
        EXIT_VIOLATED
    } else {
        EXIT_OK
    })
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run_cli<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match &cli.command {
        Command::Solve { input, tol, output } => solve_cmd(input, *tol, output.as_deref(), stdout),
        Command::Analyze {
            input,
            lambdas,
            output,
        } => analyze_cmd(input, lambdas, output.as_deref(), stdout),
        Command::Verify(args) => verify_cmd(args, stdout),
        Command::Oracle { input, output } => oracle_cmd(input, output.as_deref(), stdout),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INPUT
        }
        Err(CliError::Internal(msg)) => {
            let _ = writeln!(stderr, "internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}
