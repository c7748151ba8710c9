//! Command-line front end. Files carry the machine-readable reports; stdout
//! carries a short human summary.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 invalid input, 3 a
//! residual exceeded its tolerance where success was required.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::colligation::{disc_grid, ColligationCheck, TransferReport, DEFAULT_MAX_RADIUS};
use crate::error::Error;
use crate::io::{parse_colligation, parse_symbol, to_json_bytes, write_atomic, UnitaryPartReportJson, SCHEMA};
use crate::linalg::DEFAULT_TOL;
use crate::scenarios::{is_known, run_scenario, ScenarioConfig, DEFAULT_SEED, DEFAULT_WINDOW};
use crate::symbol::{CircleGrid, DEFAULT_GRID};
use crate::unitary_part::toeplitz_unitary_part;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_ASSERTION: i32 = 3;

/// Default number of disc points for `transfer`.
pub const DEFAULT_TRANSFER_POINTS: usize = 64;

#[derive(Debug, Parser)]
#[command(name = "hardy-unitary", version, about = "Unitary parts of Toeplitz contractions with matrix symbols")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the unitary part of T_Φ on a degree window from a symbol file.
    Decompose(DecomposeArgs),
    /// Validate a colligation and check its transfer-function identities.
    Transfer(TransferArgs),
    /// Run a named scenario (or "all") and write one report per instance.
    Scenario(ScenarioArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DecomposeArgs {
    /// Symbol JSON: {"dim_out", "dim_in", "coeffs": [{"k", "re", "im"}]}.
    #[arg(long)]
    pub input: PathBuf,
    /// Report path; without it the report JSON goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Polynomials of degree < window are searched.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    /// Points on the circle used for sup norms and residuals.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Recorded in the report; the computation itself is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TransferArgs {
    /// Colligation JSON: {"dim_e", "dim_k", "A", "B", "C", "D"}.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Number of disc points (|λ| ≤ 0.99).
    #[arg(long, default_value_t = DEFAULT_TRANSFER_POINTS)]
    pub grid: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScenarioArgs {
    /// Scenario id, or "all".
    #[arg(long, default_value = "all")]
    pub scenario: String,
    /// Results directory (created if missing).
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

/// Maps library errors onto exit codes.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) | Error::Json(_) | Error::Format(_) => EXIT_IO,
        _ => EXIT_INVALID,
    }
}

fn fail(err: &Error) -> i32 {
    eprintln!("error: {err}");
    exit_code(err)
}

fn check_tol(tol: f64) -> Result<(), Error> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("tol must be positive, got {tol}")))
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), Error> {
    let bytes = to_json_bytes(value)?;
    match out {
        Some(path) => write_atomic(path, &bytes),
        None => {
            print!("{}", String::from_utf8_lossy(&bytes));
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct DecomposeFile<'a> {
    schema: &'static str,
    config: &'a DecomposeArgs,
    report: UnitaryPartReportJson,
}

pub fn cmd_decompose(args: &DecomposeArgs) -> i32 {
    let run = || -> Result<i32, Error> {
        let text = fs::read_to_string(&args.input)?;
        let sym = parse_symbol(&text)?;
        check_tol(args.tol)?;
        if args.window == 0 {
            return Err(Error::Precondition("window must be at least 1".into()));
        }
        if args.grid < 2 * sym.band() + 1 {
            return Err(Error::Precondition(format!("grid must be at least {}", 2 * sym.band() + 1)));
        }
        let grid = CircleGrid::new(args.grid)?;
        let report = toeplitz_unitary_part(&sym, args.window, &grid, args.tol)?;
        let file = DecomposeFile { schema: SCHEMA, config: args, report: UnitaryPartReportJson::new(&report, args.seed) };
        emit(&file, args.out.as_deref())?;
        if args.out.is_some() {
            println!(
                "unitary part: dim {} of {} on window {} ({:?}); residuals fwd {:.2e} adj {:.2e} inner {:.2e}",
                report.subspace.dim(),
                report.subspace.ambient_dim(),
                report.window,
                report.classification,
                report.residual_intertwine_fwd,
                report.residual_intertwine_adj,
                report.residual_inner,
            );
        }
        let certified = report.certification.part.max() <= args.tol;
        Ok(if certified { EXIT_OK } else { EXIT_ASSERTION })
    };
    run().unwrap_or_else(|e| fail(&e))
}

#[derive(Serialize)]
struct TransferFile<'a> {
    schema: &'static str,
    config: &'a TransferArgs,
    validation: ColligationCheck,
    transfer: TransferReport,
}

pub fn cmd_transfer(args: &TransferArgs) -> i32 {
    let run = || -> Result<i32, Error> {
        let text = fs::read_to_string(&args.input)?;
        let w = parse_colligation(&text)?;
        check_tol(args.tol)?;
        let validation = w.validate(args.tol);
        if !validation.valid {
            return Err(Error::NotUnitary { residual: validation.residual() });
        }
        let transfer = w.defect_identities(&disc_grid(args.grid, DEFAULT_MAX_RADIUS))?;
        let ok = transfer.max_defect1 <= args.tol && transfer.max_defect2 <= args.tol && transfer.max_norm <= 1.0 + args.tol;
        if args.out.is_some() {
            println!(
                "colligation: dim E {}, dim K {}; defect residuals {:.2e} / {:.2e}; max ‖τ(λ)‖ {:.12}",
                w.dim_e(),
                w.dim_k(),
                transfer.max_defect1,
                transfer.max_defect2,
                transfer.max_norm
            );
        }
        emit(&TransferFile { schema: SCHEMA, config: args, validation, transfer }, args.out.as_deref())?;
        Ok(if ok { EXIT_OK } else { EXIT_ASSERTION })
    };
    run().unwrap_or_else(|e| fail(&e))
}

#[derive(Serialize)]
struct IndexEntry {
    scenario_id: String,
    instance: String,
    file: String,
    overall: bool,
}

#[derive(Serialize)]
struct IndexFile<'a> {
    schema: &'static str,
    config: &'a ScenarioArgs,
    results: Vec<IndexEntry>,
    overall: bool,
}

pub fn cmd_scenario(args: &ScenarioArgs) -> i32 {
    if !is_known(&args.scenario) {
        eprintln!("error: unknown scenario {:?}", args.scenario);
        return EXIT_INVALID;
    }
    let run = || -> Result<i32, Error> {
        check_tol(args.tol)?;
        if args.window == 0 {
            return Err(Error::Precondition("window must be at least 1".into()));
        }
        let cfg = ScenarioConfig { window: args.window, grid: CircleGrid::new(args.grid)?, tol: args.tol };
        let results = run_scenario(&args.scenario, args.seed, &cfg)?;
        fs::create_dir_all(&args.out)?;
        let mut entries = Vec::new();
        let mut counts = std::collections::BTreeMap::<String, usize>::new();
        for r in &results {
            let n = counts.entry(r.scenario_id.clone()).or_default();
            let file = format!("{}-{:02}.json", r.scenario_id, n);
            *n += 1;
            write_atomic(&args.out.join(&file), &to_json_bytes(r)?)?;
            println!("{} {:<18} {}", if r.overall { "PASS" } else { "FAIL" }, r.scenario_id, r.instance);
            entries.push(IndexEntry {
                scenario_id: r.scenario_id.clone(),
                instance: r.instance.clone(),
                file,
                overall: r.overall,
            });
        }
        let overall = entries.iter().all(|e| e.overall);
        let index = IndexFile { schema: SCHEMA, config: args, results: entries, overall };
        write_atomic(&args.out.join("index.json"), &to_json_bytes(&index)?)?;
        println!("{} of {} instances passed", index.results.iter().filter(|e| e.overall).count(), index.results.len());
        Ok(if overall { EXIT_OK } else { EXIT_ASSERTION })
    };
    run().unwrap_or_else(|e| fail(&e))
}

pub fn run(cli: &Cli) -> i32 {
    match &cli.command {
        Command::Decompose(a) => cmd_decompose(a),
        Command::Transfer(a) => cmd_transfer(a),
        Command::Scenario(a) => cmd_scenario(a),
    }
}
