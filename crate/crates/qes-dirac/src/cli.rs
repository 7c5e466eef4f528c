//! The `qescli` command set.
//!
//! Exit codes: 0 success, 1 a verification or audit reported a violation,
//! 2 bad flags / unreadable or malformed input, 3 physically rejected
//! parameters.

use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::context::derive_context;
use crate::osp22::{self, DecompositionMode, NParam};
use crate::rational::Rational;
use crate::report::VerifyDocument;
use crate::solution;
use crate::spectra::{self, ScanConfig};
use crate::{dirac, Error};

const EXIT_OK: i32 = 0;
const EXIT_VIOLATION: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_PHYSICS: i32 = 3;

#[derive(Parser)]
#[command(
    name = "qescli",
    version,
    about = "Operator-algebra verification and quasi-exact spectra for a \
             planar Dirac electron in Coulomb and uniform magnetic fields"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify the superalgebra relations, structure identities, operator
    /// decomposition, and invariant-subspace preservation
    VerifyAlgebra(VerifyArgs),
    /// Scan one sector for spectral points and emit solution records
    Solve(SolveArgs),
    /// Recompute every residual stored in a solutions file
    Check(CheckArgs),
    /// Tabulate both wavefunction components for one stored point
    Wavefunction(WaveArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Faithful,
    Corrected,
    Both,
}

#[derive(Args)]
struct VerifyArgs {
    /// Verify at a fixed rational n such as "3" or "5/2" instead of symbolically
    #[arg(long, value_name = "RATIONAL", conflicts_with = "n_symbolic")]
    n: Option<String>,
    /// Keep n symbolic (the default)
    #[arg(long)]
    n_symbolic: bool,
    /// Which generator decomposition of the master operator to check
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    mode: ModeArg,
    /// Emit the report as JSON
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Emit the report as plain text (the default)
    #[arg(long)]
    text: bool,
    /// Write the report to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Particle mass (sets the energy unit)
    #[arg(long)]
    m: f64,
    /// Coulomb coupling Z*alpha
    #[arg(long)]
    zalpha: f64,
    /// Orbital quantum number l
    #[arg(long, allow_hyphen_values = true)]
    l: i64,
    /// Degree of the polynomial part of the upper component
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = spectra::DEFAULT_X0_MIN, allow_hyphen_values = true)]
    x0_min: f64,
    #[arg(long, default_value_t = spectra::DEFAULT_X0_MAX, allow_hyphen_values = true)]
    x0_max: f64,
    /// Number of bracketing grid points across the scan range
    #[arg(long, default_value_t = spectra::DEFAULT_GRID_POINTS)]
    grid_points: usize,
    /// Acceptance tolerance on the kernel residuals and smallest singular value
    #[arg(long, default_value_t = spectra::DEFAULT_TOL_ACCEPT)]
    tol: f64,
    /// Emit solution records as JSON (the default)
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Emit a one-line-per-point CSV summary instead of JSON
    #[arg(long)]
    csv: bool,
    /// Write the artifact to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Solutions file produced by `solve --json`
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Additionally require recomputed residuals to match stored ones bit for bit
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct WaveArgs {
    /// Solutions file produced by `solve --json`
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Which record of the file to tabulate
    #[arg(long)]
    index: usize,
    /// Largest radius of the table (default: 10 magnetic lengths)
    #[arg(long, value_name = "R")]
    rmax: Option<f64>,
    /// Number of log-spaced rows
    #[arg(long, default_value_t = 64)]
    samples: usize,
    /// Write the CSV to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match cli.cmd {
        Cmd::VerifyAlgebra(a) => run_verify(a),
        Cmd::Solve(a) => run_solve(a),
        Cmd::Check(a) => run_check(a),
        Cmd::Wavefunction(a) => run_wavefunction(a),
    }
}

/// Print to stdout or atomically to --out.
fn emit(out: Option<&PathBuf>, payload: &str) -> i32 {
    match out {
        Some(path) => match solution::atomic_write(path, payload) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("cannot write {}: {e}", path.display());
                EXIT_USAGE
            }
        },
        None => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(payload.as_bytes()).and_then(|()| stdout.flush()).is_err() {
                return EXIT_USAGE;
            }
            EXIT_OK
        }
    }
}

fn run_verify(args: VerifyArgs) -> i32 {
    let nparam = match &args.n {
        Some(text) => match text.parse::<Rational>() {
            Ok(r) => NParam::Value(r),
            Err(_) => {
                let mut cmd = Cli::command();
                eprintln!(
                    "{}",
                    cmd.error(
                        clap::error::ErrorKind::InvalidValue,
                        format!("--n expects an integer or a fraction like 5/2, got {text:?}"),
                    )
                );
                return EXIT_USAGE;
            }
        },
        None => NParam::Symbolic,
    };
    let symbolic = nparam == NParam::Symbolic;
    let generators = osp22::make_generators(nparam);

    let mut reports = vec![osp22::verify_osp_relations(&generators)];
    if symbolic {
        reports.push(osp22::verify_structure_identities(&generators));
        let mode = match args.mode {
            ModeArg::Faithful => Some(DecompositionMode::Faithful),
            ModeArg::Corrected => Some(DecompositionMode::Corrected),
            ModeArg::Both => None,
        };
        reports.push(osp22::decomposition_report(&generators, mode));
    }
    for nv in 0..=6 {
        reports.push(osp22::subspace_image_check(nv));
    }
    let doc = VerifyDocument::new(reports);
    let payload = if args.json { doc.to_json() } else { doc.render_text() };
    let code = emit(args.out.as_ref(), &payload);
    if code != EXIT_OK {
        return code;
    }
    if doc.overall_pass {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

fn run_solve(args: SolveArgs) -> i32 {
    let ctx = match derive_context(args.m, args.zalpha, args.l, args.n) {
        Ok(ctx) => ctx,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_PHYSICS;
        }
    };
    let cfg = ScanConfig {
        x0_min: args.x0_min,
        x0_max: args.x0_max,
        grid_points: args.grid_points,
        tol_accept: args.tol,
        tol_refine: spectra::DEFAULT_TOL_REFINE,
    };
    let outcome = match spectra::find_spectral_points(&ctx, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_USAGE;
        }
    };
    if outcome.points.is_empty() {
        eprintln!(
            "warning: no spectral points in [{}, {}] for this sector ({} near miss(es))",
            cfg.x0_min,
            cfg.x0_max,
            outcome.diagnostics.near_misses.len()
        );
    } else {
        eprintln!(
            "{} spectral point(s) accepted, {} near miss(es)",
            outcome.points.len(),
            outcome.diagnostics.near_misses.len()
        );
    }
    let records = solution::make_records(&ctx, outcome.points, &cfg);
    let payload = if args.csv {
        solution::solve_csv(&records)
    } else {
        match solution::records_to_json(&records) {
            Ok(p) => p,
            Err(e) => {
                eprintln!("{e}");
                return EXIT_USAGE;
            }
        }
    };
    emit(args.out.as_ref(), &payload)
}

fn load_records(path: &PathBuf) -> Result<Vec<solution::SolutionRecord>, i32> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", path.display());
            return Err(EXIT_USAGE);
        }
    };
    match solution::records_from_json(&text) {
        Ok(r) => Ok(r),
        Err(e) => {
            eprintln!("cannot parse {}: {e}", path.display());
            Err(EXIT_USAGE)
        }
    }
}

fn run_check(args: CheckArgs) -> i32 {
    let records = match load_records(&args.input) {
        Ok(r) => r,
        Err(code) => return code,
    };
    if records.is_empty() {
        eprintln!("warning: {} holds no records", args.input.display());
        println!("checked 0 records");
        return EXIT_OK;
    }
    let mut failures = 0usize;
    for (i, rec) in records.iter().enumerate() {
        let tol = rec.provenance.scan.tol_accept;
        match solution::audit_record(rec) {
            Ok(audit) => {
                let ok = if args.strict { audit.pass_strict(tol) } else { audit.pass(tol) };
                if !ok {
                    failures += 1;
                }
                let r = &audit.recomputed;
                println!(
                    "record {i}: x0 = {:+.12e}, E = {:+.12e}: {}",
                    rec.point.x0,
                    rec.point.energy,
                    if ok { "PASS" } else { "FAIL" }
                );
                println!(
                    "  kernel r0 = {:.3e}  r1 = {:.3e}  tail = {:.3e}  sigma_min = {:.3e}",
                    r.kernel_r0, r.kernel_r1, audit.kernel_tail, r.sigma_min
                );
                println!(
                    "  division rem = {:.3e}  P gap = {:.3e}  ode_q = {:.3e}  ode_p = {:.3e}  dirac = {:.3e}",
                    r.divis_rem, audit.pcoeff_gap, r.ode_q, r.ode_p, r.dirac_max
                );
                println!(
                    "  identities = {:.3e} {:.3e} {:.3e}  monic = {}",
                    audit.identities[0], audit.identities[1], audit.identities[2], audit.monic_ok
                );
                if args.strict {
                    if audit.strict_mismatches.is_empty() {
                        println!("  strict: all stored residuals reproduced bit for bit");
                    } else {
                        println!("  strict: recomputation differs in {}", audit.strict_mismatches.join(", "));
                    }
                }
            }
            Err(e) => {
                failures += 1;
                println!("record {i}: FAIL ({e})");
            }
        }
    }
    println!("checked {} record(s), {failures} failure(s)", records.len());
    if failures > 0 {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}

fn run_wavefunction(args: WaveArgs) -> i32 {
    let records = match load_records(&args.input) {
        Ok(r) => r,
        Err(code) => return code,
    };
    let Some(rec) = records.get(args.index) else {
        eprintln!(
            "index {} out of range: {} holds {} record(s)",
            args.index,
            args.input.display(),
            records.len()
        );
        return EXIT_USAGE;
    };
    let r_max = args.rmax.unwrap_or(10.0 * rec.point.l_b);
    let table = match dirac::sample_table(&rec.context, &rec.point, r_max, args.samples) {
        Ok(t) => t,
        Err(e @ (Error::InvalidArgument(_) | Error::EmptySampleSet)) => {
            eprintln!("{e}");
            return EXIT_USAGE;
        }
        Err(e) => {
            eprintln!("{e}");
            return EXIT_USAGE;
        }
    };
    emit(args.out.as_ref(), &solution::wavefunction_csv(&table))
}
