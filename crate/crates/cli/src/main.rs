//! Batch front end for the bound-state solver.
//!
//! Subcommands: `table1` (reference-table reproduction with pass/fail exit),
//! `eigen` (spectrum as CSV or JSON), `scan` (spectral-function samples),
//! `wavefunction` (normalized profile export) and `verify` (spectral vs
//! shooting cross-check).
//!
//! Exit codes: 0 on success, 1 on numerical failure (a tolerance was not
//! met), 2 on usage errors. `DIRAC1D_TOL` overrides the root refinement
//! tolerance for every command that refines roots.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dirac1d::oracle;
use dirac1d::spectral::{
    self, eigenvalues_with_tol, EigenvalueRecord, PhysicalParams, DEFAULT_REFINE_TOL,
};
use dirac1d::wavefunction::{self, EnergySign, DEFAULT_GRID_POINTS};

/// Reference values nu_n for alpha in {0, 1, 2}, printed to six decimals.
const REFERENCE_TABLE: [(f64, [f64; 5]); 3] = [
    (0.0, [0.345_459, 1.548_571, 2.468_573, 3.522_295, 4.482_395]),
    (1.0, [1.396_274, 3.056_760, 4.306_277, 5.615_211, 6.804_771]),
    (2.0, [3.338_595, 5.452_161, 7.006_087, 8.568_946, 9.978_608]),
];

const TABLE_TOL: f64 = 5e-6;

#[derive(Parser)]
#[command(
    name = "dirac1d",
    version,
    about = "Bound states of the 1+1D Dirac equation with the scalar potential g|x|"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute the five lowest nu for alpha in {0, 1, 2} and compare
    /// against the built-in reference table (exit 1 on any deviation)
    Table1,
    /// Compute the lowest `count` levels and emit them as CSV or JSON
    Eigen(EigenArgs),
    /// Sample the spectral function f(nu; alpha) on a nu grid as CSV
    Scan(ScanArgs),
    /// Export one normalized bound-state profile as CSV
    Wavefunction(WavefunctionArgs),
    /// Cross-check spectral energies against the shooting integrator
    Verify(VerifyArgs),
}

/// Problem parameters: either `--alpha` (unit coupling) or `--mass` with
/// `--coupling`. The roots depend only on alpha; the coupling sets the
/// energy scale.
#[derive(Args)]
struct ParamsArgs {
    /// Dimensionless mass m / sqrt(g); implies g = 1
    #[arg(long, conflicts_with_all = ["mass", "coupling"])]
    alpha: Option<f64>,
    /// Fermion mass m >= 0
    #[arg(long)]
    mass: Option<f64>,
    /// Coupling strength g > 0
    #[arg(long)]
    coupling: Option<f64>,
}

impl ParamsArgs {
    fn resolve(&self) -> Result<PhysicalParams, CliError> {
        let params = if let Some(alpha) = self.alpha {
            PhysicalParams::from_alpha(alpha)
        } else if self.mass.is_some() || self.coupling.is_some() {
            PhysicalParams::new(self.mass.unwrap_or(0.0), self.coupling.unwrap_or(1.0))
        } else {
            return Err(CliError::Usage(
                "specify --alpha or --mass/--coupling".into(),
            ));
        };
        params.map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Args)]
struct EigenArgs {
    #[command(flatten)]
    params: ParamsArgs,
    /// Number of levels, lowest first
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    count: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path (standard output when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    params: ParamsArgs,
    /// Upper end of the nu window
    #[arg(long = "nu-max")]
    nu_max: f64,
    /// Sample spacing in nu
    #[arg(long, default_value_t = 0.05)]
    step: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WavefunctionArgs {
    #[command(flatten)]
    params: ParamsArgs,
    /// Level index, 0 = ground state
    #[arg(long)]
    index: u32,
    /// Number of grid abscissas (odd)
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    points: usize,
    /// Half-width of the sampling box (defaults to eight envelope widths)
    #[arg(long = "x-max")]
    x_max: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    params: ParamsArgs,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    count: u32,
    /// Maximum relative energy disagreement between the two methods
    #[arg(long, default_value_t = 1e-5)]
    tolerance: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum CliError {
    /// A tolerance was not met or a numerical routine failed: exit 1.
    Numerical(String),
    /// Bad arguments or environment: exit 2.
    Usage(String),
}

impl From<dirac1d::Error> for CliError {
    fn from(e: dirac1d::Error) -> Self {
        match e {
            dirac1d::Error::InvalidInput(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Numerical(format!("i/o error: {e}"))
    }
}

/// Nine significant digits for all human-readable numeric output.
fn fmt9(v: f64) -> String {
    format!("{v:.8e}")
}

fn refine_tol() -> Result<f64, CliError> {
    match std::env::var("DIRAC1D_TOL") {
        Ok(raw) => {
            let tol: f64 = raw
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("DIRAC1D_TOL is not a number: {raw:?}")))?;
            if tol.is_finite() && tol > 0.0 {
                Ok(tol)
            } else {
                Err(CliError::Usage(
                    "DIRAC1D_TOL must be finite and positive".into(),
                ))
            }
        }
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_REFINE_TOL),
        Err(e) => Err(CliError::Usage(format!("DIRAC1D_TOL: {e}"))),
    }
}

fn writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Table1 => cmd_table1(),
        Command::Eigen(args) => cmd_eigen(&args),
        Command::Scan(args) => cmd_scan(&args),
        Command::Wavefunction(args) => cmd_wavefunction(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_table1() -> Result<(), CliError> {
    let tol = refine_tol()?;
    let mut columns = Vec::new();
    for (alpha, _) in &REFERENCE_TABLE {
        let params = PhysicalParams::from_alpha(*alpha).map_err(CliError::from)?;
        columns.push(eigenvalues_with_tol(&params, 5, tol)?);
    }

    let mut failures = Vec::new();
    println!("Roots of H_nu(alpha)^2 - 2 nu H_(nu-1)(alpha)^2 = 0 (tolerance {TABLE_TOL:.0e})");
    println!();
    let header = REFERENCE_TABLE
        .iter()
        .map(|(alpha, _)| format!("{:>37}", format!("alpha = {alpha}")))
        .collect::<Vec<_>>()
        .join("");
    println!("level{header}");
    for level in 0..5 {
        let mut row = format!("nu_{level} ");
        for (column, (alpha, reference)) in columns.iter().zip(REFERENCE_TABLE.iter()) {
            let computed = column[level].nu;
            let expected = reference[level];
            let delta = (computed - expected).abs();
            if delta > TABLE_TOL {
                failures.push(format!(
                    "alpha={alpha}, level {level}: computed {computed} vs reference {expected} (|d| = {delta:.2e})"
                ));
            }
            row.push_str(&format!(
                " {:>15} {expected:.6} {delta:7.1e}",
                fmt9(computed)
            ));
        }
        println!("{row}");
    }
    println!();
    if failures.is_empty() {
        println!("all 15 cells within {TABLE_TOL:.0e}");
        Ok(())
    } else {
        for f in &failures {
            eprintln!("FAIL {f}");
        }
        Err(CliError::Numerical(format!(
            "{} of 15 cells off the reference table",
            failures.len()
        )))
    }
}

fn cmd_eigen(args: &EigenArgs) -> Result<(), CliError> {
    let params = args.params.resolve()?;
    let tol = refine_tol()?;
    let records = eigenvalues_with_tol(&params, args.count as usize, tol)?;
    let mut out = writer(&args.out)?;
    match args.format {
        Format::Csv => {
            write!(out, "{}", eigen_csv(&records))?;
        }
        Format::Json => {
            let body = serde_json::to_string_pretty(&records)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            writeln!(out, "{body}")?;
        }
    }
    Ok(())
}

fn eigen_csv(records: &[EigenvalueRecord]) -> String {
    let mut s = String::from("index,nu,e_plus,e_minus,residual\n");
    for r in records {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            r.index,
            fmt9(r.nu),
            fmt9(r.e_plus),
            fmt9(r.e_minus),
            fmt9(r.residual)
        ));
    }
    s
}

fn cmd_scan(args: &ScanArgs) -> Result<(), CliError> {
    let params = args.params.resolve()?;
    if !(args.nu_max > 0.0 && args.nu_max.is_finite()) {
        return Err(CliError::Usage("--nu-max must be positive".into()));
    }
    if !(args.step > 0.0 && args.step <= 0.5) {
        return Err(CliError::Usage("--step must lie in (0, 0.5]".into()));
    }
    let alpha = params.alpha();
    let mut out = writer(&args.out)?;
    writeln!(out, "nu,f")?;
    let mut i = 0u64;
    loop {
        i += 1;
        let nu = (i as f64 * args.step).min(args.nu_max);
        let f = spectral::spectral_fn(nu, alpha)?;
        writeln!(out, "{},{}", fmt9(nu), fmt9(f))?;
        if nu >= args.nu_max {
            return Ok(());
        }
    }
}

fn cmd_wavefunction(args: &WavefunctionArgs) -> Result<(), CliError> {
    let params = args.params.resolve()?;
    let tol = refine_tol()?;
    let records = eigenvalues_with_tol(&params, args.index as usize + 1, tol)?;
    let record = records.last().expect("count >= 1 records");
    let x_max = args.x_max.unwrap_or_else(|| wavefunction::default_x_max(&params));
    let profile = wavefunction::assemble(record, &params, EnergySign::Plus, x_max, args.points)?;

    let mut out = writer(&args.out)?;
    writeln!(out, "# nu = {}", fmt9(profile.nu))?;
    writeln!(out, "# e = {}", fmt9(profile.energy))?;
    writeln!(out, "# norm = {}", fmt9(profile.norm))?;
    writeln!(out, "# continuity_defect = {}", fmt9(profile.continuity_defect))?;
    writeln!(out, "x,psi1,psi2")?;
    for p in &profile.grid {
        writeln!(out, "{},{},{}", fmt9(p.x), fmt9(p.psi1), fmt9(p.psi2))?;
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    if !(args.tolerance.is_finite() && args.tolerance > 0.0) {
        return Err(CliError::Usage("--tolerance must be positive".into()));
    }
    let params = args.params.resolve()?;
    let tol = refine_tol()?;
    let count = args.count as usize;
    let spectral_records = eigenvalues_with_tol(&params, count, tol)?;
    let shots = oracle::shoot_eigenvalues(&params, count)?;

    println!("level  e_spectral        e_shooting        rel_diff");
    let mut worst = 0.0_f64;
    for (record, shot) in spectral_records.iter().zip(&shots) {
        let rel = (shot.energy - record.e_plus).abs() / record.e_plus;
        worst = worst.max(rel);
        println!(
            "{:<6} {:<17} {:<17} {:.2e}",
            record.index,
            fmt9(record.e_plus),
            fmt9(shot.energy),
            rel
        );
    }
    println!();
    if worst <= args.tolerance {
        println!("methods agree to {:.1e} (worst {:.2e})", args.tolerance, worst);
        Ok(())
    } else {
        Err(CliError::Numerical(format!(
            "methods disagree: worst relative difference {worst:.2e} above {:.1e}",
            args.tolerance
        )))
    }
}
