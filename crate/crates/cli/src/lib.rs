//! Command-line front end for `orbitscope`.
//!
//! Every command writes JSON to the supplied writer. Exit codes: 0 on success,
//! 1 when a verification fails, 2 on usage or input errors.

pub mod report;
pub mod spec;
pub mod verify;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use orbitscope::orbit_matrix::{analyze, min_orbit_bound, AnalysisOptions};
use orbitscope::state::sample_haar_state;
use orbitscope::{OrbitMatrix, DEFAULT_TOLERANCE};

use report::{AnalysisReport, SweepAggregate, SweepSample};
pub use spec::{SpecError, StateSpec, MAX_CLI_QUBITS};

/// Overrides the default rank tolerance when `--tol` is absent.
pub const TOLERANCE_ENV: &str = "ORBITSCOPE_TOL";

/// Samples analyzed in parallel before their lines are written.
const SWEEP_CHUNK: u64 = 256;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] orbitscope::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use orbitscope::Error as E;
        match self {
            CliError::Verification(_) => 1,
            CliError::Core(E::Internal(_) | E::InternalContradiction) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "orbitscope", version, about = "Local-unitary orbit dimensions of n-qubit pure states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank, orbit dimension and isotropy algebra of one state.
    Analyze {
        /// singlet*<k>, singlet*<k>+0, cat:<n>, basis:<bits>, random:<n>:<seed> or file:<path>
        #[arg(long)]
        state: String,
        /// Relative rank tolerance for floating-point states.
        #[arg(long)]
        tol: Option<f64>,
        /// Fail unless the state has exact rational amplitudes.
        #[arg(long)]
        exact: bool,
        /// Write the orbit matrix as CSV.
        #[arg(long, value_name = "PATH")]
        dump_matrix: Option<PathBuf>,
    },
    /// Orbit dimensions of many random states, one JSON line each.
    Sweep {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run a self-check suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Largest qubit count; for `lemma`, the largest coefficient count.
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Theorem,
    Table1,
    Triples,
    Lemma,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem => "theorem",
            Suite::Table1 => "table1",
            Suite::Triples => "triples",
            Suite::Lemma => "lemma",
        }
    }
}

/// `--tol`, then the environment, then the library default.
pub fn resolve_tolerance(flag: Option<f64>, env: Option<&str>) -> Result<f64, CliError> {
    let tol = match (flag, env) {
        (Some(t), _) => t,
        (None, Some(text)) => text.trim().parse().map_err(|_| {
            CliError::Input(format!("{TOLERANCE_ENV}={text:?} is not a number"))
        })?,
        (None, None) => DEFAULT_TOLERANCE,
    };
    if !(tol.is_finite() && tol > 0.0 && tol < 1.0) {
        return Err(CliError::Input(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    Ok(tol)
}

fn tolerance(flag: Option<f64>) -> Result<f64, CliError> {
    let env = std::env::var(TOLERANCE_ENV).ok();
    resolve_tolerance(flag, env.as_deref())
}

fn check_qubits(n: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Input("n must be at least 1".into()));
    }
    if n > MAX_CLI_QUBITS {
        return Err(CliError::Input(format!(
            "capacity exceeded: n = {n} qubits, the command line supports at most {MAX_CLI_QUBITS}"
        )));
    }
    Ok(())
}

fn write_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer(&mut *out, value).map_err(|e| CliError::Io(e.into()))?;
    writeln!(out)?;
    Ok(())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { state, tol, exact, dump_matrix } => {
            let spec: StateSpec = state.parse()?;
            let opts = AnalysisOptions { tolerance: tolerance(tol)?, require_exact: exact };
            run_analyze(&spec, opts, dump_matrix.as_deref(), out)
        }
        Command::Sweep { family: Family::Random, n, samples, seed, tol } => {
            run_sweep(n, samples, seed, tolerance(tol)?, out)
        }
        Command::Verify { suite, n_max } => {
            if n_max == 0 || n_max > MAX_CLI_QUBITS {
                return Err(CliError::Input(format!(
                    "--n-max must lie in 1..={MAX_CLI_QUBITS}, got {n_max}"
                )));
            }
            let report = verify::run_suite(suite, n_max)?;
            write_json(out, &report)?;
            if report.passed {
                Ok(())
            } else {
                let failed = report.cases.iter().filter(|c| !c.pass).count();
                Err(CliError::Verification(format!("{failed} case(s) of suite {} failed", suite.name())))
            }
        }
    }
}

pub fn run_analyze(
    spec: &StateSpec,
    opts: AnalysisOptions,
    dump_matrix: Option<&std::path::Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let psi = spec.build()?;
    if let Some(path) = dump_matrix {
        let file = BufWriter::new(File::create(path)?);
        OrbitMatrix::build(&psi).write_csv(file)?;
    }
    let analysis = analyze(&psi, opts)?;
    write_json(out, &AnalysisReport::new(spec.to_string(), &analysis)?)
}

pub fn run_sweep(
    n: usize,
    samples: u64,
    seed: u64,
    tol: f64,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    check_qubits(n)?;
    if samples == 0 {
        return Err(CliError::Input("--samples must be at least 1".into()));
    }
    let bound = min_orbit_bound(n)?;
    let opts = AnalysisOptions { tolerance: tol, require_exact: false };
    let mut agg = SweepAggregate {
        samples,
        n,
        min_bound: bound,
        min: usize::MAX,
        max: 0,
        histogram: Default::default(),
        violations: 0,
    };
    let mut start = 0;
    while start < samples {
        let end = samples.min(start + SWEEP_CHUNK);
        let lines: Vec<SweepSample> = (start..end)
            .into_par_iter()
            .map(|i| {
                let s = seed ^ i;
                let a = analyze(&sample_haar_state(n, s)?, opts)?;
                Ok(SweepSample {
                    sample: i,
                    seed: s,
                    n,
                    rank: a.rank,
                    orbit_dimension: a.orbit_dimension(),
                    isotropy_dimension: a.isotropy_dimension(),
                    achieves_min: a.orbit_dimension() == bound,
                })
            })
            .collect::<Result<_, CliError>>()?;
        for line in &lines {
            let d = line.orbit_dimension;
            agg.min = agg.min.min(d);
            agg.max = agg.max.max(d);
            *agg.histogram.entry(d).or_default() += 1;
            if d < bound {
                agg.violations += 1;
            }
            write_json(out, line)?;
        }
        out.flush()?;
        start = end;
    }
    write_json(out, &serde_json::json!({ "aggregate": agg }))?;
    if agg.violations > 0 {
        return Err(CliError::Verification(format!(
            "{} sample(s) fall below the orbit-dimension bound {bound}",
            agg.violations
        )));
    }
    Ok(())
}
