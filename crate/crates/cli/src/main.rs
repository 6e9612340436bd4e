use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use bound_ent::criteria::{ppt_check, realignment_check, DEFAULT_TOL};
use bound_ent::dps::{extract_witness_with, run_dps, ExtensionSpec, ExtensionStatus, WitnessOptions};
use bound_ent::io::{state_to_json, MatrixJson, WitnessFile, WitnessMetadata};
use bound_ent::scan::{run_scan, Criterion, Points, ScanSpec};
use bound_ent::states::{make_state, FamilyParams};
use bound_ent::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bound-ent", version, about = "Entanglement tests for a family of PPT bipartite states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct StateArgs {
    /// Local dimension, at least 3.
    #[arg(long)]
    d: usize,
    #[arg(long)]
    a: f64,
    /// Comma-separated λ_1..λ_{d-1}.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambdas: Vec<f64>,
}

impl StateArgs {
    fn params(&self) -> bound_ent::Result<FamilyParams> {
        FamilyParams::new(self.d, self.a, self.lambdas.clone())
    }
}

#[derive(Args, Clone)]
struct DpsArgs {
    /// Number of B copies in the extension.
    #[arg(long, default_value_t = 2)]
    level: usize,
    /// Transposed-copy counts; all of 1..=level when omitted.
    #[arg(long, value_delimiter = ',')]
    cuts: Option<Vec<usize>>,
    /// Drop the partial-transpose blocks.
    #[arg(long)]
    no_ppt: bool,
}

impl DpsArgs {
    fn spec(&self) -> bound_ent::Result<ExtensionSpec> {
        let spec = if self.no_ppt {
            ExtensionSpec::symmetric_only(self.level)
        } else {
            match &self.cuts {
                Some(c) => ExtensionSpec::with_cuts(self.level, c.clone())?,
                None => ExtensionSpec::new(self.level),
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum CheckKind {
    Ppt,
    Realign,
    Dps,
}

#[derive(Subcommand)]
enum Command {
    /// Build a state of the family and write it as JSON.
    State {
        #[command(flatten)]
        state: StateArgs,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one criterion on one state and print the verdict as JSON.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        dps: DpsArgs,
    },
    /// Evaluate a criterion over a λ grid and write CSV.
    Scan {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        a: f64,
        #[arg(long, value_parser = parse_criterion)]
        criterion: Criterion,
        /// Points per λ axis, endpoints included.
        #[arg(long, default_value_t = 11)]
        grid: usize,
        /// Explicit λ vectors instead of a grid, `;`-separated, e.g. `0.1,0.2,0.3;0.5,0.5,0.5`.
        #[arg(long)]
        points: Option<String>,
        #[command(flatten)]
        dps: DpsArgs,
        /// Do not retry at the next level when an extension is found.
        #[arg(long)]
        no_escalate: bool,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract an entanglement witness from a failed extension search.
    Witness {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        dps: DpsArgs,
        /// Seed of the product-state sampler used to validate the witness.
        #[arg(long, default_value_t = WitnessOptions::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = WitnessOptions::default().samples)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_criterion(s: &str) -> Result<Criterion, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_points(s: &str) -> bound_ent::Result<Vec<Vec<f64>>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::InvalidParams(format!("bad λ value {v:?}: {e}")))
                })
                .collect()
        })
        .collect()
}

enum Failure {
    Invalid(String),
    Solver(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_)
            | Error::DimensionMismatch(_)
            | Error::PhaseCount { .. }
            | Error::InvalidPermutation(_)
            | Error::NotHermitian { .. } => Failure::Invalid(e.to_string()),
            Error::Io(_) | Error::Json(_) => Failure::Io(e.to_string()),
            Error::NoConvergence { .. } | Error::InfeasibleConstruction { .. } | Error::NumericalFailure(_) => {
                Failure::Solver(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::State { state, out } => {
            let rho = make_state(&state.params()?)?;
            emit(out.as_ref(), &state_to_json(&rho)?)
        }
        Command::Check { kind, state, dps } => {
            let rho = make_state(&state.params()?)?;
            let verdict = match kind {
                CheckKind::Ppt => ppt_check(&rho, DEFAULT_TOL)?,
                CheckKind::Realign => realignment_check(&rho, DEFAULT_TOL)?,
                CheckKind::Dps => {
                    let result = run_dps(&rho, &dps.spec()?)?;
                    eprintln!("{}", serde_json::to_string(&result.summary())?);
                    if result.status == ExtensionStatus::NumericalFailure {
                        emit(None, &serde_json::to_string(&result.verdict())?)?;
                        return Err(Failure::Solver(format!(
                            "inconclusive: t* = {:e}, solver status {:?}",
                            result.objective, result.solution.status
                        )));
                    }
                    result.verdict()
                }
            };
            emit(None, &serde_json::to_string(&verdict)?)
        }
        Command::Scan {
            d,
            a,
            criterion,
            grid,
            points,
            dps,
            no_escalate,
            out,
        } => {
            let points = match points {
                Some(p) => Points::Explicit(parse_points(&p)?),
                None => Points::Grid(grid),
            };
            let spec = ScanSpec {
                d,
                a,
                criterion,
                points,
                dps: dps.spec()?,
                escalate: !no_escalate,
            };
            let table = run_scan(&spec)?;
            emit(out.as_ref(), &table.to_csv())
        }
        Command::Witness {
            state,
            dps,
            seed,
            samples,
            out,
        } => {
            let params = state.params()?;
            let rho = make_state(&params)?;
            let spec = dps.spec()?;
            let result = run_dps(&rho, &spec)?;
            if result.status != ExtensionStatus::NoExtension {
                return Err(Failure::Solver(format!(
                    "no witness: extension search returned {:?} with t* = {:e}",
                    result.status, result.objective
                )));
            }
            let w = extract_witness_with(&result, &rho, &WitnessOptions { samples, seed })?;
            let file = WitnessFile {
                matrix: MatrixJson::from_complex(&w.matrix),
                dims: [rho.d_a(), rho.d_b()],
                metadata: WitnessMetadata {
                    params,
                    level: spec.level,
                    cuts: spec.active_cuts().to_vec(),
                    trace_w_rho: w.value_on_state,
                    objective: result.objective,
                    shift: w.shift,
                    pullback_residual: w.pullback_residual,
                    samples: w.samples,
                    seed: w.seed,
                    min_sampled: w.min_sampled,
                },
            };
            emit(Some(&out), &serde_json::to_string_pretty(&file)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("invalid parameters: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("solver failure: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
