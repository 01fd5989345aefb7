//! Command-line front end: run estimation scenarios and randomized
//! uncertainty-relation sweeps, emitting JSON or CSV reports.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage/config error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qestim::report::RunReport;
use qestim::scenarios::{
    run_energy_grid, run_epr, run_heterodyne, run_momentum_grid, run_qubit, run_unbiased_joint,
    Check, EnergyGridConfig, EprConfig, HeterodyneConfig, LineState, MomentumGridConfig,
    OscillatorState, PauliAxis, QubitState,
};
use qestim::sweep::{run_sweep, SweepConfig, SweepKind};
use qestim::C64;

#[derive(Parser)]
#[command(name = "qestim", version, about = "Optimal estimates of quantum observables and joint-measurement uncertainty checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Run a named scenario: qubit, unbiased-joint, heterodyne, epr,
    /// momentum-grid, or energy-grid.
    Scenario(ScenarioArgs),
    /// Run a randomized verification sweep: joint, geometric, or bound.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit the timestamp so identical invocations are byte-identical.
    #[arg(long)]
    no_timestamp: bool,
    /// Seed echoed into the report (only sweeps consume randomness).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ScenarioArgs {
    /// qubit | unbiased-joint | heterodyne | epr | momentum-grid | energy-grid
    name: String,

    /// State token: qubit 0|1|+x|-x|+y|-y; heterodyne coherent|squeezed|fock;
    /// momentum-grid gaussian|two-bump|chirp.
    #[arg(long)]
    state: Option<String>,
    /// Observable axis for the qubit scenario (sx|sy|sz).
    #[arg(long)]
    observable: Option<String>,
    /// Measurement basis axis for the qubit scenario (x|y|z).
    #[arg(long)]
    basis: Option<String>,

    /// Coupling strength γ ∈ (0, 1/√2] for unbiased-joint.
    #[arg(long)]
    gamma: Option<f64>,

    /// Coherent amplitude a+bi for heterodyne.
    #[arg(long)]
    beta: Option<String>,
    /// Squeezing magnitude for the heterodyne squeezed state.
    #[arg(long)]
    squeeze_r: Option<f64>,
    /// Squeezing phase for the heterodyne squeezed state.
    #[arg(long)]
    squeeze_phi: Option<f64>,
    /// Fock level for the heterodyne number state.
    #[arg(long)]
    fock: Option<usize>,
    /// Fock-space truncation for heterodyne.
    #[arg(long)]
    fock_dim: Option<usize>,
    /// Phase-space grid points per axis (heterodyne), or grid points per
    /// axis (epr).
    #[arg(long)]
    grid_n: Option<usize>,
    /// Phase-space half-width for heterodyne.
    #[arg(long)]
    grid_radius: Option<f64>,

    /// Position-correlation width σ (epr) or density std (momentum-grid).
    #[arg(long)]
    sigma: Option<f64>,
    /// Momentum-correlation width τ for epr.
    #[arg(long)]
    tau: Option<f64>,
    /// Position offset a for epr.
    #[arg(long)]
    a: Option<f64>,
    /// Momentum offset b for epr.
    #[arg(long)]
    b: Option<f64>,
    /// Planck constant scale.
    #[arg(long)]
    hbar: Option<f64>,
    /// Half-extent of 1-D/2-D position grids.
    #[arg(long)]
    extent: Option<f64>,
    /// Points for 1-D grids.
    #[arg(long)]
    n: Option<usize>,
    /// Momentum boost k for the momentum-grid gaussian state.
    #[arg(long)]
    k: Option<f64>,
    /// Quadratic phase rate for the momentum-grid chirp state.
    #[arg(long)]
    chirp: Option<f64>,
    /// Bump center for the momentum-grid two-bump state.
    #[arg(long)]
    center: Option<f64>,
    /// Oscillator frequency for energy-grid.
    #[arg(long)]
    omega: Option<f64>,
    /// Particle mass for energy-grid.
    #[arg(long)]
    mass: Option<f64>,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// joint | geometric | bound
    kind: String,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap renders help/version as "errors" that should exit 0
            if err.use_stderr() {
                eprint!("{err}");
                return ExitCode::from(2);
            }
            print!("{err}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(passed) => {
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    let (report, output) = match cli.command {
        Command::Scenario(args) => {
            let (config, results, checks) = dispatch_scenario(&args)?;
            let report = RunReport::new(
                args.output.seed,
                !args.output.no_timestamp,
                config,
                results,
                checks,
            );
            (report, args.output)
        }
        Command::Sweep(args) => {
            let kind = SweepKind::parse(&args.kind).map_err(|e| e.to_string())?;
            let config = SweepConfig {
                kind,
                trials: args.trials,
                dim: args.dim,
                seed: args.output.seed,
            };
            let outcome = run_sweep(&config).map_err(|e| e.to_string())?;
            let echo = json!({
                "command": "sweep",
                "kind": kind.name(),
                "trials": outcome.trials,
                "dim": outcome.dim,
                "seed": outcome.seed,
            });
            let results = vec![
                ("worst".to_string(), outcome.worst),
                ("worst_trial".to_string(), outcome.worst_trial as f64),
                ("failures".to_string(), outcome.failures as f64),
            ];
            let checks = vec![match kind {
                SweepKind::Joint => Check::slack("min_slack", outcome.worst, outcome.tolerance),
                SweepKind::Geometric => {
                    Check::residual("max_identity_residual", outcome.worst, outcome.tolerance)
                }
                SweepKind::Bound => {
                    Check::residual("max_bound_gap", outcome.worst, outcome.tolerance)
                }
            }];
            let report = RunReport::new(
                outcome.seed,
                !args.output.no_timestamp,
                echo,
                results,
                checks,
            );
            (report, args.output)
        }
    };

    let body = match output.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match &output.out {
        Some(path) => std::fs::write(path, &body)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{body}"),
    }
    Ok(report.passed())
}

type ScenarioPayload = (serde_json::Value, Vec<(String, f64)>, Vec<Check>);

fn dispatch_scenario(args: &ScenarioArgs) -> Result<ScenarioPayload, String> {
    match args.name.as_str() {
        "qubit" => {
            let state_token = args.state.as_deref().unwrap_or("+y");
            let observable_token = args.observable.as_deref().unwrap_or("sz");
            let basis_token = args.basis.as_deref().unwrap_or("x");
            let state = QubitState::parse(state_token).map_err(|e| e.to_string())?;
            let observable = PauliAxis::parse(observable_token).map_err(|e| e.to_string())?;
            let basis = PauliAxis::parse(basis_token).map_err(|e| e.to_string())?;
            let scenario = run_qubit(&state, observable, basis).map_err(|e| e.to_string())?;
            let config = json!({
                "command": "scenario",
                "name": "qubit",
                "state": state_token,
                "observable": observable_token,
                "basis": basis_token,
            });
            Ok((config, scenario.results(), scenario.checks()))
        }
        "unbiased-joint" => {
            let gamma = args.gamma.unwrap_or(std::f64::consts::FRAC_1_SQRT_2);
            let state_token = args.state.as_deref().unwrap_or("0");
            let state = QubitState::parse(state_token).map_err(|e| e.to_string())?;
            let scenario = run_unbiased_joint(gamma, &state).map_err(|e| e.to_string())?;
            let config = json!({
                "command": "scenario",
                "name": "unbiased-joint",
                "gamma": gamma,
                "state": state_token,
            });
            Ok((config, scenario.results(), scenario.checks()))
        }
        "heterodyne" => {
            let state_token = args.state.as_deref().unwrap_or("coherent");
            let state = match state_token {
                "coherent" => {
                    let beta = match &args.beta {
                        Some(text) => parse_complex(text)?,
                        None => C64::ZERO,
                    };
                    OscillatorState::Coherent(beta)
                }
                "squeezed" => OscillatorState::Squeezed {
                    r: args.squeeze_r.unwrap_or(0.5),
                    phi: args.squeeze_phi.unwrap_or(0.0),
                },
                "fock" => OscillatorState::Fock(args.fock.unwrap_or(1)),
                other => return Err(format!("unknown heterodyne state {other:?}")),
            };
            let config = HeterodyneConfig {
                fock_dim: args.fock_dim.unwrap_or(32),
                grid_radius: args.grid_radius,
                grid_n: args.grid_n.unwrap_or(64),
                state,
            };
            let scenario = run_heterodyne(&config).map_err(|e| e.to_string())?;
            let echo = json!({
                "command": "scenario",
                "name": "heterodyne",
                "state": state_token,
                "beta": args.beta,
                "squeeze_r": args.squeeze_r,
                "squeeze_phi": args.squeeze_phi,
                "fock": args.fock,
                "fock_dim": config.fock_dim,
                "grid_n": config.grid_n,
                "grid_radius": scenario.config_radius,
            });
            Ok((echo, scenario.results(), scenario.checks()))
        }
        "epr" => {
            let config = EprConfig {
                sigma: args.sigma.unwrap_or(0.5),
                tau: args.tau.unwrap_or(0.5),
                a: args.a.unwrap_or(0.0),
                b: args.b.unwrap_or(1.0),
                hbar: args.hbar.unwrap_or(1.0),
                grid_n: args.grid_n.unwrap_or(256),
                grid_extent: args.extent,
            };
            let scenario = run_epr(&config).map_err(|e| e.to_string())?;
            let echo = json!({
                "command": "scenario",
                "name": "epr",
                "sigma": config.sigma,
                "tau": config.tau,
                "a": config.a,
                "b": config.b,
                "hbar": config.hbar,
                "grid_n": config.grid_n,
                "grid_extent": scenario.extent,
            });
            Ok((echo, scenario.results(), scenario.checks(&config)))
        }
        "momentum-grid" => {
            let state_token = args.state.as_deref().unwrap_or("gaussian");
            let mut state = LineState::parse(state_token).map_err(|e| e.to_string())?;
            match &mut state {
                LineState::Gaussian { sigma, k } => {
                    if let Some(s) = args.sigma {
                        *sigma = s;
                    }
                    if let Some(boost) = args.k {
                        *k = boost;
                    }
                }
                LineState::TwoBump { sigma, center } => {
                    if let Some(s) = args.sigma {
                        *sigma = s;
                    }
                    if let Some(c) = args.center {
                        *center = c;
                    }
                }
                LineState::Chirp { sigma, chirp } => {
                    if let Some(s) = args.sigma {
                        *sigma = s;
                    }
                    if let Some(rate) = args.chirp {
                        *chirp = rate;
                    }
                }
            }
            let config = MomentumGridConfig {
                state,
                n: args.n.unwrap_or(1024),
                extent: args.extent.unwrap_or(12.0),
                hbar: args.hbar.unwrap_or(1.0),
            };
            let scenario = run_momentum_grid(&config).map_err(|e| e.to_string())?;
            let echo = json!({
                "command": "scenario",
                "name": "momentum-grid",
                "state": state_token,
                "sigma": args.sigma,
                "k": args.k,
                "center": args.center,
                "chirp": args.chirp,
                "n": config.n,
                "extent": config.extent,
                "hbar": config.hbar,
            });
            Ok((echo, scenario.results(), scenario.checks()))
        }
        "energy-grid" => {
            let config = EnergyGridConfig {
                omega: args.omega.unwrap_or(1.0),
                mass: args.mass.unwrap_or(1.0),
                n: args.n.unwrap_or(2048),
                extent: args.extent.unwrap_or(10.0),
                hbar: args.hbar.unwrap_or(1.0),
            };
            let scenario = run_energy_grid(&config).map_err(|e| e.to_string())?;
            let echo = json!({
                "command": "scenario",
                "name": "energy-grid",
                "omega": config.omega,
                "mass": config.mass,
                "n": config.n,
                "extent": config.extent,
                "hbar": config.hbar,
            });
            Ok((echo, scenario.results(), scenario.checks()))
        }
        other => Err(format!(
            "unknown scenario {other:?} (expected qubit, unbiased-joint, heterodyne, epr, \
             momentum-grid, or energy-grid)"
        )),
    }
}

/// Parse a complex literal of the form `a+bi`, `a-bi`, `a`, or `bi`.
fn parse_complex(text: &str) -> Result<C64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    let fail = || format!("cannot parse {text:?} as a complex number (expected a+bi)");

    if let Some(body) = s.strip_suffix('i') {
        // find the sign that separates real and imaginary parts: the last
        // '+'/'-' not at the start and not part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx] as char;
            if (c == '+' || c == '-') && !matches!(bytes[idx - 1] as char, 'e' | 'E') {
                split = Some(idx);
                break;
            }
        }
        match split {
            Some(idx) => {
                let re: f64 = body[..idx].parse().map_err(|_| fail())?;
                let im_text = &body[idx..];
                let im: f64 = if im_text == "+" {
                    1.0
                } else if im_text == "-" {
                    -1.0
                } else {
                    im_text.parse().map_err(|_| fail())?
                };
                Ok(C64::new(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() {
                    1.0
                } else if body == "-" {
                    -1.0
                } else {
                    body.parse().map_err(|_| fail())?
                };
                Ok(C64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = s.parse().map_err(|_| fail())?;
        Ok(C64::new(re, 0.0))
    }
}
