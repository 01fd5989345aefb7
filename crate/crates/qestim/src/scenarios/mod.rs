//! Self-contained reconstructions of the worked estimation setups: qubit
//! estimates, the unbiased four-outcome joint qubit measurement, heterodyne
//! detection on a truncated Fock space, approximate-EPR momentum estimation,
//! and the 1-D grid momentum/energy checks.
//!
//! Each scenario returns a structured result; `results()` and `checks()`
//! flatten it into the named records the CLI report layer consumes.

mod epr;
mod heterodyne;
mod line;
mod qubit;
mod unbiased;

pub use epr::{run_epr, EprConfig, EprScenario};
pub use heterodyne::{run_heterodyne, HeterodyneConfig, HeterodyneScenario, OscillatorState};
pub use line::{
    run_energy_grid, run_momentum_grid, EnergyGridConfig, EnergyGridScenario, LineState,
    MomentumGridConfig, MomentumGridScenario,
};
pub use qubit::{run_qubit, PauliAxis, QubitScenario, QubitState};
pub use unbiased::{four_outcome_pom, run_unbiased_joint, UnbiasedJointScenario};

/// One named pass/fail assertion with its observed value and tolerance.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub observed: f64,
    pub tolerance: f64,
}

impl Check {
    /// |observed| must not exceed `tolerance`.
    pub fn residual(name: &str, observed: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            pass: observed.abs() <= tolerance,
            observed,
            tolerance,
        }
    }

    /// `observed` must be ≥ −tolerance (one-sided slack check).
    pub fn slack(name: &str, observed: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            pass: observed >= -tolerance,
            observed,
            tolerance,
        }
    }
}
