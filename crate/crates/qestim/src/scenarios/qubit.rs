//! Smallest-system scenario: estimate one Pauli observable from a projective
//! measurement along another axis.

use super::Check;
use crate::error::{Error, Result};
use crate::estimate::{MomentData, EstimateReport, OutcomeEstimator};
use crate::linalg::{c64, C64};
use crate::operators::{make_pure_state, projective_pom, DensityOperator, HermitianOperator};
use crate::tol;

/// Named qubit states plus arbitrary pure amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub enum QubitState {
    ZPlus,
    ZMinus,
    XPlus,
    XMinus,
    YPlus,
    YMinus,
    Custom(C64, C64),
}

impl QubitState {
    pub fn parse(token: &str) -> Result<Self> {
        match token {
            "0" | "+z" => Ok(Self::ZPlus),
            "1" | "-z" => Ok(Self::ZMinus),
            "+x" => Ok(Self::XPlus),
            "-x" => Ok(Self::XMinus),
            "+y" => Ok(Self::YPlus),
            "-y" => Ok(Self::YMinus),
            other => Err(Error::InvalidConfig(format!(
                "unknown qubit state {other:?} (expected 0, 1, +x, -x, +y, -y)"
            ))),
        }
    }

    pub fn density(&self) -> Result<DensityOperator> {
        let one = C64::ONE;
        let i = c64(0.0, 1.0);
        let amps = match self {
            Self::ZPlus => [one, C64::ZERO],
            Self::ZMinus => [C64::ZERO, one],
            Self::XPlus => [one, one],
            Self::XMinus => [one, -one],
            Self::YPlus => [one, i],
            Self::YMinus => [one, -i],
            Self::Custom(a, b) => [*a, *b],
        };
        make_pure_state(&amps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub fn parse(token: &str) -> Result<Self> {
        match token {
            "x" | "sx" => Ok(Self::X),
            "y" | "sy" => Ok(Self::Y),
            "z" | "sz" => Ok(Self::Z),
            other => Err(Error::InvalidConfig(format!(
                "unknown Pauli axis {other:?} (expected x, y, or z)"
            ))),
        }
    }

    pub fn operator(&self) -> HermitianOperator {
        match self {
            Self::X => HermitianOperator::pauli_x(),
            Self::Y => HermitianOperator::pauli_y(),
            Self::Z => HermitianOperator::pauli_z(),
        }
    }

    /// Orthonormal eigenbasis, + eigenvector first.
    pub fn basis(&self) -> Vec<Vec<C64>> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sc = c64(s, 0.0);
        match self {
            Self::X => vec![vec![sc, sc], vec![sc, -sc]],
            Self::Y => vec![vec![sc, c64(0.0, s)], vec![sc, c64(0.0, -s)]],
            Self::Z => vec![vec![C64::ONE, C64::ZERO], vec![C64::ZERO, C64::ONE]],
        }
    }
}

#[derive(Debug, Clone)]
pub struct QubitScenario {
    pub report: EstimateReport,
    pub optimal: OutcomeEstimator,
    /// True when every outcome is reachable. The optimal noise meets the
    /// commutator bound exactly only then; a dead outcome that the
    /// observable connects to carries irreducible noise the bound misses.
    pub all_outcomes_live: bool,
}

impl QubitScenario {
    pub fn results(&self) -> Vec<(String, f64)> {
        let r = &self.report;
        let mut out = vec![
            ("noise_opt_sq".to_string(), r.noise_sq),
            ("noise_bound_sq".to_string(), r.noise_bound_sq),
            ("estimator_mean".to_string(), r.estimator_mean),
            ("estimator_variance".to_string(), r.estimator_variance),
            ("observable_variance".to_string(), r.observable_variance),
        ];
        for (m, v) in self.optimal.values().iter().enumerate() {
            out.push((format!("f_opt[{m}]"), *v));
        }
        out
    }

    pub fn checks(&self) -> Vec<Check> {
        let r = &self.report;
        let mut checks = vec![Check::residual(
            "variance_partition",
            r.estimator_variance + r.noise_sq - r.observable_variance,
            tol::ENGINE_IDENTITY,
        )];
        if self.all_outcomes_live {
            checks.push(Check::residual(
                "optimal_noise_equals_bound",
                r.noise_sq - r.noise_bound_sq,
                tol::ENGINE_IDENTITY,
            ));
        } else {
            checks.push(Check::slack(
                "noise_above_bound",
                r.noise_sq - r.noise_bound_sq,
                tol::ENGINE_IDENTITY,
            ));
        }
        checks
    }
}

/// Optimal estimation of a Pauli observable from a projective measurement.
pub fn run_qubit(state: &QubitState, observable: PauliAxis, basis: PauliAxis) -> Result<QubitScenario> {
    let rho = state.density()?;
    let a = observable.operator();
    let pom = projective_pom(&basis.basis())?;
    let moments = MomentData::from_operators(&rho, &pom, &a)?;
    let optimal = moments.optimal_estimator();
    let report = moments.analyze(&optimal)?;
    let all_outcomes_live = (0..moments.len()).all(|m| moments.is_live(m));
    Ok(QubitScenario {
        report,
        optimal,
        all_outcomes_live,
    })
}
