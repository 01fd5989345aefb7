//! Joint unbiased estimation of σx and σy from the four-outcome qubit
//! measurement M_{s₁s₂} = ¼(I + γ(s₁σx + s₂σy)), s ∈ {±1}².
//!
//! The estimators f = s₁/γ and g = s₂/γ are unbiased on every state, with
//! state-independent noise ε² = 1/γ² − 1 each; at the positivity limit
//! γ = 1/√2 the product ε(A_f)·ε(B_g) meets ½|⟨[σx,σy]⟩| with equality on a
//! σz eigenstate.

use super::{Check, QubitState};
use crate::error::{Error, Result};
use crate::estimate::{
    joint_check, noise_sq, unbiased_product_check, unbiasedness_defect, JointReport,
    OutcomeEstimator,
};
use crate::linalg::{c64, ComplexMatrix};
use crate::operators::{DensityOperator, HermitianOperator, ProbOperatorMeasure};
use crate::tol;

/// Outcome order: (s₁,s₂) = (+,+), (+,−), (−,+), (−,−).
pub fn four_outcome_pom(gamma: f64) -> Result<ProbOperatorMeasure> {
    if !gamma.is_finite() || gamma <= 0.0 || gamma > std::f64::consts::FRAC_1_SQRT_2 {
        return Err(Error::InvalidConfig(format!(
            "gamma must lie in (0, 1/√2] for positive elements, got {gamma}"
        )));
    }
    let mut outcomes = Vec::with_capacity(4);
    for s1 in [1.0f64, -1.0] {
        for s2 in [1.0f64, -1.0] {
            let m = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
                (0, 0) | (1, 1) => c64(0.25, 0.0),
                (0, 1) => c64(0.25 * gamma * s1, -0.25 * gamma * s2),
                _ => c64(0.25 * gamma * s1, 0.25 * gamma * s2),
            });
            let label = format!(
                "{}{}",
                if s1 > 0.0 { '+' } else { '-' },
                if s2 > 0.0 { '+' } else { '-' }
            );
            outcomes.push((label, m));
        }
    }
    ProbOperatorMeasure::new(outcomes)
}

#[derive(Debug, Clone)]
pub struct UnbiasedJointScenario {
    pub gamma: f64,
    pub defect_x: f64,
    pub defect_y: f64,
    pub noise_x_sq: f64,
    pub noise_y_sq: f64,
    /// State-independent closed form 1/γ² − 1 for each noise.
    pub closed_form_noise_sq: f64,
    pub product: JointReport,
    pub joint: JointReport,
}

impl UnbiasedJointScenario {
    pub fn results(&self) -> Vec<(String, f64)> {
        vec![
            ("gamma".into(), self.gamma),
            ("defect_x".into(), self.defect_x),
            ("defect_y".into(), self.defect_y),
            ("noise_x_sq".into(), self.noise_x_sq),
            ("noise_y_sq".into(), self.noise_y_sq),
            ("closed_form_noise_sq".into(), self.closed_form_noise_sq),
            ("product_lhs".into(), self.product.lhs),
            ("product_rhs".into(), self.product.rhs),
            ("product_slack".into(), self.product.slack),
            ("joint_lhs".into(), self.joint.lhs),
            ("joint_rhs".into(), self.joint.rhs),
            ("joint_slack".into(), self.joint.slack),
        ]
    }

    pub fn checks(&self) -> Vec<Check> {
        vec![
            Check::residual("unbiasedness_defect_x", self.defect_x, tol::UNBIASEDNESS),
            Check::residual("unbiasedness_defect_y", self.defect_y, tol::UNBIASEDNESS),
            Check::residual(
                "noise_matches_closed_form",
                self.noise_x_sq - self.closed_form_noise_sq,
                tol::ENGINE_IDENTITY,
            ),
            Check::slack("product_bound_slack", self.product.slack, tol::ENGINE_IDENTITY),
            Check::slack("joint_relation_slack", self.joint.slack, tol::ENGINE_IDENTITY),
        ]
    }
}

/// Build the measurement at coupling γ, verify both estimators are unbiased,
/// and evaluate the product and three-term joint relations on `state`.
pub fn run_unbiased_joint(gamma: f64, state: &QubitState) -> Result<UnbiasedJointScenario> {
    let pom = four_outcome_pom(gamma)?;
    let rho: DensityOperator = state.density()?;
    let sx = HermitianOperator::pauli_x();
    let sy = HermitianOperator::pauli_y();
    let inv = 1.0 / gamma;
    let f = OutcomeEstimator::new(vec![inv, inv, -inv, -inv])?;
    let g = OutcomeEstimator::new(vec![inv, -inv, inv, -inv])?;

    let defect_x = unbiasedness_defect(&pom, &f, &sx)?;
    let defect_y = unbiasedness_defect(&pom, &g, &sy)?;
    let noise_x_sq = noise_sq(&rho, &pom, &sx, &f)?;
    let noise_y_sq = noise_sq(&rho, &pom, &sy, &g)?;
    let product = unbiased_product_check(&rho, &pom, &sx, &sy, &f, &g)?;
    let joint = joint_check(&rho, &pom, &sx, &sy, &f, &g)?;

    Ok(UnbiasedJointScenario {
        gamma,
        defect_x,
        defect_y,
        noise_x_sq,
        noise_y_sq,
        closed_form_noise_sq: inv * inv - 1.0,
        product,
        joint,
    })
}
