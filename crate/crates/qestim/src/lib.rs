//! Optimal estimation of quantum observables from arbitrary measurements.
//!
//! Given a state ρ, a measurement M (a probability operator measure), and a
//! target observable A, this crate computes the best outcome-by-outcome
//! estimate of A, quantifies its noise against the fundamental lower bound,
//! and verifies the geometric and joint-measurement uncertainty relations —
//! on finite-dimensional systems and on grid-discretized continuous ones.
//!
//! Highlights:
//!
//! * [`estimate`]: the noise functional ε(A_f)², the optimal estimator
//!   f_opt(m) = s_m/(2 p_m), its lower bound, and the spread/noise partition
//!   (ΔA_opt)² + ε(A_opt)² = (ΔA)².
//! * [`grid`]: ψ = R·e^{iS/ħ} decomposition, optimal momentum/energy
//!   estimates, the Fisher length, and δX·ε(P_opt) = ħ/2.
//! * [`scenarios`]: worked setups — qubit estimates, unbiased joint qubit
//!   measurements, heterodyne detection, and approximate-EPR momentum
//!   estimation.
//! * [`sweep`]: seeded randomized verification of the uncertainty relations.
//! * [`report`]: machine-readable run reports for the `qestim` CLI.

pub mod error;
pub mod estimate;
pub mod grid;
pub mod linalg;
pub mod operators;
pub mod report;
pub mod scenarios;
pub mod sweep;
pub mod tol;

pub use error::{Error, Result};
pub use estimate::{
    analyze_estimator, asym_overlap, joint_check, noise_lower_bound_sq, noise_sq,
    optimal_estimator, outcome_probabilities, signal_overlap, unbiased_product_check,
    unbiasedness_defect, EstimateReport, JointReport, MomentData, OutcomeEstimator,
};
pub use linalg::{ComplexMatrix, C64};
pub use operators::{
    commutator_bound, expectation, make_pure_state, projective_pom, variance, DensityOperator,
    HermitianOperator, ProbOperatorMeasure,
};
