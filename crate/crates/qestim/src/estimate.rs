//! The estimation engine: how well does an outcome function f estimate an
//! observable A from a measurement M on a state ρ?
//!
//! Everything reduces to per-outcome moments of the triple (ρ, M, A):
//!
//! * p_m = tr[ρ M_m]            — outcome probabilities,
//! * s_m = tr[ρ(A M_m + M_m A)] — symmetrized signal overlap,
//! * c_m = tr[ρ(A M_m − M_m A)] — the incompatibility witness (imaginary),
//!
//! together with tr[ρA] and tr[ρA²]. The noise of an estimate f is the
//! quadratic functional
//!
//! ε(A_f)² = Σ_m f(m)² p_m − Σ_m f(m) s_m + tr[ρA²],
//!
//! minimized by f_opt(m) = s_m / 2p_m with minimum Σ_m |c_m|²/(4 p_m). For a
//! projective measurement this functional is exactly ⟨(A_f − A)²⟩.
//!
//! [`MomentData`] holds the per-outcome moments so that measurements too
//! big to represent as dense matrices (e.g. grid-discretized ones) can feed
//! the same analysis; [`MomentData::from_operators`] is the dense-matrix
//! route.

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::operators::{commutator_bound, DensityOperator, HermitianOperator, ProbOperatorMeasure};
use crate::tol;

/// One real estimate value per measurement outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeEstimator {
    values: Vec<f64>,
}

impl OutcomeEstimator {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("estimator needs at least one value".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("estimator value {bad} is not finite")));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Noise and spread analysis of one estimator.
///
/// `noise_bound_sq` is attained by the optimal estimator exactly when the
/// state is pure and every reachable measurement element has rank 1 (the
/// regime of the relation's equality case). For mixed states or coarse
/// measurement elements the bound remains valid but sits strictly below the
/// best achievable noise — e.g. estimating σx from a z-basis measurement of
/// I/2 has optimal noise 1 against bound 0.
#[derive(Debug, Clone)]
pub struct EstimateReport {
    /// ε(A_f)², the mean-square noise of the estimate.
    pub noise_sq: f64,
    /// The fundamental lower bound Σ_m |c_m|²/(4p_m) on the noise.
    pub noise_bound_sq: f64,
    /// Mean of the estimate, Σ_m f(m) p_m.
    pub estimator_mean: f64,
    /// (ΔA_f)², the spread of the estimate over outcomes.
    pub estimator_variance: f64,
    /// (ΔA)², the variance of the observable itself.
    pub observable_variance: f64,
    /// Whether f matches the optimal estimator on every reachable outcome.
    pub is_optimal: bool,
}

impl EstimateReport {
    fn validated(self) -> Result<Self> {
        if self.noise_sq < self.noise_bound_sq - tol::ENGINE_IDENTITY {
            return Err(Error::Inconsistent(format!(
                "noise {:.12e} fell below its lower bound {:.12e}",
                self.noise_sq, self.noise_bound_sq
            )));
        }
        if self.is_optimal {
            // The spread/noise partition of the variance is exact for the
            // optimal estimator on any state and measurement.
            let partition =
                (self.estimator_variance + self.noise_sq - self.observable_variance).abs();
            if partition > tol::ENGINE_IDENTITY {
                return Err(Error::Inconsistent(format!(
                    "spread/noise partition of the variance off by {partition:.3e}"
                )));
            }
        }
        Ok(self)
    }
}

/// Left and right sides of the joint uncertainty relation
/// ΔA_f·ε(B_g) + ε(A_f)·ΔB_g + ε(A_f)·ε(B_g) ≥ ½|⟨[A,B]⟩|.
#[derive(Debug, Clone, Copy)]
pub struct JointReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl JointReport {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, slack: lhs - rhs }
    }

    pub fn holds(&self) -> bool {
        self.slack >= -tol::ENGINE_IDENTITY
    }
}

/// Per-outcome moments of (ρ, M, A): the sufficient statistics for every
/// estimator analysis.
#[derive(Debug, Clone)]
pub struct MomentData {
    probs: Vec<f64>,
    signal: Vec<f64>,
    asym_abs: Vec<f64>,
    first_moment: f64,
    second_moment: f64,
    dead_threshold: f64,
}

impl MomentData {
    /// Dense-matrix route: compute all moments from explicit operators.
    pub fn from_operators(
        rho: &DensityOperator,
        pom: &ProbOperatorMeasure,
        a: &HermitianOperator,
    ) -> Result<Self> {
        if rho.dim() != pom.dim() {
            return Err(Error::DimensionMismatch(rho.dim(), pom.dim()));
        }
        if rho.dim() != a.dim() {
            return Err(Error::DimensionMismatch(rho.dim(), a.dim()));
        }
        let rho_a = rho.matrix().matmul(a.matrix());
        let a_rho = a.matrix().matmul(rho.matrix());
        let sym = &rho_a + &a_rho; // tr[·M] gives s_m
        let asym = &rho_a - &a_rho; // tr[·M] gives -c_m (sign irrelevant to |c_m|)

        let mut probs = Vec::with_capacity(pom.len());
        let mut signal = Vec::with_capacity(pom.len());
        let mut asym_abs = Vec::with_capacity(pom.len());
        for (_, m) in pom.outcomes() {
            let p = rho.matrix().trace_product(m);
            assert!(
                p.im.abs() <= tol::REALITY && p.re >= -tol::DEAD_OUTCOME,
                "outcome probability {p} is not a clean nonnegative real"
            );
            probs.push(p.re.max(0.0));

            let s = sym.trace_product(m);
            assert!(s.im.abs() <= tol::REALITY, "signal overlap picked up Im {:.3e}", s.im);
            signal.push(s.re);

            let c = asym.trace_product(m);
            assert!(c.re.abs() <= tol::REALITY, "asymmetric overlap picked up Re {:.3e}", c.re);
            asym_abs.push(c.norm());
        }

        let a_sq = a.matrix().matmul(a.matrix());
        let second_moment = rho.matrix().trace_product(&a_sq).re;
        let first_moment = rho.matrix().trace_product(a.matrix()).re;
        Self::new(probs, signal, asym_abs, first_moment, second_moment)
    }

    /// Assemble moments computed by some other (e.g. grid-based) route.
    pub fn new(
        probs: Vec<f64>,
        signal: Vec<f64>,
        asym_abs: Vec<f64>,
        first_moment: f64,
        second_moment: f64,
    ) -> Result<Self> {
        if probs.len() != signal.len() || probs.len() != asym_abs.len() {
            return Err(Error::InvalidInput(
                "probability, signal, and asymmetry lists must have equal length".into(),
            ));
        }
        if probs.is_empty() {
            return Err(Error::InvalidInput("no outcomes".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::Inconsistent(format!(
                "outcome probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Self {
            probs,
            signal,
            asym_abs,
            first_moment,
            second_moment,
            dead_threshold: tol::DEAD_OUTCOME,
        })
    }

    /// Override the probability below which an outcome counts as unreachable.
    pub fn with_dead_threshold(mut self, threshold: f64) -> Self {
        self.dead_threshold = threshold;
        self
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn signal(&self) -> &[f64] {
        &self.signal
    }

    pub fn asym_abs(&self) -> &[f64] {
        &self.asym_abs
    }

    pub fn observable_mean(&self) -> f64 {
        self.first_moment
    }

    pub fn observable_variance(&self) -> f64 {
        (self.second_moment - self.first_moment * self.first_moment).max(0.0)
    }

    pub fn is_live(&self, m: usize) -> bool {
        self.probs[m] > self.dead_threshold
    }

    fn check_len(&self, f: &OutcomeEstimator) -> Result<()> {
        if f.len() != self.len() {
            return Err(Error::EstimatorLength(f.len(), self.len()));
        }
        Ok(())
    }

    /// ε(A_f)², clamped to ≥ 0 after the bound check.
    pub fn noise_sq(&self, f: &OutcomeEstimator) -> Result<f64> {
        self.check_len(f)?;
        let mut quad = 0.0;
        let mut cross = 0.0;
        for (m, &fv) in f.values().iter().enumerate() {
            quad += fv * fv * self.probs[m];
            cross += fv * self.signal[m];
        }
        let noise = quad - cross + self.second_moment;
        let bound = self.lower_bound_sq();
        assert!(
            noise >= bound - tol::ENGINE_IDENTITY,
            "noise {noise:.12e} fell below the lower bound {bound:.12e}"
        );
        Ok(noise.max(0.0))
    }

    /// The minimizer of the noise functional: f(m) = s_m/(2p_m) on reachable
    /// outcomes, 0 on dead ones (where the formula is 0/0 and any value gives
    /// the same noise).
    pub fn optimal_estimator(&self) -> OutcomeEstimator {
        let values = (0..self.len())
            .map(|m| {
                if self.is_live(m) {
                    self.signal[m] / (2.0 * self.probs[m])
                } else {
                    0.0
                }
            })
            .collect();
        OutcomeEstimator::new(values).expect("moments are finite")
    }

    /// The fundamental noise floor Σ_m |c_m|²/(4 p_m) over reachable outcomes.
    /// Attained by [`Self::optimal_estimator`] for pure states measured by
    /// rank-1 elements; a valid but loose bound otherwise.
    pub fn lower_bound_sq(&self) -> f64 {
        (0..self.len())
            .filter(|&m| self.is_live(m))
            .map(|m| self.asym_abs[m] * self.asym_abs[m] / (4.0 * self.probs[m]))
            .sum()
    }

    /// The smallest achievable noise, ε²(f_opt) = ⟨A²⟩ − Σ_m s_m²/(4 p_m).
    pub fn min_noise_sq(&self) -> f64 {
        self.noise_sq(&self.optimal_estimator())
            .expect("optimal estimator always matches the outcome count")
    }

    /// Full report for an estimator: noise, bound, mean, spread, and whether
    /// it is the optimal one.
    pub fn analyze(&self, f: &OutcomeEstimator) -> Result<EstimateReport> {
        self.check_len(f)?;
        let noise_sq = self.noise_sq(f)?;
        let noise_bound_sq = self.lower_bound_sq();
        let mut mean = 0.0;
        let mut mean_sq = 0.0;
        for (m, &fv) in f.values().iter().enumerate() {
            mean += fv * self.probs[m];
            mean_sq += fv * fv * self.probs[m];
        }
        let estimator_variance = (mean_sq - mean * mean).max(0.0);
        let opt = self.optimal_estimator();
        let is_optimal = f
            .values()
            .iter()
            .zip(opt.values())
            .enumerate()
            .all(|(m, (&fv, &ov))| !self.is_live(m) || (fv - ov).abs() <= tol::ENGINE_IDENTITY);
        EstimateReport {
            noise_sq,
            noise_bound_sq,
            estimator_mean: mean,
            estimator_variance,
            observable_variance: self.observable_variance(),
            is_optimal,
        }
        .validated()
    }

    /// Joint uncertainty check from two analyses sharing this measurement's
    /// outcome set (`other` holds the moments of the second observable).
    pub fn joint(
        &self,
        f: &OutcomeEstimator,
        other: &MomentData,
        g: &OutcomeEstimator,
        commutator_rhs: f64,
    ) -> Result<JointReport> {
        let ra = self.analyze(f)?;
        let rb = other.analyze(g)?;
        let lhs = ra.estimator_variance.sqrt() * rb.noise_sq.sqrt()
            + ra.noise_sq.sqrt() * rb.estimator_variance.sqrt()
            + ra.noise_sq.sqrt() * rb.noise_sq.sqrt();
        Ok(JointReport::new(lhs, commutator_rhs))
    }
}

/// Outcome probabilities tr[ρ M_m], clamped to ≥ 0.
pub fn outcome_probabilities(
    rho: &DensityOperator,
    pom: &ProbOperatorMeasure,
) -> Result<Vec<f64>> {
    if rho.dim() != pom.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), pom.dim()));
    }
    let mut probs = Vec::with_capacity(pom.len());
    for (_, m) in pom.outcomes() {
        let p = rho.matrix().trace_product(m);
        assert!(
            p.im.abs() <= tol::REALITY && p.re >= -tol::DEAD_OUTCOME,
            "outcome probability {p} is not a clean nonnegative real"
        );
        probs.push(p.re.max(0.0));
    }
    let total: f64 = probs.iter().sum();
    assert!(
        (total - 1.0).abs() <= tol::COMPLETENESS * pom.dim() as f64,
        "probabilities sum to {total}"
    );
    Ok(probs)
}

/// Signal overlaps s_m = tr[ρ(A M_m + M_m A)].
pub fn signal_overlap(
    rho: &DensityOperator,
    pom: &ProbOperatorMeasure,
    a: &HermitianOperator,
) -> Result<Vec<f64>> {
    Ok(MomentData::from_operators(rho, pom, a)?.signal.clone())
}

/// Incompatibility witnesses |c_m| = |tr[ρ(A M_m − M_m A)]|.
pub fn asym_overlap(
    rho: &DensityOperator,
    pom: &ProbOperatorMeasure,
    a: &HermitianOperator,
) -> Result<Vec<f64>> {
    Ok(MomentData::from_operators(rho, pom, a)?.asym_abs.clone())
}

/// Mean-square noise ε(A_f)² of the estimator f.
pub fn noise_sq(
    rho: &DensityOperator,
    pom: &ProbOperatorMeasure,
    a: &HermitianOperator,
    f: &OutcomeEstimator,
) -> Result<f64> {
    MomentData::from_operators(rho, pom, a)?.noise_sq(f)
}

/// The noise-minimizing estimator f_opt(m) = s_m/(2 p_m).
pub fn optimal_estimator(
    rho: &DensityOperator,
    pom: &ProbOperatorMeasure,
    a: &HermitianOperator,
) -> Result<OutcomeEstimator> {
    Ok(MomentData::from_operators(rho, pom, a)?.optimal_estimator())
}

/// The fundamental lower bound on ε(A_f)² over all estimators f.
pub fn noise_lower_bound_sq(
    rho: &DensityOperator,
    pom: &ProbOperatorMeasure,
    a: &HermitianOperator,
) -> Result<f64> {
    Ok(MomentData::from_operators(rho, pom, a)?.lower_bound_sq())
}

/// Full estimator report for (ρ, M, A, f).
pub fn analyze_estimator(
    rho: &DensityOperator,
    pom: &ProbOperatorMeasure,
    a: &HermitianOperator,
    f: &OutcomeEstimator,
) -> Result<EstimateReport> {
    MomentData::from_operators(rho, pom, a)?.analyze(f)
}

/// Joint uncertainty relation for estimates of A and B from one measurement.
pub fn joint_check(
    rho: &DensityOperator,
    pom: &ProbOperatorMeasure,
    a: &HermitianOperator,
    b: &HermitianOperator,
    f: &OutcomeEstimator,
    g: &OutcomeEstimator,
) -> Result<JointReport> {
    let da = MomentData::from_operators(rho, pom, a)?;
    let db = MomentData::from_operators(rho, pom, b)?;
    da.joint(f, &db, g, commutator_bound(rho, a, b)?)
}

/// ‖Σ_m f(m) M_m − A‖_max: zero exactly when the estimate is unbiased on
/// every state, because expectations are linear in ρ.
pub fn unbiasedness_defect(
    pom: &ProbOperatorMeasure,
    f: &OutcomeEstimator,
    a: &HermitianOperator,
) -> Result<f64> {
    if pom.dim() != a.dim() {
        return Err(Error::DimensionMismatch(pom.dim(), a.dim()));
    }
    if f.len() != pom.len() {
        return Err(Error::EstimatorLength(f.len(), pom.len()));
    }
    let mut sum = ComplexMatrix::zeros(pom.dim(), pom.dim());
    for (m, (_, op)) in pom.outcomes().iter().enumerate() {
        sum = &sum + &op.scale(crate::linalg::c64(f.values()[m], 0.0));
    }
    Ok((&sum - a.matrix()).max_abs())
}

/// Product form of the joint relation, ε(A_f)·ε(B_g) ≥ ½|⟨[A,B]⟩|, valid only
/// for estimators unbiased on all states — biased inputs are rejected.
pub fn unbiased_product_check(
    rho: &DensityOperator,
    pom: &ProbOperatorMeasure,
    a: &HermitianOperator,
    b: &HermitianOperator,
    f: &OutcomeEstimator,
    g: &OutcomeEstimator,
) -> Result<JointReport> {
    let defect_f = unbiasedness_defect(pom, f, a)?;
    if defect_f > tol::UNBIASEDNESS {
        return Err(Error::Precondition(format!(
            "estimator for A is biased (defect {defect_f:.3e})"
        )));
    }
    let defect_g = unbiasedness_defect(pom, g, b)?;
    if defect_g > tol::UNBIASEDNESS {
        return Err(Error::Precondition(format!(
            "estimator for B is biased (defect {defect_g:.3e})"
        )));
    }
    let na = MomentData::from_operators(rho, pom, a)?.noise_sq(f)?;
    let nb = MomentData::from_operators(rho, pom, b)?.noise_sq(g)?;
    let lhs = na.sqrt() * nb.sqrt();
    Ok(JointReport::new(lhs, commutator_bound(rho, a, b)?))
}
