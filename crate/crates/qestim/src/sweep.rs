//! Seeded randomized sweeps over (state, measurement, observable, estimator)
//! instances, verifying the engine identities and the joint uncertainty
//! relation at scale.
//!
//! Reproducibility: trial t draws from a ChaCha stream keyed by (seed, t), so
//! results are identical no matter how many threads execute the sweep.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimate::{MomentData, OutcomeEstimator};
use crate::linalg::{c64, ComplexMatrix, C64};
use crate::operators::{
    commutator_bound, projective_pom, DensityOperator, HermitianOperator, ProbOperatorMeasure,
};
use crate::tol;

/// Which property a sweep exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// Joint uncertainty relation slack ≥ 0 for random estimator pairs.
    Joint,
    /// (ΔA_opt)² + ε(A_opt)² = (ΔA)² for the optimal estimator.
    Geometric,
    /// ε²(A_opt) equals the commutator bound on pure states with rank-1
    /// measurements.
    Bound,
}

impl SweepKind {
    pub fn parse(token: &str) -> Result<Self> {
        match token {
            "joint" => Ok(Self::Joint),
            "geometric" => Ok(Self::Geometric),
            "bound" => Ok(Self::Bound),
            other => Err(Error::InvalidConfig(format!(
                "unknown sweep kind {other:?} (expected joint, geometric, or bound)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Joint => "joint",
            Self::Geometric => "geometric",
            Self::Bound => "bound",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepConfig {
    pub kind: SweepKind,
    pub trials: usize,
    pub dim: usize,
    pub seed: u64,
}

impl SweepConfig {
    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if !(2..=16).contains(&self.dim) {
            return Err(Error::InvalidConfig(format!(
                "dimension must lie in [2, 16], got {}",
                self.dim
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub kind: SweepKind,
    pub trials: usize,
    pub dim: usize,
    pub seed: u64,
    /// Joint: minimum slack. Geometric/Bound: maximum |residual|.
    pub worst: f64,
    pub worst_trial: usize,
    /// Trials beyond tolerance.
    pub failures: usize,
    pub tolerance: f64,
}

impl SweepOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial.wrapping_add(1));
    rng
}

fn gaussian_c64(rng: &mut ChaCha8Rng) -> C64 {
    c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure-state amplitudes.
pub fn random_unit_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| gaussian_c64(rng)).collect();
        let norm = crate::linalg::vec_norm(&v);
        if norm > 1e-6 {
            return v.iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-random orthonormal basis via QR of a Ginibre matrix with the
/// R-diagonal phases folded into Q.
pub fn haar_basis(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Vec<C64>> {
    let ginibre = DMatrix::from_fn(dim, dim, |_, _| gaussian_c64(rng));
    let qr = ginibre.qr();
    let q = qr.q();
    let r = qr.r();
    (0..dim)
        .map(|j| {
            let diag = r[(j, j)];
            let phase = if diag.norm() > 0.0 { diag / diag.norm() } else { C64::ONE };
            (0..dim).map(|i| q[(i, j)] * phase).collect()
        })
        .collect()
}

/// Gaussian Hermitian observable scaled to O(1) spectral norm.
pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> HermitianOperator {
    let scale = 1.0 / (dim as f64).sqrt();
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian_c64(rng).scale(scale));
    HermitianOperator::new(g.hermitize()).expect("hermitized matrix is Hermitian")
}

/// Random density operator of the given rank (dim for full-rank mixtures,
/// 1 for pure states).
pub fn random_density(rng: &mut ChaCha8Rng, dim: usize, rank: usize) -> DensityOperator {
    let rank = rank.clamp(1, dim);
    let g = ComplexMatrix::from_fn(dim, rank, |_, _| gaussian_c64(rng));
    let gg = g.matmul(&g.adjoint());
    let trace = gg.trace().re;
    DensityOperator::new(gg.scale(c64(1.0 / trace, 0.0)).hermitize())
        .expect("GG†/tr(GG†) is a density operator")
}

/// Random measurement: k weighted Haar-random rank-1 projectors plus the
/// positive deficit I − Σ. Weight draws that leave a negative deficit are
/// rejected and redrawn. With `rank_one_deficit` the deficit is appended as
/// its spectral rank-1 pieces instead of one coarse element.
pub fn random_pom(
    rng: &mut ChaCha8Rng,
    dim: usize,
    k: usize,
    rank_one_deficit: bool,
) -> ProbOperatorMeasure {
    loop {
        let mut sum = ComplexMatrix::zeros(dim, dim);
        let mut elements: Vec<(String, ComplexMatrix)> = Vec::with_capacity(k + dim);
        for m in 0..k {
            let v = random_unit_vector(rng, dim);
            let w = rng.random::<f64>() * 1.5 / k as f64;
            let op = ComplexMatrix::outer(&v).scale(c64(w, 0.0));
            sum = &sum + &op;
            elements.push((m.to_string(), op));
        }
        let deficit = (&ComplexMatrix::identity(dim) - &sum).hermitize();
        let (evals, evecs) = deficit.hermitian_eigen().expect("deficit is Hermitian");
        if evals[0] < -1e-12 {
            continue; // negative deficit: redraw weights and projectors
        }
        if rank_one_deficit {
            for (e, val) in evals.iter().enumerate() {
                if *val <= 1e-12 {
                    continue;
                }
                let v: Vec<C64> = (0..dim).map(|i| evecs[(i, e)]).collect();
                let label = format!("d{e}");
                elements.push((label, ComplexMatrix::outer(&v).scale(c64(*val, 0.0))));
            }
        } else {
            elements.push(("deficit".to_string(), deficit));
        }
        match ProbOperatorMeasure::new(elements) {
            Ok(pom) => return pom,
            Err(_) => continue, // marginal positivity after rounding: redraw
        }
    }
}

pub fn random_estimator(rng: &mut ChaCha8Rng, len: usize) -> OutcomeEstimator {
    let values = (0..len).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
    OutcomeEstimator::new(values).expect("uniform draws are finite")
}

/// State and measurement variety for the identity sweeps: cycle through
/// pure / full-rank / rank-deficient states and projective / coarse POMs.
fn varied_instance(
    rng: &mut ChaCha8Rng,
    dim: usize,
    trial: usize,
) -> (DensityOperator, ProbOperatorMeasure) {
    let rho = match trial % 3 {
        0 => random_density(rng, dim, 1),
        1 => random_density(rng, dim, dim),
        _ => random_density(rng, dim, dim.div_ceil(2)),
    };
    let pom = if trial.is_multiple_of(2) {
        projective_pom(&haar_basis(rng, dim)).expect("Haar basis is orthonormal")
    } else {
        random_pom(rng, dim, dim + 2, false)
    };
    (rho, pom)
}

fn joint_trial(seed: u64, trial: usize, dim: usize) -> f64 {
    let mut rng = trial_rng(seed, trial as u64);
    let (rho, pom) = varied_instance(&mut rng, dim, trial);
    let a = random_hermitian(&mut rng, dim);
    let b = random_hermitian(&mut rng, dim);
    let f = random_estimator(&mut rng, pom.len());
    let g = random_estimator(&mut rng, pom.len());
    let da = MomentData::from_operators(&rho, &pom, &a).expect("dims agree");
    let db = MomentData::from_operators(&rho, &pom, &b).expect("dims agree");
    let rhs = commutator_bound(&rho, &a, &b).expect("dims agree");
    da.joint(&f, &db, &g, rhs).expect("lengths agree").slack
}

fn geometric_trial(seed: u64, trial: usize, dim: usize) -> f64 {
    let mut rng = trial_rng(seed, trial as u64);
    let (rho, pom) = varied_instance(&mut rng, dim, trial);
    let a = random_hermitian(&mut rng, dim);
    let moments = MomentData::from_operators(&rho, &pom, &a).expect("dims agree");
    let report = moments
        .analyze(&moments.optimal_estimator())
        .expect("optimal estimator analysis");
    report.estimator_variance + report.noise_sq - report.observable_variance
}

fn bound_trial(seed: u64, trial: usize, dim: usize) -> f64 {
    let mut rng = trial_rng(seed, trial as u64);
    // equality case of the bound: pure state, rank-1 measurement elements
    let rho = random_density(&mut rng, dim, 1);
    let pom = if trial.is_multiple_of(2) {
        projective_pom(&haar_basis(&mut rng, dim)).expect("Haar basis is orthonormal")
    } else {
        random_pom(&mut rng, dim, dim + 2, true)
    };
    let a = random_hermitian(&mut rng, dim);
    let moments = MomentData::from_operators(&rho, &pom, &a).expect("dims agree");
    moments.min_noise_sq() - moments.lower_bound_sq()
}

/// Run a sweep; trials execute in parallel with per-trial deterministic
/// streams, so the outcome is independent of thread count.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    config.validate()?;
    let SweepConfig { kind, trials, dim, seed } = *config;
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| match kind {
            SweepKind::Joint => joint_trial(seed, t, dim),
            SweepKind::Geometric => geometric_trial(seed, t, dim),
            SweepKind::Bound => bound_trial(seed, t, dim),
        })
        .collect();

    let tolerance = tol::ENGINE_IDENTITY;
    let (worst, worst_trial, failures) = match kind {
        SweepKind::Joint => {
            let mut worst = f64::INFINITY;
            let mut worst_trial = 0;
            let mut failures = 0;
            for (t, &slack) in values.iter().enumerate() {
                if slack < worst {
                    worst = slack;
                    worst_trial = t;
                }
                if slack < -tolerance {
                    failures += 1;
                }
            }
            (worst, worst_trial, failures)
        }
        SweepKind::Geometric | SweepKind::Bound => {
            let mut worst = 0.0f64;
            let mut worst_trial = 0;
            let mut failures = 0;
            for (t, &residual) in values.iter().enumerate() {
                if residual.abs() > worst {
                    worst = residual.abs();
                    worst_trial = t;
                }
                if residual.abs() > tolerance {
                    failures += 1;
                }
            }
            (worst, worst_trial, failures)
        }
    };

    Ok(SweepOutcome {
        kind,
        trials,
        dim,
        seed,
        worst,
        worst_trial,
        failures,
        tolerance,
    })
}
