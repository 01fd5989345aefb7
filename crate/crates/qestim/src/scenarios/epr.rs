//! Approximate-EPR momentum estimation: two modes share the correlated
//! Gaussian
//!
//!   ψ(x,x′) = K·exp[−(x−x′−a)²/4σ² − τ²(x+x′)²/4ħ²]·e^{ib(x+x′)/2ħ},
//!
//! with Var(X−X′) = σ² and Var(P+P′) = τ². Mode 1's momentum is measured
//! (one outcome per Fourier bin of width dp) and mode 2's momentum P′ is
//! estimated from the result. The naive estimate b − p is compared against
//! the optimal one, which is linear in p with closed form
//! [ħ²(b−p) + σ²τ²p]/(ħ² + σ²τ²) and noise ratio (1 + σ²τ²/ħ²)^{-1/2}.
//!
//! Both the measurement (mode-1 momentum bins) and the observable (mode-2
//! momentum) are diagonal in the two-mode momentum representation, so the
//! per-outcome moments reduce to sums over the joint momentum density and
//! the incompatibility witnesses vanish identically: all remaining noise is
//! state-induced.

use super::Check;
use crate::error::{Error, Result};
use crate::estimate::{EstimateReport, MomentData, OutcomeEstimator};
use crate::grid::{epr_momentum_transform, Grid1D, GridWavefunction2D};
use crate::linalg::C64;

#[derive(Debug, Clone)]
pub struct EprConfig {
    /// Position-correlation width, Var(X−X′) = σ².
    pub sigma: f64,
    /// Momentum-correlation width, Var(P+P′) = τ².
    pub tau: f64,
    /// Position offset ⟨X−X′⟩.
    pub a: f64,
    /// Momentum offset ⟨P+P′⟩.
    pub b: f64,
    pub hbar: f64,
    /// Points per axis.
    pub grid_n: usize,
    /// Half-extent of the square grid; `None` picks one that keeps the
    /// boundary amplitude below the aliasing threshold.
    pub grid_extent: Option<f64>,
}

impl Default for EprConfig {
    fn default() -> Self {
        Self {
            sigma: 0.5,
            tau: 0.5,
            a: 0.0,
            b: 1.0,
            hbar: 1.0,
            grid_n: 256,
            grid_extent: None,
        }
    }
}

impl EprConfig {
    fn validate(&self) -> Result<()> {
        if !self.sigma.is_finite() || self.sigma <= 0.0 || !self.tau.is_finite() || self.tau <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "correlation widths must be positive, got sigma {} tau {}",
                self.sigma, self.tau
            )));
        }
        if !self.hbar.is_finite() || self.hbar <= 0.0 {
            return Err(Error::InvalidConfig(format!("hbar must be positive, got {}", self.hbar)));
        }
        if self.sigma * self.tau >= self.hbar {
            return Err(Error::InvalidConfig(format!(
                "need sigma·tau < hbar for a normalizable correlated Gaussian, got {}",
                self.sigma * self.tau
            )));
        }
        if self.grid_n < 32 {
            return Err(Error::InvalidConfig("grid_n must be at least 32".into()));
        }
        Ok(())
    }

    fn resolved_extent(&self) -> f64 {
        // The boundary-limiting direction is x + x′, whose amplitude decays
        // on the scale ħ/τ; 3.6 widths of combined scale push the edge
        // amplitude below the aliasing threshold.
        self.grid_extent
            .unwrap_or(3.6 * (self.sigma + self.hbar / self.tau) + 0.5 * self.a.abs())
    }

    /// Grid points across the full width at half maximum of the narrower
    /// marginal densities of x−x′ (std σ) and x+x′ (std ħ/τ).
    fn resolution_points(&self, dx: f64) -> (f64, f64) {
        const FWHM: f64 = 2.354820045030949; // 2√(2 ln 2)
        (FWHM * self.sigma / dx, FWHM * (self.hbar / self.tau) / dx)
    }
}

#[derive(Debug, Clone)]
pub struct EprScenario {
    pub extent: f64,
    pub dp: f64,
    /// Optimal-estimator analysis (engine route).
    pub report_opt: EstimateReport,
    /// Naive-estimator analysis for f(p) = b − p.
    pub report_est: EstimateReport,
    /// ε(P′_opt)/ε(P′_est) from the engine.
    pub ratio: f64,
    /// Closed form (1 + σ²τ²/ħ²)^{-1/2}.
    pub ratio_formula: f64,
    /// Rows (p, f_opt(p), closed form, probability) over the central 90% of
    /// the outcome probability mass.
    pub central_table: Vec<(f64, f64, f64, f64)>,
    /// Max |f_opt − formula| / max(|formula|, τ) over the central mass; the
    /// floor τ = ε(P′_est) keeps the metric meaningful near the estimator's
    /// zero crossing.
    pub max_rel_dev: f64,
    /// Max |f_opt − (b − p)| over the central mass (the σ²τ² → 0 witness).
    pub max_naive_dev: f64,
    /// State-construction diagnostics from grid moments.
    pub mean_p_sum: f64,
    pub var_p_sum: f64,
}

impl EprScenario {
    pub fn results(&self) -> Vec<(String, f64)> {
        let mut out = vec![
            ("extent".into(), self.extent),
            ("dp".into(), self.dp),
            ("noise_opt_sq".into(), self.report_opt.noise_sq),
            ("noise_est_sq".into(), self.report_est.noise_sq),
            ("ratio".into(), self.ratio),
            ("ratio_formula".into(), self.ratio_formula),
            ("max_rel_dev".into(), self.max_rel_dev),
            ("max_naive_dev".into(), self.max_naive_dev),
            ("mean_p_plus_p".into(), self.mean_p_sum),
            ("var_p_plus_p".into(), self.var_p_sum),
        ];
        for (p, f_opt, formula, prob) in &self.central_table {
            out.push((format!("f_opt[p={p:.4}]"), *f_opt));
            out.push((format!("formula[p={p:.4}]"), *formula));
            out.push((format!("prob[p={p:.4}]"), *prob));
        }
        out
    }

    pub fn checks(&self, config: &EprConfig) -> Vec<Check> {
        vec![
            Check::residual(
                "ratio_matches_formula",
                (self.ratio - self.ratio_formula) / self.ratio_formula,
                0.01,
            ),
            Check::residual("estimator_matches_formula", self.max_rel_dev, 0.01),
            Check::slack("optimal_no_worse_than_naive", 1.0 - self.ratio, 1e-9),
            Check::residual(
                "momentum_sum_mean",
                self.mean_p_sum - config.b,
                1e-3 * config.b.abs().max(1.0),
            ),
            Check::residual(
                "momentum_sum_variance",
                self.var_p_sum - config.tau * config.tau,
                1e-3 * (config.tau * config.tau).max(0.01),
            ),
            Check::residual(
                "variance_partition",
                self.report_opt.estimator_variance + self.report_opt.noise_sq
                    - self.report_opt.observable_variance,
                1e-6,
            ),
        ]
    }
}

pub fn run_epr(config: &EprConfig) -> Result<EprScenario> {
    config.validate()?;
    let extent = config.resolved_extent();
    let n = config.grid_n;
    let grid = Grid1D::centered(n, extent, config.hbar)?;
    let dx = grid.dx();

    let (res_u, res_v) = config.resolution_points(dx);
    if res_u < 16.0 || res_v < 16.0 {
        return Err(Error::InvalidConfig(format!(
            "grid resolves the correlation widths with {res_u:.1} and {res_v:.1} points across \
             their half-maximum widths; need at least 16 — increase grid_n"
        )));
    }

    let (sigma, tau, hbar) = (config.sigma, config.tau, config.hbar);
    let (a, b) = (config.a, config.b);
    let psi = GridWavefunction2D::from_fn(grid, grid, |x, xp| {
        let u = x - xp - a;
        let v = x + xp;
        let amp = (-u * u / (4.0 * sigma * sigma) - tau * tau * v * v / (4.0 * hbar * hbar)).exp();
        C64::from_polar(amp, b * v / (2.0 * hbar))
    })?;

    // Mode 1 to momentum, then mode 2 (transpose, transform, transpose back).
    let mode1 = epr_momentum_transform(&psi)?;
    let both = epr_momentum_transform(&mode1.transpose())?.transpose();

    let p_grid = *both.grid1();
    let pp_grid = *both.grid2();
    let dp = p_grid.dx();
    let dpp = pp_grid.dx();
    let cell = dp * dpp;

    // Per-outcome moments over the joint momentum density.
    let mut probs = vec![0.0f64; n];
    let mut signal = vec![0.0f64; n];
    let mut first = 0.0f64;
    let mut second = 0.0f64;
    for i in 0..n {
        let mut row_p = 0.0;
        let mut row_s = 0.0;
        for j in 0..n {
            let q = both.amplitude(i, j).norm_sqr() * cell;
            let p_prime = pp_grid.point(j);
            row_p += q;
            row_s += p_prime * q;
            first += p_prime * q;
            second += p_prime * p_prime * q;
        }
        probs[i] = row_p;
        signal[i] = 2.0 * row_s;
    }
    let moments = MomentData::new(probs.clone(), signal, vec![0.0; n], first, second)?;

    let f_opt = moments.optimal_estimator();
    let naive: Vec<f64> = (0..n).map(|k| b - p_grid.point(k)).collect();
    let f_est = OutcomeEstimator::new(naive)?;
    let report_opt = moments.analyze(&f_opt)?;
    let report_est = moments.analyze(&f_est)?;
    let ratio = (report_opt.noise_sq / report_est.noise_sq).sqrt();
    let st2 = sigma * sigma * tau * tau / (hbar * hbar);
    let ratio_formula = 1.0 / (1.0 + st2).sqrt();

    // Central 90% of the outcome mass, densest bins first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| probs[j].total_cmp(&probs[i]));
    let mut central = Vec::new();
    let mut mass = 0.0;
    for &k in &order {
        central.push(k);
        mass += probs[k];
        if mass >= 0.90 {
            break;
        }
    }
    central.sort_unstable();

    let formula = |p: f64| (hbar * hbar * (b - p) + sigma * sigma * tau * tau * p)
        / (hbar * hbar + sigma * sigma * tau * tau);
    let mut central_table = Vec::with_capacity(central.len());
    let mut max_rel_dev = 0.0f64;
    let mut max_naive_dev = 0.0f64;
    for &k in &central {
        let p = p_grid.point(k);
        let engine = f_opt.values()[k];
        let closed = formula(p);
        central_table.push((p, engine, closed, probs[k]));
        max_rel_dev = max_rel_dev.max((engine - closed).abs() / closed.abs().max(tau));
        max_naive_dev = max_naive_dev.max((engine - (b - p)).abs());
    }

    // Construction diagnostics: ⟨P+P′⟩ and Var(P+P′) from the joint density.
    let mut sum_mean = 0.0;
    let mut sum_sq = 0.0;
    for i in 0..n {
        let p = p_grid.point(i);
        for j in 0..n {
            let q = both.amplitude(i, j).norm_sqr() * cell;
            let s = p + pp_grid.point(j);
            sum_mean += s * q;
            sum_sq += s * s * q;
        }
    }

    Ok(EprScenario {
        extent,
        dp,
        report_opt,
        report_est,
        ratio,
        ratio_formula,
        central_table,
        max_rel_dev,
        max_naive_dev,
        mean_p_sum: sum_mean,
        var_p_sum: sum_sq - sum_mean * sum_mean,
    })
}
