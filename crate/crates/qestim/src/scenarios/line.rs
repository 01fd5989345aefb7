//! 1-D grid scenarios: the exact position/momentum uncertainty relation
//! δX·ε(P_opt) = ħ/2 on localized states, and the pointwise optimal energy
//! estimate for the harmonic oscillator ground state.

use super::Check;
use crate::error::{Error, Result};
use crate::grid::{
    energy_optimal_estimate, exact_uncertainty_check, momentum_moments, Grid1D, GridWavefunction,
    UncertaintyCheck,
};
use crate::linalg::C64;

/// Test states for the momentum-grid scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum LineState {
    /// Gaussian of density std `sigma`, boosted by momentum `k`.
    Gaussian { sigma: f64, k: f64 },
    /// Two equal Gaussians of density std `sigma` centered at ±`center`.
    TwoBump { sigma: f64, center: f64 },
    /// Gaussian with quadratic phase S = chirp·x²/2.
    Chirp { sigma: f64, chirp: f64 },
}

impl LineState {
    pub fn parse(token: &str) -> Result<Self> {
        match token {
            "gaussian" => Ok(Self::Gaussian { sigma: 1.0, k: 0.0 }),
            "two-bump" => Ok(Self::TwoBump { sigma: 1.0, center: 2.0 }),
            "chirp" => Ok(Self::Chirp { sigma: 1.0, chirp: 0.5 }),
            other => Err(Error::InvalidConfig(format!(
                "unknown line state {other:?} (expected gaussian, two-bump, or chirp)"
            ))),
        }
    }

    pub fn build(&self, grid: Grid1D) -> Result<GridWavefunction> {
        match *self {
            Self::Gaussian { sigma, k } => GridWavefunction::from_fn(grid, |x| {
                C64::from_polar((-x * x / (4.0 * sigma * sigma)).exp(), k * x)
            }),
            Self::TwoBump { sigma, center } => GridWavefunction::from_fn(grid, |x| {
                let left = (-(x + center) * (x + center) / (4.0 * sigma * sigma)).exp();
                let right = (-(x - center) * (x - center) / (4.0 * sigma * sigma)).exp();
                C64::new(left + right, 0.0)
            }),
            Self::Chirp { sigma, chirp } => GridWavefunction::from_fn(grid, |x| {
                C64::from_polar((-x * x / (4.0 * sigma * sigma)).exp(), chirp * x * x / 2.0)
            }),
        }
    }

    /// Residual tolerance for δX·ε(P_opt) − ħ/2 at n = 1024: a plain Gaussian
    /// is limited only by the O(dx⁴) tail of the finite differences, the
    /// structured states by the generic O(dx²) term.
    fn residual_tolerance(&self) -> f64 {
        match self {
            Self::Gaussian { .. } => 1e-6,
            _ => 1e-4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MomentumGridConfig {
    pub state: LineState,
    pub n: usize,
    pub extent: f64,
    pub hbar: f64,
}

impl Default for MomentumGridConfig {
    fn default() -> Self {
        Self {
            state: LineState::Gaussian { sigma: 1.0, k: 0.0 },
            n: 1024,
            extent: 12.0,
            hbar: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MomentumGridScenario {
    pub uncertainty: UncertaintyCheck,
    pub residual_tolerance: f64,
}

impl MomentumGridScenario {
    pub fn results(&self) -> Vec<(String, f64)> {
        let u = &self.uncertainty;
        vec![
            ("fisher_length".into(), u.fisher_length),
            ("noise_sq_fisher".into(), u.noise_sq_fisher),
            ("noise_sq_cross".into(), u.noise_sq_cross),
            ("momentum_variance".into(), u.momentum_variance),
            ("estimate_variance".into(), u.estimate_variance),
            ("product".into(), u.product),
            ("half_hbar".into(), u.half_hbar),
            ("residual".into(), u.residual),
        ]
    }

    pub fn checks(&self) -> Vec<Check> {
        let u = &self.uncertainty;
        vec![
            Check::residual("exact_uncertainty_residual", u.residual, self.residual_tolerance),
            Check::residual(
                "noise_route_agreement",
                u.noise_sq_cross - u.noise_sq_fisher,
                self.residual_tolerance * 4.0 * u.half_hbar.max(1.0),
            ),
            // δX·ΔP ≥ δX·ε(P_opt) = ħ/2, the stronger-than-Heisenberg chain;
            // Gaussians saturate it, so allow the grid residual either way
            Check::slack(
                "fisher_momentum_product",
                u.fisher_length * u.momentum_variance.sqrt() - u.half_hbar,
                self.residual_tolerance,
            ),
        ]
    }
}

pub fn run_momentum_grid(config: &MomentumGridConfig) -> Result<MomentumGridScenario> {
    let grid = Grid1D::centered(config.n, config.extent, config.hbar)?;
    let psi = config.state.build(grid)?;
    let uncertainty = exact_uncertainty_check(&psi)?;
    Ok(MomentumGridScenario {
        uncertainty,
        residual_tolerance: config.state.residual_tolerance(),
    })
}

#[derive(Debug, Clone)]
pub struct EnergyGridConfig {
    pub omega: f64,
    pub mass: f64,
    pub n: usize,
    pub extent: f64,
    pub hbar: f64,
}

impl Default for EnergyGridConfig {
    fn default() -> Self {
        Self {
            omega: 1.0,
            mass: 1.0,
            n: 2048,
            extent: 10.0,
            hbar: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EnergyGridScenario {
    /// ħω/2.
    pub ground_energy: f64,
    /// Max |E(x) − ħω/2| over the interior (density ≥ 10⁻³ of peak).
    pub max_interior_deviation: f64,
    pub interior_points: usize,
    /// ⟨E⟩ under the position density.
    pub mean_energy: f64,
    /// ⟨P²⟩/2m + ⟨V⟩ via the momentum representation.
    pub hamiltonian_expectation: f64,
}

impl EnergyGridScenario {
    pub fn results(&self) -> Vec<(String, f64)> {
        vec![
            ("ground_energy".into(), self.ground_energy),
            ("max_interior_deviation".into(), self.max_interior_deviation),
            ("interior_points".into(), self.interior_points as f64),
            ("mean_energy".into(), self.mean_energy),
            ("hamiltonian_expectation".into(), self.hamiltonian_expectation),
        ]
    }

    pub fn checks(&self) -> Vec<Check> {
        vec![
            Check::residual(
                "energy_estimate_constant",
                self.max_interior_deviation,
                1e-4 * self.ground_energy.max(1.0),
            ),
            Check::residual(
                "mean_energy_matches_hamiltonian",
                self.mean_energy - self.hamiltonian_expectation,
                1e-4 * self.ground_energy.max(1.0),
            ),
        ]
    }
}

/// Optimal energy estimate on the harmonic-oscillator ground state: the
/// amplitude-curvature term cancels the potential pointwise, leaving the
/// constant ħω/2 across the support.
pub fn run_energy_grid(config: &EnergyGridConfig) -> Result<EnergyGridScenario> {
    if !(config.omega.is_finite() && config.omega > 0.0 && config.mass.is_finite() && config.mass > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "omega and mass must be positive, got {} and {}",
            config.omega, config.mass
        )));
    }
    let grid = Grid1D::centered(config.n, config.extent, config.hbar)?;
    let (m, w, hbar) = (config.mass, config.omega, config.hbar);
    let psi = GridWavefunction::from_fn(grid, |x| {
        C64::new((-m * w * x * x / (2.0 * hbar)).exp(), 0.0)
    })?;
    let potential: Vec<f64> = grid.points().iter().map(|&x| 0.5 * m * w * w * x * x).collect();
    let energy = energy_optimal_estimate(&psi, &potential, m)?;
    let density = psi.density();
    let peak = density.iter().copied().fold(0.0, f64::max);

    let ground_energy = hbar * w / 2.0;
    let mut max_dev = 0.0f64;
    let mut interior_points = 0usize;
    for (j, &e) in energy.iter().enumerate() {
        if density[j] >= 1e-3 * peak {
            interior_points += 1;
            max_dev = max_dev.max((e - ground_energy).abs());
        }
    }

    let mean_energy: f64 = energy
        .iter()
        .zip(&density)
        .map(|(e, p)| e * p * grid.dx())
        .sum();
    let (_, p_sq) = momentum_moments(&psi)?;
    let v_mean: f64 = potential
        .iter()
        .zip(&density)
        .map(|(v, p)| v * p * grid.dx())
        .sum();

    Ok(EnergyGridScenario {
        ground_energy,
        max_interior_deviation: max_dev,
        interior_points,
        mean_energy,
        hamiltonian_expectation: p_sq / (2.0 * m) + v_mean,
    })
}
