//! Grid-discretized continuous systems: the amplitude/phase split
//! ψ = R·e^{iS/ħ}, optimal momentum and energy estimates from a position
//! measurement, the Fisher length, and Fourier transforms to the momentum
//! representation.
//!
//! Conventions: rectangle-rule integrals (grid amplitudes are coefficients of
//! an orthonormal discrete basis), central second-order finite differences
//! with one-sided stencils at support edges, and the symmetric Fourier pair
//! ψ̃(p) = (2πħ)^{-1/2} ∫ ψ(x) e^{-ipx/ħ} dx.

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::tol;

/// Uniform 1-D grid. ħ travels with the grid because every momentum-side
/// formula carries it explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n: usize,
    x0: f64,
    dx: f64,
    hbar: f64,
}

impl Grid1D {
    pub fn new(n: usize, x0: f64, dx: f64, hbar: f64) -> Result<Self> {
        if n < 8 {
            return Err(Error::InvalidInput(format!("grid needs at least 8 points, got {n}")));
        }
        if !dx.is_finite() || dx <= 0.0 {
            return Err(Error::InvalidInput(format!("grid spacing must be positive, got {dx}")));
        }
        if !hbar.is_finite() || hbar <= 0.0 {
            return Err(Error::InvalidInput(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { n, x0, dx, hbar })
    }

    /// Grid of n points covering [-extent, extent).
    pub fn centered(n: usize, extent: f64, hbar: f64) -> Result<Self> {
        if !extent.is_finite() || extent <= 0.0 {
            return Err(Error::InvalidInput(format!("extent must be positive, got {extent}")));
        }
        Self::new(n, -extent, 2.0 * extent / n as f64, hbar)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn point(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.point(j)).collect()
    }

    /// Spacing of the conjugate momentum grid, 2πħ/(n·dx).
    pub fn momentum_step(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.hbar / (self.n as f64 * self.dx)
    }

    /// k-th momentum point, (k − n/2)·dp, ascending.
    pub fn momentum_point(&self, k: usize) -> f64 {
        (k as f64 - (self.n / 2) as f64) * self.momentum_step()
    }

    /// The grid the Fourier transform maps onto.
    pub fn momentum_grid(&self) -> Grid1D {
        let dp = self.momentum_step();
        Grid1D {
            n: self.n,
            x0: -((self.n / 2) as f64) * dp,
            dx: dp,
            hbar: self.hbar,
        }
    }
}

/// Normalized complex amplitudes on a 1-D grid.
#[derive(Debug, Clone)]
pub struct GridWavefunction {
    grid: Grid1D,
    amps: Vec<C64>,
}

impl GridWavefunction {
    /// Normalizes so that Σ|ψ_j|² dx = 1.
    pub fn new(grid: Grid1D, mut amps: Vec<C64>) -> Result<Self> {
        if amps.len() != grid.len() {
            return Err(Error::DimensionMismatch(grid.len(), amps.len()));
        }
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dx();
        if !norm_sq.is_finite() || norm_sq <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "wavefunction norm² = {norm_sq} cannot be normalized"
            )));
        }
        let scale = norm_sq.sqrt().recip();
        for z in &mut amps {
            *z *= scale;
        }
        Ok(Self { grid, amps })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> C64) -> Result<Self> {
        let amps = (0..grid.len()).map(|j| f(grid.point(j))).collect();
        Self::new(grid, amps)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// |ψ_j|² per point.
    pub fn density(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }
}

/// Amplitude R, unwrapped action S (phase × ħ), and the support mask on which
/// they are meaningful.
#[derive(Debug, Clone)]
pub struct PolarFields {
    pub amplitude: Vec<f64>,
    pub action: Vec<f64>,
    pub support: Vec<bool>,
}

impl PolarFields {
    /// Maximal runs of consecutive supported points. Nodes split the support;
    /// the phase is unwrapped independently on each piece.
    pub fn components(&self) -> Vec<(usize, usize)> {
        components_of(&self.support)
    }
}

fn components_of(mask: &[bool]) -> Vec<(usize, usize)> {
    let mut comps = Vec::new();
    let mut i = 0;
    while i < mask.len() {
        if mask[i] {
            let start = i;
            while i < mask.len() && mask[i] {
                i += 1;
            }
            comps.push((start, i));
        } else {
            i += 1;
        }
    }
    comps
}

/// Second-order first derivative on a contiguous slice, one-sided at its ends.
fn derivative(vals: &[f64], dx: f64) -> Vec<f64> {
    let m = vals.len();
    let mut out = vec![0.0; m];
    match m {
        0 | 1 => {}
        2 => {
            let d = (vals[1] - vals[0]) / dx;
            out[0] = d;
            out[1] = d;
        }
        _ => {
            for j in 1..m - 1 {
                out[j] = (vals[j + 1] - vals[j - 1]) / (2.0 * dx);
            }
            out[0] = (-3.0 * vals[0] + 4.0 * vals[1] - vals[2]) / (2.0 * dx);
            out[m - 1] = (3.0 * vals[m - 1] - 4.0 * vals[m - 2] + vals[m - 3]) / (2.0 * dx);
        }
    }
    out
}

/// Second-order second derivative on a contiguous slice, one-sided at its ends.
fn second_derivative(vals: &[f64], dx: f64) -> Vec<f64> {
    let m = vals.len();
    let mut out = vec![0.0; m];
    if m < 4 {
        return out; // too short for the one-sided stencil; callers mask these
    }
    let dx2 = dx * dx;
    for j in 1..m - 1 {
        out[j] = (vals[j + 1] - 2.0 * vals[j] + vals[j - 1]) / dx2;
    }
    out[0] = (2.0 * vals[0] - 5.0 * vals[1] + 4.0 * vals[2] - vals[3]) / dx2;
    out[m - 1] = (2.0 * vals[m - 1] - 5.0 * vals[m - 2] + 4.0 * vals[m - 3] - vals[m - 4]) / dx2;
    out
}

/// Split ψ into R and unwrapped S on the support. The unwrap marches outward
/// from the peak-amplitude point of each support component, removing 2πħ
/// jumps; the gradient of S is undefined at nodes, which break components.
pub fn polar_decompose(psi: &GridWavefunction) -> Result<PolarFields> {
    let hbar = psi.grid().hbar();
    let amplitude: Vec<f64> = psi.amps.iter().map(|z| z.norm()).collect();
    let peak = amplitude.iter().copied().fold(0.0, f64::max);
    let threshold = tol::SUPPORT_REL * peak;
    let support: Vec<bool> = amplitude.iter().map(|&r| r >= threshold).collect();
    if !support.iter().any(|&s| s) {
        return Err(Error::InvalidInput("wavefunction has no supported points".into()));
    }

    let mut action = vec![0.0; amplitude.len()];
    let two_pi_hbar = 2.0 * std::f64::consts::PI * hbar;
    for (start, end) in components_of(&support) {
        let peak_idx = (start..end)
            .max_by(|&a, &b| amplitude[a].total_cmp(&amplitude[b]))
            .expect("component is nonempty");
        let raw = |j: usize| psi.amps[j].arg() * hbar;
        action[peak_idx] = raw(peak_idx);
        for j in peak_idx + 1..end {
            let r = raw(j);
            action[j] = r + two_pi_hbar * ((action[j - 1] - r) / two_pi_hbar).round();
        }
        for j in (start..peak_idx).rev() {
            let r = raw(j);
            action[j] = r + two_pi_hbar * ((action[j + 1] - r) / two_pi_hbar).round();
        }
    }
    Ok(PolarFields {
        amplitude,
        action,
        support,
    })
}

/// The optimal momentum estimate from a position readout: ∂S/∂x, evaluated on
/// the support (zero on masked points).
pub fn momentum_optimal_estimate(psi: &GridWavefunction) -> Result<Vec<f64>> {
    let polar = polar_decompose(psi)?;
    let dx = psi.grid().dx();
    let mut out = vec![0.0; psi.grid().len()];
    for (start, end) in polar.components() {
        let d = derivative(&polar.action[start..end], dx);
        out[start..end].copy_from_slice(&d);
    }
    Ok(out)
}

/// Classical Fisher information of the position density,
/// F = Σ p·(p′/p)²·dx over the support.
pub fn fisher_information(psi: &GridWavefunction) -> Result<f64> {
    let polar = polar_decompose(psi)?;
    let dx = psi.grid().dx();
    let density: Vec<f64> = polar.amplitude.iter().map(|r| r * r).collect();
    let mut fisher = 0.0;
    for (start, end) in polar.components() {
        let dp = derivative(&density[start..end], dx);
        for (j, d) in dp.iter().enumerate() {
            let p = density[start + j];
            fisher += d * d / p * dx;
        }
    }
    // A density flat to rounding leaves only finite-difference noise, which
    // scales like (ulp/dx)²; any genuine density on the grid has
    // F ≥ O(1)/(n·dx)², many orders above this floor.
    let rounding_floor = (1e-13 / dx).powi(2);
    if !fisher.is_finite() || fisher <= rounding_floor {
        return Err(Error::DegenerateDensity(fisher));
    }
    Ok(fisher)
}

/// Fisher length δX = F^{-1/2}.
pub fn fisher_length(psi: &GridWavefunction) -> Result<f64> {
    Ok(fisher_information(psi)?.sqrt().recip())
}

/// Momentum representation of ψ on the conjugate grid (ascending momenta).
pub fn momentum_representation(psi: &GridWavefunction) -> Result<GridWavefunction> {
    let boundary = psi.amps[0].norm().max(psi.amps[psi.amps.len() - 1].norm());
    let peak = psi.amps.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if boundary > tol::BOUNDARY_DECAY * peak {
        return Err(Error::Aliasing(boundary / peak, tol::BOUNDARY_DECAY));
    }
    let amps = fourier_line(&psi.amps, &psi.grid, false);
    GridWavefunction::new(psi.grid.momentum_grid(), amps)
}

/// One line of the symmetric Fourier pair. `inverse` maps a momentum-grid
/// line back to the (centered-origin) position grid.
///
/// With p_k = (k − ⌊n/2⌋)·dp the plain FFT index is offset by ⌊n/2⌋, which
/// shows up as the twiddle e^{2πi·j·⌊n/2⌋/n} on the samples.
fn fourier_line(amps: &[C64], grid: &Grid1D, inverse: bool) -> Vec<C64> {
    let n = grid.len();
    let hbar = grid.hbar();
    let scale = grid.dx() / (2.0 * std::f64::consts::PI * hbar).sqrt();
    let twiddle = 2.0 * std::f64::consts::PI * (n / 2) as f64 / n as f64;
    let mut planner = FftPlanner::new();

    if !inverse {
        // ψ̃_k = scale · e^{-i p_k x0/ħ} · Σ_j [ψ_j e^{+2πi j⌊n/2⌋/n}] e^{-2πi jk/n}
        let mut buf: Vec<C64> = amps
            .iter()
            .enumerate()
            .map(|(j, z)| z * C64::from_polar(1.0, twiddle * j as f64))
            .collect();
        planner.plan_fft_forward(n).process(&mut buf);
        let x0 = grid.x0();
        let pgrid = grid.momentum_grid();
        buf.iter_mut().enumerate().for_each(|(k, z)| {
            *z *= C64::from_polar(scale, -pgrid.point(k) * x0 / hbar);
        });
        buf
    } else {
        // ψ_j = scale · e^{-2πi j⌊n/2⌋/n} · Σ_k [ψ̃_k e^{+i p_k x0/ħ}] e^{+2πi jk/n}
        // where `grid` is the momentum grid and x0 belongs to its conjugate.
        let x0 = grid.momentum_grid().x0(); // dp·dx·n = 2πħ recovers the x grid
        let mut buf: Vec<C64> = amps
            .iter()
            .enumerate()
            .map(|(k, z)| z * C64::from_polar(1.0, grid.point(k) * x0 / hbar))
            .collect();
        planner.plan_fft_inverse(n).process(&mut buf);
        buf.iter_mut().enumerate().for_each(|(j, z)| {
            *z *= C64::from_polar(scale, -twiddle * j as f64);
        });
        buf
    }
}

/// First and second momentum moments (⟨P⟩, ⟨P²⟩) via the momentum
/// representation.
pub fn momentum_moments(psi: &GridWavefunction) -> Result<(f64, f64)> {
    let tilde = momentum_representation(psi)?;
    let dp = tilde.grid().dx();
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for (k, z) in tilde.amplitudes().iter().enumerate() {
        let p = tilde.grid().point(k);
        let w = z.norm_sqr() * dp;
        m1 += p * w;
        m2 += p * p * w;
    }
    Ok((m1, m2))
}

/// Both routes to the exact position/momentum uncertainty relation
/// δX·ε(P_opt) = ħ/2, with their disagreement surfaced.
#[derive(Debug, Clone, Copy)]
pub struct UncertaintyCheck {
    /// δX = F^{-1/2}.
    pub fisher_length: f64,
    /// ε(P_opt)² from the Fisher route, ħ²F/4 — the defining value.
    pub noise_sq_fisher: f64,
    /// ε(P_opt)² from the independent route Var(P) − Var_p(∇S).
    pub noise_sq_cross: f64,
    /// Var(P) from momentum-space moments.
    pub momentum_variance: f64,
    /// Var_p(∇S): spread of the optimal estimate under the position density.
    pub estimate_variance: f64,
    /// δX·ε(P_opt) with the cross-route noise.
    pub product: f64,
    /// ħ/2 for the grid's ħ.
    pub half_hbar: f64,
    /// |product − ħ/2|; vanishes with the grid spacing at second order.
    pub residual: f64,
}

/// Verify δX·ε(P_opt) = ħ/2 on a grid state. The Fisher route ħ²F/4 defines
/// ε(P_opt)²; the variance-difference route must agree within the O(dx²)
/// consistency envelope or the state is too poorly resolved to trust.
pub fn exact_uncertainty_check(psi: &GridWavefunction) -> Result<UncertaintyCheck> {
    let hbar = psi.grid().hbar();
    let dx = psi.grid().dx();
    let fisher = fisher_information(psi)?;
    let fisher_length = fisher.sqrt().recip();
    let noise_sq_fisher = hbar * hbar * fisher / 4.0;

    let (p_mean, p_sq) = momentum_moments(psi)?;
    let momentum_variance = p_sq - p_mean * p_mean;

    let estimate = momentum_optimal_estimate(psi)?;
    let density = psi.density();
    let mut est_mean = 0.0;
    let mut est_sq = 0.0;
    for (j, &v) in estimate.iter().enumerate() {
        let w = density[j] * dx;
        est_mean += v * w;
        est_sq += v * v * w;
    }
    let estimate_variance = est_sq - est_mean * est_mean;
    let noise_sq_cross = momentum_variance - estimate_variance;

    let envelope = 10.0 * dx * dx * momentum_variance.max(noise_sq_fisher) + 1e-9;
    let gap = (noise_sq_cross - noise_sq_fisher).abs();
    if gap > envelope {
        return Err(Error::Inconsistent(format!(
            "momentum-noise routes disagree by {gap:.3e} (allowed {envelope:.3e}); \
             refine the grid"
        )));
    }

    let product = fisher_length * noise_sq_cross.max(0.0).sqrt();
    let half_hbar = hbar / 2.0;
    Ok(UncertaintyCheck {
        fisher_length,
        noise_sq_fisher,
        noise_sq_cross,
        momentum_variance,
        estimate_variance,
        product,
        half_hbar,
        residual: (product - half_hbar).abs(),
    })
}

/// The optimal energy estimate from a position readout:
/// E(x) = (∂S/∂x)²/2m + V(x) + Q(x), with the amplitude-curvature term
/// Q = −ħ²·R″/(2mR). Zero on masked points and on support pieces too short
/// to differentiate twice.
pub fn energy_optimal_estimate(
    psi: &GridWavefunction,
    potential: &[f64],
    mass: f64,
) -> Result<Vec<f64>> {
    if potential.len() != psi.grid().len() {
        return Err(Error::DimensionMismatch(psi.grid().len(), potential.len()));
    }
    if !mass.is_finite() || mass <= 0.0 {
        return Err(Error::InvalidInput(format!("mass must be positive, got {mass}")));
    }
    if let Some(bad) = potential.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("potential value {bad} is not finite")));
    }
    let polar = polar_decompose(psi)?;
    let dx = psi.grid().dx();
    let hbar = psi.grid().hbar();
    let momentum = momentum_optimal_estimate(psi)?;
    let mut out = vec![0.0; psi.grid().len()];
    for (start, end) in polar.components() {
        if end - start < 4 {
            continue;
        }
        let curvature = second_derivative(&polar.amplitude[start..end], dx);
        for j in start..end {
            let quantum_potential =
                -hbar * hbar * curvature[j - start] / (2.0 * mass * polar.amplitude[j]);
            out[j] =
                momentum[j] * momentum[j] / (2.0 * mass) + potential[j] + quantum_potential;
        }
    }
    Ok(out)
}

/// Normalized complex amplitudes on a 2-D grid, stored row-major with the
/// first coordinate as the row index.
#[derive(Debug, Clone)]
pub struct GridWavefunction2D {
    grid1: Grid1D,
    grid2: Grid1D,
    amps: Vec<C64>,
}

impl GridWavefunction2D {
    pub fn new(grid1: Grid1D, grid2: Grid1D, mut amps: Vec<C64>) -> Result<Self> {
        if grid1.hbar() != grid2.hbar() {
            return Err(Error::InvalidInput("grids disagree on hbar".into()));
        }
        if amps.len() != grid1.len() * grid2.len() {
            return Err(Error::DimensionMismatch(grid1.len() * grid2.len(), amps.len()));
        }
        let cell = grid1.dx() * grid2.dx();
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>() * cell;
        if !norm_sq.is_finite() || norm_sq <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "wavefunction norm² = {norm_sq} cannot be normalized"
            )));
        }
        let scale = norm_sq.sqrt().recip();
        for z in &mut amps {
            *z *= scale;
        }
        Ok(Self { grid1, grid2, amps })
    }

    pub fn from_fn(grid1: Grid1D, grid2: Grid1D, f: impl Fn(f64, f64) -> C64) -> Result<Self> {
        let mut amps = Vec::with_capacity(grid1.len() * grid2.len());
        for i in 0..grid1.len() {
            for j in 0..grid2.len() {
                amps.push(f(grid1.point(i), grid2.point(j)));
            }
        }
        Self::new(grid1, grid2, amps)
    }

    pub fn grid1(&self) -> &Grid1D {
        &self.grid1
    }

    pub fn grid2(&self) -> &Grid1D {
        &self.grid2
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, i: usize, j: usize) -> C64 {
        self.amps[i * self.grid2.len() + j]
    }

    /// Joint density |ψ_ij|² (no cell weights applied).
    pub fn density(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn transpose(&self) -> Self {
        let (n1, n2) = (self.grid1.len(), self.grid2.len());
        let mut amps = vec![C64::ZERO; n1 * n2];
        for i in 0..n1 {
            for j in 0..n2 {
                amps[j * n1 + i] = self.amps[i * n2 + j];
            }
        }
        Self {
            grid1: self.grid2,
            grid2: self.grid1,
            amps,
        }
    }

    fn boundary_ratio_axis0(&self) -> f64 {
        let (n1, n2) = (self.grid1.len(), self.grid2.len());
        let peak = self.amps.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut edge = 0.0f64;
        for j in 0..n2 {
            edge = edge.max(self.amps[j].norm());
            edge = edge.max(self.amps[(n1 - 1) * n2 + j].norm());
        }
        edge / peak
    }
}

/// Fourier transform along the first coordinate: ψ(x, x′) → ψ̃(p, x′). The
/// amplitude must have decayed at the transform-axis boundary, otherwise the
/// periodic wraparound aliases the spectrum.
pub fn epr_momentum_transform(psi: &GridWavefunction2D) -> Result<GridWavefunction2D> {
    fourier_axis0(psi, false)
}

/// Inverse of [`epr_momentum_transform`].
pub fn epr_position_transform(psi: &GridWavefunction2D) -> Result<GridWavefunction2D> {
    fourier_axis0(psi, true)
}

fn fourier_axis0(psi: &GridWavefunction2D, inverse: bool) -> Result<GridWavefunction2D> {
    let ratio = psi.boundary_ratio_axis0();
    if ratio > tol::BOUNDARY_DECAY {
        return Err(Error::Aliasing(ratio, tol::BOUNDARY_DECAY));
    }
    let (n1, n2) = (psi.grid1.len(), psi.grid2.len());
    let mut out = vec![C64::ZERO; n1 * n2];
    let mut column = vec![C64::ZERO; n1];
    for j in 0..n2 {
        for (i, slot) in column.iter_mut().enumerate() {
            *slot = psi.amps[i * n2 + j];
        }
        let transformed = fourier_line(&column, &psi.grid1, inverse);
        for i in 0..n1 {
            out[i * n2 + j] = transformed[i];
        }
    }
    let target = psi.grid1.momentum_grid();
    let cell = target.dx() * psi.grid2.dx();
    let norm_sq: f64 = out.iter().map(|z| z.norm_sqr()).sum::<f64>() * cell;
    assert!(
        (norm_sq - 1.0).abs() <= tol::GRID_NORM,
        "transform failed to preserve the norm: {norm_sq}"
    );
    GridWavefunction2D::new(target, psi.grid2, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn gaussian(n: usize, extent: f64, sigma: f64, k: f64) -> GridWavefunction {
        let grid = Grid1D::centered(n, extent, 1.0).unwrap();
        GridWavefunction::from_fn(grid, |x| {
            C64::from_polar((-x * x / (4.0 * sigma * sigma)).exp(), k * x)
        })
        .unwrap()
    }

    #[test]
    fn polar_plane_wave_has_linear_action() {
        let grid = Grid1D::centered(64, 4.0, 1.0).unwrap();
        let k = 2.0;
        let psi = GridWavefunction::from_fn(grid, |x| C64::from_polar(1.0, k * x)).unwrap();
        let polar = polar_decompose(&psi).unwrap();
        assert_eq!(polar.components(), vec![(0, 64)]);
        // S(x) − S(x0) = ħk(x − x0) after unwrapping
        let s0 = polar.action[0];
        for j in 0..64 {
            let expected = s0 + k * (grid.point(j) - grid.point(0));
            assert!((polar.action[j] - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn polar_real_gaussian_has_constant_action() {
        let psi = gaussian(512, 10.0, 1.0, 0.0);
        let polar = polar_decompose(&psi).unwrap();
        for (j, &s) in polar.action.iter().enumerate() {
            if polar.support[j] {
                assert!(s.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn polar_reconstructs_on_support() {
        let psi = gaussian(512, 10.0, 1.2, 1.7);
        let polar = polar_decompose(&psi).unwrap();
        for j in 0..512 {
            if polar.support[j] {
                let rebuilt = C64::from_polar(polar.amplitude[j], polar.action[j]);
                let rel = (rebuilt - psi.amplitudes()[j]).norm() / psi.amplitudes()[j].norm();
                assert!(rel < 1e-8, "point {j}: relative error {rel}");
            }
        }
    }

    #[test]
    fn momentum_estimate_plane_wave() {
        let grid = Grid1D::centered(64, 4.0, 1.0).unwrap();
        let k = 2.0;
        let psi = GridWavefunction::from_fn(grid, |x| C64::from_polar(1.0, k * x)).unwrap();
        let p = momentum_optimal_estimate(&psi).unwrap();
        for v in p {
            assert!((v - k).abs() < 1e-9); // ħ = 1
        }
    }

    #[test]
    fn momentum_estimate_real_state_vanishes() {
        let psi = gaussian(512, 10.0, 1.0, 0.0);
        let p = momentum_optimal_estimate(&psi).unwrap();
        for v in p {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn momentum_estimate_chirp_is_linear() {
        // S = b·x²/2 gives the estimate b·x, exactly for central differences.
        let grid = Grid1D::centered(1024, 10.0, 1.0).unwrap();
        let b = 0.8;
        let psi = GridWavefunction::from_fn(grid, |x| {
            C64::from_polar((-x * x / 4.0).exp(), b * x * x / 2.0)
        })
        .unwrap();
        let p = momentum_optimal_estimate(&psi).unwrap();
        let polar = polar_decompose(&psi).unwrap();
        let (start, end) = polar.components()[0];
        for (j, &estimate) in p.iter().enumerate().take(end - 1).skip(start + 1) {
            assert!(
                (estimate - b * grid.point(j)).abs() < 1e-9,
                "at x={} estimate {} vs {}",
                grid.point(j),
                estimate,
                b * grid.point(j)
            );
        }
    }

    #[test]
    fn momentum_estimate_ignores_global_phase() {
        let psi = gaussian(512, 10.0, 1.0, 1.3);
        let grid = *psi.grid();
        let rotated: Vec<C64> = psi
            .amplitudes()
            .iter()
            .map(|z| z * C64::from_polar(1.0, 2.1))
            .collect();
        let psi2 = GridWavefunction::new(grid, rotated).unwrap();
        let p1 = momentum_optimal_estimate(&psi).unwrap();
        let p2 = momentum_optimal_estimate(&psi2).unwrap();
        for (a, b) in p1.iter().zip(&p2) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn fisher_length_gaussian() {
        for sigma in [0.5, 1.0, 2.0] {
            let psi = gaussian(1024, 12.0 * sigma, sigma, 0.0);
            let dx_len = fisher_length(&psi).unwrap();
            assert!(
                (dx_len - sigma).abs() < 1e-6,
                "sigma {sigma}: fisher length {dx_len}"
            );
        }
    }

    #[test]
    fn fisher_length_scales_with_coordinates() {
        let a = 2.5;
        let psi = gaussian(1024, 12.0, 1.0, 0.0);
        let scaled_grid = Grid1D::centered(1024, 12.0 * a, 1.0).unwrap();
        let scaled = GridWavefunction::from_fn(scaled_grid, |x| {
            c((-x * x / (4.0 * a * a)).exp(), 0.0)
        })
        .unwrap();
        let r = fisher_length(&scaled).unwrap() / fisher_length(&psi).unwrap();
        assert!((r - a).abs() < 1e-6 * a);
    }

    #[test]
    fn fisher_rejects_flat_density() {
        let grid = Grid1D::centered(64, 4.0, 1.0).unwrap();
        let psi = GridWavefunction::from_fn(grid, |_| C64::ONE).unwrap();
        assert!(matches!(
            fisher_length(&psi),
            Err(Error::DegenerateDensity(_))
        ));
    }

    #[test]
    fn momentum_representation_roundtrip_and_shift() {
        let psi = gaussian(512, 12.0, 1.0, 0.0);
        let shifted = gaussian(512, 12.0, 1.0, 1.5); // e^{ikx} factor, ħ=1
        let tilde0 = momentum_representation(&psi).unwrap();
        let tilde1 = momentum_representation(&shifted).unwrap();
        // shift theorem: the spectrum moves by k, i.e. peak positions differ by 1.5
        let peak = |w: &GridWavefunction| {
            let k = w
                .amplitudes()
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                .unwrap()
                .0;
            w.grid().point(k)
        };
        let dp = tilde0.grid().dx();
        assert!((peak(&tilde1) - peak(&tilde0) - 1.5).abs() <= dp);

        // norm preserved
        let total: f64 = tilde0.amplitudes().iter().map(|z| z.norm_sqr()).sum::<f64>() * dp;
        assert!((total - 1.0).abs() < 1e-12);

        // moments of the shifted state move accordingly
        let (m1, _) = momentum_moments(&shifted).unwrap();
        assert!((m1 - 1.5).abs() < 1e-9);
    }

    #[test]
    fn momentum_representation_gaussian_width_reciprocal() {
        let sigma = 0.7;
        let psi = gaussian(1024, 14.0, sigma, 0.0);
        let (m1, m2) = momentum_moments(&psi).unwrap();
        let var = m2 - m1 * m1;
        // minimum-uncertainty state: Var(P) = ħ²/(4σ²)
        assert!((var - 1.0 / (4.0 * sigma * sigma)).abs() < 1e-9);
    }

    #[test]
    fn transform_rejects_undecayed_boundary() {
        let grid = Grid1D::centered(64, 4.0, 1.0).unwrap();
        let psi = GridWavefunction::from_fn(grid, |x| c((-x * x / 16.0).exp(), 0.0)).unwrap();
        assert!(matches!(
            momentum_representation(&psi),
            Err(Error::Aliasing(_, _))
        ));
    }

    #[test]
    fn exact_uncertainty_gaussian_and_mixture() {
        let psi = gaussian(1024, 12.0, 1.0, 0.0);
        let check = exact_uncertainty_check(&psi).unwrap();
        assert!(check.residual < 1e-6, "residual {}", check.residual);

        // a phase factor changes nothing
        let psi_k = gaussian(1024, 12.0, 1.0, 1.3);
        let check_k = exact_uncertainty_check(&psi_k).unwrap();
        assert!(check_k.residual < 1e-6);

        // two-bump state
        let grid = Grid1D::centered(1024, 12.0, 1.0).unwrap();
        let two_bump = GridWavefunction::from_fn(grid, |x| {
            c(
                (-(x - 2.0) * (x - 2.0) / 4.0).exp() + (-(x + 2.0) * (x + 2.0) / 4.0).exp(),
                0.0,
            )
        })
        .unwrap();
        let check2 = exact_uncertainty_check(&two_bump).unwrap();
        assert!(check2.residual < 1e-4, "residual {}", check2.residual);
    }

    #[test]
    fn optimal_momentum_estimate_is_unbiased() {
        // ⟨∇S⟩ under p(x) equals the momentum-space first moment
        let grid = Grid1D::centered(1024, 12.0, 1.0).unwrap();
        let psi = GridWavefunction::from_fn(grid, |x| {
            C64::from_polar(
                (-x * x / 4.0).exp(),
                0.9 * x + 0.3 * (0.7 * x).sin(),
            )
        })
        .unwrap();
        let est = momentum_optimal_estimate(&psi).unwrap();
        let density = psi.density();
        let mean_est: f64 = est
            .iter()
            .zip(&density)
            .map(|(e, p)| e * p * grid.dx())
            .sum();
        let (m1, _) = momentum_moments(&psi).unwrap();
        assert!((mean_est - m1).abs() < 1e-5, "{mean_est} vs {m1}");
    }

    #[test]
    fn energy_estimate_harmonic_ground_state() {
        let grid = Grid1D::centered(2048, 10.0, 1.0).unwrap();
        let psi = GridWavefunction::from_fn(grid, |x| c((-x * x / 2.0).exp(), 0.0)).unwrap();
        let potential: Vec<f64> = grid.points().iter().map(|x| 0.5 * x * x).collect();
        let energy = energy_optimal_estimate(&psi, &potential, 1.0).unwrap();
        let density = psi.density();
        let peak = density.iter().copied().fold(0.0, f64::max);
        for (j, &e) in energy.iter().enumerate() {
            if density[j] >= 1e-3 * peak {
                assert!((e - 0.5).abs() < 1e-4, "x={} E={}", grid.point(j), e);
            }
        }
    }

    #[test]
    fn energy_estimate_plane_wave() {
        let grid = Grid1D::centered(64, 4.0, 1.0).unwrap();
        let k = 1.5;
        let psi = GridWavefunction::from_fn(grid, |x| C64::from_polar(1.0, k * x)).unwrap();
        let zero_potential = vec![0.0; 64];
        let mass = 2.0;
        let energy = energy_optimal_estimate(&psi, &zero_potential, mass).unwrap();
        for &e in &energy {
            assert!((e - k * k / (2.0 * mass)).abs() < 1e-9);
        }
    }

    #[test]
    fn energy_estimate_mean_matches_hamiltonian() {
        // random-ish smooth node-free states: R = gaussian·(1 + bumps), S smooth
        let grid = Grid1D::centered(2048, 14.0, 1.0).unwrap();
        let cases = [(0.25, 0.9, 0.4), (0.4, 0.5, 1.1), (0.1, 1.3, 0.7)];
        for (eps, freq, slope) in cases {
            let psi = GridWavefunction::from_fn(grid, |x| {
                let amp = (-x * x / 6.0).exp() * (1.0 + eps * (freq * x).cos());
                C64::from_polar(amp, slope * x + 0.2 * (freq * x).sin())
            })
            .unwrap();
            let potential: Vec<f64> = grid.points().iter().map(|x| 0.3 * x * x).collect();
            let mass = 1.4;
            let energy = energy_optimal_estimate(&psi, &potential, mass).unwrap();
            let density = psi.density();
            let mean_energy: f64 = energy
                .iter()
                .zip(&density)
                .map(|(e, p)| e * p * grid.dx())
                .sum();
            // Hamiltonian expectation via momentum moments + potential average
            let (_, p_sq) = momentum_moments(&psi).unwrap();
            let v_mean: f64 = potential
                .iter()
                .zip(&density)
                .map(|(v, p)| v * p * grid.dx())
                .sum();
            let h_mean = p_sq / (2.0 * mass) + v_mean;
            assert!(
                (mean_energy - h_mean).abs() < 1e-4,
                "⟨E⟩ {mean_energy} vs ⟨H⟩ {h_mean}"
            );
        }
    }

    #[test]
    fn two_mode_transform_norm_and_parity() {
        let g = Grid1D::centered(64, 8.0, 1.0).unwrap();
        let psi = GridWavefunction2D::from_fn(g, g, |x, y| {
            C64::from_polar(
                (-(x * x) / 2.0 - (y - 0.5) * (y - 0.5) / 3.0).exp(),
                0.4 * x,
            )
        })
        .unwrap();
        let tilde = epr_momentum_transform(&psi).unwrap();
        let cell = tilde.grid1().dx() * tilde.grid2().dx();
        let total: f64 = tilde.amplitudes().iter().map(|z| z.norm_sqr()).sum::<f64>() * cell;
        assert!((total - 1.0).abs() < 1e-8);

        // round trip back to position
        let back = epr_position_transform(&tilde).unwrap();
        for (a, b) in back.amplitudes().iter().zip(psi.amplitudes()) {
            assert!((a - b).norm() < 1e-8);
        }

        // applied twice: parity flip along the first axis (centered grid)
        let twice = epr_momentum_transform(&tilde).unwrap();
        let n1 = psi.grid1().len();
        let mut max_err = 0.0f64;
        for i in 1..n1 {
            for j in 0..psi.grid2().len() {
                max_err = max_err.max((twice.amplitude(i, j) - psi.amplitude(n1 - i, j)).norm());
            }
        }
        assert!(max_err < 1e-8, "parity error {max_err}");
    }

    #[test]
    fn two_mode_product_gaussian_reciprocal_widths() {
        let g = Grid1D::centered(128, 10.0, 1.0).unwrap();
        let s1 = 0.8;
        let psi = GridWavefunction2D::from_fn(g, g, |x, y| {
            c(
                (-x * x / (4.0 * s1 * s1) - y * y / 4.0).exp(),
                0.0,
            )
        })
        .unwrap();
        let tilde = epr_momentum_transform(&psi).unwrap();
        // in p the first factor has density std ħ/(2 s1)
        let dp = tilde.grid1().dx();
        let dy = tilde.grid2().dx();
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for i in 0..tilde.grid1().len() {
            let p = tilde.grid1().point(i);
            for j in 0..tilde.grid2().len() {
                let w = tilde.amplitude(i, j).norm_sqr() * dp * dy;
                m1 += p * w;
                m2 += p * p * w;
            }
        }
        let var = m2 - m1 * m1;
        assert!((var - 1.0 / (4.0 * s1 * s1)).abs() < 1e-9, "var {var}");
    }

    #[test]
    fn grid_validation() {
        assert!(Grid1D::new(4, 0.0, 0.1, 1.0).is_err());
        assert!(Grid1D::new(16, 0.0, -0.1, 1.0).is_err());
        assert!(Grid1D::new(16, 0.0, 0.1, 0.0).is_err());
        let grid = Grid1D::centered(16, 1.0, 1.0).unwrap();
        assert!(GridWavefunction::new(grid, vec![C64::ZERO; 16]).is_err());
    }
}
