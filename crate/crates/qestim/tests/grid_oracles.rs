//! Independent oracles for the grid quantities: the Fisher length of a
//! two-Gaussian mixture against adaptive quadrature on the analytic density,
//! and convergence of the momentum-noise routes.

use qestim::grid::{exact_uncertainty_check, fisher_length, Grid1D, GridWavefunction};
use qestim::C64;

const SIGMA: f64 = 1.0;
const CENTER: f64 = 2.0; // bumps at ±2σ, i.e. separation 4σ

fn amplitude(x: f64) -> f64 {
    (-(x - CENTER) * (x - CENTER) / (4.0 * SIGMA * SIGMA)).exp()
        + (-(x + CENTER) * (x + CENTER) / (4.0 * SIGMA * SIGMA)).exp()
}

fn amplitude_prime(x: f64) -> f64 {
    let left = (-(x + CENTER) * (x + CENTER) / (4.0 * SIGMA * SIGMA)).exp();
    let right = (-(x - CENTER) * (x - CENTER) / (4.0 * SIGMA * SIGMA)).exp();
    -(x - CENTER) / (2.0 * SIGMA * SIGMA) * right - (x + CENTER) / (2.0 * SIGMA * SIGMA) * left
}

/// Adaptive Simpson quadrature over unit panels, so symmetric structure
/// between the endpoints cannot fool the refinement test.
fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn refine(f: &impl Fn(f64) -> f64, a: f64, b: f64, eps: f64, depth: u32) -> f64 {
        let mid = 0.5 * (a + b);
        let whole = simpson(f, a, b);
        let halves = simpson(f, a, mid) + simpson(f, mid, b);
        if depth == 0 || (whole - halves).abs() < 15.0 * eps {
            halves + (halves - whole) / 15.0
        } else {
            refine(f, a, mid, eps / 2.0, depth - 1) + refine(f, mid, b, eps / 2.0, depth - 1)
        }
    }
    let panels = (b - a).ceil() as usize;
    let width = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let left = a + k as f64 * width;
            refine(f, left, left + width, eps / panels as f64, 30)
        })
        .sum()
}

#[test]
fn two_bump_fisher_length_matches_quadrature() {
    // normalization and Fisher information of p = amplitude² analytically
    // integrated to quadrature accuracy
    let norm = adaptive_simpson(&|x| amplitude(x) * amplitude(x), -25.0, 25.0, 1e-13);
    let fisher_integrand = |x: f64| {
        let p = amplitude(x) * amplitude(x) / norm;
        let dp = 2.0 * amplitude(x) * amplitude_prime(x) / norm;
        dp * dp / p
    };
    let fisher_exact = adaptive_simpson(&fisher_integrand, -25.0, 25.0, 1e-13);
    let length_exact = fisher_exact.sqrt().recip();

    let grid = Grid1D::centered(1024, 12.0, 1.0).unwrap();
    let psi = GridWavefunction::from_fn(grid, |x| C64::new(amplitude(x), 0.0)).unwrap();
    let length_grid = fisher_length(&psi).unwrap();

    assert!(
        (length_grid - length_exact).abs() < 1e-4,
        "grid {length_grid} vs quadrature {length_exact}"
    );
    // and the quadrature value itself is pinned
    assert!((length_exact - 1.382518601579).abs() < 1e-9, "{length_exact}");
}

#[test]
fn gaussian_fisher_length_is_sigma_analytically() {
    for sigma in [0.6, 1.0, 1.7] {
        let grid = Grid1D::centered(2048, 14.0 * sigma, 1.0).unwrap();
        let psi =
            GridWavefunction::from_fn(grid, |x| C64::new((-x * x / (4.0 * sigma * sigma)).exp(), 0.0))
                .unwrap();
        let len = fisher_length(&psi).unwrap();
        assert!((len - sigma).abs() < 1e-7 * sigma.max(1.0), "sigma {sigma}: {len}");
    }
}

#[test]
fn momentum_noise_routes_converge_quadratically_on_the_two_bump() {
    let gaps: Vec<f64> = [512usize, 1024, 2048]
        .iter()
        .map(|&n| {
            let grid = Grid1D::centered(n, 12.0, 1.0).unwrap();
            let psi = GridWavefunction::from_fn(grid, |x| C64::new(amplitude(x), 0.0)).unwrap();
            let check = exact_uncertainty_check(&psi).unwrap();
            (check.noise_sq_cross - check.noise_sq_fisher).abs()
        })
        .collect();
    // each halving of dx should cut the route gap by roughly 4; allow slack
    // for the higher-order tail
    for pair in gaps.windows(2) {
        let order = (pair[0] / pair[1]).log2();
        assert!(order > 1.5, "gap sequence {gaps:?} has order {order}");
    }
}
