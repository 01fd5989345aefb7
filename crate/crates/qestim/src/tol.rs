//! Numerical tolerances, collected in one place so every validation threshold
//! has a single authoritative value.

/// Max allowed |X - X†| entry for a matrix accepted as Hermitian.
pub const HERMITICITY: f64 = 1e-12;

/// Max allowed |Σ_m M_m - I| entry for a complete measurement.
pub const COMPLETENESS: f64 = 1e-10;

/// Eigenvalues of nominally positive operators may round this far below zero.
pub const POSITIVITY: f64 = 1e-10;

/// Max allowed |tr ρ - 1| for a density operator.
pub const TRACE: f64 = 1e-10;

/// Max allowed deviation from pairwise orthonormality in a basis.
pub const ORTHONORMALITY: f64 = 1e-10;

/// Imaginary (or real, for anti-Hermitian traces) parts of quantities that
/// must vanish for Hermitian inputs are asserted below this.
pub const REALITY: f64 = 1e-10;

/// Outcomes with probability at or below this are unreachable on the given
/// state; the optimal-estimate formula is 0/0 there.
pub const DEAD_OUTCOME: f64 = 1e-12;

/// Slack allowed on the exact algebraic identities of the estimation engine
/// (optimal noise = lower bound, spread/noise partition of the variance) and
/// on the joint uncertainty relation.
pub const ENGINE_IDENTITY: f64 = 1e-9;

/// Estimators whose means match the observable to this defect count as unbiased.
pub const UNBIASEDNESS: f64 = 1e-9;

/// Wavefunction norm deviation allowed after construction.
pub const GRID_NORM: f64 = 1e-8;

/// Grid points with amplitude below this fraction of the peak are outside the
/// support: the phase (and hence the momentum estimate) is unusable there.
pub const SUPPORT_REL: f64 = 1e-8;

/// Fourier transforms require boundary amplitudes below this fraction of the
/// peak, otherwise the periodic wraparound contaminates the spectrum.
pub const BOUNDARY_DECAY: f64 = 1e-6;

/// Truncated-state norm must be within this of 1 for Fock-space scenarios.
pub const TRUNCATION_NORM: f64 = 1e-8;

/// Fock occupancies above this define the occupied block on which the
/// discretized coherent-state measurement must resolve the identity.
pub const OCCUPIED_BLOCK: f64 = 1e-10;

/// Allowed |T - I| on the occupied block before renormalizing a truncated
/// phase-space measurement (T = Σ_α M_α).
pub const BLOCK_COMPLETENESS: f64 = 1e-3;
