//! Validated quantum objects: observables, states, and measurements, plus the
//! moment primitives (expectation, variance, commutator mean) built on them.
//!
//! Pure states are stored as rank-1 density operators; there is no separate
//! state-vector path. Constructors symmetrize their input as (X + X†)/2
//! before validating, so anti-Hermitian rounding noise never leaks into the
//! stored operator.

use crate::error::{Error, Result};
use crate::linalg::{c64, inner, vec_norm, ComplexMatrix, C64};
use crate::tol;

/// A d×d Hermitian observable.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(matrix.rows(), matrix.cols()));
        }
        let dev = matrix.herm_deviation();
        if dev > tol::HERMITICITY {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self {
            dim: matrix.rows(),
            matrix: matrix.hermitize(),
        })
    }

    pub fn from_rows(dim: usize, entries: Vec<C64>) -> Result<Self> {
        Self::new(ComplexMatrix::new(dim, dim, entries)?)
    }

    /// Real diagonal observable in the computational basis.
    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self {
            dim: n,
            matrix: ComplexMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    c64(values[i], 0.0)
                } else {
                    C64::ZERO
                }
            }),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn pauli_x() -> Self {
        Self::from_rows(2, vec![C64::ZERO, C64::ONE, C64::ONE, C64::ZERO]).unwrap()
    }

    pub fn pauli_y() -> Self {
        Self::from_rows(2, vec![C64::ZERO, c64(0.0, -1.0), c64(0.0, 1.0), C64::ZERO]).unwrap()
    }

    pub fn pauli_z() -> Self {
        Self::diagonal(&[1.0, -1.0])
    }

    /// A + c·I.
    pub fn shifted(&self, c: f64) -> Self {
        let mut m = self.matrix.clone();
        for i in 0..self.dim {
            m[(i, i)] += c64(c, 0.0);
        }
        Self { dim: self.dim, matrix: m }
    }

    /// α·A + β·B.
    pub fn linear_combination(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let m = &self.matrix.scale(c64(alpha, 0.0)) + &other.matrix.scale(c64(beta, 0.0));
        Ok(Self { dim: self.dim, matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// A d×d density operator: Hermitian, positive semi-definite, unit trace.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(matrix.rows(), matrix.cols()));
        }
        let dev = matrix.herm_deviation();
        if dev > tol::HERMITICITY {
            return Err(Error::NotHermitian(dev));
        }
        let matrix = matrix.hermitize();
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > tol::TRACE {
            return Err(Error::InvalidTrace(trace));
        }
        let min_ev = matrix.min_eigenvalue()?;
        if min_ev < -tol::POSITIVITY {
            return Err(Error::NotPositive(min_ev));
        }
        Ok(Self {
            dim: matrix.rows(),
            matrix,
        })
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::identity(dim).scale(c64(1.0 / dim as f64, 0.0)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix.hermitian_eigen().expect("stored matrix is Hermitian").0
    }
}

/// Normalized |ψ⟩⟨ψ| from an arbitrary nonzero amplitude vector.
pub fn make_pure_state(amplitudes: &[C64]) -> Result<DensityOperator> {
    let norm = vec_norm(amplitudes);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::InvalidInput(
            "pure state requires a nonzero finite amplitude vector".into(),
        ));
    }
    let normalized: Vec<C64> = amplitudes.iter().map(|z| z / norm).collect();
    Ok(DensityOperator {
        dim: amplitudes.len(),
        matrix: ComplexMatrix::outer(&normalized),
    })
}

/// A probability operator measure: outcome-labeled positive operators that
/// sum to the identity.
#[derive(Debug, Clone)]
pub struct ProbOperatorMeasure {
    dim: usize,
    outcomes: Vec<(String, ComplexMatrix)>,
}

impl ProbOperatorMeasure {
    pub fn new(outcomes: Vec<(String, ComplexMatrix)>) -> Result<Self> {
        Self::with_completeness_tol(outcomes, tol::COMPLETENESS)
    }

    /// Like [`Self::new`] with an explicit completeness tolerance, for
    /// measurements assembled from truncated or discretized families.
    pub fn with_completeness_tol(
        outcomes: Vec<(String, ComplexMatrix)>,
        completeness_tol: f64,
    ) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::InvalidInput("measurement needs at least one outcome".into()));
        }
        let dim = outcomes[0].1.rows();
        let mut hermitized = Vec::with_capacity(outcomes.len());
        for (label, op) in outcomes {
            if !op.is_square() || op.rows() != dim {
                return Err(Error::DimensionMismatch(dim, op.rows().max(op.cols())));
            }
            let dev = op.herm_deviation();
            if dev > tol::HERMITICITY {
                return Err(Error::NotHermitian(dev));
            }
            let op = op.hermitize();
            let min_ev = op.min_eigenvalue()?;
            if min_ev < -tol::POSITIVITY {
                return Err(Error::NotPositive(min_ev));
            }
            hermitized.push((label, op));
        }
        Self::check_completeness(dim, &hermitized, completeness_tol)?;
        Ok(Self {
            dim,
            outcomes: hermitized,
        })
    }

    /// Measurement of weighted rank-1 elements w_m |v_m⟩⟨v_m|. Positivity
    /// holds by construction, so only completeness needs checking; this keeps
    /// large discretized measurements (thousands of outcomes) cheap to build.
    pub fn from_rank_one(
        labeled_vectors: Vec<(String, Vec<C64>)>,
        weights: &[f64],
        completeness_tol: f64,
    ) -> Result<Self> {
        if labeled_vectors.is_empty() || labeled_vectors.len() != weights.len() {
            return Err(Error::InvalidInput(
                "rank-1 measurement needs matching nonempty vector and weight lists".into(),
            ));
        }
        if let Some(&w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::NotPositive(w));
        }
        let dim = labeled_vectors[0].1.len();
        let mut outcomes = Vec::with_capacity(labeled_vectors.len());
        for ((label, v), &w) in labeled_vectors.into_iter().zip(weights) {
            if v.len() != dim {
                return Err(Error::DimensionMismatch(dim, v.len()));
            }
            outcomes.push((label, ComplexMatrix::outer(&v).scale(c64(w, 0.0))));
        }
        Self::check_completeness(dim, &outcomes, completeness_tol)?;
        Ok(Self { dim, outcomes })
    }

    fn check_completeness(
        dim: usize,
        outcomes: &[(String, ComplexMatrix)],
        completeness_tol: f64,
    ) -> Result<()> {
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (_, op) in outcomes {
            sum = &sum + op;
        }
        let dev = (&sum - &ComplexMatrix::identity(dim)).max_abs();
        if dev > completeness_tol {
            return Err(Error::Incomplete(dev));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcomes(&self) -> &[(String, ComplexMatrix)] {
        &self.outcomes
    }

    pub fn label(&self, m: usize) -> &str {
        &self.outcomes[m].0
    }

    pub fn element(&self, m: usize) -> &ComplexMatrix {
        &self.outcomes[m].1
    }
}

/// Rank-1 projective measurement from an orthonormal basis.
pub fn projective_pom(basis: &[Vec<C64>]) -> Result<ProbOperatorMeasure> {
    let d = basis.len();
    if d == 0 {
        return Err(Error::InvalidInput("empty basis".into()));
    }
    for v in basis {
        if v.len() != d {
            return Err(Error::DimensionMismatch(d, v.len()));
        }
    }
    for i in 0..d {
        for j in i..d {
            let expected = if i == j { C64::ONE } else { C64::ZERO };
            let dev = (inner(&basis[i], &basis[j]) - expected).norm();
            if dev > tol::ORTHONORMALITY {
                return Err(Error::InvalidInput(format!(
                    "basis vectors {i} and {j} are not orthonormal (deviation {dev:.3e})"
                )));
            }
        }
    }
    let labeled = basis
        .iter()
        .enumerate()
        .map(|(m, v)| (m.to_string(), v.clone()))
        .collect();
    ProbOperatorMeasure::from_rank_one(labeled, &vec![1.0; d], tol::COMPLETENESS)
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(a, b));
    }
    Ok(())
}

/// ⟨A⟩ = Re tr[ρA]. The imaginary part must vanish for Hermitian inputs.
pub fn expectation(rho: &DensityOperator, a: &HermitianOperator) -> Result<f64> {
    check_dims(rho.dim(), a.dim())?;
    let t = rho.matrix().trace_product(a.matrix());
    assert!(
        t.im.abs() <= tol::REALITY,
        "tr[ρA] acquired an imaginary part {:.3e}",
        t.im
    );
    Ok(t.re)
}

/// (ΔA)² = ⟨A²⟩ - ⟨A⟩², clamped to ≥ 0.
pub fn variance(rho: &DensityOperator, a: &HermitianOperator) -> Result<f64> {
    check_dims(rho.dim(), a.dim())?;
    let a_sq = a.matrix().matmul(a.matrix());
    let m2 = rho.matrix().trace_product(&a_sq).re;
    let m1 = expectation(rho, a)?;
    let var = m2 - m1 * m1;
    assert!(var >= -tol::POSITIVITY, "variance rounded below zero: {var:.3e}");
    Ok(var.max(0.0))
}

/// ½|⟨[A,B]⟩| — the right side of the joint uncertainty relation.
pub fn commutator_bound(
    rho: &DensityOperator,
    a: &HermitianOperator,
    b: &HermitianOperator,
) -> Result<f64> {
    check_dims(rho.dim(), a.dim())?;
    check_dims(rho.dim(), b.dim())?;
    let comm = &a.matrix().matmul(b.matrix()) - &b.matrix().matmul(a.matrix());
    Ok(0.5 * rho.matrix().trace_product(&comm).norm())
}
