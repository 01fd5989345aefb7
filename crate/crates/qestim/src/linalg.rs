//! Dense complex matrices with the handful of operations the estimation
//! engine needs. Hermitian eigenproblems are delegated to `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Inner product ⟨a|b⟩ = Σ a*_i b_i.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Outer product |v⟩⟨v|.
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// (X + X†)/2, absorbing anti-Hermitian rounding noise.
    pub fn hermitize(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    /// Max |X_ij - (X†)_ij| over all entries.
    pub fn herm_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Max-entry norm ‖X‖_max.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Apply the matrix to a vector.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "apply shape mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// tr(self · other) as the double sum Σ_ij self_ij other_ji, without
    /// forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        assert_eq!(self.cols, other.rows, "trace_product shape mismatch");
        assert_eq!(self.rows, other.cols, "trace_product shape mismatch");
        let mut t = C64::ZERO;
        for i in 0..self.rows {
            for j in 0..self.cols {
                t += self[(i, j)] * other[(j, i)];
            }
        }
        t
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)])
    }

    /// Eigendecomposition of a Hermitian matrix: eigenvalues ascending with
    /// matching orthonormal eigenvector columns.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        let dev = self.herm_deviation();
        if !self.is_square() || dev > 1e-9 {
            return Err(Error::NotHermitian(dev));
        }
        let se = self.hermitize().to_nalgebra().symmetric_eigen();
        let n = self.rows;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
        let values = order.iter().map(|&k| se.eigenvalues[k]).collect();
        let vectors = ComplexMatrix::from_fn(n, n, |i, j| se.eigenvectors[(i, order[j])]);
        Ok((values, vectors))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let (values, _) = self.hermitian_eigen()?;
        Ok(values[0])
    }

    /// U f(Λ) U† for a Hermitian matrix with eigendecomposition U Λ U†.
    pub fn hermitian_map(&self, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
        let (values, vectors) = self.hermitian_eigen()?;
        let n = self.rows;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            let fv = f(values[k]);
            if fv == 0.0 {
                continue;
            }
            for i in 0..n {
                let uik = vectors[(i, k)] * fv;
                for j in 0..n {
                    out[(i, j)] += uik * vectors[(j, k)].conj();
                }
            }
        }
        Ok(out)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, other: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_recovers_known_spectrum() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = ComplexMatrix::new(
            2,
            2,
            vec![c64(2.0, 0.0), c64(0.0, 1.0), c64(0.0, -1.0), c64(2.0, 0.0)],
        )
        .unwrap();
        let (values, vectors) = m.hermitian_eigen().unwrap();
        assert!((values[0] - 1.0).abs() < 1e-12);
        assert!((values[1] - 3.0).abs() < 1e-12);
        // U Λ U† reconstructs the input
        let lambda = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                c64(values[i], 0.0)
            } else {
                C64::ZERO
            }
        });
        let recon = &(&vectors * &lambda) * &vectors.adjoint();
        assert!((&recon - &m).max_abs() < 1e-12);
    }

    #[test]
    fn hermitian_map_inverse_sqrt() {
        let m = ComplexMatrix::new(
            2,
            2,
            vec![c64(2.0, 0.0), c64(0.5, 0.2), c64(0.5, -0.2), c64(1.0, 0.0)],
        )
        .unwrap();
        let inv_sqrt = m.hermitian_map(|x| x.powf(-0.5)).unwrap();
        let should_be_identity = &(&inv_sqrt * &m) * &inv_sqrt;
        assert!((&should_be_identity - &ComplexMatrix::identity(2)).max_abs() < 1e-12);
    }

    #[test]
    fn trace_product_matches_full_product() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| c64((i + 2 * j) as f64, (i as f64) - 1.0));
        let b = ComplexMatrix::from_fn(3, 3, |i, j| c64((3 * i + j) as f64 * 0.1, 0.3 * j as f64));
        let direct = a.matmul(&b).trace();
        let fast = a.trace_product(&b);
        assert!((direct - fast).norm() < 1e-12);
    }

    #[test]
    fn rejects_wrong_entry_count() {
        assert!(ComplexMatrix::new(2, 2, vec![C64::ZERO; 3]).is_err());
    }
}
