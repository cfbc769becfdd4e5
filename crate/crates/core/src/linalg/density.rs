use num_complex::Complex64;

use super::spectral::{eigenvalues, hermitian_eigen, Eigen, RANK_TOL};
use super::SquareMatrix;
use crate::error::{Error, Result};

/// Tolerance on Hermiticity and unit trace for a valid state.
pub const STATE_TOL: f64 = 1e-10;

/// Hermitian, positive-semidefinite, unit-trace matrix on `qubits` qubits.
///
/// Qubit 0 is the most significant tensor factor of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    matrix: SquareMatrix,
}

impl DensityMatrix {
    /// Validates `matrix` as a density matrix.
    pub fn new(matrix: SquareMatrix) -> Result<Self> {
        let dim = matrix.dim();
        if !dim.is_power_of_two() {
            return Err(Error::InvalidState(format!("dimension {dim} is not a power of two")));
        }
        let deviation = matrix.hermiticity_residual();
        if deviation > STATE_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {trace} differs from 1")));
        }
        let lowest = eigenvalues(&matrix)?.last().copied().unwrap_or(0.0);
        if lowest < -RANK_TOL {
            return Err(Error::NegativeEigenvalue { value: lowest });
        }
        Ok(Self {
            qubits: dim.trailing_zeros() as usize,
            matrix,
        })
    }

    /// Wraps a matrix already known to be a state (output of a trace-preserving map).
    pub(crate) fn from_trusted(matrix: SquareMatrix) -> Self {
        debug_assert!(matrix.dim().is_power_of_two());
        Self {
            qubits: matrix.dim().trailing_zeros() as usize,
            matrix,
        }
    }

    /// `|ψ⟩⟨ψ|` for a normalized amplitude vector.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("state vector norm {norm} differs from 1")));
        }
        if !amplitudes.len().is_power_of_two() {
            return Err(Error::InvalidState(format!(
                "state vector length {} is not a power of two",
                amplitudes.len()
            )));
        }
        Ok(Self::from_trusted(SquareMatrix::projector(amplitudes)))
    }

    /// `I / 2ⁿ`.
    pub fn maximally_mixed(qubits: usize) -> Self {
        let dim = 1 << qubits;
        Self::from_trusted(SquareMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    /// Computational basis projector `|index⟩⟨index|`.
    pub fn basis_state(qubits: usize, index: usize) -> Self {
        let dim = 1 << qubits;
        assert!(index < dim, "basis index out of range");
        let mut m = SquareMatrix::zeros(dim);
        m.set(index, index, Complex64::new(1.0, 0.0));
        Self::from_trusted(m)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> SquareMatrix {
        self.matrix
    }

    /// Eigenvalues sorted descending.
    pub fn spectrum(&self) -> Vec<f64> {
        eigenvalues(&self.matrix).expect("density matrix is Hermitian")
    }

    pub fn eigen(&self) -> Eigen {
        hermitian_eigen(&self.matrix).expect("density matrix is Hermitian")
    }

    /// `λ·self + (1−λ)·other`.
    pub fn mix(&self, lambda: f64, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::OutOfRange(format!("mixing weight {lambda} outside [0, 1]")));
        }
        Ok(Self::from_trusted(&self.matrix.scale(lambda) + &other.matrix.scale(1.0 - lambda)))
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, unitary: &SquareMatrix) -> Result<Self> {
        if unitary.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: unitary.dim(),
            });
        }
        Ok(Self::from_trusted(self.matrix.conjugate_by(unitary)))
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        Self::from_trusted(self.matrix.kron(&other.matrix))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_trace() {
        assert!(DensityMatrix::new(SquareMatrix::diagonal(&[0.5, 0.4])).is_err());
    }

    #[test]
    fn rejects_negative_eigenvalue() {
        let err = DensityMatrix::new(SquareMatrix::diagonal(&[1.1, -0.1])).unwrap_err();
        assert!(matches!(err, Error::NegativeEigenvalue { .. }));
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(DensityMatrix::new(SquareMatrix::diagonal(&[0.5, 0.25, 0.25])).is_err());
    }

    #[test]
    fn qubit_count_from_dimension() {
        let rho = DensityMatrix::new(SquareMatrix::diagonal(&[0.25; 4])).unwrap();
        assert_eq!(rho.qubits(), 2);
    }
}
