use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{DensityMatrix, SquareMatrix};
use crate::error::{Error, Result};

/// Hermiticity tolerance accepted by [`hermitian_eigen`].
pub const HERMITIAN_TOL: f64 = 1e-8;
/// Eigenvalues at or below this are treated as zero for rank and PSD checks.
pub const RANK_TOL: f64 = 1e-10;
/// Eigenvalues at or below this are dropped from `log₂` sums (`0·log 0 = 0`).
pub const LOG_CUTOFF: f64 = 1e-12;

/// Spectral decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Eigen {
    /// Sorted descending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: SquareMatrix,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// `V · diag(f(λ)) · V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> SquareMatrix {
        let d = self.values.len();
        let mapped: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        SquareMatrix::from_fn(d, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &w) in mapped.iter().enumerate() {
                if w != 0.0 {
                    acc += self.vectors.get(i, k) * self.vectors.get(j, k).conj() * w;
                }
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> SquareMatrix {
        self.reconstruct_with(|l| l)
    }
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted descending.
pub fn hermitian_eigen(h: &SquareMatrix) -> Result<Eigen> {
    let deviation = h.hermiticity_residual();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let decomposition = h.hermitian_part().to_nalgebra().symmetric_eigen();
    let mut order: Vec<usize> = (0..h.dim()).collect();
    order.sort_by(|&a, &b| {
        decomposition.eigenvalues[b]
            .partial_cmp(&decomposition.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&k| decomposition.eigenvalues[k]).collect();
    let vectors = SquareMatrix::from_fn(h.dim(), |i, j| decomposition.eigenvectors[(i, order[j])]);
    Ok(Eigen { values, vectors })
}

/// Eigenvalues at or below this are dropped when factoring a state as `A A†`.
///
/// They are round-off in practice, and keeping them would inject `√1e-16 ≈ 1e-8`
/// of noise into anything built from the factor.
pub const FACTOR_CUTOFF: f64 = 1e-13;

/// Thin factor `A = V √Λ` with `ρ ≈ A A†`, keeping only eigenvalues above
/// [`FACTOR_CUTOFF`]. Shape is `dim × kept`.
pub(crate) fn psd_factor(rho: &DensityMatrix) -> Result<DMatrix<Complex64>> {
    let eig = hermitian_eigen(rho.matrix())?;
    let kept = eig.values.iter().take_while(|&&l| l > FACTOR_CUTOFF).count();
    Ok(DMatrix::from_fn(rho.dim(), kept, |i, k| eig.vectors.get(i, k) * eig.values[k].sqrt()))
}

/// Eigenvalues only, sorted descending.
pub fn eigenvalues(h: &SquareMatrix) -> Result<Vec<f64>> {
    let deviation = h.hermiticity_residual();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let mut values: Vec<f64> = h.hermitian_part().to_nalgebra().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(values)
}

/// Scalar function applied to a state's spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MatrixFunction {
    Power(f64),
    Log2,
    Sqrt,
}

/// Applies `f` to the spectrum of `rho`, keeping its eigenvectors.
pub fn matrix_function(rho: &DensityMatrix, f: MatrixFunction) -> Result<SquareMatrix> {
    let eigen = hermitian_eigen(rho.matrix())?;
    let needs_nonnegative = match f {
        MatrixFunction::Sqrt => true,
        MatrixFunction::Power(p) => p.fract() != 0.0 || p < 0.0,
        MatrixFunction::Log2 => false,
    };
    if needs_nonnegative {
        if let Some(&lowest) = eigen.values.last() {
            if lowest < -RANK_TOL {
                return Err(Error::NegativeEigenvalue { value: lowest });
            }
        }
    }
    Ok(match f {
        MatrixFunction::Power(p) => eigen.reconstruct_with(|l| {
            if needs_nonnegative {
                if l <= 0.0 { 0.0 } else { l.powf(p) }
            } else {
                l.powf(p)
            }
        }),
        MatrixFunction::Sqrt => eigen.reconstruct_with(|l| l.max(0.0).sqrt()),
        MatrixFunction::Log2 => eigen.reconstruct_with(|l| if l > LOG_CUTOFF { l.log2() } else { 0.0 }),
    })
}

/// `Tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
    rho.matrix().frobenius_sqr()
}

/// Number of eigenvalues strictly above `tol`.
pub fn numerical_rank(rho: &DensityMatrix, tol: f64) -> usize {
    rho.spectrum().iter().filter(|&&l| l > tol).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_spectrum_sorted() {
        let e = hermitian_eigen(&SquareMatrix::diagonal(&[0.3, 0.7])).unwrap();
        assert!((e.values[0] - 0.7).abs() < 1e-14 && (e.values[1] - 0.3).abs() < 1e-14);
        assert!((e.vectors.get(1, 0).norm() - 1.0).abs() < 1e-14);
        assert!((e.vectors.get(0, 1).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_x_spectrum() {
        let x = SquareMatrix::from_row_major(2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap();
        let e = hermitian_eigen(&x).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] + 1.0).abs() < 1e-14);
        let plus = e.vector(0);
        assert!((plus[0].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((plus[0] - plus[1]).norm() < 1e-12);
        let minus = e.vector(1);
        assert!((minus[0] + minus[1]).norm() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = SquareMatrix::from_row_major(2, vec![c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        assert!(matches!(hermitian_eigen(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn sqrt_of_maximally_mixed() {
        let rho = DensityMatrix::maximally_mixed(1);
        let s = matrix_function(&rho, MatrixFunction::Power(0.5)).unwrap();
        let expected = SquareMatrix::identity(2).scale(std::f64::consts::FRAC_1_SQRT_2);
        assert!(s.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn sqrt_of_projector_is_itself() {
        let rho = DensityMatrix::basis_state(1, 0);
        let s = matrix_function(&rho, MatrixFunction::Sqrt).unwrap();
        assert!(s.max_abs_diff(rho.matrix()) < 1e-14);
    }

    #[test]
    fn log2_drops_zero_eigenvalues() {
        let rho = DensityMatrix::new(SquareMatrix::diagonal(&[0.5, 0.5, 0.0, 0.0])).unwrap();
        let l = matrix_function(&rho, MatrixFunction::Log2).unwrap();
        assert!(l.max_abs_diff(&SquareMatrix::diagonal(&[-1.0, -1.0, 0.0, 0.0])) < 1e-14);
    }

    #[test]
    fn purity_examples() {
        assert!((purity(&DensityMatrix::maximally_mixed(1)) - 0.5).abs() < 1e-15);
        assert!((purity(&DensityMatrix::basis_state(3, 5)) - 1.0).abs() < 1e-15);
        let rho = DensityMatrix::new(SquareMatrix::diagonal(&[0.7, 0.3])).unwrap();
        assert!((purity(&rho) - 0.58).abs() < 1e-15);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numerical_rank(&DensityMatrix::maximally_mixed(2), RANK_TOL), 4);
        assert_eq!(numerical_rank(&DensityMatrix::basis_state(2, 1), RANK_TOL), 1);
    }
}
