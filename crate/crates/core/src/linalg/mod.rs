//! Dense complex linear algebra on qubit registers.
//!
//! Everything here uses big-endian qubit order: qubit 0 is the most
//! significant tensor factor, so basis index bit `n − 1 − q` belongs to qubit `q`.

mod density;
mod matrix;
mod partition;
mod spectral;

pub use density::{DensityMatrix, STATE_TOL};
pub use matrix::{tensor_product, SquareMatrix, UNITARY_TOL};
pub use partition::{compose, partial_trace, reduce_operator, QubitPartition, Subsystem};
pub use spectral::{
    eigenvalues, hermitian_eigen, matrix_function, numerical_rank, purity, Eigen, MatrixFunction, HERMITIAN_TOL,
    FACTOR_CUTOFF, LOG_CUTOFF, RANK_TOL,
};
pub(crate) use spectral::psd_factor;
