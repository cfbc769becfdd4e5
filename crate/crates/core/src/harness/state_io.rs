//! JSON serialization of density matrices.
//!
//! `{"qubits": n, "matrix": [[re, im], ...]}` with the `4ⁿ` entries in
//! row-major order and qubit 0 as the most significant index bit.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, SquareMatrix};

#[derive(Debug, Serialize, Deserialize)]
struct StateFile {
    qubits: usize,
    matrix: Vec<[f64; 2]>,
}

pub fn state_to_json(rho: &DensityMatrix) -> Result<String> {
    let file = StateFile {
        qubits: rho.qubits(),
        matrix: rho.matrix().entries().iter().map(|z| [z.re, z.im]).collect(),
    };
    Ok(serde_json::to_string(&file)?)
}

pub fn state_from_json(text: &str) -> Result<DensityMatrix> {
    let file: StateFile = serde_json::from_str(text)?;
    if file.qubits == 0 || file.qubits > 16 {
        return Err(Error::InvalidState(format!("unsupported qubit count {}", file.qubits)));
    }
    let dim = 1usize << file.qubits;
    if file.matrix.len() != dim * dim {
        return Err(Error::DimensionMismatch {
            expected: dim * dim,
            actual: file.matrix.len(),
        });
    }
    let entries = file.matrix.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
    DensityMatrix::new(SquareMatrix::from_row_major(dim, entries)?)
}

pub fn save_state(rho: &DensityMatrix, path: &Path) -> Result<()> {
    fs::write(path, state_to_json(rho)?)?;
    Ok(())
}

pub fn load_state(path: &Path) -> Result<DensityMatrix> {
    state_from_json(&fs::read_to_string(path)?)
}
