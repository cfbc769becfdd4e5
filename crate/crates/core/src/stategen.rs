//! Random inputs and exact disentanglers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, QubitPartition, SquareMatrix, Subsystem, RANK_TOL};

/// Singular values at or below this do not count towards the joint span.
pub const SPAN_TOL: f64 = 1e-10;
/// Residual norm below which a completion candidate is dropped.
const COMPLETION_DROP_TOL: f64 = 1e-10;

/// Haar-distributed `dim × dim` unitary: QR of a complex Ginibre matrix with
/// the phases of `R`'s diagonal folded into `Q`.
pub fn haar_random_unitary(dim: usize, seed: u64) -> SquareMatrix {
    assert!(dim >= 1, "unitary dimension must be positive");
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let ginibre = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re * scale, im * scale)
    });
    let qr = ginibre.qr();
    let (q, r) = (qr.q(), qr.r());
    SquareMatrix::from_fn(dim, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        q[(i, j)] * phase
    })
}

/// `Tr_anc |ψ⟩⟨ψ|` for a Haar-random `ψ` on `dim ⊗ rank`, ancilla last.
/// Generic rank `rank` with eigenvalues distributed as for the induced measure.
fn purified_random_matrix(dim: usize, rank: usize, seed: u64) -> SquareMatrix {
    let psi = haar_random_unitary(dim * rank, seed).column(0);
    SquareMatrix::from_fn(dim, |i, j| {
        (0..rank).map(|a| psi[i * rank + a] * psi[j * rank + a].conj()).sum()
    })
}

/// Mixed state of the given rank: a Haar-random pure state on the system
/// plus a `rank`-dimensional ancilla, with the ancilla traced out.
pub fn random_mixed_state(qubits: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if qubits == 0 {
        return Err(Error::OutOfRange("state needs at least one qubit".into()));
    }
    if rank == 0 || rank > 1 << qubits {
        return Err(Error::OutOfRange(format!("rank {rank} must lie in 1..={}", 1 << qubits)));
    }
    DensityMatrix::new(purified_random_matrix(1 << qubits, rank, seed).hermitian_part())
}

/// `count` states of the given rank that all live on one random support.
///
/// The first state comes from [`random_mixed_state`]. Each further state is an
/// independent random full-rank `rank × rank` state embedded into the first
/// state's support, so the joint span stays at `rank`.
pub fn random_states_shared_support(qubits: usize, rank: usize, count: usize, seed: u64) -> Result<Vec<DensityMatrix>> {
    let first = random_mixed_state(qubits, rank, seed)?;
    let support = joint_support_basis(std::slice::from_ref(&first))?;
    let mut states = vec![first];
    for k in 1..count {
        let next = if rank == 1 {
            states[0].clone()
        } else {
            let small = purified_random_matrix(rank, rank, seed.wrapping_add(k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let dim = 1 << qubits;
            // V τ V† with V the d × r support basis
            let embedded = SquareMatrix::from_fn(dim, |i, j| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (a, va) in support.iter().enumerate() {
                    for (b, vb) in support.iter().enumerate() {
                        acc += va[i] * small.get(a, b) * vb[j].conj();
                    }
                }
                acc
            });
            DensityMatrix::new(embedded.hermitian_part())?
        };
        states.push(next);
    }
    Ok(states)
}

/// Orthonormal basis of the span of all eigenvectors (above the rank cutoff)
/// of the given states.
pub fn joint_support_basis(states: &[DensityMatrix]) -> Result<Vec<Vec<Complex64>>> {
    let first = states
        .first()
        .ok_or_else(|| Error::InvalidState("need at least one state".into()))?;
    let dim = first.dim();
    let mut columns: Vec<Vec<Complex64>> = Vec::new();
    for s in states {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: s.dim(),
            });
        }
        let eigen = s.eigen();
        for (k, &value) in eigen.values.iter().enumerate() {
            if value > RANK_TOL {
                columns.push(eigen.vector(k));
            }
        }
    }
    if columns.is_empty() {
        return Ok(Vec::new());
    }
    let stacked = DMatrix::from_fn(dim, columns.len(), |i, j| columns[j][i]);
    let svd = stacked.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    Ok(order
        .into_iter()
        .filter(|&k| svd.singular_values[k] > SPAN_TOL)
        .map(|k| u.column(k).iter().copied().collect())
        .collect())
}

/// `⌈log₂ r̃⌉` (at least 1) for `r̃` the dimension of the joint eigenvector span.
pub fn required_preserved_qubits(states: &[DensityMatrix]) -> Result<usize> {
    let span = joint_support_basis(states)?.len().max(1);
    Ok((span.next_power_of_two().trailing_zeros() as usize).max(1))
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Extends orthonormal `basis` to a full orthonormal basis of `C^dim`,
/// trying standard basis vectors in order with two orthogonalization passes.
pub fn complete_orthonormal_basis(mut basis: Vec<Vec<Complex64>>, dim: usize) -> Vec<Vec<Complex64>> {
    for candidate in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[candidate] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &v);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let norm = inner(&v, &v).re.sqrt();
        if norm > COMPLETION_DROP_TOL {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    basis
}

/// Unitary mapping the joint support of `states` onto
/// `(preserved basis) ⊗ |0…0⟩_A`, exactly disentangling every state.
pub fn perfect_disentangler(states: &[DensityMatrix], partition: &QubitPartition) -> Result<SquareMatrix> {
    let support = joint_support_basis(states)?;
    if states[0].qubits() != partition.qubits() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} qubits, states have {}",
            partition.qubits(),
            states[0].qubits()
        )));
    }
    let required = support.len().max(1).next_power_of_two().trailing_zeros() as usize;
    if partition.preserved().len() < required {
        return Err(Error::PreservedTooSmall {
            required,
            available: partition.preserved().len(),
        });
    }
    let dim = states[0].dim();
    let source = complete_orthonormal_basis(support.clone(), dim);
    // targets: preserved-register values with A = |0…0⟩ first, then the rest
    let mut targets: Vec<usize> = partition.offsets(Subsystem::Preserved);
    targets.truncate(support.len());
    let mut used = vec![false; dim];
    targets.iter().for_each(|&t| used[t] = true);
    targets.extend((0..dim).filter(|&t| !used[t]));
    let mut u = SquareMatrix::zeros(dim);
    for (psi, &row) in source.iter().zip(&targets) {
        for (col, z) in psi.iter().enumerate() {
            u.set(row, col, z.conj());
        }
    }
    Ok(u)
}
