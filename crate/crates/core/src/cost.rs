//! Disentangling cost functions and the swap-test overlap they are built from.
//!
//! For states `ρ_1 … ρ_m`, the full pairwise cost is
//! `C_m(θ) = 1 − (1/m²) Σ_{i,j} Tr(S_A (ρ_i(θ) ⊗ ρ_j(θ)))` and the diagonal
//! variant keeps only the `i = j` terms with weight `1/m`. Exact evaluation
//! never builds the swap operator: `Tr(S_A(ρ ⊗ σ)) = Tr(ρ_A σ_A)`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::distr::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{kernels, rotation_matrix, Ansatz, Axis, Gate, ParameterVector};
use crate::error::{Error, Result};
use crate::linalg::{
    compose, hermitian_eigen, partial_trace, reduce_operator, DensityMatrix, QubitPartition, SquareMatrix,
    Subsystem,
};

/// Tolerance on `U·U†` accepted by [`disentanglement_error`].
const DISENTANGLER_UNITARY_TOL: f64 = 1e-8;

/// Which overlap terms enter the cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingMode {
    /// All `m²` pairs; needed when distances between states are estimated.
    FullPairwise,
    /// Only each state with itself; enough for entropies.
    DiagonalOnly,
}

/// How overlaps are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evaluation {
    Exact,
    /// Finite-shot swap tests with an explicit seed.
    Sampled { shots: u64, seed: u64 },
}

/// Inputs of a disentangling cost.
#[derive(Clone, Debug)]
pub struct CostSpec {
    states: Vec<DensityMatrix>,
    partition: QubitPartition,
    mode: PairingMode,
    evaluation: Evaluation,
}

impl CostSpec {
    pub fn new(
        states: Vec<DensityMatrix>,
        partition: QubitPartition,
        mode: PairingMode,
        evaluation: Evaluation,
    ) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::InvalidState("cost needs at least one state".into()))?;
        partition.require_proper()?;
        for s in &states {
            if s.qubits() != first.qubits() {
                return Err(Error::DimensionMismatch {
                    expected: first.dim(),
                    actual: s.dim(),
                });
            }
        }
        if first.qubits() != partition.qubits() {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} qubits, states have {}",
                partition.qubits(),
                first.qubits()
            )));
        }
        if let Evaluation::Sampled { shots: 0, .. } = evaluation {
            return Err(Error::OutOfRange("sampled evaluation needs at least one shot".into()));
        }
        Ok(Self {
            states,
            partition,
            mode,
            evaluation,
        })
    }

    /// Exact, full pairwise cost.
    pub fn exact(states: Vec<DensityMatrix>, partition: QubitPartition) -> Result<Self> {
        Self::new(states, partition, PairingMode::FullPairwise, Evaluation::Exact)
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn partition(&self) -> &QubitPartition {
        &self.partition
    }

    pub fn mode(&self) -> PairingMode {
        self.mode
    }

    pub fn evaluation(&self) -> Evaluation {
        self.evaluation
    }

    pub fn qubits(&self) -> usize {
        self.partition.qubits()
    }

    /// Weight of the `(i, j)` overlap term.
    fn weight(&self, i: usize, j: usize) -> f64 {
        let m = self.states.len() as f64;
        match self.mode {
            PairingMode::FullPairwise => 1.0 / (m * m),
            PairingMode::DiagonalOnly if i == j => 1.0 / m,
            PairingMode::DiagonalOnly => 0.0,
        }
    }
}

/// `Tr[(S_A ⊗ I_{BB'}) (ρ ⊗ σ)]`, evaluated as `Tr(ρ_A σ_A)`.
pub fn swap_expectation(rho: &DensityMatrix, sigma: &DensityMatrix, partition: &QubitPartition) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: sigma.dim(),
        });
    }
    let rho_a = partial_trace(rho, partition, Subsystem::Discarded)?;
    let sigma_a = partial_trace(sigma, partition, Subsystem::Discarded)?;
    Ok(rho_a.matrix().trace_product(sigma_a.matrix()).re)
}

pub(crate) fn mix_seed(seed: u64, stream: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn sample_overlap(overlap: f64, shots: u64, seed: u64) -> f64 {
    let p0 = ((1.0 + overlap) / 2.0).clamp(0.0, 1.0);
    let coin = Bernoulli::new(p0).expect("probability clamped to [0, 1]");
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let zeros = (0..shots).filter(|_| coin.sample(&mut rng)).count();
    2.0 * zeros as f64 / shots as f64 - 1.0
}

/// Finite-shot swap test between the discarded reductions of `rho` and `sigma`.
///
/// The ancilla reads 0 with probability `(1 + Tr(ρ_A σ_A)) / 2`; the estimate is
/// `2 · freq(0) − 1`.
pub fn sampled_swap_test(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    partition: &QubitPartition,
    shots: u64,
    seed: u64,
) -> Result<f64> {
    if shots == 0 {
        return Err(Error::OutOfRange("swap test needs at least one shot".into()));
    }
    Ok(sample_overlap(swap_expectation(rho, sigma, partition)?, shots, seed))
}

/// Discarded-system reductions `Tr_B(U(θ) ρ_i U(θ)†)`.
pub fn discarded_reductions(ansatz: &Ansatz, theta: &ParameterVector, spec: &CostSpec) -> Result<Vec<SquareMatrix>> {
    spec.states
        .iter()
        .map(|rho| {
            let rotated = ansatz.conjugate(theta, rho)?;
            reduce_operator(rotated.matrix(), &spec.partition, Subsystem::Discarded)
        })
        .collect()
}

/// Preserved-system reductions `Tr_A(U(θ) ρ_i U(θ)†)`.
pub fn preserved_reductions(
    ansatz: &Ansatz,
    theta: &ParameterVector,
    states: &[DensityMatrix],
    partition: &QubitPartition,
) -> Result<Vec<DensityMatrix>> {
    states
        .iter()
        .map(|rho| partial_trace(&ansatz.conjugate(theta, rho)?, partition, Subsystem::Preserved))
        .collect()
}

/// Weighted overlap sum `Σ w_ij Tr(a_i b_j)` in exact or sampled mode.
fn overlap_sum(
    spec: &CostSpec,
    evaluation: Evaluation,
    left: &[SquareMatrix],
    right: &[SquareMatrix],
    stream: u64,
) -> f64 {
    let m = left.len();
    let mut total = 0.0;
    for i in 0..m {
        for j in 0..m {
            let w = spec.weight(i, j);
            if w == 0.0 {
                continue;
            }
            let exact = left[i].trace_product(&right[j]).re;
            let value = match evaluation {
                Evaluation::Exact => exact,
                Evaluation::Sampled { shots, seed } => {
                    let pair = (i * m + j) as u64;
                    sample_overlap(exact, shots, mix_seed(mix_seed(seed, stream), pair))
                }
            };
            total += w * value;
        }
    }
    total
}

/// The disentangling cost at `theta`.
pub fn cost(theta: &ParameterVector, ansatz: &Ansatz, spec: &CostSpec) -> Result<f64> {
    CostFunction::new(ansatz, spec)?.value(theta)
}

/// A cost bound to its ansatz, with exact and swept gradients.
#[derive(Clone, Copy, Debug)]
pub struct CostFunction<'a> {
    ansatz: &'a Ansatz,
    spec: &'a CostSpec,
}

impl<'a> CostFunction<'a> {
    pub fn new(ansatz: &'a Ansatz, spec: &'a CostSpec) -> Result<Self> {
        if ansatz.qubits() != spec.qubits() {
            return Err(Error::DimensionMismatch {
                expected: 1 << spec.qubits(),
                actual: 1 << ansatz.qubits(),
            });
        }
        Ok(Self { ansatz, spec })
    }

    pub fn ansatz(&self) -> &Ansatz {
        self.ansatz
    }

    pub fn spec(&self) -> &CostSpec {
        self.spec
    }

    pub fn value(&self, theta: &ParameterVector) -> Result<f64> {
        self.value_in_stream(theta, 0)
    }

    /// Cost with sampled-mode randomness drawn from `stream`.
    pub fn value_in_stream(&self, theta: &ParameterVector, stream: u64) -> Result<f64> {
        let reduced = discarded_reductions(self.ansatz, theta, self.spec)?;
        Ok(1.0 - overlap_sum(self.spec, self.spec.evaluation, &reduced, &reduced, stream))
    }

    /// Exact cost, whatever the evaluation mode.
    pub fn exact_value(&self, theta: &ParameterVector) -> Result<f64> {
        let reduced = discarded_reductions(self.ansatz, theta, self.spec)?;
        Ok(1.0 - overlap_sum(self.spec, Evaluation::Exact, &reduced, &reduced, 0))
    }

    /// `B(θ', θ) = 1 − Σ w_ij Tr(ρ_{A,i}(θ') ρ_{A,j}(θ))`.
    ///
    /// Each overlap is a swap test between one copy prepared with `probe` and
    /// one prepared with `reference`; `B(θ, θ)` is the cost itself.
    pub fn bilinear(&self, probe: &ParameterVector, reference: &ParameterVector) -> Result<f64> {
        self.bilinear_in_stream(probe, reference, 0)
    }

    fn bilinear_in_stream(&self, probe: &ParameterVector, reference: &ParameterVector, stream: u64) -> Result<f64> {
        let left = discarded_reductions(self.ansatz, probe, self.spec)?;
        let right = discarded_reductions(self.ansatz, reference, self.spec)?;
        Ok(1.0 - overlap_sum(self.spec, self.spec.evaluation, &left, &right, stream))
    }

    /// Parameter-shift gradient, shifting one copy at a time.
    ///
    /// The cost is quadratic in `U(θ)ρU(θ)†`, so each component is the sum of
    /// the shift rule applied to either copy. By symmetry of the weights both
    /// terms are equal: `∂_k C = B(θ + π/2·e_k, θ) − B(θ − π/2·e_k, θ)`.
    pub fn gradient(&self, theta: &ParameterVector) -> Result<Vec<f64>> {
        self.gradient_in_stream(theta, 0)
    }

    pub fn gradient_in_stream(&self, theta: &ParameterVector, stream: u64) -> Result<Vec<f64>> {
        self.ansatz.check_parameters(theta)?;
        match self.spec.evaluation {
            Evaluation::Exact => self.swept_gradient(theta),
            Evaluation::Sampled { .. } => self.shifted_copy_gradient(theta, stream),
        }
    }

    /// Same gradient, evaluating every shifted bilinear term from scratch.
    pub fn shifted_copy_gradient(&self, theta: &ParameterVector, stream: u64) -> Result<Vec<f64>> {
        let n = theta.len();
        let mut grad = Vec::with_capacity(n);
        for k in 0..n {
            let plus = self.bilinear_in_stream(&theta.shifted(k, FRAC_PI_2), theta, mix_seed(stream, 2 * k as u64 + 1))?;
            let minus =
                self.bilinear_in_stream(&theta.shifted(k, -FRAC_PI_2), theta, mix_seed(stream, 2 * k as u64 + 2))?;
            grad.push(plus - minus);
        }
        Ok(grad)
    }

    /// Exact shifted terms from one forward and one backward sweep per state.
    ///
    /// With `ρ^(k)` the state after gate `k` and `O^(k)` the overlap observable
    /// pulled back through the gates after `k`, the two shifted overlaps differ
    /// by twice the derivative of `Tr(ρ^(k) O^(k))` in `θ_k`. For a rotation
    /// about Pauli `P` that derivative is `−Im Tr(P K^(k))` with
    /// `K^(k) = Tr_others(O^(k) ρ^(k))`. Within a run of rotations on one qubit
    /// `K` moves by 2×2 conjugation, so each run costs one reduction and one
    /// fused conjugation of the full matrices.
    fn swept_gradient(&self, theta: &ParameterVector) -> Result<Vec<f64>> {
        let qubits = self.ansatz.qubits();
        let angles = theta.as_slice();
        let gates = self.ansatz.gates();
        let partition = &self.spec.partition;
        let reference = discarded_reductions(self.ansatz, theta, self.spec)?;
        let identity_b = SquareMatrix::identity(1 << partition.preserved().len());
        let mut grad = vec![0.0; theta.len()];
        for (i, rho) in self.spec.states.iter().enumerate() {
            let mut on_a = SquareMatrix::zeros(reference[0].dim());
            for (j, r) in reference.iter().enumerate() {
                let w = self.spec.weight(i, j);
                if w != 0.0 {
                    on_a = &on_a + &r.scale(w);
                }
            }
            let mut observable = compose(&on_a, &identity_b, partition)?.into_entries();
            let mut state = self.ansatz.conjugate(theta, rho)?.into_matrix().into_entries();
            let mut end = gates.len();
            while end > 0 {
                let Gate::Rotation { qubit, .. } = gates[end - 1] else {
                    gates[end - 1].conjugate_adjoint(&mut state, qubits, angles);
                    gates[end - 1].conjugate_adjoint(&mut observable, qubits, angles);
                    end -= 1;
                    continue;
                };
                let mut start = end - 1;
                while start > 0 && matches!(gates[start - 1], Gate::Rotation { qubit: q, .. } if q == qubit) {
                    start -= 1;
                }
                let mut k = kernels::reduced_product(&observable, &state, qubits, qubit);
                let mut fused = [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]];
                for gate in gates[start..end].iter().rev() {
                    let Gate::Rotation { axis, param, .. } = *gate else { unreachable!() };
                    let t = match axis {
                        Axis::Z => k[0][0] - k[1][1],
                        Axis::Y => Complex64::new(0.0, 1.0) * (k[0][1] - k[1][0]),
                    };
                    // shifted difference is −2 Im t; the cost is 1 − Σ overlaps
                    grad[param] += 2.0 * t.im;
                    let g = rotation_matrix(axis, angles[param]);
                    let g_dag = kernels::dagger(&g);
                    k = kernels::mul2(&kernels::mul2(&g_dag, &k), &g);
                    fused = kernels::mul2(&fused, &g);
                }
                // fused = G_end ⋯ G_start; undo it in one pass
                let undo = kernels::dagger(&fused);
                kernels::conjugate_1q(&mut state, qubits, qubit, &undo);
                kernels::conjugate_1q(&mut observable, qubits, qubit, &undo);
                end = start;
            }
        }
        Ok(grad)
    }
}

/// `ε = 1 − Tr(U ρ U† (|0⟩⟨0|_A ⊗ I_B))`.
pub fn disentanglement_error(unitary: &SquareMatrix, rho: &DensityMatrix, partition: &QubitPartition) -> Result<f64> {
    let reduced = rotated_discarded(unitary, rho, partition)?;
    Ok((1.0 - reduced.get(0, 0).re).clamp(0.0, 1.0))
}

/// Exact cost of a fixed unitary on the spec's states and partition.
pub fn unitary_cost(unitary: &SquareMatrix, spec: &CostSpec) -> Result<f64> {
    let reduced = spec
        .states
        .iter()
        .map(|rho| rotated_discarded(unitary, rho, &spec.partition))
        .collect::<Result<Vec<_>>>()?;
    Ok(1.0 - overlap_sum(spec, Evaluation::Exact, &reduced, &reduced, 0))
}

/// Largest [`disentanglement_error`] over `states`.
pub fn max_disentanglement_error(
    unitary: &SquareMatrix,
    states: &[DensityMatrix],
    partition: &QubitPartition,
) -> Result<f64> {
    states
        .iter()
        .map(|rho| disentanglement_error(unitary, rho, partition))
        .try_fold(0.0f64, |acc, e| e.map(|e| acc.max(e)))
}

/// Error against the best pure target on A: `1 − λ_max(ρ_A)`.
pub fn witness_disentanglement_error(
    unitary: &SquareMatrix,
    rho: &DensityMatrix,
    partition: &QubitPartition,
) -> Result<f64> {
    let reduced = rotated_discarded(unitary, rho, partition)?;
    let top = hermitian_eigen(&reduced)?.values[0];
    Ok((1.0 - top).clamp(0.0, 1.0))
}

fn rotated_discarded(unitary: &SquareMatrix, rho: &DensityMatrix, partition: &QubitPartition) -> Result<SquareMatrix> {
    if unitary.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: unitary.dim(),
        });
    }
    let residual = unitary.unitarity_residual();
    if residual > DISENTANGLER_UNITARY_TOL {
        return Err(Error::NotUnitary { residual });
    }
    reduce_operator(&rho.matrix().conjugate_by(unitary), partition, Subsystem::Discarded)
}

/// Pure state certifying that two discarded reductions are nearly one common pure state.
#[derive(Clone, Debug)]
pub struct PurityWitness {
    /// Dominant eigenvector of `ρ_A`, phase fixed so its first nonzero entry is real positive.
    pub state: Vec<Complex64>,
    pub overlap_rho: f64,
    pub overlap_sigma: f64,
}

/// Top eigenvector of `rho_a` and its expectation in both reductions.
pub fn purity_witness(rho_a: &DensityMatrix, sigma_a: &DensityMatrix) -> Result<PurityWitness> {
    if rho_a.dim() != sigma_a.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho_a.dim(),
            actual: sigma_a.dim(),
        });
    }
    let mut state = rho_a.eigen().vector(0);
    if let Some(lead) = state.iter().find(|z| z.norm() > 1e-12).copied() {
        let phase = lead.conj() / lead.norm();
        state.iter_mut().for_each(|z| *z *= phase);
    }
    let expect = |m: &SquareMatrix| -> f64 {
        state
            .iter()
            .zip(m.apply(&state))
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    };
    Ok(PurityWitness {
        overlap_rho: expect(rho_a.matrix()),
        overlap_sigma: expect(sigma_a.matrix()),
        state,
    })
}
