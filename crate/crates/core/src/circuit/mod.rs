//! Layered rotation/entangler ansatz and its action on density matrices.
//!
//! One layer is an `Rz·Ry·Rz` block on every qubit, a ring of CNOTs
//! (control `i`, target `i+1 mod n`; a single `0 → 1` for two qubits, nothing
//! for one), then a second `Rz·Ry·Rz` block. That gives `6n` angles per layer.
//! Rotations are `R_P(θ) = exp(−iθP/2)`.

pub(crate) mod kernels;

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, SquareMatrix};
use kernels::Gate2;

/// Rotation axis of a trainable gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    Y,
    Z,
}

/// One gate of the ansatz.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gate {
    Rotation { axis: Axis, qubit: usize, param: usize },
    Cnot { control: usize, target: usize },
}

pub(crate) fn rotation_matrix(axis: Axis, angle: f64) -> Gate2 {
    let (s, c) = (0.5 * angle).sin_cos();
    let zero = Complex64::new(0.0, 0.0);
    match axis {
        Axis::Z => [[Complex64::new(c, -s), zero], [zero, Complex64::new(c, s)]],
        Axis::Y => [
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ],
    }
}

impl Gate {
    /// Full `2ⁿ × 2ⁿ` matrix of this gate.
    pub fn matrix(&self, qubits: usize, theta: &ParameterVector) -> SquareMatrix {
        let mut m = SquareMatrix::identity(1 << qubits);
        self.apply_left(m.entries_mut(), qubits, theta.as_slice());
        m
    }

    pub(crate) fn apply_left(&self, buf: &mut [Complex64], qubits: usize, theta: &[f64]) {
        match *self {
            Gate::Rotation { axis, qubit, param } => {
                kernels::left_1q(buf, qubits, qubit, &rotation_matrix(axis, theta[param]))
            }
            Gate::Cnot { control, target } => kernels::left_cnot(buf, qubits, control, target),
        }
    }

    /// `X ← G X G†`.
    pub(crate) fn conjugate(&self, buf: &mut [Complex64], qubits: usize, theta: &[f64]) {
        match *self {
            Gate::Rotation { axis, qubit, param } => {
                kernels::conjugate_1q(buf, qubits, qubit, &rotation_matrix(axis, theta[param]))
            }
            Gate::Cnot { control, target } => kernels::conjugate_cnot(buf, qubits, control, target),
        }
    }

    /// `X ← G† X G`.
    pub(crate) fn conjugate_adjoint(&self, buf: &mut [Complex64], qubits: usize, theta: &[f64]) {
        match *self {
            Gate::Rotation { axis, qubit, param } => {
                let g = kernels::dagger(&rotation_matrix(axis, theta[param]));
                kernels::conjugate_1q(buf, qubits, qubit, &g)
            }
            Gate::Cnot { control, target } => kernels::conjugate_cnot(buf, qubits, control, target),
        }
    }
}

/// Trainable angle vector, in radians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParameterVector(Vec<f64>);

impl ParameterVector {
    pub fn new(angles: Vec<f64>) -> Self {
        Self(angles)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Copy with `delta` added to one angle.
    pub fn shifted(&self, index: usize, delta: f64) -> Self {
        let mut out = self.clone();
        out.0[index] += delta;
        out
    }
}

impl From<Vec<f64>> for ParameterVector {
    fn from(angles: Vec<f64>) -> Self {
        Self(angles)
    }
}

/// Fixed circuit template; its rotation angles are the trainable parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ansatz {
    qubits: usize,
    layers: usize,
    gates: Vec<Gate>,
}

/// Builds the layered ansatz with `6 · qubits · layers` parameters.
pub fn build_ansatz(qubits: usize, layers: usize) -> Result<Ansatz> {
    if qubits == 0 || layers == 0 {
        return Err(Error::OutOfRange("ansatz needs at least one qubit and one layer".into()));
    }
    let mut gates = Vec::new();
    let mut next = 0usize;
    let mut rotation_block = |gates: &mut Vec<Gate>| {
        for qubit in 0..qubits {
            for axis in [Axis::Z, Axis::Y, Axis::Z] {
                gates.push(Gate::Rotation { axis, qubit, param: next });
                next += 1;
            }
        }
    };
    for _ in 0..layers {
        rotation_block(&mut gates);
        match qubits {
            1 => {}
            2 => gates.push(Gate::Cnot { control: 0, target: 1 }),
            n => gates.extend((0..n).map(|i| Gate::Cnot {
                control: i,
                target: (i + 1) % n,
            })),
        }
        rotation_block(&mut gates);
    }
    Ok(Ansatz { qubits, layers, gates })
}

impl Ansatz {
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn parameter_count(&self) -> usize {
        6 * self.qubits * self.layers
    }

    pub fn rotation_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Rotation { .. })).count()
    }

    pub fn entangler_count(&self) -> usize {
        self.gates.len() - self.rotation_count()
    }

    pub fn check_parameters(&self, theta: &ParameterVector) -> Result<()> {
        if theta.len() != self.parameter_count() {
            return Err(Error::ParameterLength {
                expected: self.parameter_count(),
                actual: theta.len(),
            });
        }
        if theta.as_slice().iter().any(|a| !a.is_finite()) {
            return Err(Error::OutOfRange("parameter vector has non-finite angles".into()));
        }
        Ok(())
    }

    /// `U(θ) = G_N ⋯ G_1` in gate-list order.
    pub fn unitary(&self, theta: &ParameterVector) -> Result<SquareMatrix> {
        self.check_parameters(theta)?;
        let mut u = SquareMatrix::identity(1 << self.qubits);
        for gate in &self.gates {
            gate.apply_left(u.entries_mut(), self.qubits, theta.as_slice());
        }
        Ok(u)
    }

    /// `U(θ) ρ U(θ)†`, applied gate by gate.
    pub fn conjugate(&self, theta: &ParameterVector, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_parameters(theta)?;
        if rho.qubits() != self.qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.qubits,
                actual: rho.dim(),
            });
        }
        let mut m = rho.matrix().clone();
        let angles = theta.as_slice();
        let mut start = 0;
        while start < self.gates.len() {
            let Gate::Rotation { qubit, .. } = self.gates[start] else {
                self.gates[start].conjugate(m.entries_mut(), self.qubits, angles);
                start += 1;
                continue;
            };
            // fold a run of rotations on one qubit into a single 2×2 gate
            let mut fused = rotation_matrix(Axis::Z, 0.0);
            while let Some(&Gate::Rotation { axis, qubit: q, param }) = self.gates.get(start) {
                if q != qubit {
                    break;
                }
                fused = kernels::mul2(&rotation_matrix(axis, angles[param]), &fused);
                start += 1;
            }
            kernels::conjugate_1q(m.entries_mut(), self.qubits, qubit, &fused);
        }
        Ok(DensityMatrix::from_trusted(m))
    }

    /// Independent uniform angles in `[0, 2π)`, reproducible per seed.
    pub fn initialize_parameters(&self, seed: u64) -> ParameterVector {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        ParameterVector((0..self.parameter_count()).map(|_| rng.random_range(0.0..TAU)).collect())
    }
}

/// `U(θ)` for `ansatz`.
pub fn circuit_unitary(ansatz: &Ansatz, theta: &ParameterVector) -> Result<SquareMatrix> {
    ansatz.unitary(theta)
}

/// `U(θ) ρ U(θ)†`.
pub fn conjugate(ansatz: &Ansatz, theta: &ParameterVector, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ansatz.conjugate(theta, rho)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn structure_counts() {
        let a = build_ansatz(1, 1).unwrap();
        assert_eq!((a.rotation_count(), a.entangler_count()), (6, 0));
        let a = build_ansatz(4, 2).unwrap();
        assert_eq!(a.parameter_count(), 48);
        let a = build_ansatz(3, 1).unwrap();
        assert_eq!((a.rotation_count(), a.entangler_count()), (18, 3));
        let a = build_ansatz(2, 3).unwrap();
        assert_eq!(a.entangler_count(), 3);
    }

    #[test]
    fn parameter_indices_used_once() {
        let a = build_ansatz(3, 2).unwrap();
        let mut seen = vec![0usize; a.parameter_count()];
        for g in a.gates() {
            if let Gate::Rotation { param, .. } = g {
                seen[*param] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn zero_angles_single_qubit_is_identity() {
        let a = build_ansatz(1, 2).unwrap();
        let u = a.unitary(&ParameterVector::zeros(12)).unwrap();
        assert!(u.max_abs_diff(&SquareMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn ry_pi_flips_qubit() {
        let a = build_ansatz(1, 1).unwrap();
        let mut theta = ParameterVector::zeros(6);
        theta.as_mut_slice()[1] = PI;
        let out = a.conjugate(&theta, &DensityMatrix::basis_state(1, 0)).unwrap();
        assert!(out.matrix().max_abs_diff(DensityMatrix::basis_state(1, 1).matrix()) < 1e-15);
    }

    #[test]
    fn rejects_wrong_length() {
        let a = build_ansatz(2, 1).unwrap();
        assert!(matches!(
            a.unitary(&ParameterVector::zeros(3)),
            Err(Error::ParameterLength { expected: 12, actual: 3 })
        ));
    }

    #[test]
    fn initialization_is_deterministic() {
        let a = build_ansatz(3, 2).unwrap();
        let t1 = a.initialize_parameters(11);
        assert_eq!(t1, a.initialize_parameters(11));
        assert_ne!(t1, a.initialize_parameters(12));
        assert_eq!(t1.len(), 36);
        assert!(t1.as_slice().iter().all(|&x| (0.0..TAU).contains(&x)));
    }

    #[test]
    fn gate_by_gate_conjugation_matches_unitary() {
        let a = build_ansatz(3, 2).unwrap();
        let theta = a.initialize_parameters(5);
        let u = a.unitary(&theta).unwrap();
        let rho = DensityMatrix::basis_state(3, 6);
        let direct = rho.conjugate_by(&u).unwrap();
        let staged = a.conjugate(&theta, &rho).unwrap();
        assert!(direct.matrix().max_abs_diff(staged.matrix()) < 1e-13);
    }
}
