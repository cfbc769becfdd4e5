//! Library routines checked against slow, obviously-correct reference code.

use num_complex::Complex64;

use disentangle::circuit::{Axis, Gate};
use disentangle::linalg::compose;
use disentangle::stategen::random_mixed_state;
use disentangle::{build_ansatz, partial_trace, DensityMatrix, QubitPartition, SquareMatrix, Subsystem};

fn bit(index: usize, q: usize, n: usize) -> usize {
    (index >> (n - 1 - q)) & 1
}

/// Partial trace by summing over every basis index pair whose traced bits agree.
fn index_sum_partial_trace(rho: &DensityMatrix, keep: &[usize]) -> SquareMatrix {
    let n = rho.qubits();
    let sub = |x: usize| keep.iter().fold(0, |acc, &q| (acc << 1) | bit(x, q, n));
    let mut out = SquareMatrix::zeros(1 << keep.len());
    for x in 0..rho.dim() {
        for y in 0..rho.dim() {
            let traced_agree = (0..n).filter(|q| !keep.contains(q)).all(|q| bit(x, q, n) == bit(y, q, n));
            if traced_agree {
                let (i, j) = (sub(x), sub(y));
                out.set(i, j, out.get(i, j) + rho.matrix().get(x, y));
            }
        }
    }
    out
}

#[test]
fn partial_trace_matches_index_sum() {
    let layouts: [(usize, Vec<usize>); 6] = [
        (2, vec![0]),
        (2, vec![1]),
        (3, vec![1]),
        (3, vec![0, 2]),
        (4, vec![3, 1]),
        (5, vec![0, 2, 4]),
    ];
    for (seed, (n, discarded)) in layouts.into_iter().enumerate() {
        let rho = random_mixed_state(n, 3.min(1 << n), seed as u64).unwrap();
        let partition = QubitPartition::discard(n, discarded).unwrap();
        for which in [Subsystem::Discarded, Subsystem::Preserved] {
            let keep = partition.subsystem(which).to_vec();
            let fast = partial_trace(&rho, &partition, which).unwrap();
            let slow = index_sum_partial_trace(&rho, &keep);
            assert!(fast.matrix().max_abs_diff(&slow) < 1e-14, "n={n} keep={keep:?}");
        }
    }
}

#[test]
fn compose_matches_kron_for_leading_partitions() {
    let a = random_mixed_state(1, 2, 1).unwrap();
    let b = random_mixed_state(2, 3, 2).unwrap();
    let partition = QubitPartition::leading(3, 1).unwrap();
    let composed = compose(a.matrix(), b.matrix(), &partition).unwrap();
    assert!(composed.max_abs_diff(&a.matrix().kron(b.matrix())) < 1e-15);
}

/// CNOT as a permutation of basis states, built independently of the library kernels.
fn cnot_matrix(n: usize, control: usize, target: usize) -> SquareMatrix {
    let d = 1 << n;
    SquareMatrix::from_fn(d, |row, col| {
        let flipped = if bit(col, control, n) == 1 { col ^ (1 << (n - 1 - target)) } else { col };
        if row == flipped {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

#[test]
fn ansatz_unitary_is_the_ordered_gate_product() {
    for (n, layers) in [(1, 2), (2, 2), (3, 1), (4, 2)] {
        let ansatz = build_ansatz(n, layers).unwrap();
        let theta = ansatz.initialize_parameters(n as u64 * 31 + layers as u64);
        let mut product = SquareMatrix::identity(1 << n);
        for gate in ansatz.gates() {
            let m = match gate {
                Gate::Cnot { control, target } => cnot_matrix(n, *control, *target),
                Gate::Rotation { .. } => gate.matrix(n, &theta),
            };
            product = &m * &product;
        }
        let u = ansatz.unitary(&theta).unwrap();
        assert!(u.max_abs_diff(&product) < 1e-12, "n={n} layers={layers}");

        // conjugating a state must agree with U ρ U†
        let rho = random_mixed_state(n, 1 << n, 77).unwrap();
        let fast = ansatz.conjugate(&theta, &rho).unwrap();
        let slow = &(&u * rho.matrix()) * &u.adjoint();
        assert!(fast.matrix().max_abs_diff(&slow) < 1e-12);
    }
}

#[test]
fn rotation_gates_match_closed_forms() {
    let ansatz = build_ansatz(1, 1).unwrap();
    let theta = disentangle::ParameterVector::new(vec![0.3; ansatz.parameter_count()]);
    for gate in ansatz.gates() {
        if let Gate::Rotation { axis, .. } = gate {
            let m = gate.matrix(1, &theta);
            let (c, s) = (0.15f64.cos(), 0.15f64.sin());
            let expected = match axis {
                Axis::Y => [[c, -s], [s, c]].map(|row| row.map(|x| Complex64::new(x, 0.0))),
                Axis::Z => [
                    [Complex64::new(c, -s), Complex64::new(0.0, 0.0)],
                    [Complex64::new(0.0, 0.0), Complex64::new(c, s)],
                ],
            };
            for i in 0..2 {
                for j in 0..2 {
                    assert!((m.get(i, j) - expected[i][j]).norm() < 1e-15, "{axis:?} [{i}][{j}]");
                }
            }
        }
    }
}
