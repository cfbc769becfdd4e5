//! Property-based invariants over random states, partitions and angles.

use proptest::prelude::*;

use disentangle::bounds::{continuity_bound, disentanglement_bound};
use disentangle::cost::swap_expectation;
use disentangle::harness::state_io::{state_from_json, state_to_json};
use disentangle::harness::{SeriesColumn, TraceTable};
use disentangle::linalg::{eigenvalues, purity};
use disentangle::quantities::{fidelity, renyi, trace_distance, tsallis, von_neumann};
use disentangle::stategen::{haar_random_unitary, random_mixed_state};
use disentangle::{build_ansatz, partial_trace, DensityMatrix, ParameterVector, QuantityKind, QubitPartition, Subsystem};

/// (qubits, rank, seed) with rank anywhere in 1..=2^qubits.
fn state_params(max_qubits: usize) -> impl Strategy<Value = (usize, usize, u64)> {
    (1..=max_qubits).prop_flat_map(|n| (Just(n), 1..=(1usize << n), any::<u64>()))
}

fn state(n: usize, rank: usize, seed: u64) -> DensityMatrix {
    random_mixed_state(n, rank, seed).unwrap()
}

/// A proper bipartition of `n ≥ 2` qubits from a bitmask.
fn partition_from_mask(n: usize, mask: u32) -> QubitPartition {
    let mut discarded: Vec<usize> = (0..n).filter(|q| mask & (1 << q) != 0).collect();
    if discarded.is_empty() {
        discarded.push(0);
    }
    if discarded.len() == n {
        discarded.pop();
    }
    QubitPartition::discard(n, discarded).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn partial_trace_keeps_a_valid_state((n, rank, seed) in state_params(4), mask in any::<u32>()) {
        prop_assume!(n >= 2);
        let rho = state(n, rank, seed);
        let partition = partition_from_mask(n, mask);
        for which in [Subsystem::Discarded, Subsystem::Preserved] {
            let reduced = partial_trace(&rho, &partition, which).unwrap();
            prop_assert!((reduced.matrix().trace().re - 1.0).abs() < 1e-12);
            prop_assert!(reduced.matrix().hermiticity_residual() < 1e-12);
            prop_assert!(eigenvalues(reduced.matrix()).unwrap().iter().all(|&l| l > -1e-12));
        }
    }

    #[test]
    fn entropies_lie_in_their_ranges((n, rank, seed) in state_params(4)) {
        let rho = state(n, rank, seed);
        let bits = (rank as f64).log2();
        let s = von_neumann(&rho);
        prop_assert!(s >= -1e-12 && s <= bits + 1e-9);
        // Rényi entropies fall as the order grows, with von Neumann at order one
        let low = renyi(&rho, 0.5).unwrap();
        let high = renyi(&rho, 2.0).unwrap();
        prop_assert!(low + 1e-9 >= s && s + 1e-9 >= high);
        prop_assert!(low <= bits + 1e-9 && high >= -1e-12);
        for q in [0.5, 1.5, 3.0] {
            let t = tsallis(&rho, q).unwrap();
            let ceiling = ((rank as f64).powf(1.0 - q) - 1.0) / (1.0 - q);
            prop_assert!(t >= -1e-12 && t <= ceiling + 1e-9);
        }
    }

    #[test]
    fn distances_are_symmetric_and_bounded(
        (n, r1, s1) in state_params(3),
        r2 in 1usize..=8,
        s2 in any::<u64>(),
    ) {
        let rho = state(n, r1, s1);
        let sigma = state(n, r2.min(1 << n), s2);
        let t = trace_distance(&rho, &sigma).unwrap();
        let f = fidelity(&rho, &sigma).unwrap();
        prop_assert!((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&f));
        prop_assert!((t - trace_distance(&sigma, &rho).unwrap()).abs() < 1e-12);
        prop_assert!((f - fidelity(&sigma, &rho).unwrap()).abs() < 1e-9);
        // Fuchs–van de Graaf
        prop_assert!(1.0 - f.sqrt() <= t + 1e-9);
        prop_assert!(t <= (1.0 - f).sqrt() + 1e-9);
    }

    #[test]
    fn quantities_are_unitarily_invariant((n, rank, seed) in state_params(3), useed in any::<u64>()) {
        let rho = state(n, rank, seed);
        let sigma = state(n, 1, seed ^ 0xabc);
        let u = haar_random_unitary(1 << n, useed);
        let rho_u = rho.conjugate_by(&u).unwrap();
        let sigma_u = sigma.conjugate_by(&u).unwrap();
        for kind in QuantityKind::standard_set(0.5, 1.5) {
            let (before, after) = if kind.is_single_state() {
                (kind.evaluate_single(&rho).unwrap(), kind.evaluate_single(&rho_u).unwrap())
            } else {
                (kind.evaluate_pair(&rho, &sigma).unwrap(), kind.evaluate_pair(&rho_u, &sigma_u).unwrap())
            };
            prop_assert!((before - after).abs() < 1e-8, "{kind}: {before} vs {after}");
        }
    }

    #[test]
    fn swap_expectation_matches_reduced_purity((n, rank, seed) in state_params(4), mask in any::<u32>()) {
        prop_assume!(n >= 2);
        let rho = state(n, rank, seed);
        let partition = partition_from_mask(n, mask);
        let reduced = partial_trace(&rho, &partition, Subsystem::Discarded).unwrap();
        let overlap = swap_expectation(&rho, &rho, &partition).unwrap();
        prop_assert!((overlap - purity(&reduced)).abs() < 1e-12);
        prop_assert!(overlap <= 1.0 + 1e-12 && overlap > 0.0);
    }

    #[test]
    fn ansatz_unitaries_are_unitary(n in 1usize..=4, layers in 1usize..=3, angles in prop::collection::vec(-10.0f64..10.0, 36)) {
        let ansatz = build_ansatz(n, layers).unwrap();
        let theta = ParameterVector::new(angles.iter().cycle().take(ansatz.parameter_count()).copied().collect());
        let u = ansatz.unitary(&theta).unwrap();
        prop_assert!(u.unitarity_residual() < 1e-10);
    }

    #[test]
    fn bounds_grow_with_their_inputs(r in 1usize..=16, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for kind in QuantityKind::standard_set(0.5, 1.5) {
            prop_assert!(disentanglement_bound(kind, r, lo).unwrap() <= disentanglement_bound(kind, r, hi).unwrap() + 1e-12);
            let pair = (!kind.is_single_state()).then_some(lo);
            let low = continuity_bound(kind, lo, pair, r.max(2)).unwrap();
            let pair = (!kind.is_single_state()).then_some(hi);
            let high = continuity_bound(kind, hi, pair, r.max(2)).unwrap();
            // the concave entropy forms peak at T = 1 - 1/r and only grow up to there
            if !kind.is_single_state() || hi <= 1.0 - 1.0 / r.max(2) as f64 {
                prop_assert!(low <= high + 1e-12, "{kind}: {low} > {high}");
            }
        }
    }

    #[test]
    fn state_json_round_trip_is_exact((n, rank, seed) in state_params(3)) {
        let rho = state(n, rank, seed);
        let back = state_from_json(&state_to_json(&rho).unwrap()).unwrap();
        prop_assert_eq!(back, rho);
    }

    #[test]
    fn trace_csv_round_trip_is_exact(values in prop::collection::vec(-1e3f64..1e3, 1..20)) {
        let table = TraceTable {
            epochs: (0..values.len()).collect(),
            cost: values.clone(),
            grad_norm: values.iter().map(|v| v.abs() * 1e-7).collect(),
            series: vec![SeriesColumn { label: "von_neumann".into(), exact: values[0], estimates: values.clone() }],
        };
        let mut bytes = Vec::new();
        table.write(&mut bytes).unwrap();
        prop_assert_eq!(TraceTable::read(bytes.as_slice()).unwrap(), table);
    }
}
