//! Train a disentangler for two 4-qubit states and read off the estimates.

use disentangle::optimizer::train;
use disentangle::stategen::random_states_shared_support;
use disentangle::{build_ansatz, CostSpec, QuantityKind, QubitPartition, TrainingConfig};

fn main() -> disentangle::Result<()> {
    let states = random_states_shared_support(4, 4, 2, 2024)?;
    // rank 4 fits in two preserved qubits
    let spec = CostSpec::exact(states.clone(), QubitPartition::leading(4, 2)?)?;
    let ansatz = build_ansatz(4, 12)?;
    let config = TrainingConfig {
        steps: 300,
        learning_rate: 0.15,
        early_stop_threshold: 1e-3,
        seed: 1,
        record_quantities: QuantityKind::standard_set(0.5, 1.5),
    };
    let trace = train(&ansatz, &spec, &config)?;
    for r in trace.records.iter().step_by(25) {
        println!("epoch {:>4}  cost {:.5}", r.epoch, r.cost);
    }
    println!("stopped after {} epochs ({:?})", trace.records.len(), trace.termination);
    for (series, est) in trace.series.iter().zip(&trace.final_estimates) {
        let exact = series.evaluate(&states)?;
        println!("{:<16} exact {exact:.6}  estimate {est:.6}", series.label);
    }
    Ok(())
}
