//! Discard one qubit per stage instead of all at once.

use disentangle::harness::{run_experiment, ExperimentConfig};
use disentangle::QuantityKind;

fn main() -> disentangle::Result<()> {
    let config = ExperimentConfig {
        qubits: 5,
        rank: 2,
        num_states: 1,
        quantities: vec![QuantityKind::VonNeumann, QuantityKind::Renyi { alpha: 2.0 }],
        staged_discard: true,
        stage_size: 1,
        layers: Some(8),
        ..ExperimentConfig::default()
    };
    let report = run_experiment(&config, None)?.report;
    for s in &report.stages {
        println!(
            "stage {}: {} -> {} qubits in {} epochs, cost {:.2e}, errors {:?}",
            s.stage,
            s.qubits,
            s.qubits - s.discarded,
            s.epochs,
            s.final_cost,
            s.disentanglement_errors.iter().map(|e| format!("{e:.1e}")).collect::<Vec<_>>()
        );
    }
    println!("end to end: cost {:.2e}, error {:.2e}", report.final_cost, report.end_to_end_error);
    for q in &report.quantities {
        println!("  {:<12} exact {:.6} estimate {:.6}", q.label, q.exact, q.estimate);
    }
    Ok(())
}
