//! Build an exact disentangler from the joint support and check it.

use disentangle::cost::max_disentanglement_error;
use disentangle::quantities::{fidelity, trace_distance};
use disentangle::stategen::{perfect_disentangler, random_states_shared_support, required_preserved_qubits};
use disentangle::{partial_trace, QubitPartition, Subsystem};

fn main() -> disentangle::Result<()> {
    let states = random_states_shared_support(5, 4, 2, 9)?;
    let keep = required_preserved_qubits(&states)?;
    let partition = QubitPartition::leading(5, 5 - keep)?;
    let u = perfect_disentangler(&states, &partition)?;
    println!("preserve {keep} of 5 qubits; unitarity residual {:.1e}", u.unitarity_residual());
    println!("max disentanglement error {:.1e}", max_disentanglement_error(&u, &states, &partition)?);

    let reduced = states
        .iter()
        .map(|s| partial_trace(&s.conjugate_by(&u)?, &partition, Subsystem::Preserved))
        .collect::<disentangle::Result<Vec<_>>>()?;
    println!(
        "trace distance {:.10} -> {:.10}",
        trace_distance(&states[0], &states[1])?,
        trace_distance(&reduced[0], &reduced[1])?
    );
    println!(
        "fidelity       {:.10} -> {:.10}",
        fidelity(&states[0], &states[1])?,
        fidelity(&reduced[0], &reduced[1])?
    );
    Ok(())
}
