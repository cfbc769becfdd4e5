//! Layer structure of the trainable circuit.

use disentangle::circuit::Gate;
use disentangle::{build_ansatz, ParameterVector};

fn main() -> disentangle::Result<()> {
    let ansatz = build_ansatz(3, 2)?;
    println!(
        "3 qubits, 2 layers: {} parameters, {} rotations, {} CNOTs",
        ansatz.parameter_count(),
        ansatz.rotation_count(),
        ansatz.entangler_count()
    );
    for gate in ansatz.gates().iter().take(12) {
        match gate {
            Gate::Rotation { axis, qubit, param } => println!("  R{axis:?}(theta[{param}]) on q{qubit}"),
            Gate::Cnot { control, target } => println!("  CNOT q{control} -> q{target}"),
        }
    }
    println!("  ...");

    let theta = ansatz.initialize_parameters(7);
    let u = ansatz.unitary(&theta)?;
    println!("unitarity residual at random angles: {:.2e}", u.unitarity_residual());
    let u0 = ansatz.unitary(&ParameterVector::zeros(ansatz.parameter_count()))?;
    println!("zero angles leave |000> fixed: |<000|U|000>| = {:.3}", u0.get(0, 0).norm());
    Ok(())
}
