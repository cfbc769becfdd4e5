//! The analytic gradient agrees with central differences.

use disentangle::optimizer::finite_difference_gradient;
use disentangle::stategen::random_mixed_state;
use disentangle::{build_ansatz, CostFunction, CostSpec, QubitPartition};

fn main() -> disentangle::Result<()> {
    let states = vec![random_mixed_state(3, 2, 11)?, random_mixed_state(3, 2, 12)?];
    let spec = CostSpec::exact(states, QubitPartition::leading(3, 1)?)?;
    let ansatz = build_ansatz(3, 2)?;
    let cost = CostFunction::new(&ansatz, &spec)?;
    let theta = ansatz.initialize_parameters(5);

    let analytic = cost.gradient(&theta)?;
    let numeric = finite_difference_gradient(|t| cost.value(t), &theta, 1e-5)?;
    let worst = analytic
        .iter()
        .zip(&numeric)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("cost {:.6}, {} components, max |analytic - numeric| = {worst:.2e}", cost.value(&theta)?, analytic.len());
    Ok(())
}
