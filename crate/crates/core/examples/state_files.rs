//! Save states as JSON, load them back, evaluate exactly.

use disentangle::harness::state_io::{load_state, save_state};
use disentangle::stategen::random_mixed_state;
use disentangle::QuantityKind;

fn main() -> disentangle::Result<()> {
    let dir = std::env::temp_dir();
    let (a, b) = (dir.join("rho.json"), dir.join("sigma.json"));
    save_state(&random_mixed_state(2, 2, 1)?, &a)?;
    save_state(&random_mixed_state(2, 2, 2)?, &b)?;

    let rho = load_state(&a)?;
    let sigma = load_state(&b)?;
    let vn = QuantityKind::VonNeumann.evaluate_single(&rho)?;
    let fid = QuantityKind::Fidelity.evaluate_pair(&rho, &sigma)?;
    println!("S(rho) = {vn:.10}, F(rho, sigma) = {fid:.10}");
    println!("same as: disentangle oracle fidelity --state {} --state {}", a.display(), b.display());
    Ok(())
}
