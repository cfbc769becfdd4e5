//! Exact entropies and distances on states whose values are known by hand.

use disentangle::quantities::{bures_angle, fidelity, renyi, tsallis, trace_distance, von_neumann};
use disentangle::{DensityMatrix, SquareMatrix};

fn main() -> disentangle::Result<()> {
    let mixed = DensityMatrix::maximally_mixed(3);
    println!("maximally mixed, 3 qubits");
    println!("  S      = {:.12} (expect 3)", von_neumann(&mixed));
    println!("  S_0.5  = {:.12} (expect 3)", renyi(&mixed, 0.5)?);
    println!("  T_2    = {:.12} (expect 1 - 1/8)", tsallis(&mixed, 2.0)?);

    let zero = DensityMatrix::basis_state(1, 0);
    let one = DensityMatrix::basis_state(1, 1);
    let half = DensityMatrix::maximally_mixed(1);
    println!("|0> vs |1>:   T = {:.3}, F = {:.3}", trace_distance(&zero, &one)?, fidelity(&zero, &one)?);
    println!("|0> vs I/2:   F = {:.3}, Bures angle = {:.6} (expect pi/3)", fidelity(&zero, &half)?, bures_angle(&zero, &half)?);

    let biased = DensityMatrix::new(SquareMatrix::diagonal(&[0.75, 0.25]))?;
    println!("diag(3/4, 1/4): S = {:.12}", von_neumann(&biased));
    Ok(())
}
