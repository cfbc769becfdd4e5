//! Random unitaries and fixed-rank random states.

use disentangle::linalg::{numerical_rank, RANK_TOL};
use disentangle::stategen::{haar_random_unitary, joint_support_basis, random_mixed_state};

fn main() -> disentangle::Result<()> {
    let u = haar_random_unitary(16, 3);
    println!("16x16 Haar unitary, residual {:.1e}", u.unitarity_residual());
    for rank in [1, 2, 4, 8] {
        let rho = random_mixed_state(4, rank, rank as u64)?;
        let spectrum: Vec<String> = rho.spectrum().iter().take(rank).map(|p| format!("{p:.3}")).collect();
        println!("rank {rank}: numerical rank {}, top eigenvalues [{}]", numerical_rank(&rho, RANK_TOL), spectrum.join(", "));
    }
    let pair = [random_mixed_state(4, 2, 1)?, random_mixed_state(4, 2, 2)?];
    println!("two independent rank-2 states span {} dimensions", joint_support_basis(&pair)?.len());
    Ok(())
}
