// Unitary part of a finite contraction, checked against the brute-force
// kernel intersection.

use hardy_unitary::families::{random_contraction, rng};
use hardy_unitary::unitary_part::{unitary_part_brute, unitary_part_matrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let planted = random_contraction(&mut rng(11, 0), 6);
    let part = unitary_part_matrix(&planted.t, 1e-8)?;
    let brute = unitary_part_brute(&planted.t, 1e-8, 6)?;

    println!("planted unitary block: {}", planted.unitary_dim);
    println!("refinement: dim {} after {} sweeps", part.subspace.dim(), part.iterations);
    println!("brute force: dim {}", brute.dim());
    println!("principal angle: {:.2e}", part.subspace.max_principal_angle(&brute));
    println!("residuals: {:?}", part.residuals);
    assert_eq!(part.subspace.dim(), planted.unitary_dim);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
