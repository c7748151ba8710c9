// Unitary part of a block Toeplitz operator: a rotation block next to a
// strict contraction. The part is H² of the rotation block, Θ is the
// constant inclusion and U is the rotation.

use hardy_unitary::linalg::{block_diag, c, unit, zeros, CMatrix};
use hardy_unitary::symbol::{CircleGrid, MatrixSymbol};
use hardy_unitary::unitary_part::{toeplitz_unitary_part, verify_maincondn};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (s, co) = 1f64.sin_cos();
    let rotation = CMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]);
    let constant = MatrixSymbol::constant(block_diag(&[&rotation, &zeros(1, 1)]));
    let half_z = MatrixSymbol::monomial(1, unit(3, 3, 2, 2) * c(0.5, 0.0));
    let phi = constant.add(&half_z)?;

    let grid = CircleGrid::new(256)?;
    let report = toeplitz_unitary_part(&phi, 6, &grid, 1e-8)?;
    println!("window 6, d = 3: unitary part has dim {}", report.subspace.dim());
    println!("classification: {:?}", report.classification);

    let theta = report.theta.as_ref().expect("nontrivial part");
    let u = report.u_matrix.as_ref().expect("nontrivial part");
    println!("Θ has degree {}, U =\n{u:.6}", theta.degree());
    let check = verify_maincondn(&phi, theta, u, &grid, 1e-8)?;
    println!("ΦΘ = ΘU residual {:.2e}, Φ*Θ = ΘU* residual {:.2e}", check.residual_fwd, check.residual_adj);
    assert!(check.holds);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
