// u(T_Φ) for a c.n.u. analytic Toeplitz contraction and a polynomial u
// with |u| < 1 on the circle stays a c.n.u. contraction on the window.

use hardy_unitary::linalg::c;
use hardy_unitary::symbol::{CircleGrid, MatrixSymbol};
use hardy_unitary::unitary_part::{poly_calculus, unitary_part_matrix, ScalarPoly};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let phi = MatrixSymbol::scalar([(0, c(0.25, 0.0)), (1, c(0.5, 0.0))]);
    let u = ScalarPoly::from_real(&[0.0, 0.25, 0.25]);
    let grid = CircleGrid::new(256)?;
    let section = poly_calculus(&phi, &u, 10, &grid, 1e-8)?;
    let part = unitary_part_matrix(&section.matrix, 1e-8)?;
    println!("sup |u| = {:.4}, ‖u(T)‖ = {:.6}", section.sup_u, section.norm);
    println!("unitary part of u(T) on the window: dim {}", part.subspace.dim());
    assert!(part.subspace.is_trivial());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
