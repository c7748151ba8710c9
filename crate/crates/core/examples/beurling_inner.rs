// Shift-invariant subspace Θ₀·(polynomials) for a rotated (1, z)/√2, and
// its recovery as an inner function up to a constant unitary.

use hardy_unitary::families::{rng, tilted_inner};
use hardy_unitary::linalg::haar_unitary;
use hardy_unitary::symbol::{is_inner, CircleGrid};
use hardy_unitary::unitary_part::{beurling_extract, range_projection_distance, theta_window_basis, Subspace};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let v = haar_unitary(&mut rng(5, 0), 2);
    let theta0 = tilted_inner();
    let theta0 = hardy_unitary::symbol::PolyMatrix::new(theta0.coeffs().iter().map(|m| &v * m).collect())?;
    let grid = CircleGrid::new(128)?;
    println!("Θ₀ inner: {}", is_inner(&theta0, &grid, 1e-12).inner);

    let window = 5;
    let m = Subspace::new(theta_window_basis(&theta0, window), 1e-10)?;
    let ex = beurling_extract(&m, 2, 1e-8)?;
    println!("window {window}: subspace dim {}, wandering dim {}", m.dim(), ex.theta.dim_in());
    println!("shift invariance residual {:.2e}", ex.shift_invariance);
    println!("recovered Θ has degree {}", ex.theta.degree());
    let distance = range_projection_distance(&ex.theta, &theta0, &grid);
    println!("range projection distance to Θ₀: {distance:.2e}");
    assert!(ex.consistent && distance < 1e-7);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
