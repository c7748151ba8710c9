// Transfer function of a unitary colligation: the defect identities on a
// disc grid, and the polynomial form when D is nilpotent.

use hardy_unitary::colligation::{disc_grid, Colligation};
use hardy_unitary::families::{nilpotent_colligation, rng};
use hardy_unitary::linalg::c;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let w = Colligation::random(&mut rng(2, 0), 3, 2);
    println!("random colligation: {:?}", w.validate(1e-10));
    let report = w.defect_identities(&disc_grid(64, 0.99))?;
    println!(
        "64 disc points: defect residuals {:.2e} / {:.2e}, max ‖τ(λ)‖ = {:.12}",
        report.max_defect1, report.max_defect2, report.max_norm
    );

    let nil = nilpotent_colligation(&mut rng(2, 1), 3);
    let poly = nil.polynomial(1e-12)?;
    println!("nilpotent D: τ is a polynomial of degree {}", poly.degree());
    let lambda = c(0.3, -0.4);
    let gap = (poly.eval(lambda) - nil.tau_eval(lambda)?).norm();
    println!("polynomial vs resolvent at λ = {lambda}: {gap:.2e}");
    assert!(gap < 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
