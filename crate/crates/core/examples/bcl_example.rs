// Φ = zP + P⊥ on C². The unitary part is every polynomial with values in
// ran P⊥, not only the constants.

use hardy_unitary::linalg::{diag, identity};
use hardy_unitary::scenarios::{scenario_bcl_example, ScenarioConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ScenarioConfig::default();
    let result = scenario_bcl_example("U = I, P = diag(1, 0)", &identity(2), &diag(&[1.0, 0.0]), None, &cfg)?;
    for check in &result.checks {
        println!("{:<5} {:<28} {:?}", if check.pass { "ok" } else { "FAIL" }, check.name, check.residual);
    }
    println!("part dim: {}", result.records["part_dim"]);
    println!("claim:    {}", result.records["published_claim"]);
    println!("computed: {}", result.records["computed_subspace"]);
    println!("flags:    {:?}", result.flags);
    assert!(result.overall);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
