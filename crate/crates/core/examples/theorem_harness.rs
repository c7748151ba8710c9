// Every scenario with its default instances.

use hardy_unitary::scenarios::{run_scenario, ScenarioConfig, DEFAULT_SEED};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let results = run_scenario("all", DEFAULT_SEED, &ScenarioConfig::default())?;
    for r in &results {
        println!("{} {:<18} {}", if r.overall { "PASS" } else { "FAIL" }, r.scenario_id, r.instance);
    }
    let failed = results.iter().filter(|r| !r.overall).count();
    println!("{} instances, {failed} failed", results.len());
    assert_eq!(failed, 0);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
