// Symbol JSON in, decomposition report JSON out.

use hardy_unitary::io::{parse_symbol, to_json_bytes, UnitaryPartReportJson};
use hardy_unitary::symbol::CircleGrid;
use hardy_unitary::unitary_part::toeplitz_unitary_part;

const SYMBOL: &str = r#"{
  "dim_out": 2,
  "dim_in": 2,
  "coeffs": [
    { "k": 0, "re": [[0, 0], [0, 1]], "im": [[0, 0], [0, 0]] },
    { "k": 1, "re": [[1, 0], [0, 0]], "im": [[0, 0], [0, 0]] }
  ]
}"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let sym = parse_symbol(SYMBOL)?;
    let report = toeplitz_unitary_part(&sym, 4, &CircleGrid::new(64)?, 1e-8)?;
    let json = UnitaryPartReportJson::new(&report, Some(7));
    let bytes = to_json_bytes(&json)?;
    let text = String::from_utf8(bytes)?;
    println!("{}", text.lines().take(14).collect::<Vec<_>>().join("\n"));
    println!("... ({} bytes)", text.len());
    assert_eq!(json.subspace.dim, 4);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
