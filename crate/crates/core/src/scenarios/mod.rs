//! Theorem harness. Each scenario builds instances, runs the decomposition
//! machinery and reports named checks with residuals.
//!
//! Implications are asserted only in the proven direction. Data about the
//! converse is kept under `records` and never affects `overall`.

mod bcl;
mod butz;
mod calculus;
mod colligations;
mod goor;
mod laurent;
mod wold;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::io::SCHEMA;
use crate::linalg::{column_space, identity, op_norm, repeat_diag, CMatrix, DEFAULT_TOL};
use crate::symbol::{CircleGrid, PolyMatrix};
use crate::unitary_part::theta_window_basis;

pub use bcl::{scenario_bcl_example, scenario_bcl_theorem};
pub use butz::{scenario_butz_equivalence, ButzInstance};
pub use calculus::scenario_cnu_calculus;
pub use colligations::{scenario_analytic_main, scenario_prop_ds, WITNESS_POINTS, WITNESS_TOL};
pub use goor::{scenario_goor, scenario_goor_symbol};
pub use laurent::scenario_laurent;
pub use wold::scenario_wold_dichotomy;

/// Ids accepted by [`run_scenario`], besides `"all"`.
pub const SCENARIO_IDS: [&str; 9] = [
    "goor",
    "bcl_example",
    "butz_equivalence",
    "prop_ds",
    "wold_dichotomy",
    "analytic_main",
    "bcl_theorem",
    "laurent",
    "cnu_calculus",
];

pub const DEFAULT_WINDOW: usize = 8;
pub const DEFAULT_SEED: u64 = 20240101;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig {
    pub window: usize,
    pub grid: CircleGrid,
    pub tol: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self { window: DEFAULT_WINDOW, grid: CircleGrid::default(), tol: DEFAULT_TOL }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub dims: Vec<usize>,
    pub seed: Option<u64>,
    pub window: usize,
    pub grid: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Measured quantity, when the check compares one against a tolerance.
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub schema: String,
    pub scenario_id: String,
    pub instance: String,
    pub parameters: Parameters,
    pub checks: Vec<Check>,
    /// Values reported but not asserted.
    pub records: BTreeMap<String, Value>,
    pub flags: Vec<String>,
    pub overall: bool,
}

impl ScenarioResult {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Accumulates checks for one scenario instance.
pub(crate) struct Recorder {
    result: ScenarioResult,
}

impl Recorder {
    pub(crate) fn new(id: &str, instance: &str, dims: Vec<usize>, seed: Option<u64>, cfg: &ScenarioConfig) -> Self {
        Self {
            result: ScenarioResult {
                schema: SCHEMA.to_string(),
                scenario_id: id.to_string(),
                instance: instance.to_string(),
                parameters: Parameters { dims, seed, window: cfg.window, grid: cfg.grid.size(), tol: cfg.tol },
                checks: Vec::new(),
                records: BTreeMap::new(),
                flags: Vec::new(),
                overall: false,
            },
        }
    }

    pub(crate) fn check(&mut self, name: &str, pass: bool) -> bool {
        self.result.checks.push(Check { name: name.to_string(), residual: None, tolerance: None, pass });
        pass
    }

    pub(crate) fn check_le(&mut self, name: &str, residual: f64, tolerance: f64) -> bool {
        let pass = residual <= tolerance;
        self.result.checks.push(Check {
            name: name.to_string(),
            residual: Some(residual),
            tolerance: Some(tolerance),
            pass,
        });
        pass
    }

    pub(crate) fn record<T: Serialize>(&mut self, key: &str, value: T) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.result.records.insert(key.to_string(), v);
    }

    pub(crate) fn flag(&mut self, flag: &str) {
        self.result.flags.push(flag.to_string());
    }

    pub(crate) fn finish(mut self) -> ScenarioResult {
        self.result.overall = self.result.checks.iter().all(|c| c.pass);
        self.result
    }
}

/// Window basis of `H²_{ran e}`: polynomials of degree `< window` with
/// coefficients in the range of the isometry `e`.
pub fn window_of(e: &CMatrix, window: usize) -> CMatrix {
    theta_window_basis(&PolyMatrix::constant(e.clone()), window)
}

/// Orthonormal basis of the span of all coefficient vectors of the columns
/// of `q` (degree-major flattening, `dim` entries per coefficient).
pub fn coefficient_span(q: &CMatrix, dim: usize, threshold: f64) -> CMatrix {
    let window = q.nrows() / dim;
    let mut coeffs = CMatrix::zeros(dim, window * q.ncols());
    for j in 0..q.ncols() {
        for k in 0..window {
            coeffs.view_mut((0, j * window + k), (dim, 1)).copy_from(&q.view((k * dim, j), (dim, 1)));
        }
    }
    column_space(&coeffs, threshold)
}

/// `‖Q*(I_N ⊗ M)Q − I‖`: how far the constant Toeplitz operator with
/// Gram symbol `M` is from preserving norms on `ran Q`.
pub fn gram_residual(q: &CMatrix, m: &CMatrix, window: usize) -> f64 {
    if q.ncols() == 0 {
        return 0.0;
    }
    op_norm(&(q.adjoint() * repeat_diag(m, window) * q - identity(q.ncols())))
}

fn seeded<F>(seed: u64, count: u64, f: F) -> Result<Vec<ScenarioResult>>
where
    F: Fn(u64) -> Result<ScenarioResult>,
{
    (0..count).map(|k| f(seed.wrapping_add(k))).collect()
}

/// Runs the default instance set of one scenario (or every scenario for
/// `"all"`).
pub fn run_scenario(id: &str, seed: u64, cfg: &ScenarioConfig) -> Result<Vec<ScenarioResult>> {
    match id {
        "all" => {
            let mut out = Vec::new();
            for id in SCENARIO_IDS {
                out.extend(run_scenario(id, seed, cfg)?);
            }
            Ok(out)
        }
        "goor" => goor::default_instances(seed, cfg),
        "bcl_example" => bcl::default_examples(seed, cfg),
        "butz_equivalence" => butz::default_instances(seed, cfg),
        "prop_ds" => colligations::default_prop_ds(seed, cfg),
        "wold_dichotomy" => wold::default_instances(seed, cfg),
        "analytic_main" => colligations::default_analytic_main(seed, cfg),
        "bcl_theorem" => bcl::default_theorem(seed, cfg),
        "laurent" => laurent::default_instances(seed, cfg),
        "cnu_calculus" => calculus::default_instances(seed, cfg),
        other => Err(Error::Precondition(format!("unknown scenario {other:?}"))),
    }
}

pub fn is_known(id: &str) -> bool {
    id == "all" || SCENARIO_IDS.contains(&id)
}

/// Seeded sweep: `count` instances of `id`'s randomized family, seeds
/// `seed, seed + 1, …`.
pub fn sweep(id: &str, seed: u64, count: u64, cfg: &ScenarioConfig) -> Result<Vec<ScenarioResult>> {
    match id {
        "goor" => seeded(seed, count, |s| goor::seeded_instance(s, cfg)),
        "butz_equivalence" => seeded(seed, count, |s| butz::seeded_instance(s, cfg)),
        "prop_ds" => seeded(seed, count, |s| colligations::seeded_prop_ds(s, cfg)),
        "analytic_main" => seeded(seed, count, |s| colligations::seeded_analytic_main(s, cfg)),
        "wold_dichotomy" => seeded(seed, count, |s| wold::seeded_instance(s, cfg)),
        "bcl_theorem" => seeded(seed, count, |s| bcl::seeded_theorem(s, cfg)),
        "cnu_calculus" => seeded(seed, count, |s| calculus::seeded_instance(s, cfg)),
        "laurent" => seeded(seed, count, |s| laurent::seeded_instance(s, cfg)),
        "bcl_example" => seeded(seed, count, |s| bcl::seeded_example(s, cfg)),
        other => Err(Error::Precondition(format!("no seeded family for {other:?}"))),
    }
}
