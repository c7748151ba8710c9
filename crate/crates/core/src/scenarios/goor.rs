use rand::Rng;

use super::{Recorder, ScenarioConfig, ScenarioResult};
use crate::error::{Error, Result};
use crate::families::{goor_symbol, rng};
use crate::linalg::c;
use crate::symbol::{sup_norm_estimate, MatrixSymbol};
use crate::unitary_part::{toeplitz_unitary_part, window_brute_force};

const ID: &str = "goor";

/// Random nonconstant scalar trigonometric polynomial of band `degree`,
/// scaled to grid sup norm 1; its Toeplitz operator must be c.n.u.
pub fn scenario_goor(seed: u64, degree: usize, cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    if degree == 0 {
        return Err(Error::Precondition("degree must be at least 1".into()));
    }
    let sym = goor_symbol(&mut rng(seed, 0), degree, &cfg.grid);
    scenario_goor_symbol(&format!("random band {degree}"), &sym, Some(seed), cfg)
}

/// The same checks on a given scalar symbol, which must be nonconstant.
pub fn scenario_goor_symbol(
    instance: &str,
    sym: &MatrixSymbol,
    seed: Option<u64>,
    cfg: &ScenarioConfig,
) -> Result<ScenarioResult> {
    if sym.dim_in() != 1 || sym.dim_out() != 1 {
        return Err(Error::Precondition("the Goor scenario takes a scalar symbol".into()));
    }
    if sym.coeffs().all(|(k, _)| k == 0) {
        return Err(Error::Precondition("constant symbols are excluded".into()));
    }
    let mut rec = Recorder::new(ID, instance, vec![1], seed, cfg);
    let sup = sup_norm_estimate(sym, &cfg.grid);
    rec.check_le("grid_sup_norm_at_most_one", sup, 1.0 + cfg.tol);
    rec.record("band", sym.band());

    let report = toeplitz_unitary_part(sym, cfg.window, &cfg.grid, cfg.tol)?;
    rec.check_le("unitary_part_dim", report.subspace.dim() as f64, 0.0);
    let brute = window_brute_force(sym, cfg.window, cfg.window, cfg.tol)?;
    rec.check_le("brute_force_dim", brute.dim() as f64, 0.0);
    Ok(rec.finish())
}

pub(super) fn seeded_instance(seed: u64, cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    let band = rng(seed, 1).random_range(1..=4);
    scenario_goor(seed, band, cfg)
}

pub(super) fn default_instances(seed: u64, cfg: &ScenarioConfig) -> Result<Vec<ScenarioResult>> {
    let cosine = MatrixSymbol::scalar([(1, c(0.5, 0.0)), (-1, c(0.5, 0.0))]);
    let shift = MatrixSymbol::scalar([(1, c(1.0, 0.0))]);
    let affine = MatrixSymbol::scalar([(1, c(0.5, 0.0)), (0, c(0.25, 0.0))]);
    Ok(vec![
        scenario_goor_symbol("(z + 1/z)/2", &cosine, None, cfg)?,
        scenario_goor_symbol("z", &shift, None, cfg)?,
        scenario_goor_symbol("z/2 + 1/4", &affine, None, cfg)?,
        scenario_goor(seed, 3, cfg)?,
    ])
}
