use rand::Rng;

use super::{Recorder, ScenarioConfig, ScenarioResult};
use crate::error::Result;
use crate::families::{goor_analytic, rng, scale_to_sup};
use crate::linalg::{c, complex_gaussian, unit};
use crate::symbol::MatrixSymbol;
use crate::unitary_part::{poly_calculus, toeplitz_unitary_part, unitary_part_matrix, window_brute_force, ScalarPoly};

const ID: &str = "cnu_calculus";
/// Slack on `‖u(T)‖ ≤ 1`.
pub const CALCULUS_NORM_SLACK: f64 = 1e-9;

/// `T_Φ` is c.n.u. on the window, and so is the contraction `u(T_Φ)`.
pub fn scenario_cnu_calculus(
    instance: &str,
    sym: &MatrixSymbol,
    u: &ScalarPoly,
    seed: Option<u64>,
    cfg: &ScenarioConfig,
) -> Result<ScenarioResult> {
    let d = sym.dim_in();
    let mut rec = Recorder::new(ID, instance, vec![d], seed, cfg);
    let report = toeplitz_unitary_part(sym, cfg.window, &cfg.grid, cfg.tol)?;
    rec.check_le("symbol_part_dim", report.subspace.dim() as f64, 0.0);
    let brute = window_brute_force(sym, cfg.window, d * cfg.window, cfg.tol)?;
    rec.check_le("symbol_brute_force_dim", brute.dim() as f64, 0.0);

    let section = poly_calculus(sym, u, cfg.window, &cfg.grid, cfg.tol)?;
    rec.record("sup_u", section.sup_u);
    rec.check_le("calculus_norm", section.norm, 1.0 + CALCULUS_NORM_SLACK);
    let part = unitary_part_matrix(&section.matrix, cfg.tol)?;
    rec.check_le("calculus_part_dim", part.subspace.dim() as f64, 0.0);
    Ok(rec.finish())
}

/// Random analytic Goor symbol and a random `u` with `sup |u| = 0.9`.
pub(super) fn seeded_instance(seed: u64, cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    let mut g = rng(seed, 0);
    let degree = g.random_range(1..=3);
    let sym = goor_analytic(&mut g, degree, &cfg.grid);
    let u_degree = g.random_range(1..=3);
    let raw = complex_gaussian(&mut g, u_degree + 1, 1);
    let coeffs: Vec<_> = raw.iter().copied().collect();
    let as_symbol = MatrixSymbol::scalar(coeffs.iter().enumerate().map(|(k, z)| (k as i64, *z)));
    let scaled = scale_to_sup(&as_symbol, &cfg.grid, 0.9);
    let u = ScalarPoly((0..=u_degree as i64).map(|k| scaled.coeff(k).map_or(c(0.0, 0.0), |m| m[(0, 0)])).collect());
    scenario_cnu_calculus("random analytic Goor", &sym, &u, Some(seed), cfg)
}

pub(super) fn default_instances(seed: u64, cfg: &ScenarioConfig) -> Result<Vec<ScenarioResult>> {
    let goor = MatrixSymbol::scalar([(0, c(0.25, 0.0)), (1, c(0.5, 0.0))]);
    let half = MatrixSymbol::scalar([(0, c(0.5, 0.0))]);
    let mixed = MatrixSymbol::new(2, 2, [(1, unit(2, 2, 0, 0) * c(0.5, 0.0)), (0, unit(2, 2, 1, 1) * c(1.0 / 3.0, 0.0))])?;
    Ok(vec![
        scenario_cnu_calculus("z/2 + 1/4, u = w/2", &goor, &ScalarPoly::from_real(&[0.0, 0.5]), None, cfg)?,
        scenario_cnu_calculus("I/2, u = w^2/2", &half, &ScalarPoly::from_real(&[0.0, 0.0, 0.5]), None, cfg)?,
        scenario_cnu_calculus(
            "diag(z/2, 1/3), u = (w + w^2)/4",
            &mixed,
            &ScalarPoly::from_real(&[0.0, 0.25, 0.25]),
            None,
            cfg,
        )?,
        seeded_instance(seed, cfg)?,
    ])
}
