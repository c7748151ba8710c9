use rand::Rng;

use super::{Recorder, ScenarioConfig, ScenarioResult};
use crate::error::{Error, Result};
use crate::families::{half_contraction, rng};
use crate::linalg::{c, diag, haar_unitary, identity, op_norm, random_projection, unit};
use crate::symbol::{pointwise_unitarity_mask, shift_projection_symbol, MatrixSymbol};

const ID: &str = "laurent";

/// `max_k ‖(Φ*Φ − I)_k‖` and the same for `ΦΦ*`, over Fourier coefficients.
fn exact_unitarity_residual(sym: &MatrixSymbol) -> Result<f64> {
    let d = sym.dim_in();
    let id = MatrixSymbol::constant(identity(d));
    let left = sym.adjoint().multiply(sym)?.add(&id.scale(c(-1.0, 0.0)))?;
    let right = sym.multiply(&sym.adjoint())?.add(&id.scale(c(-1.0, 0.0)))?;
    Ok(left.coeffs().chain(right.coeffs()).map(|(_, m)| op_norm(m)).fold(0.0, f64::max))
}

/// Measure of the set where `Φ(e^{it})` is unitary. For trigonometric
/// polynomials it is 0 or 1; full measure must agree with the exact
/// coefficient identity `Φ*Φ = ΦΦ* = I`.
pub fn scenario_laurent(
    instance: &str,
    sym: &MatrixSymbol,
    expected: Option<f64>,
    seed: Option<u64>,
    cfg: &ScenarioConfig,
) -> Result<ScenarioResult> {
    if !sym.is_square() {
        return Err(Error::NotSquare { rows: sym.dim_out(), cols: sym.dim_in() });
    }
    let mut rec = Recorder::new(ID, instance, vec![sym.dim_in()], seed, cfg);
    let mask = pointwise_unitarity_mask(sym, &cfg.grid, cfg.tol)?;
    let all = mask.flags.iter().all(|f| *f);
    let none = mask.flags.iter().all(|f| !*f);
    let measure = if all { 1.0 } else { mask.measure };
    rec.record("measure", measure);
    rec.check("measure_is_zero_or_one", all || none);

    let exact = exact_unitarity_residual(sym)?;
    rec.record("coefficient_identity_residual", exact);
    rec.check("mask_matches_coefficient_identity", all == (exact <= cfg.tol));
    if let Some(m) = expected {
        rec.check_le("measure_error", (measure - m).abs(), 0.0);
    }
    Ok(rec.finish())
}

/// Even seeds: `U(zP + P⊥)` (measure 1). Odd seeds: grid sup ½ (measure 0).
pub(super) fn seeded_instance(seed: u64, cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    let mut g = rng(seed, 0);
    let d = g.random_range(1..=3);
    if seed.is_multiple_of(2) {
        let u = haar_unitary(&mut g, d);
        let rank = g.random_range(0..=d);
        let p = random_projection(&mut g, d, rank);
        let sym = MatrixSymbol::constant(u).multiply(&shift_projection_symbol(&p))?;
        scenario_laurent("U(zP + P⊥)", &sym, Some(1.0), Some(seed), cfg)
    } else {
        let sym = half_contraction(&mut g, d, &cfg.grid);
        scenario_laurent("grid sup 1/2", &sym, Some(0.0), Some(seed), cfg)
    }
}

pub(super) fn default_instances(seed: u64, cfg: &ScenarioConfig) -> Result<Vec<ScenarioResult>> {
    let zp = shift_projection_symbol(&diag(&[1.0, 0.0]));
    let half = MatrixSymbol::constant(identity(2) * c(0.5, 0.0));
    let mixed = MatrixSymbol::new(2, 2, [(1, unit(2, 2, 0, 0)), (0, unit(2, 2, 1, 1) * c(0.5, 0.0))])?;
    Ok(vec![
        scenario_laurent("zP + P⊥", &zp, Some(1.0), None, cfg)?,
        scenario_laurent("I/2", &half, Some(0.0), None, cfg)?,
        scenario_laurent("diag(z, 1/2)", &mixed, Some(0.0), None, cfg)?,
        seeded_instance(seed & !1, cfg)?,
        seeded_instance(seed | 1, cfg)?,
    ])
}
