use rand::Rng;

use super::{Recorder, ScenarioConfig, ScenarioResult};
use crate::error::{Error, Result};
use crate::families::rng;
use crate::linalg::{c, eigenvalues, haar_unitary, isometry_residual, zeros, CMatrix};
use crate::symbol::PolyMatrix;
use crate::unitary_part::{cdot0_test, toeplitz_unitary_part};

const ID: &str = "wold_dichotomy";

/// For an analytic symbol with isometric `Φ(0)`, exactly one of: the
/// Toeplitz operator has a unitary part, or `Φ(0)` is `C·0`. The branch is
/// cross-checked against the spectrum of `Φ(0)`.
pub fn scenario_wold_dichotomy(
    instance: &str,
    poly: &PolyMatrix,
    seed: Option<u64>,
    cfg: &ScenarioConfig,
) -> Result<ScenarioResult> {
    if poly.dim_in() != poly.dim_out() {
        return Err(Error::NotSquare { rows: poly.dim_out(), cols: poly.dim_in() });
    }
    let a = &poly.coeffs()[0];
    let residual = isometry_residual(a);
    if residual > cfg.tol {
        return Err(Error::Precondition(format!("Φ(0) is not isometric (residual {residual:.3e})")));
    }
    let mut rec = Recorder::new(ID, instance, vec![poly.dim_in()], seed, cfg);
    let sym = poly.to_symbol();
    let report = toeplitz_unitary_part(&sym, cfg.window, &cfg.grid, cfg.tol)?;
    let unitary_branch = !report.is_trivial();
    let c0 = cdot0_test(a, cfg.tol)?;
    rec.record("unitary_part_dim", report.subspace.dim());
    rec.record("spectral_radius", c0.spectral_radius);
    rec.record("power_norm_64", c0.power_norm_64);
    rec.record("unitary_branch", unitary_branch);
    rec.record("cdot0_branch", c0.cdot0);
    rec.check("exactly_one_branch", unitary_branch != c0.cdot0);

    let on_circle = eigenvalues(a).iter().all(|l| (l.norm() - 1.0).abs() <= cfg.tol.sqrt());
    rec.check("branch_matches_spectrum", unitary_branch == on_circle);
    Ok(rec.finish())
}

fn cyclic_permutation(n: usize) -> CMatrix {
    let mut p = zeros(n, n);
    for i in 0..n {
        p[((i + 1) % n, i)] = c(1.0, 0.0);
    }
    p
}

/// Constant isometries alternate between Haar unitaries and cyclic
/// permutations: a contractive analytic symbol with `Φ(0)` a square
/// isometry has no room for higher coefficients.
pub(super) fn seeded_instance(seed: u64, cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    let mut g = rng(seed, 0);
    let n = g.random_range(1..=4);
    let (label, a) =
        if seed.is_multiple_of(2) { ("Haar unitary", haar_unitary(&mut g, n)) } else { ("cyclic permutation", cyclic_permutation(n)) };
    scenario_wold_dichotomy(label, &PolyMatrix::constant(a), Some(seed), cfg)
}

pub(super) fn default_instances(seed: u64, cfg: &ScenarioConfig) -> Result<Vec<ScenarioResult>> {
    let u = haar_unitary(&mut rng(seed, 0), 2);
    Ok(vec![
        scenario_wold_dichotomy("Haar unitary on C^2", &PolyMatrix::constant(u), Some(seed), cfg)?,
        scenario_wold_dichotomy("swap on C^2", &PolyMatrix::constant(cyclic_permutation(2)), None, cfg)?,
        scenario_wold_dichotomy("3-cycle", &PolyMatrix::constant(cyclic_permutation(3)), None, cfg)?,
    ])
}
