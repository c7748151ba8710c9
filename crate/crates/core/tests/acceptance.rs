//! Acceptance criteria. Runs as a plain binary so that the PASS/FAIL lines
//! show up in `cargo test` output; exits nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hardy_unitary::colligation::{disc_grid, Colligation};
use hardy_unitary::families::{planted_block, random_contraction, random_inner, random_non_inner, rng};
use hardy_unitary::hardy::{toeplitz_apply_exact, HardyVector};
use hardy_unitary::io::{to_json_bytes, UnitaryPartReportJson};
use hardy_unitary::linalg::{
    block_diag, complex_gaussian, diag, haar_unitary, random_projection, identity, op_norm, unitarity_residual, CMatrix, CVector,
};
use hardy_unitary::scenarios::{run_scenario, scenario_bcl_example, sweep, ScenarioConfig, ScenarioResult};
use hardy_unitary::symbol::{is_inner, CircleGrid, PolyMatrix};
use hardy_unitary::unitary_part::{
    range_projection_distance, reducing_check, toeplitz_unitary_part, unitary_part_brute, unitary_part_matrix,
    verify_maincondn, window_brute_force,
};
use rand::Rng;

const TIME_LIMIT: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn all_pass(results: &[ScenarioResult]) -> Result<(), String> {
    for r in results {
        let failed: Vec<_> = r.failed_checks().map(|c| c.name.as_str()).collect();
        ensure(r.overall, || format!("{} [{}] seed {:?}: {failed:?}", r.scenario_id, r.instance, r.parameters.seed))?;
    }
    Ok(())
}

fn decomposition_oracle() -> Outcome {
    let tol = 1e-8;
    let (mut worst_angle, mut worst_residual) = (0.0f64, 0.0f64);
    for seed in 0..200u64 {
        let n = rng(seed, 99).random_range(1..=8);
        let planted = random_contraction(&mut rng(seed, 0), n);
        let part = unitary_part_matrix(&planted.t, tol).map_err(err)?;
        let brute = unitary_part_brute(&planted.t, tol, n).map_err(err)?;
        ensure(part.subspace.dim() == brute.dim(), || {
            format!("seed {seed}: refinement dim {} vs brute force {}", part.subspace.dim(), brute.dim())
        })?;
        ensure(part.subspace.dim() == planted.unitary_dim, || {
            format!("seed {seed}: dim {} vs planted {}", part.subspace.dim(), planted.unitary_dim)
        })?;
        let angle = part.subspace.max_principal_angle(&brute);
        worst_angle = worst_angle.max(angle);
        worst_residual = worst_residual.max(part.residuals.max());
        if !part.subspace.is_trivial() {
            let check = reducing_check(part.subspace.basis(), &planted.t, tol).map_err(err)?;
            worst_residual = worst_residual.max(check.commutator);
        }
    }
    ensure(worst_angle <= 1e-7, || format!("max principal angle {worst_angle:.3e}"))?;
    ensure(worst_residual <= 1e-8, || format!("max residual {worst_residual:.3e}"))?;
    Ok(format!("200 contractions, max angle {worst_angle:.1e}, max residual {worst_residual:.1e}"))
}

fn transfer_identities() -> Outcome {
    let points = disc_grid(64, 0.99);
    let (mut defect, mut norm) = (0.0f64, 0.0f64);
    for seed in 0..100u64 {
        let mut g = rng(seed, 0);
        let e = g.random_range(1..=6);
        let k = g.random_range(0..=6);
        let w = Colligation::random(&mut g, e, k);
        ensure(w.validate(1e-10).valid, || format!("seed {seed}: generated colligation not unitary"))?;
        let r = w.defect_identities(&points).map_err(err)?;
        defect = defect.max(r.max_defect1).max(r.max_defect2);
        norm = norm.max(r.max_norm);
    }
    ensure(defect <= 1e-10, || format!("defect residual {defect:.3e}"))?;
    ensure(norm <= 1.0 + 1e-9, || format!("max ‖τ(λ)‖ = {norm:.12}"))?;
    Ok(format!("100 colligations x 64 points, max defect {defect:.1e}, max ‖τ‖ − 1 = {:.1e}", norm - 1.0))
}

fn goor_suite() -> Outcome {
    let cfg = ScenarioConfig { window: 12, ..ScenarioConfig::default() };
    let results = sweep("goor", 1000, 50, &cfg).map_err(err)?;
    all_pass(&results)?;
    Ok(format!("{} scalar symbols, window 12, all trivial", results.len()))
}

fn planted_round_trip() -> Outcome {
    let (window, tol) = (8, 1e-8);
    let grid = CircleGrid::default();
    let (mut dist, mut u_err) = (0.0f64, 0.0f64);
    for seed in 0..50u64 {
        let mut g = rng(seed, 0);
        let d0 = g.random_range(1..=2);
        let d1 = g.random_range(1..=2);
        let block = planted_block(&mut g, d0, d1, &grid);
        let report = toeplitz_unitary_part(&block.symbol, window, &grid, tol).map_err(err)?;
        let brute = window_brute_force(&block.symbol, window, (d0 + d1) * window, tol).map_err(err)?;
        ensure(brute.dim() == d0 * window, || format!("seed {seed}: brute force dim {} vs {}", brute.dim(), d0 * window))?;
        ensure(report.subspace.dim() == brute.dim(), || {
            format!("seed {seed}: dim {} vs oracle {}", report.subspace.dim(), brute.dim())
        })?;
        let (theta, u) = match (&report.theta, &report.u_matrix) {
            (Some(t), Some(u)) => (t, u),
            _ => return Err(format!("seed {seed}: no Θ/U extracted ({:?})", report.note)),
        };
        let planted = PolyMatrix::constant(block.e0.clone());
        dist = dist.max(range_projection_distance(theta, &planted, &grid));
        ensure(theta.degree() == 0, || format!("seed {seed}: Θ of degree {}", theta.degree()))?;
        let t0 = &theta.coeffs()[0];
        u_err = u_err.max(op_norm(&(t0 * u * t0.adjoint() - block.w0_ambient())));
        let mc = verify_maincondn(&block.symbol, theta, u, &grid, tol).map_err(err)?;
        ensure(mc.holds, || format!("seed {seed}: maincondn residuals {mc:?}"))?;
    }
    ensure(dist <= 1e-7, || format!("range projection distance {dist:.3e}"))?;
    ensure(u_err <= 1e-8, || format!("U vs W0 {u_err:.3e}"))?;
    Ok(format!("50 block symbols, Θ distance {dist:.1e}, U error {u_err:.1e}"))
}

fn bcl_example() -> Outcome {
    let cfg = ScenarioConfig::default();
    let p_random = random_projection(&mut rng(5, 0), 2, 1);
    for (label, p) in [("P = diag(1, 0)", diag(&[1.0, 0.0])), ("random rank-one P", p_random)] {
        let r = scenario_bcl_example(label, &identity(2), &p, None, &cfg).map_err(err)?;
        all_pass(std::slice::from_ref(&r))?;
        ensure(r.records["part_dim"] == 8, || format!("{label}: part dim {}", r.records["part_dim"]))?;
        ensure(r.flags.iter().any(|f| f == "paper-discrepancy"), || format!("{label}: discrepancy flag missing"))?;
        for key in ["published_claim", "computed_subspace"] {
            ensure(r.records.contains_key(key), || format!("{label}: {key} not recorded"))?;
        }
    }
    Ok("dim 8 = (2 − 1)·8, Θ constant inclusion, U = 1, discrepancy flagged".into())
}

fn butz_suite() -> Outcome {
    let results = sweep("butz_equivalence", 3000, 20, &ScenarioConfig::default()).map_err(err)?;
    all_pass(&results)?;
    let mut products = 0;
    for r in &results {
        let expected = r.parameters.seed.is_some_and(|s| s.is_multiple_of(2));
        products += expected as usize;
        for key in ["condition_i", "condition_ii", "condition_iii"] {
            ensure(r.records.get(key).and_then(|v| v.as_bool()) == Some(expected), || {
                format!("seed {:?}: {key} should be {expected}", r.parameters.seed)
            })?;
        }
    }
    Ok(format!("20 instances ({products} product, {} non-product)", results.len() - products))
}

fn colligation_suite() -> Outcome {
    let cfg = ScenarioConfig::default();
    let prop = sweep("prop_ds", 4000, 30, &cfg).map_err(err)?;
    let main = sweep("analytic_main", 4000, 30, &cfg).map_err(err)?;
    all_pass(&prop)?;
    all_pass(&main)?;
    let mut worst = 0.0f64;
    for r in &prop {
        let c = r.check("witness_residual").ok_or("witness not checked")?;
        worst = worst.max(c.residual.unwrap_or(f64::INFINITY));
    }
    ensure(worst <= 1e-10, || format!("witness residual {worst:.3e}"))?;
    Ok(format!("30 + 30 planted colligations, witness residual {worst:.1e}"))
}

fn wold_dichotomy() -> Outcome {
    let results = sweep("wold_dichotomy", 5000, 20, &ScenarioConfig::default()).map_err(err)?;
    all_pass(&results)?;
    for r in &results {
        ensure(r.check("exactly_one_branch").is_some_and(|c| c.pass), || "branch check missing".into())?;
    }
    Ok("20 instances, exactly one branch each".into())
}

fn random_vector(g: &mut impl Rng, dim: usize, len: usize) -> HardyVector {
    let flat: CVector = complex_gaussian(g, dim * len, 1).column(0).into_owned();
    HardyVector::from_flat(dim, &flat).expect("length is a multiple of dim")
}

fn symbol_characterizations() -> Outcome {
    let grid = CircleGrid::default();
    let mut agreements = 0;
    for seed in 0..40u64 {
        let mut g = rng(seed, 0);
        let dim = g.random_range(1..=3);
        let degree = g.random_range(0..=2);
        let theta = if seed < 20 { random_inner(&mut g, dim, degree) } else { random_non_inner(&mut g, dim, degree) };
        let sym = theta.to_symbol();
        let adj = sym.adjoint();
        let (mut isometric, mut both) = (true, true);
        for _ in 0..100 {
            let h = random_vector(&mut g, dim, 6);
            let scale = h.norm();
            let fwd = toeplitz_apply_exact(&sym, &h).map_err(err)?;
            let back = toeplitz_apply_exact(&adj, &h).map_err(err)?;
            isometric &= (fwd.norm() - scale).abs() <= 1e-10 * scale;
            both &= (fwd.norm() - scale).abs() <= 1e-10 * scale && (back.norm() - scale).abs() <= 1e-10 * scale;
        }
        let inner = is_inner(&theta, &grid, 1e-10).inner;
        let unitary_constant = theta.degree() == 0 && unitarity_residual(&theta.coeffs()[0]) <= 1e-10;
        ensure(isometric == inner, || format!("seed {seed}: norm preservation {isometric}, inner {inner}"))?;
        ensure(both == unitary_constant, || format!("seed {seed}: two-sided {both}, unitary constant {unitary_constant}"))?;
        ensure(inner == (seed < 20), || format!("seed {seed}: generator produced the wrong class"))?;
        agreements += 1;
    }
    Ok(format!("{agreements} polynomials (20 inner, 20 not), 100 vectors each"))
}

fn reducing_property() -> Outcome {
    let tol = 1e-8;
    let mut reducing_count = 0;
    for seed in 0..500u64 {
        let mut g = rng(seed, 0);
        let n = g.random_range(2..=6);
        let r = g.random_range(1..n);
        let frame = haar_unitary(&mut g, n);
        let v = frame.columns(0, r).into_owned();
        let kind = g.random_range(0..3);
        let core = match kind {
            0 => block_diag(&[&complex_gaussian(&mut g, r, r), &complex_gaussian(&mut g, n - r, n - r)]),
            1 => {
                let mut m = complex_gaussian(&mut g, n, n);
                m.view_mut((r, 0), (n - r, r)).fill(Default::default());
                m
            }
            _ => complex_gaussian(&mut g, n, n),
        };
        let a: CMatrix = &frame * core * frame.adjoint();
        let check = reducing_check(&v, &a, tol).map_err(err)?;
        // Direct definition: A·ran V ⊆ ran V and A*·ran V ⊆ ran V, with
        // the least-squares coordinates X = V*AV reproducing AV.
        let av = &a * &v;
        let adv = a.adjoint() * &v;
        let scale = op_norm(&a).max(1.0);
        let fwd = op_norm(&(&av - &v * (v.adjoint() * &av))) <= tol * scale;
        let bwd = op_norm(&(&adv - &v * (v.adjoint() * &adv))) <= tol * scale;
        let direct = fwd && bwd;
        ensure(check.reducing == direct, || format!("seed {seed}: commutator {} vs direct {direct}", check.reducing))?;
        ensure(direct == (kind == 0), || format!("seed {seed}: kind {kind} but direct verdict {direct}"))?;
        reducing_count += direct as usize;
    }
    Ok(format!("500 pairs ({reducing_count} reducing), verdicts agree"))
}

fn calculus() -> Outcome {
    let cfg = ScenarioConfig::default();
    let mut results = run_scenario("cnu_calculus", 6000, &cfg).map_err(err)?;
    let extra = 10 - results.len() as u64;
    results.extend(sweep("cnu_calculus", 6001, extra, &cfg).map_err(err)?);
    all_pass(&results)?;
    let worst = results
        .iter()
        .filter_map(|r| r.check("calculus_norm").and_then(|c| c.residual))
        .fold(0.0f64, f64::max);
    Ok(format!("{} instances, max ‖u(T)‖ = {worst:.6}", results.len()))
}

fn determinism() -> Outcome {
    let cfg = ScenarioConfig::default();
    let a = to_json_bytes(&run_scenario("all", 7, &cfg).map_err(err)?).map_err(err)?;
    let b = to_json_bytes(&run_scenario("all", 7, &cfg).map_err(err)?).map_err(err)?;
    ensure(a == b, || "scenario reports differ between runs".into())?;

    let grid = CircleGrid::default();
    let report_bytes = || -> Result<Vec<u8>, String> {
        let block = planted_block(&mut rng(12, 0), 2, 1, &grid);
        let report = toeplitz_unitary_part(&block.symbol, 8, &grid, 1e-8).map_err(err)?;
        to_json_bytes(&UnitaryPartReportJson::new(&report, Some(12))).map_err(err)
    };
    ensure(report_bytes()? == report_bytes()?, || "decomposition reports differ".into())?;

    let exe = env!("CARGO_BIN_EXE_hardy-unitary");
    let dir = tempfile::tempdir().map_err(err)?;
    let out = dir.path().join("results");
    let mut trees = Vec::new();
    for _ in 0..2 {
        let status = Command::new(exe)
            .args(["scenario", "--scenario", "all", "--seed", "7", "--out"])
            .arg(&out)
            .output()
            .map_err(err)?;
        ensure(status.status.success(), || format!("cli exited with {:?}", status.status.code()))?;
        let mut files: Vec<_> = std::fs::read_dir(&out)
            .map_err(err)?
            .map(|e| e.map(|e| e.file_name()))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        files.sort();
        let contents = files.iter().map(|f| std::fs::read(out.join(f))).collect::<Result<Vec<_>, _>>().map_err(err)?;
        trees.push((files, contents));
    }
    ensure(trees[0] == trees[1], || "cli report files differ between runs".into())?;
    Ok(format!("library and cli reports byte-identical ({} files per run)", trees[0].0.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("decomposition oracle equivalence", decomposition_oracle),
        ("transfer identities", transfer_identities),
        ("Goor suite", goor_suite),
        ("planted round trip", planted_round_trip),
        ("BCL example", bcl_example),
        ("Butz equivalence suite", butz_suite),
        ("colligation propositions", colligation_suite),
        ("Wold dichotomy", wold_dichotomy),
        ("isometry/unitary symbol characterizations", symbol_characterizations),
        ("reducing subspace property", reducing_property),
        ("calculus", calculus),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > TIME_LIMIT => Err(format!("{msg}; took {elapsed:.1?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} ({elapsed:.2?})", i + 1),
            Err(msg) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {msg} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
