use serde::Serialize;

use super::beurling::{beurling_extract, extract_constant_unitary, BeurlingExtraction};
use super::matrix::{norm_preserving, part_residuals, refine, PartResiduals};
use super::Subspace;
use crate::error::{Error, Result};
use crate::hardy::{laurent_apply_exact, toeplitz_window_matrix, HardyVector, LaurentVector};
use crate::linalg::{identity, normalize_column_phases, null_space, op_norm, zeros, CMatrix, CVector};
use crate::symbol::{sup_norm_estimate, CircleGrid, MatrixSymbol, PolyMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// No unitary vectors in the window.
    Trivial,
    /// `Θ` and `U` found with every residual within tolerance.
    ConstantType,
    /// A nonzero part was found but `Θ` or `U` failed a postcondition.
    ExtractionInconclusive,
}

/// Per-subspace evidence that the computed part is sound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certification {
    /// Invariance and unitarity of the exact Toeplitz action on the part.
    pub part: PartResiduals,
    /// Norm of the anti-analytic coefficients of `L_Φ h` and `L_{Φ*} h` over
    /// unit vectors `h` of the part (zero when `L_Φ h = T_Φ h`).
    pub laurent_leak: f64,
    /// How far `z·(M ∩ V_{N−1})` sticks out of `M`; `None` when the part is
    /// trivial or the extraction refused the subspace.
    pub shift_invariance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryPartReport {
    pub dim: usize,
    pub band: usize,
    pub window: usize,
    pub grid: usize,
    pub tol: f64,
    pub sup_norm_estimate: f64,
    /// Refinement sweeps.
    pub iterations: usize,
    /// Part inside the polynomials of degree `< window`, flattened
    /// degree-major.
    pub subspace: Subspace,
    pub theta: Option<PolyMatrix>,
    pub u_matrix: Option<CMatrix>,
    pub residual_intertwine_fwd: f64,
    pub residual_intertwine_adj: f64,
    pub residual_inner: f64,
    pub certification: Certification,
    pub beurling: Option<BeurlingExtraction>,
    pub classification: Classification,
    /// Why extraction was inconclusive, when it was.
    pub note: Option<String>,
}

impl UnitaryPartReport {
    pub fn is_trivial(&self) -> bool {
        self.subspace.is_trivial()
    }

    /// The computed part as polynomial vectors.
    pub fn basis_vectors(&self) -> Vec<HardyVector> {
        let q = self.subspace.basis();
        (0..q.ncols())
            .map(|j| HardyVector::from_flat(self.dim, &q.column(j).into_owned()).expect("window is a multiple of d"))
            .collect()
    }
}

fn laurent_leak(sym: &MatrixSymbol, q: &CMatrix, dim: usize) -> Result<f64> {
    if q.ncols() == 0 || sym.band() == 0 {
        return Ok(0.0);
    }
    let band = sym.band();
    let adj = sym.adjoint();
    let mut leaks = zeros(2 * band * dim, q.ncols());
    for j in 0..q.ncols() {
        let h = LaurentVector::from_hardy(&HardyVector::from_flat(dim, &q.column(j).into_owned())?);
        for (slot, s) in [sym, &adj].into_iter().enumerate() {
            let image = laurent_apply_exact(s, &h)?;
            for k in 0..band {
                let idx = -(k as i64) - 1;
                let coeff = image.coeff(idx).cloned().unwrap_or_else(|| CVector::zeros(dim));
                leaks.view_mut(((slot * band + k) * dim, j), (dim, 1)).copy_from(&coeff);
            }
        }
    }
    Ok(op_norm(&leaks))
}

/// Largest subspace of the polynomials of degree `< window` that reduces
/// `T_Φ` and on which `T_Φ` is unitary, computed against the exact action
/// (images live in degree `< window + band`, never truncated).
///
/// The answer is sound (a subspace of the true unitary part) but only
/// complete up to what fits in the window.
pub fn toeplitz_unitary_part(
    sym: &MatrixSymbol,
    window: usize,
    grid: &CircleGrid,
    tol: f64,
) -> Result<UnitaryPartReport> {
    if !sym.is_square() {
        return Err(Error::NotSquare { rows: sym.dim_out(), cols: sym.dim_in() });
    }
    if window == 0 {
        return Err(Error::Precondition("window must be at least 1".into()));
    }
    if grid.size() <= 2 * sym.band() {
        return Err(Error::Precondition(format!(
            "grid of {} points is too coarse for band {}",
            grid.size(),
            sym.band()
        )));
    }
    let sup = sup_norm_estimate(sym, grid);
    if sup > 1.0 + tol {
        return Err(Error::NotContractive { norm: sup, tol });
    }

    let dim = sym.dim_in();
    let fwd = toeplitz_window_matrix(sym, window);
    let adj = toeplitz_window_matrix(&sym.adjoint(), window);
    let start = norm_preserving(&fwd, Some(&adj), tol);
    let (mut q, iterations) = refine(&fwd, Some(&adj), start, tol);
    normalize_column_phases(&mut q);

    let certification = Certification {
        part: part_residuals(&fwd, &adj, &q),
        laurent_leak: laurent_leak(sym, &q, dim)?,
        shift_invariance: None,
    };
    let mut report = UnitaryPartReport {
        dim,
        band: sym.band(),
        window,
        grid: grid.size(),
        tol,
        sup_norm_estimate: sup,
        iterations,
        subspace: Subspace::from_orthonormal(q, tol),
        theta: None,
        u_matrix: None,
        residual_intertwine_fwd: 0.0,
        residual_intertwine_adj: 0.0,
        residual_inner: 0.0,
        certification,
        beurling: None,
        classification: Classification::Trivial,
        note: None,
    };
    if report.subspace.is_trivial() {
        return Ok(report);
    }

    report.classification = Classification::ExtractionInconclusive;
    let extraction = match beurling_extract(&report.subspace, dim, tol) {
        Ok(ex) => ex,
        Err(err) => {
            report.note = Some(err.to_string());
            return Ok(report);
        }
    };
    report.certification.shift_invariance = Some(extraction.shift_invariance);
    let unitary = extract_constant_unitary(sym, &extraction.theta, grid)?;
    report.residual_intertwine_fwd = unitary.residual_fwd;
    report.residual_intertwine_adj = unitary.residual_adj;
    report.residual_inner = extraction.inner.grid_residual;
    let residuals_ok = unitary.residual_fwd <= tol
        && unitary.residual_adj <= tol
        && extraction.inner.grid_residual <= tol
        && unitary.residual_unitary <= tol;
    if extraction.consistent && residuals_ok {
        report.classification = Classification::ConstantType;
    } else if !extraction.consistent {
        report.note = Some(format!(
            "Θ·(window polynomials) does not reproduce the part (span residual {:.3e}, {} vs {} dims)",
            extraction.span_residual,
            extraction.span_dim,
            report.subspace.dim()
        ));
    } else {
        report.note = Some("intertwining residuals exceed tolerance".into());
    }
    report.theta = Some(extraction.theta.clone());
    report.u_matrix = Some(unitary.u);
    report.beurling = Some(extraction);
    Ok(report)
}

/// Independent oracle: window vectors `h` with `‖Tⁿh‖ = ‖h‖ = ‖T*ⁿh‖` for
/// `n = 1..=n_max`, using exact powers of the Toeplitz action. It contains
/// the unitary part inside the window, so a trivial answer here certifies a
/// trivial part.
pub fn window_brute_force(sym: &MatrixSymbol, window: usize, n_max: usize, tol: f64) -> Result<Subspace> {
    if !sym.is_square() {
        return Err(Error::NotSquare { rows: sym.dim_out(), cols: sym.dim_in() });
    }
    if window == 0 {
        return Err(Error::Precondition("window must be at least 1".into()));
    }
    let n = sym.dim_in() * window;
    let band = sym.band();
    let adj_sym = sym.adjoint();
    let mut q = identity(n);
    let mut fwd = identity(n);
    let mut adj = identity(n);
    for step in 0..n_max {
        if q.ncols() == 0 {
            break;
        }
        let width = window + step * band;
        fwd = toeplitz_window_matrix(sym, width) * fwd;
        adj = toeplitz_window_matrix(&adj_sym, width) * adj;
        let left = (identity(n) - fwd.adjoint() * &fwd) * &q;
        let right = (identity(n) - adj.adjoint() * &adj) * &q;
        let mut stacked = zeros(2 * n, q.ncols());
        stacked.view_mut((0, 0), (n, q.ncols())).copy_from(&left);
        stacked.view_mut((n, 0), (n, q.ncols())).copy_from(&right);
        q = &q * null_space(&stacked, tol);
    }
    normalize_column_phases(&mut q);
    Ok(Subspace::from_orthonormal(q, tol))
}
