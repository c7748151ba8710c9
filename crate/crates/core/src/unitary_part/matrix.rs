use serde::Serialize;

use super::Subspace;
use crate::error::{Error, Result};
use crate::linalg::{
    identity, isometry_residual, mat_pow, normalize_column_phases, null_space, op_norm, projector, spectral_radius,
    zeros, CMatrix,
};

/// Invariance and unitarity residuals of a computed part `M` with
/// projector `P`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartResiduals {
    /// `‖(I − P) T P‖`
    pub invariance_fwd: f64,
    /// `‖(I − P) T* P‖`
    pub invariance_adj: f64,
    /// `‖P T*T P − P‖`
    pub isometry: f64,
    /// `‖P TT* P − P‖`
    pub coisometry: f64,
}

impl PartResiduals {
    pub fn max(&self) -> f64 {
        self.invariance_fwd.max(self.invariance_adj).max(self.isometry).max(self.coisometry)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPart {
    pub subspace: Subspace,
    pub residuals: PartResiduals,
    /// Refinement sweeps until the dimension stabilized.
    pub iterations: usize,
}

/// Zero-pads `q` (n × r) to `rows` rows; the window is the leading block.
pub(crate) fn embed(q: &CMatrix, rows: usize) -> CMatrix {
    if q.nrows() == rows {
        return q.clone();
    }
    let mut out = zeros(rows, q.ncols());
    out.view_mut((0, 0), q.shape()).copy_from(q);
    out
}

/// `(I − P_Q) · map · Q` where `map` sends the window into a space whose
/// leading coordinates are the window.
pub(crate) fn leak(map: &CMatrix, q: &CMatrix) -> CMatrix {
    let image = map * q;
    let qe = embed(q, map.nrows());
    &image - &qe * (qe.adjoint() * &image)
}

fn stack(blocks: &[CMatrix]) -> CMatrix {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        out.view_mut((r, 0), b.shape()).copy_from(b);
        r += b.nrows();
    }
    out
}

/// Shrinks `start` to `K_{j+1} = K_j ∩ ker((I−P_j)F) ∩ ker((I−P_j)G)` until
/// the dimension is stable. Each non-final sweep drops at least one
/// dimension, so at most `dim + 1` sweeps run.
pub(crate) fn refine(fwd: &CMatrix, adj: Option<&CMatrix>, start: CMatrix, threshold: f64) -> (CMatrix, usize) {
    let mut q = start;
    let mut sweeps = 0;
    while q.ncols() > 0 {
        sweeps += 1;
        let mut blocks = vec![leak(fwd, &q)];
        if let Some(g) = adj {
            blocks.push(leak(g, &q));
        }
        let keep = null_space(&stack(&blocks), threshold);
        if keep.ncols() == q.ncols() {
            break;
        }
        q = &q * keep;
    }
    (q, sweeps)
}

/// Vectors `h` in the window with `‖Fh‖ = ‖h‖` (and `‖Gh‖ = ‖h‖`).
pub(crate) fn norm_preserving(fwd: &CMatrix, adj: Option<&CMatrix>, threshold: f64) -> CMatrix {
    let n = fwd.ncols();
    let mut blocks = vec![identity(n) - fwd.adjoint() * fwd];
    if let Some(g) = adj {
        blocks.push(identity(n) - g.adjoint() * g);
    }
    null_space(&stack(&blocks), threshold)
}

pub(crate) fn part_residuals(fwd: &CMatrix, adj: &CMatrix, q: &CMatrix) -> PartResiduals {
    if q.ncols() == 0 {
        return PartResiduals { invariance_fwd: 0.0, invariance_adj: 0.0, isometry: 0.0, coisometry: 0.0 };
    }
    let r = q.ncols();
    let fq = fwd * q;
    let gq = adj * q;
    PartResiduals {
        invariance_fwd: op_norm(&leak(fwd, q)),
        invariance_adj: op_norm(&leak(adj, q)),
        isometry: op_norm(&(fq.adjoint() * &fq - identity(r))),
        coisometry: op_norm(&(gq.adjoint() * &gq - identity(r))),
    }
}

fn check_square_contraction(t: &CMatrix, tol: f64) -> Result<f64> {
    if t.nrows() != t.ncols() {
        return Err(Error::NotSquare { rows: t.nrows(), cols: t.ncols() });
    }
    let norm = op_norm(t);
    if norm > 1.0 + tol {
        return Err(Error::NotContractive { norm, tol });
    }
    Ok(norm)
}

/// Largest reducing subspace on which the contraction `t` is unitary.
pub fn unitary_part_matrix(t: &CMatrix, tol: f64) -> Result<MatrixPart> {
    let norm = check_square_contraction(t, tol)?;
    let threshold = tol * norm.max(1.0);
    let adj = t.adjoint();
    let start = norm_preserving(t, Some(&adj), threshold);
    let (mut q, iterations) = refine(t, Some(&adj), start, threshold);
    normalize_column_phases(&mut q);
    let residuals = part_residuals(t, &adj, &q);
    Ok(MatrixPart { subspace: Subspace::from_orthonormal(q, tol), residuals, iterations })
}

/// `⋂_{n=1}^{n_max} ker(I − T*ⁿTⁿ) ∩ ker(I − TⁿT*ⁿ)`, by accumulated null
/// spaces. Exact for `n_max ≥ dim`.
pub fn unitary_part_brute(t: &CMatrix, tol: f64, n_max: usize) -> Result<Subspace> {
    check_square_contraction(t, tol)?;
    let n = t.nrows();
    let mut q = identity(n);
    let mut power = identity(n);
    for _ in 1..=n_max {
        if q.ncols() == 0 {
            break;
        }
        power = &power * t;
        let pp = power.adjoint();
        let left = (identity(n) - &pp * &power) * &q;
        let right = (identity(n) - &power * &pp) * &q;
        let keep = null_space(&stack(&[left, right]), tol);
        q = &q * keep;
    }
    normalize_column_phases(&mut q);
    Ok(Subspace::from_orthonormal(q, tol))
}

/// Largest `T`-invariant subspace on which every power of `T` preserves
/// norms. Contains the unitary part.
pub fn isometric_part_matrix(t: &CMatrix, tol: f64) -> Result<MatrixPart> {
    let norm = check_square_contraction(t, tol)?;
    let threshold = tol * norm.max(1.0);
    let start = norm_preserving(t, None, threshold);
    let (mut q, iterations) = refine(t, None, start, threshold);
    normalize_column_phases(&mut q);
    let adj = t.adjoint();
    let residuals = part_residuals(t, &adj, &q);
    Ok(MatrixPart { subspace: Subspace::from_orthonormal(q, tol), residuals, iterations })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducingCheck {
    /// `‖A VV* − VV* A‖`
    pub commutator: f64,
    /// `‖(I − VV*) A V‖`
    pub invariance_fwd: f64,
    /// `‖(I − VV*) A* V‖`
    pub invariance_adj: f64,
    /// Commutator verdict.
    pub reducing: bool,
    /// Range-invariance verdict.
    pub reducing_direct: bool,
}

/// Whether `ran V` reduces `a`, by the commutator criterion
/// `A VV* = VV* A`, with the direct range-invariance test alongside.
pub fn reducing_check(v: &CMatrix, a: &CMatrix, tol: f64) -> Result<ReducingCheck> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare { rows: a.nrows(), cols: a.ncols() });
    }
    if v.nrows() != a.nrows() {
        return Err(Error::DimensionMismatch("basis rows must match the operator size".into()));
    }
    let residual = isometry_residual(v);
    if residual > tol.max(1e-10) {
        return Err(Error::NotIsometry { residual });
    }
    let p = projector(v);
    let commutator = op_norm(&(a * &p - &p * a));
    let invariance_fwd = op_norm(&leak(a, v));
    let invariance_adj = op_norm(&leak(&a.adjoint(), v));
    Ok(ReducingCheck {
        commutator,
        invariance_fwd,
        invariance_adj,
        reducing: commutator <= tol,
        reducing_direct: invariance_fwd <= tol && invariance_adj <= tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cdot0Report {
    pub spectral_radius: f64,
    /// `‖a⁶⁴‖`, the power-decay cross-check.
    pub power_norm_64: f64,
    pub cdot0: bool,
}

/// Finite-dimensional `C·0` test: powers of a matrix contraction tend to
/// zero iff its spectral radius is below one.
pub fn cdot0_test(a: &CMatrix, tol: f64) -> Result<Cdot0Report> {
    check_square_contraction(a, tol)?;
    let rho = spectral_radius(a);
    Ok(Cdot0Report { spectral_radius: rho, power_norm_64: op_norm(&mat_pow(a, 64)), cdot0: rho < 1.0 - tol })
}
