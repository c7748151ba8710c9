use serde::Serialize;

use super::Subspace;
use crate::error::{Error, Result};
use crate::linalg::{
    column_space, containment_residual, normalize_column_phases, null_space, op_norm, projector, unitarity_residual, zeros,
    CMatrix,
};
use crate::symbol::{is_inner, CircleGrid, InnerReport, MatrixSymbol, PolyMatrix};

/// Columns `Θ·e_j z^k`, `k < window − deg Θ`, flattened on the degree
/// window. Orthonormal whenever `Θ` is inner.
pub fn theta_window_basis(theta: &PolyMatrix, window: usize) -> CMatrix {
    let d = theta.dim_out();
    let s = theta.dim_in();
    let deg = theta.degree();
    if deg >= window {
        return zeros(d * window, 0);
    }
    let shifts = window - deg;
    let mut out = zeros(d * window, s * shifts);
    for k in 0..shifts {
        for (i, coeff) in theta.coeffs().iter().enumerate() {
            out.view_mut(((k + i) * d, k * s), (d, s)).copy_from(coeff);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeurlingExtraction {
    pub theta: PolyMatrix,
    pub inner: InnerReport,
    /// `‖(I − P_{S(M ∩ V_{N−1})}) ...‖`: how far `z·(M ∩ V_{N−1})` leaves `M`.
    pub shift_invariance: f64,
    /// Two-sided containment residual between `M` and `Θ·V_{N−deg Θ}`.
    pub span_residual: f64,
    pub span_dim: usize,
    /// Inner within tolerance and spanning the input subspace.
    pub consistent: bool,
}

/// Wandering-subspace factorization of a shift-invariant subspace of the
/// degree window: `W = M ⊖ z(M ∩ V_{N−1})` read as the columns of `Θ`.
pub fn beurling_extract(m: &Subspace, dim: usize, tol: f64) -> Result<BeurlingExtraction> {
    let n = m.ambient_dim();
    if dim == 0 || !n.is_multiple_of(dim) {
        return Err(Error::DimensionMismatch(format!("ambient dimension {n} is not a multiple of {dim}")));
    }
    if m.is_trivial() {
        return Err(Error::Precondition("cannot factor the zero subspace".into()));
    }
    let window = n / dim;
    let q = m.basis();

    // Elements of M whose top coefficient vanishes, then multiplied by z.
    let top = q.rows((window - 1) * dim, dim).into_owned();
    let low = q * null_space(&top, tol);
    let mut shifted = zeros(n, low.ncols());
    if window > 1 {
        shifted.view_mut((dim, 0), (n - dim, low.ncols())).copy_from(&low.rows(0, n - dim));
    }
    let shift_invariance = containment_residual(q, &shifted);
    if shift_invariance > tol {
        return Err(Error::NotShiftInvariant { residual: shift_invariance });
    }

    let complement = q - &shifted * (shifted.adjoint() * q);
    let mut wandering = column_space(&complement, 0.5);
    normalize_column_phases(&mut wandering);

    let s = wandering.ncols();
    let coeffs: Vec<CMatrix> = (0..window)
        .map(|k| {
            let block = wandering.rows(k * dim, dim).into_owned();
            if op_norm(&block) <= tol {
                zeros(dim, s)
            } else {
                block
            }
        })
        .collect();
    let theta = PolyMatrix::new(coeffs)?;
    let inner = is_inner(&theta, &CircleGrid::new(grid_for(&theta))?, tol);

    let span = theta_window_basis(&theta, window);
    let span_residual = containment_residual(q, &span).max(containment_residual(&span, q));
    let span_dim = span.ncols();
    let consistent = inner.inner && span_residual <= tol && span_dim == m.dim();
    Ok(BeurlingExtraction { theta, inner, shift_invariance, span_residual, span_dim, consistent })
}

fn grid_for(theta: &PolyMatrix) -> usize {
    crate::symbol::DEFAULT_GRID.max(4 * theta.degree() + 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantUnitary {
    pub u: CMatrix,
    /// `max_t ‖Φ(t)Θ(t) − Θ(t)U‖`
    pub residual_fwd: f64,
    /// `max_t ‖Φ(t)*Θ(t) − Θ(t)U*‖`
    pub residual_adj: f64,
    /// `max(‖U*U − I‖, ‖UU* − I‖)`
    pub residual_unitary: f64,
}

fn intertwining_residuals(sym: &MatrixSymbol, theta: &PolyMatrix, u: &CMatrix, grid: &CircleGrid) -> (f64, f64) {
    let (mut fwd, mut adj) = (0.0f64, 0.0f64);
    let u_adj = u.adjoint();
    for t in grid.points() {
        let phi = sym.eval(t);
        let th = theta.eval_circle(t);
        fwd = fwd.max(op_norm(&(&phi * &th - &th * u)));
        adj = adj.max(op_norm(&(phi.adjoint() * &th - &th * &u_adj)));
    }
    (fwd, adj)
}

fn check_shapes(sym: &MatrixSymbol, theta: &PolyMatrix) -> Result<()> {
    if !sym.is_square() || sym.dim_in() != theta.dim_out() {
        return Err(Error::DimensionMismatch(format!(
            "symbol {}x{} cannot act on the range of a {}x{} inner function",
            sym.dim_out(),
            sym.dim_in(),
            theta.dim_out(),
            theta.dim_in()
        )));
    }
    Ok(())
}

/// `U` = zeroth Fourier coefficient of `Θ*ΦΘ`, with the grid residuals of
/// both intertwining identities.
pub fn extract_constant_unitary(sym: &MatrixSymbol, theta: &PolyMatrix, grid: &CircleGrid) -> Result<ConstantUnitary> {
    check_shapes(sym, theta)?;
    let t = theta.to_symbol();
    let compressed = t.adjoint().multiply(sym)?.multiply(&t)?;
    let u = compressed.coeff(0).cloned().unwrap_or_else(|| zeros(theta.dim_in(), theta.dim_in()));
    let (residual_fwd, residual_adj) = intertwining_residuals(sym, theta, &u, grid);
    let residual_unitary = unitarity_residual(&u);
    Ok(ConstantUnitary { u, residual_fwd, residual_adj, residual_unitary })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaincondnCheck {
    pub residual_fwd: f64,
    pub residual_adj: f64,
    pub residual_inner: f64,
    pub residual_unitary: f64,
    pub holds: bool,
}

/// Checks `ΦΘ = ΘU`, `Φ*Θ = ΘU*` on the grid, together with innerness of
/// `Θ` and unitarity of `U`.
pub fn verify_maincondn(
    sym: &MatrixSymbol,
    theta: &PolyMatrix,
    u: &CMatrix,
    grid: &CircleGrid,
    tol: f64,
) -> Result<MaincondnCheck> {
    check_shapes(sym, theta)?;
    if u.shape() != (theta.dim_in(), theta.dim_in()) {
        return Err(Error::DimensionMismatch("U must act on the coefficient space of Θ".into()));
    }
    let (residual_fwd, residual_adj) = intertwining_residuals(sym, theta, u, grid);
    let residual_inner = is_inner(theta, grid, tol).grid_residual;
    let residual_unitary = unitarity_residual(u);
    let holds = residual_fwd <= tol && residual_adj <= tol && residual_inner <= tol && residual_unitary <= tol;
    Ok(MaincondnCheck { residual_fwd, residual_adj, residual_inner, residual_unitary, holds })
}

/// Largest distance between the range projections of `a(t)` and `b(t)` on
/// the grid. Zero exactly when the two inner functions agree up to a right
/// constant unitary.
pub fn range_projection_distance(a: &PolyMatrix, b: &PolyMatrix, grid: &CircleGrid) -> f64 {
    grid.points()
        .map(|t| op_norm(&(projector(&a.eval_circle(t)) - projector(&b.eval_circle(t)))))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{block_diag, c, diag, haar_unitary, identity, max_principal_angle, repeat_diag, unit};
    use crate::symbol::shift_projection_symbol;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Range projections `Θ(t)Θ(t)*` compared on the grid.
    fn range_distance(a: &PolyMatrix, b: &PolyMatrix) -> f64 {
        range_projection_distance(a, b, &CircleGrid::new(64).unwrap())
    }

    #[test]
    fn coordinate_subspace_gives_constant_inclusion() {
        // Polynomials with values in span{e1} inside C² on a window of 4.
        let window = 4;
        let incl = PolyMatrix::constant(unit(2, 1, 0, 0));
        let basis = theta_window_basis(&incl, window);
        let m = Subspace::new(basis, 1e-12).unwrap();
        let ex = beurling_extract(&m, 2, 1e-8).unwrap();
        assert!(ex.consistent);
        assert_eq!(ex.theta.degree(), 0);
        assert!(range_distance(&ex.theta, &incl) < 1e-12);
    }

    #[test]
    fn z_times_hardy_gives_z() {
        let window = 5;
        let z = PolyMatrix::new(vec![zeros(1, 1), identity(1)]).unwrap();
        let m = Subspace::new(theta_window_basis(&z, window), 1e-12).unwrap();
        let ex = beurling_extract(&m, 1, 1e-8).unwrap();
        assert!(ex.consistent);
        assert_eq!(ex.theta.degree(), 1);
        assert!((ex.theta.coeffs()[1][(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn planted_inner_column_round_trips() {
        // Θ₀(z) = (1, z)ᵀ/√2 rotated by a random unitary: inner, 2x1.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let v = haar_unitary(&mut rng, 2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let theta0 = PolyMatrix::new(vec![&v * unit(2, 1, 0, 0) * c(h, 0.0), &v * unit(2, 1, 1, 0) * c(h, 0.0)])
            .unwrap()
            .mul_right(&CMatrix::from_element(1, 1, c(0.6, 0.8)))
            .unwrap();
        // Θ₀·{1, z, z²} inside the window of degree < 4.
        let m = Subspace::new(theta_window_basis(&theta0, 4), 1e-12).unwrap();
        assert_eq!(m.dim(), 3);
        let ex = beurling_extract(&m, 2, 1e-8).unwrap();
        assert!(ex.consistent);
        assert!(range_distance(&ex.theta, &theta0) <= 1e-7);
        let recovered = Subspace::new(theta_window_basis(&ex.theta, 4), 1e-10).unwrap();
        assert!(max_principal_angle(recovered.basis(), m.basis()) <= 1e-7);
    }

    #[test]
    fn non_invariant_subspace_is_rejected() {
        // span{1} in the scalar window of 3: z·1 is not in it.
        let m = Subspace::new(unit(3, 1, 0, 0), 1e-12).unwrap();
        assert!(matches!(beurling_extract(&m, 1, 1e-8), Err(Error::NotShiftInvariant { .. })));
    }

    #[test]
    fn constant_unitary_examples() {
        let grid = CircleGrid::new(64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let u0 = haar_unitary(&mut rng, 2);
        let cu = extract_constant_unitary(&MatrixSymbol::constant(u0.clone()), &PolyMatrix::constant(identity(2)), &grid)
            .unwrap();
        assert!(op_norm(&(&cu.u - &u0)) < 1e-14);
        assert!(cu.residual_fwd < 1e-14 && cu.residual_adj < 1e-14);

        // diag(U₀, ψ) with ψ = z/2 and Θ the inclusion of the first block.
        let psi = MatrixSymbol::monomial(1, block_diag(&[&zeros(2, 2), &(identity(1) * c(0.5, 0.0))]));
        let phi = MatrixSymbol::constant(block_diag(&[&u0, &zeros(1, 1)])).add(&psi).unwrap();
        let incl = PolyMatrix::constant(CMatrix::identity(3, 2));
        let cu = extract_constant_unitary(&phi, &incl, &grid).unwrap();
        assert!(op_norm(&(&cu.u - &u0)) < 1e-14);
        let check = verify_maincondn(&phi, &incl, &cu.u, &grid, 1e-8).unwrap();
        assert!(check.holds);

        // zP + P⊥ with Θ the inclusion of ran P⊥.
        let bcl = shift_projection_symbol(&diag(&[1.0, 0.0]));
        let e2 = PolyMatrix::constant(unit(2, 1, 1, 0));
        let cu = extract_constant_unitary(&bcl, &e2, &grid).unwrap();
        assert!((cu.u[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(cu.residual_fwd <= 1e-12 && cu.residual_adj <= 1e-12);
        assert!(verify_maincondn(&bcl, &e2, &cu.u, &grid, 1e-8).unwrap().holds);
    }

    #[test]
    fn maincondn_fails_for_wrong_unitary() {
        let grid = CircleGrid::new(32).unwrap();
        let phi = MatrixSymbol::constant(repeat_diag(&identity(1), 2));
        let check =
            verify_maincondn(&phi, &PolyMatrix::constant(identity(2)), &(identity(2) * c(-1.0, 0.0)), &grid, 1e-8)
                .unwrap();
        assert!(!check.holds);
    }
}
