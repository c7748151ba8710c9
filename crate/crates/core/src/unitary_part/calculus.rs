use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hardy::{toeplitz_apply_exact, HardyVector};
use crate::linalg::{op_norm, zeros, CMatrix, CVector};
use crate::symbol::{sup_norm_estimate, CircleGrid, MatrixSymbol};

/// Scalar polynomial `u(w) = Σ u_k w^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarPoly(pub Vec<Complex64>);

impl ScalarPoly {
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self(coeffs.iter().map(|x| Complex64::new(*x, 0.0)).collect())
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.norm() == 0.0)
    }

    /// Largest `|u|` on the grid.
    pub fn sup_on(&self, grid: &CircleGrid) -> f64 {
        grid.points().map(|t| self.eval(Complex64::from_polar(1.0, t)).norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalculusSection {
    pub window: usize,
    pub dim: usize,
    /// `P_V u(T_Φ)|_V` on the polynomials of degree `< window`.
    pub matrix: CMatrix,
    pub norm: f64,
    pub sup_u: f64,
}

/// `u(T_Φ)` for an analytic contractive symbol, compressed to the degree
/// window. Powers are taken with the exact Toeplitz action; for analytic
/// symbols the window is co-invariant, so the compression of `u(T_Φ)` is
/// `u` of the compression.
pub fn poly_calculus(
    sym: &MatrixSymbol,
    u: &ScalarPoly,
    window: usize,
    grid: &CircleGrid,
    tol: f64,
) -> Result<CalculusSection> {
    if !sym.is_square() {
        return Err(Error::NotSquare { rows: sym.dim_out(), cols: sym.dim_in() });
    }
    if !sym.is_analytic() {
        return Err(Error::Precondition("polynomial calculus needs an analytic symbol".into()));
    }
    if window == 0 {
        return Err(Error::Precondition("window must be at least 1".into()));
    }
    let sup = sup_norm_estimate(sym, grid);
    if sup > 1.0 + tol {
        return Err(Error::NotContractive { norm: sup, tol });
    }
    let sup_u = u.sup_on(grid);
    if sup_u >= 1.0 {
        return Err(Error::Precondition(format!("|u| reaches {sup_u:.6} on the circle; need |u| < 1")));
    }

    let dim = sym.dim_in();
    let n = dim * window;
    let mut matrix = zeros(n, n);
    for col in 0..n {
        let mut e = CVector::zeros(n);
        e[col] = Complex64::new(1.0, 0.0);
        let mut power = HardyVector::from_flat(dim, &e)?;
        let mut acc = CVector::zeros(n);
        for (k, coeff) in u.0.iter().enumerate() {
            if k > 0 {
                power = toeplitz_apply_exact(sym, &power)?;
            }
            let flat = power.to_flat();
            acc += flat.rows(0, n) * *coeff;
        }
        matrix.set_column(col, &acc);
    }
    let norm = op_norm(&matrix);
    Ok(CalculusSection { window, dim, matrix, norm, sup_u })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::truncate;
    use crate::linalg::{c, identity};
    use crate::unitary_part::unitary_part_matrix;

    fn grid() -> CircleGrid {
        CircleGrid::new(256).unwrap()
    }

    #[test]
    fn zero_polynomial_gives_zero() {
        let phi = MatrixSymbol::monomial(1, identity(2));
        let s = poly_calculus(&phi, &ScalarPoly::from_real(&[0.0]), 4, &grid(), 1e-8).unwrap();
        assert_eq!(s.norm, 0.0);
    }

    #[test]
    fn half_w_on_shift_is_half_shift() {
        let phi = MatrixSymbol::monomial(1, identity(2));
        let s = poly_calculus(&phi, &ScalarPoly::from_real(&[0.0, 0.5]), 4, &grid(), 1e-8).unwrap();
        let expected = truncate(&phi, 4).unwrap().matrix * c(0.5, 0.0);
        assert!(op_norm(&(s.matrix - expected)) < 1e-15);
    }

    #[test]
    fn goor_instance_stays_cnu() {
        let phi = MatrixSymbol::scalar([(0, c(0.25, 0.0)), (1, c(0.5, 0.0))]);
        let s = poly_calculus(&phi, &ScalarPoly::from_real(&[0.0, 0.25, 0.25]), 8, &grid(), 1e-8).unwrap();
        assert!(s.norm <= 1.0 + 1e-9);
        assert!(unitary_part_matrix(&s.matrix, 1e-8).unwrap().subspace.is_trivial());
    }

    #[test]
    fn power_of_truncation_matches_calculus() {
        let phi = MatrixSymbol::scalar([(0, c(0.3, 0.1)), (1, c(0.4, 0.0)), (2, c(0.0, 0.2))]);
        let t = truncate(&phi, 6).unwrap().matrix;
        let s = poly_calculus(&phi, &ScalarPoly::from_real(&[0.1, 0.0, 0.0, 0.5]), 6, &grid(), 1e-8).unwrap();
        let expected = identity(6) * c(0.1, 0.0) + &t * &t * &t * c(0.5, 0.0);
        assert!(op_norm(&(s.matrix - expected)) < 1e-14);
    }

    #[test]
    fn unimodular_u_is_rejected() {
        let phi = MatrixSymbol::monomial(1, identity(1));
        let err = poly_calculus(&phi, &ScalarPoly::from_real(&[0.0, 1.0]), 3, &grid(), 1e-8).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn non_analytic_symbol_is_rejected() {
        let phi = MatrixSymbol::monomial(-1, identity(1) * c(0.5, 0.0));
        assert!(poly_calculus(&phi, &ScalarPoly::from_real(&[0.0, 0.5]), 3, &grid(), 1e-8).is_err());
    }
}
