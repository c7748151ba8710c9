//! Matrix-valued trigonometric polynomials on the unit circle.
//!
//! A [`MatrixSymbol`] is a finite Fourier series `Φ(e^{it}) = Σ_k Â(k) e^{ikt}`
//! with matrix coefficients; a [`PolyMatrix`] is the analytic special case
//! `Θ(z) = Σ_{k≥0} C_k z^k`, possibly rectangular. Boundary statements
//! ("a.e. on the circle") are checked on a uniform [`CircleGrid`].

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{identity, op_norm, zeros, CMatrix};

/// Default number of grid points on the circle.
pub const DEFAULT_GRID: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSymbol {
    dim_out: usize,
    dim_in: usize,
    coeffs: BTreeMap<i64, CMatrix>,
}

impl MatrixSymbol {
    /// Builds a symbol from `(k, Â(k))` pairs. Repeated keys are summed and
    /// exactly-zero coefficients are dropped.
    pub fn new<I>(dim_out: usize, dim_in: usize, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, CMatrix)>,
    {
        if dim_out == 0 || dim_in == 0 {
            return Err(Error::DimensionMismatch("symbol dimensions must be positive".into()));
        }
        let mut map: BTreeMap<i64, CMatrix> = BTreeMap::new();
        for (k, m) in coeffs {
            if m.shape() != (dim_out, dim_in) {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient {k} has shape {:?}, expected ({dim_out}, {dim_in})",
                    m.shape()
                )));
            }
            match map.get_mut(&k) {
                Some(acc) => *acc += m,
                None => {
                    map.insert(k, m);
                }
            }
        }
        map.retain(|_, m| m.iter().any(|z| *z != Complex64::new(0.0, 0.0)));
        Ok(Self { dim_out, dim_in, coeffs: map })
    }

    pub fn zero(dim_out: usize, dim_in: usize) -> Self {
        Self { dim_out, dim_in, coeffs: BTreeMap::new() }
    }

    pub fn constant(m: CMatrix) -> Self {
        let (r, k) = m.shape();
        Self::new(r, k, [(0, m)]).expect("shape taken from the matrix")
    }

    /// `z^k · M` (negative `k` gives powers of `z̄`).
    pub fn monomial(k: i64, m: CMatrix) -> Self {
        let (r, cols) = m.shape();
        Self::new(r, cols, [(k, m)]).expect("shape taken from the matrix")
    }

    /// Scalar symbol from `(k, value)` pairs.
    pub fn scalar<I: IntoIterator<Item = (i64, Complex64)>>(coeffs: I) -> Self {
        Self::new(1, 1, coeffs.into_iter().map(|(k, v)| (k, CMatrix::from_element(1, 1, v))))
            .expect("1x1 coefficients")
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn is_square(&self) -> bool {
        self.dim_out == self.dim_in
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|k|` with a nonzero coefficient.
    pub fn band(&self) -> usize {
        self.coeffs.keys().map(|k| k.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn coeff(&self, k: i64) -> Option<&CMatrix> {
        self.coeffs.get(&k)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &CMatrix)> {
        self.coeffs.iter().map(|(k, m)| (*k, m))
    }

    /// No negative Fourier coefficients.
    pub fn is_analytic(&self) -> bool {
        self.coeffs.keys().all(|k| *k >= 0)
    }

    /// Exact finite sum `Σ_k Â(k) e^{ikt}`.
    pub fn eval(&self, t: f64) -> CMatrix {
        let mut out = zeros(self.dim_out, self.dim_in);
        for (k, m) in &self.coeffs {
            let phase = Complex64::from_polar(1.0, *k as f64 * t);
            out += m * phase;
        }
        out
    }

    /// `Σ_k Â(k) z^k` at an arbitrary nonzero complex point (any point
    /// for analytic symbols).
    pub fn eval_at(&self, z: Complex64) -> CMatrix {
        let mut out = zeros(self.dim_out, self.dim_in);
        for (k, m) in &self.coeffs {
            out += m * z.powi(*k as i32);
        }
        out
    }

    /// The pointwise adjoint `Φ(e^{it})*`: coefficient at `k` becomes the
    /// conjugate transpose of the coefficient at `−k`.
    pub fn adjoint(&self) -> Self {
        Self {
            dim_out: self.dim_in,
            dim_in: self.dim_out,
            coeffs: self.coeffs.iter().map(|(k, m)| (-k, m.adjoint())).collect(),
        }
    }

    /// Pointwise product by coefficient convolution.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.dim_in != other.dim_out {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} symbol by {}x{} symbol",
                self.dim_out, self.dim_in, other.dim_out, other.dim_in
            )));
        }
        let mut pairs = Vec::with_capacity(self.coeffs.len() * other.coeffs.len());
        for (j, a) in &self.coeffs {
            for (k, b) in &other.coeffs {
                pairs.push((j + k, a * b));
            }
        }
        Self::new(self.dim_out, other.dim_in, pairs)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim_out != other.dim_out || self.dim_in != other.dim_in {
            return Err(Error::DimensionMismatch("cannot add symbols of different shape".into()));
        }
        let pairs = self.coeffs().chain(other.coeffs()).map(|(k, m)| (k, m.clone()));
        Self::new(self.dim_out, self.dim_in, pairs)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let pairs = self.coeffs().map(|(k, m)| (k, m * s));
        Self::new(self.dim_out, self.dim_in, pairs).expect("same shape")
    }

    /// Conjugation `V* Φ V` by a constant matrix with `dim_out` rows.
    pub fn conjugate_by(&self, v: &CMatrix) -> Result<Self> {
        let left = Self::constant(v.adjoint());
        let right = Self::constant(v.clone());
        left.multiply(self)?.multiply(&right)
    }

    /// Analytic symbols as polynomials; `None` when a negative coefficient
    /// is present.
    pub fn to_poly(&self) -> Option<PolyMatrix> {
        if !self.is_analytic() {
            return None;
        }
        let degree = self.band();
        let coeffs = (0..=degree as i64)
            .map(|k| self.coeff(k).cloned().unwrap_or_else(|| zeros(self.dim_out, self.dim_in)))
            .collect();
        Some(PolyMatrix::new(coeffs).expect("shapes agree"))
    }
}

/// Analytic matrix polynomial `Θ(z) = Σ_{k=0}^{degree} C_k z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix {
    dim_out: usize,
    dim_in: usize,
    coeffs: Vec<CMatrix>,
}

impl PolyMatrix {
    /// Trailing exactly-zero coefficients are trimmed (degree 0 is kept).
    pub fn new(coeffs: Vec<CMatrix>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::DimensionMismatch("polynomial needs at least one coefficient".into()))?;
        let (dim_out, dim_in) = first.shape();
        if let Some(bad) = coeffs.iter().find(|m| m.shape() != (dim_out, dim_in)) {
            return Err(Error::DimensionMismatch(format!(
                "coefficient shape {:?} differs from ({dim_out}, {dim_in})",
                bad.shape()
            )));
        }
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|m| m.iter().all(|z| z.norm() == 0.0)) {
            coeffs.pop();
        }
        Ok(Self { dim_out, dim_in, coeffs })
    }

    pub fn constant(m: CMatrix) -> Self {
        Self::new(vec![m]).expect("single coefficient")
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CMatrix] {
        &self.coeffs
    }

    /// Horner evaluation at any complex point.
    pub fn eval(&self, z: Complex64) -> CMatrix {
        let mut out = zeros(self.dim_out, self.dim_in);
        for m in self.coeffs.iter().rev() {
            out = out * z + m;
        }
        out
    }

    pub fn eval_circle(&self, t: f64) -> CMatrix {
        self.eval(Complex64::from_polar(1.0, t))
    }

    pub fn to_symbol(&self) -> MatrixSymbol {
        MatrixSymbol::new(
            self.dim_out,
            self.dim_in,
            self.coeffs.iter().enumerate().map(|(k, m)| (k as i64, m.clone())),
        )
        .expect("shapes agree")
    }

    /// Right multiplication by a constant matrix.
    pub fn mul_right(&self, m: &CMatrix) -> Result<Self> {
        if m.nrows() != self.dim_in {
            return Err(Error::DimensionMismatch("right factor has wrong row count".into()));
        }
        Self::new(self.coeffs.iter().map(|x| x * m).collect())
    }
}

/// Uniform grid `t_j = 2πj/G` with weight `1/G` per point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CircleGrid {
    size: usize,
}

impl CircleGrid {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Precondition("grid size must be positive".into()));
        }
        Ok(Self { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.size as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.size as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.size).map(|j| self.point(j))
    }
}

impl Default for CircleGrid {
    fn default() -> Self {
        Self { size: DEFAULT_GRID }
    }
}

/// Indicator of a subset of grid points, with its estimated measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridMask {
    pub grid: CircleGrid,
    pub flags: Vec<bool>,
    pub measure: f64,
}

impl GridMask {
    pub fn from_flags(grid: CircleGrid, flags: Vec<bool>) -> Self {
        let count = flags.iter().filter(|f| **f).count();
        let measure = count as f64 * grid.weight();
        Self { grid, flags, measure }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InnerReport {
    /// `max_t ‖Θ(e^{it})*Θ(e^{it}) − I‖` over the grid.
    pub grid_residual: f64,
    /// `max_s ‖Σ_k C_k* C_{k+s} − δ_{s0} I‖`, the coefficient form of the
    /// same identity.
    pub coefficient_residual: f64,
    /// Grid verdict.
    pub inner: bool,
    /// Coefficient verdict.
    pub coefficient_inner: bool,
}

/// Checks that `Θ` is inner, i.e. isometric almost everywhere on the circle.
pub fn is_inner(theta: &PolyMatrix, grid: &CircleGrid, tol: f64) -> InnerReport {
    let eye = identity(theta.dim_in());
    let grid_residual = grid
        .points()
        .map(|t| {
            let v = theta.eval_circle(t);
            op_norm(&(v.adjoint() * v - &eye))
        })
        .fold(0.0, f64::max);

    // Θ*Θ as a Laurent polynomial: lag s coefficient Σ_k C_k* C_{k+s}.
    let cs = theta.coeffs();
    let n = theta.degree();
    let mut coefficient_residual: f64 = 0.0;
    for s in 0..=n {
        let mut lag = zeros(theta.dim_in(), theta.dim_in());
        for k in 0..=(n - s) {
            lag += cs[k].adjoint() * &cs[k + s];
        }
        if s == 0 {
            lag -= &eye;
        }
        coefficient_residual = coefficient_residual.max(op_norm(&lag));
    }
    InnerReport {
        grid_residual,
        coefficient_residual,
        inner: grid_residual <= tol,
        coefficient_inner: coefficient_residual <= tol,
    }
}

/// Grid points where `Φ(t)` is unitary within `tol`.
pub fn pointwise_unitarity_mask(sym: &MatrixSymbol, grid: &CircleGrid, tol: f64) -> Result<GridMask> {
    if !sym.is_square() {
        return Err(Error::NotSquare { rows: sym.dim_out(), cols: sym.dim_in() });
    }
    let eye = identity(sym.dim_in());
    let flags = grid
        .points()
        .map(|t| {
            let v = sym.eval(t);
            op_norm(&(v.adjoint() * &v - &eye)) <= tol && op_norm(&(&v * v.adjoint() - &eye)) <= tol
        })
        .collect();
    Ok(GridMask::from_flags(*grid, flags))
}

/// Largest singular value over the grid. This is a lower bound on the true
/// sup norm.
pub fn sup_norm_estimate(sym: &MatrixSymbol, grid: &CircleGrid) -> f64 {
    grid.points().map(|t| op_norm(&sym.eval(t))).fold(0.0, f64::max)
}

/// `zP + P⊥` for an orthogonal projection `P`.
pub fn shift_projection_symbol(p: &CMatrix) -> MatrixSymbol {
    let n = p.nrows();
    MatrixSymbol::new(n, n, [(1, p.clone()), (0, identity(n) - p)]).expect("square projection")
}

/// `e^{iθ}` as a complex number; convenience for building examples.
pub fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, diag, haar_unitary, unit};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        op_norm(&(a - b)) <= tol
    }

    fn random_symbol(seed: u64, rows: usize, cols: usize, band: i64) -> MatrixSymbol {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs: Vec<_> =
            (-band..=band).map(|k| (k, crate::linalg::complex_gaussian(&mut rng, rows, cols))).collect();
        MatrixSymbol::new(rows, cols, pairs).unwrap()
    }

    #[test]
    fn eval_constant_identity() {
        let s = MatrixSymbol::constant(identity(2));
        assert!(close(&s.eval(1.3), &identity(2), 0.0));
    }

    #[test]
    fn eval_shift_projection_at_one() {
        let s = shift_projection_symbol(&diag(&[1.0, 0.0]));
        assert!(close(&s.eval(0.0), &identity(2), 1e-15));
    }

    #[test]
    fn eval_two_term_sum() {
        let s = MatrixSymbol::new(2, 2, [(-1, unit(2, 2, 0, 1)), (1, unit(2, 2, 1, 0))]).unwrap();
        // e^{-iπ/2} = -i in the (0,1) slot, e^{iπ/2} = i in the (1,0) slot.
        let expected = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        assert!(close(&s.eval(PI / 2.0), &expected, 1e-15));
    }

    #[test]
    fn adjoint_flips_coefficients() {
        let p = diag(&[1.0, 0.0]);
        let adj = shift_projection_symbol(&p).adjoint();
        assert_eq!(adj.coeff(-1), Some(&p));
        assert_eq!(adj.coeff(0), Some(&diag(&[0.0, 1.0])));
        assert_eq!(adj.coeff(1), None);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = haar_unitary(&mut rng, 3);
        assert_eq!(MatrixSymbol::constant(u.clone()).adjoint().coeff(0), Some(&u.adjoint()));
    }

    #[test]
    fn multiply_examples() {
        let p = diag(&[1.0, 0.0]);
        let phi = shift_projection_symbol(&p);
        let prod = phi.multiply(&phi.adjoint()).unwrap();
        assert_eq!(prod, MatrixSymbol::constant(identity(2)));

        let eye = MatrixSymbol::constant(identity(2));
        assert_eq!(eye.multiply(&phi).unwrap(), phi);

        let z = MatrixSymbol::scalar([(1, c(1.0, 0.0))]);
        assert_eq!(z.multiply(&z).unwrap(), MatrixSymbol::scalar([(2, c(1.0, 0.0))]));
        assert_eq!(z.multiply(&z).unwrap().band(), 2);
    }

    #[test]
    fn multiply_rejects_mismatch() {
        let a = MatrixSymbol::constant(zeros(2, 3));
        let b = MatrixSymbol::constant(identity(2));
        assert!(matches!(a.multiply(&b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn inner_examples() {
        let grid = CircleGrid::default();
        let col = PolyMatrix::constant(unit(2, 1, 0, 0));
        let r = is_inner(&col, &grid, 1e-8);
        assert!(r.inner && r.coefficient_inner);
        assert_eq!(r.grid_residual, 0.0);

        let zi = PolyMatrix::new(vec![zeros(2, 2), identity(2)]).unwrap();
        assert!(is_inner(&zi, &grid, 1e-8).inner);

        let half = PolyMatrix::constant(identity(2) * c(0.5, 0.0));
        let r = is_inner(&half, &grid, 1e-8);
        assert!(!r.inner && !r.coefficient_inner);
        assert!((r.grid_residual - 0.75).abs() < 1e-15);
    }

    #[test]
    fn gram_alone_is_not_enough() {
        // (I + zI)/√2 has Σ C_k*C_k = I but is not inner.
        let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let p = PolyMatrix::new(vec![identity(1) * h, identity(1) * h]).unwrap();
        let r = is_inner(&p, &CircleGrid::default(), 1e-8);
        assert!(!r.inner && !r.coefficient_inner);
    }

    #[test]
    fn unitarity_mask_examples() {
        let grid = CircleGrid::new(64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = MatrixSymbol::constant(haar_unitary(&mut rng, 3));
        assert_eq!(pointwise_unitarity_mask(&u, &grid, 1e-8).unwrap().measure, 1.0);
        let bcl = shift_projection_symbol(&diag(&[1.0, 0.0]));
        assert_eq!(pointwise_unitarity_mask(&bcl, &grid, 1e-8).unwrap().measure, 1.0);
        let half = MatrixSymbol::constant(identity(2) * c(0.5, 0.0));
        assert_eq!(pointwise_unitarity_mask(&half, &grid, 1e-8).unwrap().measure, 0.0);
        assert!(pointwise_unitarity_mask(&MatrixSymbol::constant(zeros(2, 3)), &grid, 1e-8).is_err());
    }

    #[test]
    fn sup_norm_examples() {
        let grid = CircleGrid::default();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = MatrixSymbol::constant(haar_unitary(&mut rng, 2));
        assert!((sup_norm_estimate(&u, &grid) - 1.0).abs() < 1e-14);
        let half = MatrixSymbol::constant(identity(2) * c(0.5, 0.0));
        assert!((sup_norm_estimate(&half, &grid) - 0.5).abs() < 1e-15);
        let bcl = shift_projection_symbol(&diag(&[1.0, 0.0]));
        assert!((sup_norm_estimate(&bcl, &grid) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn grid_weights_sum_to_one() {
        let g = CircleGrid::new(7).unwrap();
        let pts: Vec<f64> = g.points().collect();
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert!(pts[0] == 0.0 && *pts.last().unwrap() < 2.0 * PI);
        assert!((g.weight() * g.size() as f64 - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn product_evaluates_pointwise(seed in 0u64..1000, t in 0.0f64..(2.0 * PI)) {
            let a = random_symbol(seed, 2, 3, 2);
            let b = random_symbol(seed + 1, 3, 2, 1);
            let ab = a.multiply(&b).unwrap();
            prop_assert_eq!(ab.band(), 3);
            let lhs = ab.eval(t);
            let rhs = a.eval(t) * b.eval(t);
            prop_assert!(op_norm(&(lhs - &rhs)) <= 1e-12 * (1.0 + op_norm(&rhs)));
        }

        #[test]
        fn adjoint_is_involution(seed in 0u64..1000, t in 0.0f64..(2.0 * PI)) {
            let a = random_symbol(seed, 2, 3, 2);
            prop_assert_eq!(&a.adjoint().adjoint(), &a);
            prop_assert!(op_norm(&(a.adjoint().eval(t) - a.eval(t).adjoint())) <= 1e-12);
        }

        #[test]
        fn inner_tests_agree(seed in 0u64..500, deg in 0usize..3, scale in 0.1f64..10.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let coeffs = (0..=deg)
                .map(|_| crate::linalg::complex_gaussian(&mut rng, 3, 2).map(|z| z * scale / 3.0))
                .collect();
            let p = PolyMatrix::new(coeffs).unwrap();
            let r = is_inner(&p, &CircleGrid::default(), 1e-8);
            prop_assert_eq!(r.inner, r.coefficient_inner);
        }
    }
}
