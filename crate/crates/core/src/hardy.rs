//! Polynomial vectors in `H²_E` and the exact action of Toeplitz and
//! Laurent operators with trigonometric-polynomial symbols on them.
//!
//! Coefficient vectors are flattened degree-major: entry `k·d + i` is the
//! `i`-th component of the coefficient of `z^k`. Degree windows are sized
//! so that no computation here ever truncates.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{op_norm, zeros, CMatrix, CVector};
use crate::symbol::MatrixSymbol;

/// `h = Σ_{k=0}^{n} a_k z^k` with `a_k ∈ C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct HardyVector {
    dim: usize,
    coeffs: Vec<CVector>,
}

impl HardyVector {
    pub fn new(dim: usize, coeffs: Vec<CVector>) -> Result<Self> {
        if dim == 0 || coeffs.is_empty() {
            return Err(Error::DimensionMismatch("Hardy vectors need d > 0 and at least one coefficient".into()));
        }
        if coeffs.iter().any(|a| a.len() != dim) {
            return Err(Error::DimensionMismatch(format!("all coefficients must have length {dim}")));
        }
        Ok(Self { dim, coeffs })
    }

    pub fn zero(dim: usize, len: usize) -> Self {
        Self { dim, coeffs: vec![CVector::zeros(dim); len.max(1)] }
    }

    pub fn constant(eta: CVector) -> Self {
        Self { dim: eta.len(), coeffs: vec![eta] }
    }

    /// Inverse of [`HardyVector::to_flat`].
    pub fn from_flat(dim: usize, flat: &CVector) -> Result<Self> {
        if dim == 0 || !flat.len().is_multiple_of(dim) || flat.is_empty() {
            return Err(Error::DimensionMismatch(format!("flat length {} is not a multiple of {dim}", flat.len())));
        }
        let coeffs = flat.as_slice().chunks(dim).map(CVector::from_column_slice).collect();
        Ok(Self { dim, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored coefficients (degree bound + 1).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeffs(&self) -> &[CVector] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&CVector> {
        self.coeffs.get(k)
    }

    /// Hardy norm `(Σ ‖a_k‖²)^{1/2}`.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm_squared()).sum::<f64>().sqrt()
    }

    pub fn to_flat(&self) -> CVector {
        let mut out = CVector::zeros(self.dim * self.coeffs.len());
        for (k, a) in self.coeffs.iter().enumerate() {
            out.rows_mut(k * self.dim, self.dim).copy_from(a);
        }
        out
    }

    /// Zero-padded to `len` coefficients (never shortens).
    pub fn padded(&self, len: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(len.max(coeffs.len()), CVector::zeros(self.dim));
        Self { dim: self.dim, coeffs }
    }

    /// Multiplication by `z`.
    pub fn shift(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(CVector::zeros(self.dim));
        coeffs.extend(self.coeffs.iter().cloned());
        Self { dim: self.dim, coeffs }
    }

    pub fn axpy(&self, alpha: Complex64, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch("vector dimensions differ".into()));
        }
        let len = self.len().max(other.len());
        let a = self.padded(len);
        let b = other.padded(len);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x * alpha + y).collect();
        Ok(Self { dim: self.dim, coeffs })
    }
}

/// Two-sided coefficient vector `Σ_{k=low}^{low+len−1} a_k e^{ikt}` in `L²_E`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentVector {
    dim: usize,
    low: i64,
    coeffs: Vec<CVector>,
}

impl LaurentVector {
    pub fn new(dim: usize, low: i64, coeffs: Vec<CVector>) -> Result<Self> {
        if dim == 0 || coeffs.iter().any(|a| a.len() != dim) {
            return Err(Error::DimensionMismatch(format!("all coefficients must have length {dim}")));
        }
        Ok(Self { dim, low, coeffs })
    }

    pub fn from_hardy(h: &HardyVector) -> Self {
        Self { dim: h.dim, low: 0, coeffs: h.coeffs.clone() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, k: i64) -> Option<&CVector> {
        if k < self.low {
            return None;
        }
        self.coeffs.get((k - self.low) as usize)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm_squared()).sum::<f64>().sqrt()
    }

    /// Norm of the coefficients with negative index, i.e. the part that
    /// leaves `H²`.
    pub fn antianalytic_norm(&self) -> f64 {
        (self.low..0).filter_map(|k| self.coeff(k)).map(|a| a.norm_squared()).sum::<f64>().sqrt()
    }

    /// Analytic projection `P_{H²}`.
    pub fn analytic_part(&self) -> HardyVector {
        let high = self.high().max(0);
        let coeffs =
            (0..=high).map(|k| self.coeff(k).cloned().unwrap_or_else(|| CVector::zeros(self.dim))).collect();
        HardyVector { dim: self.dim, coeffs }
    }
}

fn check_input_dim(sym: &MatrixSymbol, dim: usize) -> Result<()> {
    if sym.dim_in() != dim {
        return Err(Error::DimensionMismatch(format!(
            "symbol acts on C^{} but vector lives in C^{dim}",
            sym.dim_in()
        )));
    }
    Ok(())
}

/// Exact `T_Φ h = P_{H²}(Φ·h)`. The result has `len(h) + band`
/// coefficients.
pub fn toeplitz_apply_exact(sym: &MatrixSymbol, h: &HardyVector) -> Result<HardyVector> {
    check_input_dim(sym, h.dim())?;
    let out_len = h.len() + sym.band();
    let mut coeffs = vec![CVector::zeros(sym.dim_out()); out_len];
    for (k, a) in h.coeffs().iter().enumerate() {
        for (shift, m) in sym.coeffs() {
            let j = k as i64 + shift;
            if j >= 0 && (j as usize) < out_len {
                coeffs[j as usize] += m * a;
            }
        }
    }
    HardyVector::new(sym.dim_out(), coeffs)
}

/// Exact `L_Φ v = Φ·v` as a two-sided convolution.
pub fn laurent_apply_exact(sym: &MatrixSymbol, v: &LaurentVector) -> Result<LaurentVector> {
    check_input_dim(sym, v.dim())?;
    let band = sym.band() as i64;
    let low = v.low() - band;
    let len = v.coeffs.len() + 2 * band as usize;
    let mut coeffs = vec![CVector::zeros(sym.dim_out()); len];
    for (idx, a) in v.coeffs.iter().enumerate() {
        let k = v.low() + idx as i64;
        for (shift, m) in sym.coeffs() {
            coeffs[(k + shift - low) as usize] += m * a;
        }
    }
    LaurentVector::new(sym.dim_out(), low, coeffs)
}

/// Matrix of `h ↦ T_Φ h` from polynomials of degree `< window` into
/// polynomials of degree `< window + band`, with no truncation.
pub fn toeplitz_window_matrix(sym: &MatrixSymbol, window: usize) -> CMatrix {
    let (dout, din) = (sym.dim_out(), sym.dim_in());
    let rows = dout * (window + sym.band());
    let mut out = zeros(rows, din * window);
    for (shift, m) in sym.coeffs() {
        for k in 0..window {
            let j = k as i64 + shift;
            if j >= 0 {
                let j = j as usize;
                out.view_mut((j * dout, k * din), (dout, din)).copy_from(m);
            }
        }
    }
    out
}

/// Finite section of a Toeplitz operator on degrees `0..window`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzTruncation {
    pub symbol: MatrixSymbol,
    pub window: usize,
    /// Block `(j, k)` equals `Â(j − k)`.
    pub matrix: CMatrix,
}

pub fn truncate(sym: &MatrixSymbol, window: usize) -> Result<ToeplitzTruncation> {
    if !sym.is_square() {
        return Err(Error::NotSquare { rows: sym.dim_out(), cols: sym.dim_in() });
    }
    if window == 0 {
        return Err(Error::Precondition("window must be at least 1".into()));
    }
    let d = sym.dim_in();
    let full = toeplitz_window_matrix(sym, window);
    let matrix = full.rows(0, d * window).into_owned();
    Ok(ToeplitzTruncation { symbol: sym.clone(), window, matrix })
}

/// Residual of `S* M S = M` on the leading `(N−1)` blocks, `S` being the
/// block shift. Zero for any block-Toeplitz matrix.
pub fn brown_halmos_residual(matrix: &CMatrix, block: usize) -> f64 {
    let n = matrix.nrows();
    if block == 0 || n <= block {
        return 0.0;
    }
    let inner = n - block;
    let shifted = matrix.view((block, block), (inner, inner));
    let leading = matrix.view((0, 0), (inner, inner));
    op_norm(&(shifted - leading))
}

impl ToeplitzTruncation {
    pub fn brown_halmos_check(&self, tol: f64) -> (f64, bool) {
        let r = brown_halmos_residual(&self.matrix, self.symbol.dim_in());
        (r, r <= tol)
    }
}
