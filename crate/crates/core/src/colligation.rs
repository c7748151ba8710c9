//! Unitary colligations `W = [[A, B], [C, D]]` on `E ⊕ K` and their
//! transfer functions `τ_W(λ) = A + λB(I − λD)⁻¹C`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    c, column_space, haar_unitary, identity, mat_pow, op_norm, psd_sqrt, unitarity_residual, zeros, CMatrix,
};
use crate::symbol::PolyMatrix;

/// Largest modulus used by the default disc grids.
pub const DEFAULT_MAX_RADIUS: f64 = 0.99;

#[derive(Debug, Clone, PartialEq)]
pub struct Colligation {
    a: CMatrix,
    b: CMatrix,
    c: CMatrix,
    d: CMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ColligationCheck {
    /// `‖W*W − I‖`
    pub residual_left: f64,
    /// `‖WW* − I‖`
    pub residual_right: f64,
    pub valid: bool,
}

impl ColligationCheck {
    pub fn residual(&self) -> f64 {
        self.residual_left.max(self.residual_right)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferReport {
    /// Disc points as `[re, im]`.
    pub lambda_grid: Vec<[f64; 2]>,
    /// Residual of `I − ΦΦ* = (1−|λ|²) B(I−λD)⁻¹(I−λ̄D*)⁻¹B*`.
    pub max_defect1: f64,
    /// Residual of `I − Φ*Φ = (1−|λ|²) C*(I−λ̄D*)⁻¹(I−λD)⁻¹C`.
    pub max_defect2: f64,
    pub max_norm: f64,
}

impl Colligation {
    pub fn new(a: CMatrix, b: CMatrix, c: CMatrix, d: CMatrix) -> Result<Self> {
        let e = a.nrows();
        let k = d.nrows();
        let ok = a.shape() == (e, e) && b.shape() == (e, k) && c.shape() == (k, e) && d.shape() == (k, k);
        if !ok || e == 0 {
            return Err(Error::DimensionMismatch(format!(
                "blocks A{:?} B{:?} C{:?} D{:?} do not partition a square system matrix",
                a.shape(),
                b.shape(),
                c.shape(),
                d.shape()
            )));
        }
        Ok(Self { a, b, c, d })
    }

    /// Splits a square matrix on `E ⊕ K` with `dim E = dim_e`.
    pub fn from_system_matrix(w: &CMatrix, dim_e: usize) -> Result<Self> {
        let n = w.nrows();
        if w.ncols() != n || dim_e == 0 || dim_e > n {
            return Err(Error::DimensionMismatch("system matrix must be square with 0 < dim_e <= n".into()));
        }
        let k = n - dim_e;
        Self::new(
            w.view((0, 0), (dim_e, dim_e)).into_owned(),
            w.view((0, dim_e), (dim_e, k)).into_owned(),
            w.view((dim_e, 0), (k, dim_e)).into_owned(),
            w.view((dim_e, dim_e), (k, k)).into_owned(),
        )
    }

    /// Random colligation: a Haar unitary on `E ⊕ K` cut into blocks.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim_e: usize, dim_k: usize) -> Self {
        let w = haar_unitary(rng, dim_e + dim_k);
        Self::from_system_matrix(&w, dim_e).expect("dim_e > 0")
    }

    /// Colligation with prescribed state operator `D` (a strict
    /// contraction): the Halmos dilation
    /// `[[−V₁D*V₂, V₁(I−D*D)^½], [(I−DD*)^½V₂, D]]` with `dim E = dim K`.
    pub fn dilation(d: &CMatrix, v1: &CMatrix, v2: &CMatrix) -> Result<Self> {
        let k = d.nrows();
        if d.ncols() != k || v1.shape() != (k, k) || v2.shape() != (k, k) {
            return Err(Error::DimensionMismatch("dilation needs square D, V1, V2 of equal size".into()));
        }
        let defect_in = psd_sqrt(&(identity(k) - d.adjoint() * d));
        let defect_out = psd_sqrt(&(identity(k) - d * d.adjoint()));
        Self::new(-(v1 * d.adjoint() * v2), v1 * defect_in, defect_out * v2, d.clone())
    }

    pub fn dim_e(&self) -> usize {
        self.a.nrows()
    }

    pub fn dim_k(&self) -> usize {
        self.d.nrows()
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    pub fn c(&self) -> &CMatrix {
        &self.c
    }

    pub fn d(&self) -> &CMatrix {
        &self.d
    }

    pub fn system_matrix(&self) -> CMatrix {
        let (e, k) = (self.dim_e(), self.dim_k());
        let mut w = zeros(e + k, e + k);
        w.view_mut((0, 0), (e, e)).copy_from(&self.a);
        w.view_mut((0, e), (e, k)).copy_from(&self.b);
        w.view_mut((e, 0), (k, e)).copy_from(&self.c);
        w.view_mut((e, e), (k, k)).copy_from(&self.d);
        w
    }

    /// Unitarity of the system matrix.
    pub fn validate(&self, tol: f64) -> ColligationCheck {
        let w = self.system_matrix();
        let n = w.nrows();
        let residual_left = op_norm(&(w.adjoint() * &w - identity(n)));
        let residual_right = op_norm(&(&w * w.adjoint() - identity(n)));
        ColligationCheck { residual_left, residual_right, valid: residual_left <= tol && residual_right <= tol }
    }

    /// `(I − λD)⁻¹ X` by LU solve.
    fn resolvent_apply(&self, lambda: Complex64, x: &CMatrix) -> Result<CMatrix> {
        let k = self.dim_k();
        if k == 0 {
            return Ok(x.clone());
        }
        let m = identity(k) - &self.d * lambda;
        m.lu().solve(x).ok_or(Error::Singular)
    }

    fn check_disc(lambda: Complex64) -> Result<()> {
        if lambda.norm() >= 1.0 {
            return Err(Error::OutsideDisc { modulus: lambda.norm() });
        }
        Ok(())
    }

    /// Transfer function value `A + λB(I − λD)⁻¹C` for `|λ| < 1`.
    pub fn tau_eval(&self, lambda: Complex64) -> Result<CMatrix> {
        Self::check_disc(lambda)?;
        if self.dim_k() == 0 || lambda == Complex64::new(0.0, 0.0) {
            return Ok(self.a.clone());
        }
        let x = self.resolvent_apply(lambda, &self.c)?;
        Ok(&self.a + &self.b * x * lambda)
    }

    /// Grid maxima of the two defect identities and of `‖τ_W(λ)‖`.
    pub fn defect_identities(&self, lambda_grid: &[Complex64]) -> Result<TransferReport> {
        let e = self.dim_e();
        let mut report = TransferReport {
            lambda_grid: lambda_grid.iter().map(|z| [z.re, z.im]).collect(),
            max_defect1: 0.0,
            max_defect2: 0.0,
            max_norm: 0.0,
        };
        for &lambda in lambda_grid {
            let phi = self.tau_eval(lambda)?;
            let weight = 1.0 - lambda.norm_sqr();
            let lhs1 = identity(e) - &phi * phi.adjoint();
            let lhs2 = identity(e) - phi.adjoint() * &phi;
            let (rhs1, rhs2) = if self.dim_k() == 0 {
                (zeros(e, e), zeros(e, e))
            } else {
                // Y = (I − λ̄D*)⁻¹B* so that B(I−λD)⁻¹(I−λ̄D*)⁻¹B* = Y*Y.
                let k = self.dim_k();
                let adj = identity(k) - self.d.adjoint() * lambda.conj();
                let y = adj.lu().solve(&self.b.adjoint()).ok_or(Error::Singular)?;
                let x = self.resolvent_apply(lambda, &self.c)?;
                (y.adjoint() * &y * c(weight, 0.0), x.adjoint() * &x * c(weight, 0.0))
            };
            report.max_defect1 = report.max_defect1.max(op_norm(&(lhs1 - rhs1)));
            report.max_defect2 = report.max_defect2.max(op_norm(&(lhs2 - rhs2)));
            report.max_norm = report.max_norm.max(op_norm(&phi));
        }
        Ok(report)
    }

    /// Exact polynomial `A + Σ_{k≥1} z^k B D^{k−1} C` when `D` is nilpotent.
    pub fn polynomial(&self, tol: f64) -> Result<PolyMatrix> {
        let k = self.dim_k();
        if k == 0 {
            return Ok(PolyMatrix::constant(self.a.clone()));
        }
        let q = (1..=k).find(|&q| op_norm(&mat_pow(&self.d, q)) <= tol).ok_or(Error::NotNilpotent)?;
        let mut coeffs = vec![self.a.clone()];
        let mut power = identity(k);
        for _ in 1..=q {
            coeffs.push(&self.b * &power * &self.c);
            power = &power * &self.d;
        }
        PolyMatrix::new(coeffs)
    }
}

/// Colligation realizing `U(zP + P⊥)` with `D = 0`: `A = UP⊥`, `B = UQ`,
/// `C = Q*` where `Q` is an orthonormal basis of `ran P`.
pub fn bcl_colligation(u: &CMatrix, p: &CMatrix, tol: f64) -> Result<Colligation> {
    let n = u.nrows();
    if u.ncols() != n || p.shape() != (n, n) {
        return Err(Error::DimensionMismatch("U and P must be square of the same size".into()));
    }
    let ures = unitarity_residual(u);
    if ures > tol {
        return Err(Error::NotUnitary { residual: ures });
    }
    let pres = op_norm(&(p * p - p)).max(op_norm(&(p - p.adjoint())));
    if pres > tol {
        return Err(Error::NotProjection { residual: pres });
    }
    let q = column_space(p, 0.5);
    let r = q.ncols();
    Colligation::new(u * (identity(n) - p), u * &q, q.adjoint(), zeros(r, r))
}

/// Deterministic sunflower pattern of `n` points with moduli up to
/// `max_radius`, starting at the origin.
pub fn disc_grid(n: usize, max_radius: f64) -> Vec<Complex64> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|j| {
            let r = if n <= 1 { 0.0 } else { max_radius * (j as f64 / (n - 1) as f64).sqrt() };
            Complex64::from_polar(r, golden * j as f64)
        })
        .collect()
}
