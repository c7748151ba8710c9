//! Unitary / completely non-unitary splitting.
//!
//! [`unitary_part_matrix`] handles finite matrices by subspace refinement and
//! [`unitary_part_brute`] is its independent oracle (intersection of the
//! kernels of `I − T*ⁿTⁿ` and `I − TⁿT*ⁿ`). [`toeplitz_unitary_part`] runs the
//! same refinement against the exact action of a Toeplitz operator on a
//! degree window, then factors the result as `Θ·H²_F` and reads off the
//! constant unitary `U` with `ΦΘ = ΘU`, `Φ*Θ = ΘU*` on the circle.

mod beurling;
mod calculus;
mod matrix;
mod toeplitz;

pub use beurling::{
    beurling_extract, extract_constant_unitary, range_projection_distance, theta_window_basis, verify_maincondn, BeurlingExtraction,
    ConstantUnitary, MaincondnCheck,
};
pub use calculus::{poly_calculus, CalculusSection, ScalarPoly};
pub use matrix::{
    cdot0_test, isometric_part_matrix, reducing_check, unitary_part_brute, unitary_part_matrix, Cdot0Report,
    MatrixPart, PartResiduals, ReducingCheck,
};
pub use toeplitz::{toeplitz_unitary_part, window_brute_force, Certification, Classification, UnitaryPartReport};

use crate::error::{Error, Result};
use crate::linalg::{containment_residual, isometry_residual, max_principal_angle, projector, zeros, CMatrix};

/// Subspace of `C^n` given by an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: CMatrix,
    tol: f64,
}

impl Subspace {
    pub fn new(basis: CMatrix, tol: f64) -> Result<Self> {
        let residual = isometry_residual(&basis);
        if residual > tol.max(1e-10) {
            return Err(Error::NotIsometry { residual });
        }
        Ok(Self { ambient_dim: basis.nrows(), basis, tol })
    }

    pub(crate) fn from_orthonormal(basis: CMatrix, tol: f64) -> Self {
        Self { ambient_dim: basis.nrows(), basis, tol }
    }

    pub fn zero(ambient_dim: usize, tol: f64) -> Self {
        Self { ambient_dim, basis: zeros(ambient_dim, 0), tol }
    }

    pub fn full(ambient_dim: usize, tol: f64) -> Self {
        Self { ambient_dim, basis: CMatrix::identity(ambient_dim, ambient_dim), tol }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn projector(&self) -> CMatrix {
        projector(&self.basis)
    }

    /// How far `other` sticks out of `self`; zero when `other ⊆ self`.
    pub fn containment_residual(&self, other: &Subspace) -> f64 {
        containment_residual(&self.basis, &other.basis)
    }

    pub fn contains(&self, other: &Subspace, tol: f64) -> bool {
        self.containment_residual(other) <= tol
    }

    pub fn max_principal_angle(&self, other: &Subspace) -> f64 {
        max_principal_angle(&self.basis, &other.basis)
    }
}
