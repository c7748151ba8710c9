//! Dense complex linear algebra helpers shared by every module.
//!
//! Everything here works on `nalgebra::DMatrix<Complex64>`. Subspaces are
//! carried around as matrices with orthonormal columns. SVDs and eigenvalue
//! problems go through faer: nalgebra's complex SVD returns wrong factors
//! for a few percent of rank-deficient inputs.

use faer::Side;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Default tolerance for boolean classifications.
pub const DEFAULT_TOL: f64 = 1e-8;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

/// Real diagonal matrix.
pub fn diag(entries: &[f64]) -> CMatrix {
    let n = entries.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { c(entries[i], 0.0) } else { c(0.0, 0.0) })
}

/// Matrix with a single unit entry at `(i, j)`.
pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> CMatrix {
    let mut m = zeros(rows, cols);
    m[(i, j)] = c(1.0, 0.0);
    m
}

/// Block-diagonal direct sum.
pub fn block_diag(blocks: &[&CMatrix]) -> CMatrix {
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let (mut r, mut c0) = (0, 0);
    for b in blocks {
        out.view_mut((r, c0), (b.nrows(), b.ncols())).copy_from(*b);
        r += b.nrows();
        c0 += b.ncols();
    }
    out
}

fn to_faer(m: &CMatrix) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, Complex64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Full SVD `M = U S V*` with singular values in nonincreasing order.
struct FullSvd {
    u: CMatrix,
    s: Vec<f64>,
    v: CMatrix,
}

fn full_svd(m: &CMatrix) -> FullSvd {
    let svd = to_faer(m).svd().expect("SVD failed to converge");
    let s = svd.S().column_vector().iter().map(|x| x.re).collect();
    FullSvd { u: from_faer(svd.U()), s, v: from_faer(svd.V()) }
}

/// Singular values in nonincreasing order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    to_faer(m).singular_values().expect("SVD failed to converge")
}

/// Operator (spectral) norm; zero for empty matrices.
pub fn op_norm(m: &CMatrix) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

/// `max(‖M*M − I‖, ‖MM* − I‖)`.
pub fn unitarity_residual(m: &CMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let a = op_norm(&(m.adjoint() * m - identity(n)));
    let b = op_norm(&(m * m.adjoint() - identity(n)));
    a.max(b)
}

/// `‖V*V − I‖` for a matrix meant to have orthonormal columns.
pub fn isometry_residual(v: &CMatrix) -> f64 {
    op_norm(&(v.adjoint() * v - identity(v.ncols())))
}

/// Orthonormal basis of the null space of `m`, keeping right singular
/// vectors whose singular value is at most `threshold`.
pub fn null_space(m: &CMatrix, threshold: f64) -> CMatrix {
    let n = m.ncols();
    if n == 0 {
        return zeros(0, 0);
    }
    if m.nrows() == 0 {
        return identity(n);
    }
    let svd = full_svd(m);
    let keep: Vec<usize> = (0..n).filter(|&i| svd.s.get(i).is_none_or(|s| *s <= threshold)).collect();
    svd.v.select_columns(&keep)
}

/// Orthonormal basis of the column space of `m`, dropping directions with
/// singular value at or below `threshold`.
pub fn column_space(m: &CMatrix, threshold: f64) -> CMatrix {
    let rows = m.nrows();
    if m.ncols() == 0 || rows == 0 {
        return zeros(rows, 0);
    }
    let svd = full_svd(m);
    let rank = svd.s.iter().take_while(|s| **s > threshold).count();
    svd.u.columns(0, rank).into_owned()
}

/// Makes the first entry of each column (above a small relative floor)
/// real and positive.
pub fn normalize_column_phases(q: &mut CMatrix) {
    for j in 0..q.ncols() {
        let norm = q.column(j).norm();
        if norm == 0.0 {
            continue;
        }
        let pivot = q.column(j).iter().copied().find(|z| z.norm() > 1e-6 * norm);
        if let Some(p) = pivot {
            let phase = p.conj() / p.norm();
            for i in 0..q.nrows() {
                q[(i, j)] *= phase;
            }
        }
    }
}

/// Orthogonal projector `QQ*` onto the span of orthonormal columns.
pub fn projector(q: &CMatrix) -> CMatrix {
    q * q.adjoint()
}

/// `‖(I − PP*) Q‖`: how far the span of `q` sticks out of the span of `p`.
pub fn containment_residual(p: &CMatrix, q: &CMatrix) -> f64 {
    if q.ncols() == 0 {
        return 0.0;
    }
    if p.ncols() == 0 {
        return op_norm(q);
    }
    op_norm(&(q - p * (p.adjoint() * q)))
}

/// Largest principal angle between two subspaces given by orthonormal
/// bases. Subspaces of different dimension are at angle π/2.
pub fn max_principal_angle(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.ncols() != b.ncols() {
        return std::f64::consts::FRAC_PI_2;
    }
    if a.ncols() == 0 {
        return 0.0;
    }
    let s = containment_residual(a, b).max(containment_residual(b, a));
    s.min(1.0).asin()
}

/// Eigenvalues of a general complex square matrix.
pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    to_faer(m).eigenvalues().expect("eigenvalue iteration failed to converge")
}

pub fn spectral_radius(m: &CMatrix) -> f64 {
    eigenvalues(m).into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Square root of a Hermitian positive semidefinite matrix; small negative
/// eigenvalues from rounding are clamped to zero.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let herm = (m + m.adjoint()) * c(0.5, 0.0);
    if herm.is_empty() {
        return herm;
    }
    let eig = to_faer(&herm).self_adjoint_eigen(Side::Lower).expect("Hermitian eigensolver failed");
    let vecs = from_faer(eig.U());
    let roots: Vec<Complex64> = eig.S().column_vector().iter().map(|l| c(l.re.max(0.0).sqrt(), 0.0)).collect();
    &vecs * CMatrix::from_diagonal(&CVector::from_vec(roots)) * vecs.adjoint()
}

pub fn mat_pow(m: &CMatrix, n: usize) -> CMatrix {
    let mut out = identity(m.nrows());
    for _ in 0..n {
        out = &out * m;
    }
    out
}

/// Kronecker product `I_n ⊗ M`, i.e. `M` repeated down the diagonal.
pub fn repeat_diag(m: &CMatrix, n: usize) -> CMatrix {
    let blocks: Vec<&CMatrix> = std::iter::repeat_n(m, n).collect();
    block_diag(&blocks)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(scale * re, scale * im)
    })
}

/// Haar-distributed unitary from the QR factorization of a complex Gaussian
/// matrix, with the phases of `R`'s diagonal folded back into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    if n == 0 {
        return zeros(0, 0);
    }
    let qr = complex_gaussian(rng, n, n).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Random rank-`rank` orthogonal projection on `C^n`.
pub fn random_projection<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> CMatrix {
    let u = haar_unitary(rng, n);
    let q = u.columns(0, rank).into_owned();
    projector(&q)
}
