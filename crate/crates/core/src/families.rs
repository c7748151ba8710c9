//! Seeded instance generators with ground truth known by construction.
//!
//! Every generator takes an explicit RNG; [`rng`] derives independent
//! streams from one seed so that instance `k` of a sweep never depends on
//! how many random numbers instance `k − 1` consumed.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::colligation::Colligation;
use crate::error::Result;
use crate::linalg::{block_diag, c, complex_gaussian, haar_unitary, identity, op_norm, zeros, CMatrix};
use crate::symbol::{phase, sup_norm_estimate, CircleGrid, MatrixSymbol, PolyMatrix};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// `V diag(U₀, C) V*` with `U₀` unitary of size `unitary_dim` and `C` a
/// contraction without unitary part.
#[derive(Debug, Clone)]
pub struct PlantedContraction {
    pub t: CMatrix,
    pub unitary_dim: usize,
    /// First `unitary_dim` columns span the planted unitary part.
    pub frame: CMatrix,
}

/// Nilpotent shift on `C^n` (ones on the subdiagonal).
pub fn nilpotent_shift(n: usize) -> CMatrix {
    let mut s = zeros(n, n);
    for i in 1..n {
        s[(i, i - 1)] = c(1.0, 0.0);
    }
    s
}

fn scaled_gaussian<R: Rng + ?Sized>(rng: &mut R, n: usize, norm: f64) -> CMatrix {
    let g = complex_gaussian(rng, n, n);
    let s = op_norm(&g);
    if s == 0.0 {
        g
    } else {
        g * c(norm / s, 0.0)
    }
}

/// Random contraction of size `n` mixing four c.n.u. shapes for the
/// complement: strict, nilpotent shift, norm-one generic, shift ⊕ strict.
pub fn random_contraction<R: Rng + ?Sized>(rng: &mut R, n: usize) -> PlantedContraction {
    let k = rng.random_range(0..=n);
    let m = n - k;
    let rest = match rng.random_range(0..4) {
        0 => {
            let rho = rng.random_range(0.2..0.95);
            scaled_gaussian(rng, m, rho)
        }
        1 => nilpotent_shift(m),
        // A 1x1 block of norm one would be unitary.
        2 if m >= 2 => scaled_gaussian(rng, m, 1.0),
        2 => scaled_gaussian(rng, m, 0.5),
        _ => {
            let j = if m == 0 { 0 } else { rng.random_range(1..=m) };
            let rho = rng.random_range(0.2..0.95);
            block_diag(&[&nilpotent_shift(j), &scaled_gaussian(rng, m - j, rho)])
        }
    };
    let u0 = haar_unitary(rng, k);
    let v = haar_unitary(rng, n);
    let t = &v * block_diag(&[&u0, &rest]) * v.adjoint();
    PlantedContraction { t, unitary_dim: k, frame: v }
}

fn random_trig<R: Rng + ?Sized>(rng: &mut R, dim: usize, low: i64, high: i64) -> MatrixSymbol {
    let pairs: Vec<_> = (low..=high).map(|k| (k, complex_gaussian(rng, dim, dim))).collect();
    MatrixSymbol::new(dim, dim, pairs).expect("shapes agree")
}

/// Rescales so that the grid sup norm equals `target`.
pub fn scale_to_sup(sym: &MatrixSymbol, grid: &CircleGrid, target: f64) -> MatrixSymbol {
    let sup = sup_norm_estimate(sym, grid);
    sym.scale(c(target / sup, 0.0))
}

/// Nonconstant scalar trigonometric polynomial with coefficients at
/// `−band..=band`, grid sup norm 1.
pub fn goor_symbol<R: Rng + ?Sized>(rng: &mut R, band: usize, grid: &CircleGrid) -> MatrixSymbol {
    assert!(band >= 1, "a Goor instance needs band ≥ 1");
    let b = band as i64;
    scale_to_sup(&random_trig(rng, 1, -b, b), grid, 1.0)
}

/// Nonconstant analytic scalar polynomial of the given degree, grid sup
/// norm 1.
pub fn goor_analytic<R: Rng + ?Sized>(rng: &mut R, degree: usize, grid: &CircleGrid) -> MatrixSymbol {
    assert!(degree >= 1, "a Goor instance needs degree ≥ 1");
    scale_to_sup(&random_trig(rng, 1, 0, degree as i64), grid, 1.0)
}

/// `V diag(W₀, Ψ) V*` with `W₀` a Haar unitary and `Ψ` nonconstant with grid
/// sup norm ½.
#[derive(Debug, Clone)]
pub struct PlantedBlock {
    pub symbol: MatrixSymbol,
    pub w0: CMatrix,
    /// Isometry onto the planted constant block.
    pub e0: CMatrix,
}

impl PlantedBlock {
    /// `E₀ W₀ E₀*`, the planted unitary in ambient coordinates.
    pub fn w0_ambient(&self) -> CMatrix {
        &self.e0 * &self.w0 * self.e0.adjoint()
    }
}

/// `V Φ V*`.
fn rotate(sym: &MatrixSymbol, v: &CMatrix) -> MatrixSymbol {
    sym.conjugate_by(&v.adjoint()).expect("square rotation")
}

fn first_columns(v: &CMatrix, k: usize) -> CMatrix {
    v.columns(0, k).into_owned()
}

/// Random contractive block with grid sup norm ½ and band `1..=2`.
pub fn half_contraction<R: Rng + ?Sized>(rng: &mut R, dim: usize, grid: &CircleGrid) -> MatrixSymbol {
    let band = rng.random_range(1..=2);
    scale_to_sup(&random_trig(rng, dim, -band, band), grid, 0.5)
}

pub fn planted_block<R: Rng + ?Sized>(rng: &mut R, d0: usize, d1: usize, grid: &CircleGrid) -> PlantedBlock {
    let w0 = haar_unitary(rng, d0);
    let psi = half_contraction(rng, d1, grid);
    let core = MatrixSymbol::constant(block_diag(&[&w0, &zeros(d1, d1)])).add(&embed_lower(&psi, d0)).unwrap();
    let v = haar_unitary(rng, d0 + d1);
    PlantedBlock { symbol: rotate(&core, &v), w0, e0: first_columns(&v, d0) }
}

/// `diag(0_{offset}, sym)`.
pub fn embed_lower(sym: &MatrixSymbol, offset: usize) -> MatrixSymbol {
    let d = sym.dim_in() + offset;
    let pairs: Vec<_> = sym
        .coeffs()
        .map(|(k, m)| {
            let mut big = zeros(d, d);
            big.view_mut((offset, offset), m.shape()).copy_from(m);
            (k, big)
        })
        .collect();
    MatrixSymbol::new(d, d, pairs).unwrap()
}

/// `(1, z)ᵀ/√2`.
pub fn tilted_inner() -> PolyMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PolyMatrix::new(vec![crate::linalg::unit(2, 1, 0, 0) * c(s, 0.0), crate::linalg::unit(2, 1, 1, 0) * c(s, 0.0)])
        .unwrap()
}

/// `e^{iα}(½ΘΘ* + ½I)` for `Θ = (1, z)ᵀ/√2`: unitary on `ran Θ(z)`, half on
/// the complement, so its unitary part is `Θ·H²` and not of product form.
pub fn tilted_symbol(alpha: f64) -> MatrixSymbol {
    let theta = tilted_inner().to_symbol();
    let proj = theta.multiply(&theta.adjoint()).unwrap();
    let half = c(0.5, 0.0);
    proj.scale(half).add(&MatrixSymbol::constant(identity(2) * half)).unwrap().scale(phase(alpha))
}

/// `V diag(e^{iα}(½ΘΘ* + ½I), Ψ) V*` with `Θ = (1, z)ᵀ/√2`.
pub fn tilted_block<R: Rng + ?Sized>(rng: &mut R, d1: usize, grid: &CircleGrid) -> MatrixSymbol {
    let alpha = rng.random_range(0.0..std::f64::consts::TAU);
    let psi = half_contraction(rng, d1, grid);
    let core = embed_upper(&tilted_symbol(alpha), d1).add(&embed_lower(&psi, 2)).unwrap();
    let v = haar_unitary(rng, 2 + d1);
    rotate(&core, &v)
}

/// `diag(sym, 0_{extra})`.
pub fn embed_upper(sym: &MatrixSymbol, extra: usize) -> MatrixSymbol {
    let d = sym.dim_in() + extra;
    let pairs: Vec<_> = sym
        .coeffs()
        .map(|(k, m)| {
            let mut big = zeros(d, d);
            big.view_mut((0, 0), m.shape()).copy_from(m);
            (k, big)
        })
        .collect();
    MatrixSymbol::new(d, d, pairs).unwrap()
}

/// Colligation whose `A` carries a planted unitary block `U₀` on `E₀`,
/// decoupled from `B` and `C`; the rest is a Halmos dilation of a nilpotent
/// `D`, so the transfer function is a polynomial.
#[derive(Debug, Clone)]
pub struct PlantedColligation {
    pub colligation: Colligation,
    pub u0: CMatrix,
    pub e0: CMatrix,
}

/// Strictly upper-triangular Gaussian matrix scaled to `norm`.
pub fn nilpotent_strict<R: Rng + ?Sized>(rng: &mut R, n: usize, norm: f64) -> CMatrix {
    let mut g = complex_gaussian(rng, n, n);
    for i in 0..n {
        for j in 0..=i {
            g[(i, j)] = c(0.0, 0.0);
        }
    }
    let s = op_norm(&g);
    if s > 0.0 {
        g *= c(norm / s, 0.0);
    }
    g
}

/// Halmos dilation of a nilpotent `D` of size `n`, `‖D‖ = 0.7`.
pub fn nilpotent_colligation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Colligation {
    let d = nilpotent_strict(rng, n, 0.7);
    let v1 = haar_unitary(rng, n);
    let v2 = haar_unitary(rng, n);
    Colligation::dilation(&d, &v1, &v2).expect("square blocks")
}

/// `U₀` planted on a `d0`-dimensional `E₀`, the remainder a nilpotent
/// dilation on `C^{d1} ⊕ C^{d1}`. Needs `d0 + d1 ≥ 1`.
pub fn planted_colligation<R: Rng + ?Sized>(rng: &mut R, u0: &CMatrix, d1: usize) -> Result<PlantedColligation> {
    let d0 = u0.nrows();
    let dim_e = d0 + d1;
    let (a, b, cm, d) = if d1 == 0 {
        (u0.clone(), zeros(d0, 0), zeros(0, d0), zeros(0, 0))
    } else {
        let rest = nilpotent_colligation(rng, d1);
        let mut b = zeros(dim_e, d1);
        b.view_mut((d0, 0), (d1, d1)).copy_from(rest.b());
        let mut cm = zeros(d1, dim_e);
        cm.view_mut((0, d0), (d1, d1)).copy_from(rest.c());
        (block_diag(&[u0, rest.a()]), b, cm, rest.d().clone())
    };
    let v = haar_unitary(rng, dim_e);
    let colligation = Colligation::new(&v * a * v.adjoint(), &v * b, cm * v.adjoint(), d)?;
    Ok(PlantedColligation { colligation, u0: u0.clone(), e0: first_columns(&v, d0) })
}

/// `U₀ ∏ⱼ (Pⱼ⊥ + zPⱼ)` with random rank-≥1 projections: inner of degree at
/// most `degree`.
pub fn random_inner<R: Rng + ?Sized>(rng: &mut R, dim: usize, degree: usize) -> PolyMatrix {
    let mut acc = MatrixSymbol::constant(haar_unitary(rng, dim));
    for _ in 0..degree {
        let rank = rng.random_range(1..=dim);
        let p = crate::linalg::random_projection(rng, dim, rank);
        acc = acc.multiply(&crate::symbol::shift_projection_symbol(&p)).unwrap();
    }
    acc.to_poly().expect("analytic product")
}

/// Inner polynomial times `diag(damp, 1, …)` on the right: `Θ*Θ` misses
/// the identity at every point, so never inner.
pub fn random_non_inner<R: Rng + ?Sized>(rng: &mut R, dim: usize, degree: usize) -> PolyMatrix {
    let inner = random_inner(rng, dim, degree);
    let mut right = identity(dim);
    right[(0, 0)] = Complex64::new(rng.random_range(0.3..0.9), 0.0);
    inner.mul_right(&right).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::isometry_residual;
    use crate::symbol::is_inner;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let a = complex_gaussian(&mut rng(7, 0), 2, 2);
        let b = complex_gaussian(&mut rng(7, 1), 2, 2);
        assert_ne!(a, b);
        assert_eq!(a, complex_gaussian(&mut rng(7, 0), 2, 2));
    }

    #[test]
    fn planted_contraction_is_a_contraction() {
        for s in 0..40 {
            let p = random_contraction(&mut rng(s, 0), 6);
            assert!(op_norm(&p.t) <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn generated_inner_functions_are_inner() {
        let grid = CircleGrid::new(64).unwrap();
        for s in 0..10 {
            let theta = random_inner(&mut rng(s, 0), 3, 2);
            assert!(is_inner(&theta, &grid, 1e-10).inner);
            let bad = random_non_inner(&mut rng(s, 0), 3, 2);
            assert!(!is_inner(&bad, &grid, 1e-8).inner);
        }
    }

    #[test]
    fn planted_colligation_is_unitary_and_polynomial() {
        let u0 = identity(1) * c(0.0, 1.0);
        let p = planted_colligation(&mut rng(3, 0), &u0, 2).unwrap();
        assert!(p.colligation.validate(1e-10).valid);
        assert!(p.colligation.polynomial(1e-10).is_ok());
        assert!(isometry_residual(&p.e0) < 1e-12);
        let on_e0 = p.e0.adjoint() * p.colligation.a() * &p.e0;
        assert!(op_norm(&(on_e0 - &u0)) < 1e-12);
        assert!(op_norm(&(p.colligation.c() * &p.e0)) < 1e-12);
        assert!(op_norm(&(p.colligation.b().adjoint() * &p.e0)) < 1e-12);
    }

    #[test]
    fn tilted_symbol_is_contractive() {
        let grid = CircleGrid::new(128).unwrap();
        assert!((sup_norm_estimate(&tilted_symbol(0.3), &grid) - 1.0).abs() < 1e-12);
        let t = tilted_block(&mut rng(1, 0), 1, &grid);
        assert!(sup_norm_estimate(&t, &grid) <= 1.0 + 1e-12);
    }
}
