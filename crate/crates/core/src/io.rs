//! JSON encodings for symbols, polynomials, colligations, Hardy vectors and
//! decomposition reports.
//!
//! Matrices are `{"re": [[..]], "im": [[..]]}`, row-major. Shapes always come
//! from the enclosing object so that empty blocks (e.g. `B` with
//! `dim_k = 0`) are unambiguous.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::colligation::Colligation;
use crate::error::{Error, Result};
use crate::hardy::HardyVector;
use crate::linalg::{c, CMatrix, CVector};
use crate::symbol::{MatrixSymbol, PolyMatrix};
use crate::unitary_part::{Certification, Classification, UnitaryPartReport};

/// Schema tag carried by every report file.
pub const SCHEMA: &str = "hardy-unitary-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let rows = |f: fn(&num_complex::Complex64) -> f64| {
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect()
        };
        Self { re: rows(|z| z.re), im: rows(|z| z.im) }
    }

    pub fn to_matrix(&self, rows: usize, cols: usize) -> Result<CMatrix> {
        let shape_ok = |part: &Vec<Vec<f64>>| {
            // A matrix with no columns may be written as `[]` or as empty rows.
            (part.len() == rows && part.iter().all(|r| r.len() == cols)) || (cols == 0 && part.is_empty())
                || (rows == 0 && part.is_empty())
        };
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::Format(format!("matrix entries do not match declared shape {rows}x{cols}")));
        }
        Ok(CMatrix::from_fn(rows, cols, |i, j| c(self.re[i][j], self.im[i][j])))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub k: i64,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolJson {
    pub dim_out: usize,
    pub dim_in: usize,
    pub coeffs: Vec<CoeffJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub dim_out: usize,
    pub dim_in: usize,
    pub degree: usize,
    pub coeffs: Vec<CoeffJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct ColligationJson {
    pub dim_e: usize,
    pub dim_k: usize,
    pub A: MatrixJson,
    pub B: MatrixJson,
    pub C: MatrixJson,
    pub D: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyVectorJson {
    pub dim: usize,
    pub coeffs: Vec<VectorJson>,
}

fn coeff_json(k: i64, m: &CMatrix) -> CoeffJson {
    let MatrixJson { re, im } = MatrixJson::from_matrix(m);
    CoeffJson { k, re, im }
}

fn coeff_matrix(cj: &CoeffJson, rows: usize, cols: usize) -> Result<CMatrix> {
    MatrixJson { re: cj.re.clone(), im: cj.im.clone() }
        .to_matrix(rows, cols)
        .map_err(|e| Error::Format(format!("coefficient k={}: {e}", cj.k)))
}

impl From<&MatrixSymbol> for SymbolJson {
    fn from(sym: &MatrixSymbol) -> Self {
        Self {
            dim_out: sym.dim_out(),
            dim_in: sym.dim_in(),
            coeffs: sym.coeffs().map(|(k, m)| coeff_json(k, m)).collect(),
        }
    }
}

impl TryFrom<&SymbolJson> for MatrixSymbol {
    type Error = Error;

    fn try_from(j: &SymbolJson) -> Result<Self> {
        let coeffs = j
            .coeffs
            .iter()
            .map(|cj| Ok((cj.k, coeff_matrix(cj, j.dim_out, j.dim_in)?)))
            .collect::<Result<Vec<_>>>()?;
        MatrixSymbol::new(j.dim_out, j.dim_in, coeffs)
    }
}

impl From<&PolyMatrix> for PolyJson {
    fn from(p: &PolyMatrix) -> Self {
        Self {
            dim_out: p.dim_out(),
            dim_in: p.dim_in(),
            degree: p.degree(),
            coeffs: p.coeffs().iter().enumerate().map(|(k, m)| coeff_json(k as i64, m)).collect(),
        }
    }
}

impl TryFrom<&PolyJson> for PolyMatrix {
    type Error = Error;

    fn try_from(j: &PolyJson) -> Result<Self> {
        let mut coeffs = vec![CMatrix::zeros(j.dim_out, j.dim_in); j.degree + 1];
        for cj in &j.coeffs {
            if cj.k < 0 || cj.k as usize > j.degree {
                return Err(Error::Format(format!("polynomial key {} outside 0..={}", cj.k, j.degree)));
            }
            coeffs[cj.k as usize] += coeff_matrix(cj, j.dim_out, j.dim_in)?;
        }
        PolyMatrix::new(coeffs)
    }
}

impl From<&Colligation> for ColligationJson {
    fn from(w: &Colligation) -> Self {
        Self {
            dim_e: w.dim_e(),
            dim_k: w.dim_k(),
            A: MatrixJson::from_matrix(w.a()),
            B: MatrixJson::from_matrix(w.b()),
            C: MatrixJson::from_matrix(w.c()),
            D: MatrixJson::from_matrix(w.d()),
        }
    }
}

impl TryFrom<&ColligationJson> for Colligation {
    type Error = Error;

    fn try_from(j: &ColligationJson) -> Result<Self> {
        let (e, k) = (j.dim_e, j.dim_k);
        Colligation::new(j.A.to_matrix(e, e)?, j.B.to_matrix(e, k)?, j.C.to_matrix(k, e)?, j.D.to_matrix(k, k)?)
    }
}

impl From<&HardyVector> for HardyVectorJson {
    fn from(h: &HardyVector) -> Self {
        Self {
            dim: h.dim(),
            coeffs: h
                .coeffs()
                .iter()
                .map(|a| VectorJson { re: a.iter().map(|z| z.re).collect(), im: a.iter().map(|z| z.im).collect() })
                .collect(),
        }
    }
}

impl TryFrom<&HardyVectorJson> for HardyVector {
    type Error = Error;

    fn try_from(j: &HardyVectorJson) -> Result<Self> {
        let coeffs = j
            .coeffs
            .iter()
            .map(|v| {
                if v.re.len() != j.dim || v.im.len() != j.dim {
                    return Err(Error::Format(format!("vector coefficient must have length {}", j.dim)));
                }
                Ok(CVector::from_iterator(j.dim, v.re.iter().zip(&v.im).map(|(r, i)| c(*r, *i))))
            })
            .collect::<Result<Vec<_>>>()?;
        HardyVector::new(j.dim, coeffs)
    }
}

pub fn parse_symbol(text: &str) -> Result<MatrixSymbol> {
    let j: SymbolJson = serde_json::from_str(text)?;
    MatrixSymbol::try_from(&j)
}

pub fn parse_poly(text: &str) -> Result<PolyMatrix> {
    let j: PolyJson = serde_json::from_str(text)?;
    PolyMatrix::try_from(&j)
}

pub fn parse_colligation(text: &str) -> Result<Colligation> {
    let j: ColligationJson = serde_json::from_str(text)?;
    Colligation::try_from(&j)
}

pub fn parse_hardy_vector(text: &str) -> Result<HardyVector> {
    let j: HardyVectorJson = serde_json::from_str(text)?;
    HardyVector::try_from(&j)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubspaceJson {
    pub ambient_dim: usize,
    pub dim: usize,
    pub tol: f64,
    pub basis: MatrixJson,
}

/// Machine-readable form of a [`UnitaryPartReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitaryPartReportJson {
    pub schema: &'static str,
    pub seed: Option<u64>,
    pub dim: usize,
    pub band: usize,
    pub window: usize,
    pub grid: usize,
    pub tol: f64,
    pub sup_norm_estimate: f64,
    pub iterations: usize,
    pub classification: Classification,
    pub subspace: SubspaceJson,
    pub theta: Option<PolyJson>,
    pub u_matrix: Option<MatrixJson>,
    pub residual_intertwine_fwd: f64,
    pub residual_intertwine_adj: f64,
    pub residual_inner: f64,
    pub certification: Certification,
    pub note: Option<String>,
}

impl UnitaryPartReportJson {
    pub fn new(report: &UnitaryPartReport, seed: Option<u64>) -> Self {
        Self {
            schema: SCHEMA,
            seed,
            dim: report.dim,
            band: report.band,
            window: report.window,
            grid: report.grid,
            tol: report.tol,
            sup_norm_estimate: report.sup_norm_estimate,
            iterations: report.iterations,
            classification: report.classification,
            subspace: SubspaceJson {
                ambient_dim: report.subspace.ambient_dim(),
                dim: report.subspace.dim(),
                tol: report.subspace.tol(),
                basis: MatrixJson::from_matrix(report.subspace.basis()),
            },
            theta: report.theta.as_ref().map(PolyJson::from),
            u_matrix: report.u_matrix.as_ref().map(MatrixJson::from_matrix),
            residual_intertwine_fwd: report.residual_intertwine_fwd,
            residual_intertwine_adj: report.residual_intertwine_adj,
            residual_inner: report.residual_inner,
            certification: report.certification,
            note: report.note.clone(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes to a sibling temporary file, then renames over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::Format(format!("{} has no file name", path.display())))?
        .to_string_lossy()
        .into_owned();
    let tmp = path.with_file_name(format!(".{file_name}.tmp"));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colligation::bcl_colligation;
    use crate::linalg::{complex_gaussian, diag, identity, zeros};
    use crate::symbol::shift_projection_symbol;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_documented_symbol_format() {
        let text = r#"{ "dim_out": 2, "dim_in": 2, "coeffs": [
            { "k": 1, "re": [[1, 0], [0, 0]], "im": [[0, 0], [0, 0]] },
            { "k": 0, "re": [[0, 0], [0, 1]], "im": [[0, 0], [0, 0]] } ] }"#;
        let sym = parse_symbol(text).unwrap();
        assert_eq!(sym, shift_projection_symbol(&diag(&[1.0, 0.0])));
    }

    #[test]
    fn rejects_bad_shape() {
        let text = r#"{ "dim_out": 2, "dim_in": 2, "coeffs": [ { "k": 0, "re": [[1]], "im": [[0]] } ] }"#;
        assert!(matches!(parse_symbol(text), Err(Error::Format(_))));
        assert!(matches!(parse_symbol("{ not json"), Err(Error::Json(_))));
    }

    #[test]
    fn colligation_without_state_round_trips() {
        let w = Colligation::new(identity(2), zeros(2, 0), zeros(0, 2), zeros(0, 0)).unwrap();
        let text = serde_json::to_string(&ColligationJson::from(&w)).unwrap();
        assert_eq!(parse_colligation(&text).unwrap(), w);
    }

    #[test]
    fn bcl_colligation_round_trips() {
        let w = bcl_colligation(&identity(2), &diag(&[1.0, 0.0]), 1e-12).unwrap();
        let text = serde_json::to_string(&ColligationJson::from(&w)).unwrap();
        assert_eq!(parse_colligation(&text).unwrap(), w);
    }

    #[test]
    fn poly_rejects_negative_key() {
        let text = r#"{ "dim_out": 1, "dim_in": 1, "degree": 1, "coeffs": [ { "k": -1, "re": [[1]], "im": [[0]] } ] }"#;
        assert!(parse_poly(text).is_err());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    proptest! {
        #[test]
        fn symbol_json_round_trip(seed in 0u64..10_000, band in 0i64..3, rows in 1usize..4, cols in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pairs: Vec<_> = (-band..=band).map(|k| (k, complex_gaussian(&mut rng, rows, cols))).collect();
            let sym = MatrixSymbol::new(rows, cols, pairs).unwrap();
            let text = serde_json::to_string(&SymbolJson::from(&sym)).unwrap();
            prop_assert_eq!(parse_symbol(&text).unwrap(), sym);
        }

        #[test]
        fn hardy_json_round_trip(seed in 0u64..10_000, dim in 1usize..4, len in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let flat = complex_gaussian(&mut rng, dim * len, 1).column(0).into_owned();
            let h = HardyVector::from_flat(dim, &flat).unwrap();
            let text = serde_json::to_string(&HardyVectorJson::from(&h)).unwrap();
            prop_assert_eq!(parse_hardy_vector(&text).unwrap(), h);
        }
    }
}
