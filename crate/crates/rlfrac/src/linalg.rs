//! Dense generators and their spectral decomposition cache.
//!
//! A `Generator` is the operator A of the abstract problem, restricted to a
//! dense square matrix. On construction we attempt an eigendecomposition
//! A = V diag(λ) V⁻¹; if the reconstruction is accurate and V is
//! well-conditioned the cache is kept and matrix functions of A reduce to
//! scalar evaluations on the eigenvalues. Otherwise the cache is dropped
//! and callers fall back to series evaluation.

use crate::error::{Error, Result};
use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub type C64 = Complex<f64>;

/// Reconstruction tolerance for keeping a spectral cache, relative to ‖A‖_F.
pub const SPECTRAL_RECONSTRUCTION_TOL: f64 = 1e-10;

/// Condition-number cutoff above which the cache is not used for matrix
/// function evaluation.
pub const SPECTRAL_CONDITION_LIMIT: f64 = 1e8;

#[derive(Debug, Clone)]
pub struct Spectral {
    pub values: DVector<C64>,
    pub vectors: DMatrix<C64>,
    pub inverse: DMatrix<C64>,
    /// ‖V‖_F ‖V⁻¹‖_F estimate of cond(V).
    pub condition: f64,
}

#[derive(Debug, Clone)]
pub struct Generator {
    entries: DMatrix<C64>,
    real: bool,
    spectral: Option<Spectral>,
}

#[derive(Serialize, Deserialize)]
struct GeneratorFile {
    dim: usize,
    rows: Vec<Vec<f64>>,
}

impl Generator {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::InvalidInput(format!(
                "generator must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.nrows() == 0 {
            return Err(Error::InvalidInput("generator must be non-empty".into()));
        }
        if entries.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
            return Err(Error::InvalidInput("generator entries must be finite".into()));
        }
        let real = entries.iter().all(|e| e.im == 0.0);
        let spectral = if real {
            spectral_decompose(&entries)
        } else {
            // eigenvalue extraction is only wired up for real input
            None
        };
        Ok(Generator { entries, real, spectral })
    }

    pub fn from_real(m: DMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|x| C64::new(x, 0.0)))
    }

    /// Load from the JSON layout `{ "dim": n, "rows": [[..], ..] }`.
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidInput(format!("cannot read generator file {}: {e}", path.display()))
        })?;
        let file: GeneratorFile = serde_json::from_str(&text)?;
        if file.rows.len() != file.dim || file.rows.iter().any(|r| r.len() != file.dim) {
            return Err(Error::InvalidInput(format!(
                "generator file {}: rows do not form a {}x{} matrix",
                path.display(),
                file.dim,
                file.dim
            )));
        }
        let m = DMatrix::from_row_iterator(file.dim, file.dim, file.rows.iter().flatten().copied());
        Self::from_real(m)
    }

    pub fn write_json_file(&self, path: &Path) -> Result<()> {
        let m = self.entries_real().ok_or_else(|| {
            Error::InvalidInput("only real generators serialize to JSON".into())
        })?;
        let file = GeneratorFile {
            dim: self.dim(),
            rows: (0..self.dim())
                .map(|i| (0..self.dim()).map(|j| m[(i, j)]).collect())
                .collect(),
        };
        std::fs::write(path, serde_json::to_string_pretty(&file)?)?;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    /// Real part of the entries, if the generator is real.
    pub fn entries_real(&self) -> Option<DMatrix<f64>> {
        self.real.then(|| self.entries.map(|e| e.re))
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn spectral(&self) -> Option<&Spectral> {
        self.spectral.as_ref()
    }

    /// Spectral cache if present and well-conditioned enough to use.
    pub fn usable_spectral(&self) -> Option<&Spectral> {
        self.spectral
            .as_ref()
            .filter(|s| s.condition <= SPECTRAL_CONDITION_LIMIT)
    }

    pub fn norm_fro(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Upper bound on the spectral radius: max |λ| when the cache exists,
    /// Frobenius norm otherwise.
    pub fn spectral_radius_bound(&self) -> f64 {
        match &self.spectral {
            Some(s) => s.values.iter().map(|l| l.norm()).fold(0.0, f64::max),
            None => self.norm_fro(),
        }
    }
}

fn fro_norm(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigendecomposition of a real square matrix. Eigenvalues come from the
/// matrix structure when it is diagonal, triangular, or symmetric, and
/// from the (iteration-bounded) real Schur form otherwise; eigenvectors by
/// one inverse-iteration solve per eigenvalue with a deterministic start.
/// Returns `None` whenever the result does not reconstruct the matrix to
/// [`SPECTRAL_RECONSTRUCTION_TOL`] — defective or too-clustered spectra
/// simply run without a cache.
fn spectral_decompose(a: &DMatrix<C64>) -> Option<Spectral> {
    let n = a.nrows();
    let ar = a.map(|e| e.re);
    let scale = fro_norm(a).max(1.0);

    let lower_zero = (0..n).all(|i| (0..i).all(|j| ar[(i, j)] == 0.0));
    let upper_zero = (0..n).all(|i| (i + 1..n).all(|j| ar[(i, j)] == 0.0));
    let symmetric = ar == ar.transpose();

    if lower_zero && upper_zero {
        // diagonal: exact decomposition with V = I
        let values = DVector::from_iterator(n, (0..n).map(|i| C64::new(ar[(i, i)], 0.0)));
        let id = DMatrix::<C64>::identity(n, n);
        return Some(Spectral {
            values,
            vectors: id.clone(),
            inverse: id,
            condition: n as f64,
        });
    }

    if symmetric {
        let eig = ar.symmetric_eigen();
        let values = DVector::from_iterator(n, eig.eigenvalues.iter().map(|&l| C64::new(l, 0.0)));
        let vectors = eig.eigenvectors.map(|x| C64::new(x, 0.0));
        let inverse = eig.eigenvectors.transpose().map(|x| C64::new(x, 0.0));
        let spec = Spectral { values, vectors, inverse, condition: n as f64 };
        return reconstruction_ok(a, &spec).then_some(spec);
    }

    let values = if lower_zero || upper_zero {
        DVector::from_iterator(n, (0..n).map(|i| C64::new(ar[(i, i)], 0.0)))
    } else {
        // bounded Schur iteration: a failure to converge means no cache,
        // never a hang
        ar.try_schur(1e-13, 500)?.complex_eigenvalues()
    };

    let mut vectors = DMatrix::<C64>::zeros(n, n);
    for (k, lambda) in values.iter().enumerate() {
        // shift slightly off the eigenvalue so the LU stays nonsingular
        let shift = lambda + C64::new(1e-9 * scale, 1e-9 * scale);
        let shifted = a - DMatrix::<C64>::identity(n, n) * shift;
        let lu = shifted.full_piv_lu();

        let mut v = DVector::<C64>::from_element(n, C64::new(1.0, 0.0));
        v[k % n] += C64::new(1.0, 0.0);
        v /= C64::new(v.norm(), 0.0);
        for _ in 0..3 {
            let solved = lu.solve(&v)?;
            let norm = solved.norm();
            if !norm.is_finite() || norm == 0.0 {
                return None;
            }
            v = solved / C64::new(norm, 0.0);
        }
        // deterministic phase: make the largest-modulus entry real positive
        let pivot = v
            .iter()
            .cloned()
            .max_by(|x, y| x.norm().partial_cmp(&y.norm()).expect("finite"))
            .unwrap_or_else(|| C64::new(1.0, 0.0));
        if pivot.norm() > 0.0 {
            v *= pivot.conj() / C64::new(pivot.norm(), 0.0);
        }
        vectors.set_column(k, &v);
    }

    let lu = vectors.clone().full_piv_lu();
    let inverse = lu.try_inverse()?;
    let condition = fro_norm(&vectors) * fro_norm(&inverse);

    let mut reconstructed = vectors.clone();
    for (k, lambda) in values.iter().enumerate() {
        let col = reconstructed.column(k) * *lambda;
        reconstructed.set_column(k, &col);
    }
    let reconstructed = reconstructed * &inverse;
    let err = fro_norm(&(&reconstructed - a));
    if err > SPECTRAL_RECONSTRUCTION_TOL * fro_norm(a).max(f64::MIN_POSITIVE) && fro_norm(a) > 0.0 {
        return None;
    }
    if err > SPECTRAL_RECONSTRUCTION_TOL && fro_norm(a) == 0.0 {
        return None;
    }
    if !condition.is_finite() {
        return None;
    }

    Some(Spectral { values, vectors, inverse, condition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rotation() -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
    }

    #[test]
    fn spectral_cache_reconstructs_rotation() {
        let g = Generator::from_real(rotation()).unwrap();
        let s = g.spectral().expect("rotation is diagonalizable");
        assert!(s.condition < 100.0);
        let mut im = [s.values[0].im, s.values[1].im];
        im.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_relative_eq!(im[0], -1.0, max_relative = 1e-10);
        assert_relative_eq!(im[1], 1.0, max_relative = 1e-10);
        assert_relative_eq!(g.spectral_radius_bound(), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn zero_matrix_gets_trivial_cache() {
        let g = Generator::from_real(DMatrix::zeros(3, 3)).unwrap();
        let s = g.spectral().expect("zero matrix is diagonal");
        assert!(s.values.iter().all(|l| l.norm() < 1e-12));
    }

    #[test]
    fn diagonal_matrix_cache() {
        let g = Generator::from_real(DMatrix::from_diagonal(&nalgebra::dvector![-1.0, -2.0]))
            .unwrap();
        let s = g.usable_spectral().unwrap();
        let mut re: Vec<f64> = s.values.iter().map(|l| l.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_relative_eq!(re[0], -2.0, max_relative = 1e-12);
        assert_relative_eq!(re[1], -1.0, max_relative = 1e-12);
    }

    #[test]
    fn defective_matrix_runs_without_cache() {
        // Jordan block: not diagonalizable
        let g = Generator::from_real(DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]))
            .unwrap();
        assert!(g.usable_spectral().is_none());
    }

    #[test]
    fn rejects_non_square() {
        let m = DMatrix::<f64>::zeros(2, 3);
        assert!(Generator::from_real(m).is_err());
    }

    #[test]
    fn json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gen.json");
        let g = Generator::from_real(rotation()).unwrap();
        g.write_json_file(&path).unwrap();
        let h = Generator::from_json_file(&path).unwrap();
        assert_eq!(h.dim(), 2);
        assert_eq!(h.entries_real().unwrap(), rotation());
    }

    #[test]
    fn json_shape_mismatch_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, r#"{"dim": 2, "rows": [[0.0, 1.0]]}"#).unwrap();
        assert!(Generator::from_json_file(&path).is_err());
    }
}
