//! Run configuration: a single JSON document, machine-writable by test
//! harnesses, validated before any computation.

use rlfrac::error::{Error, Result};
use rlfrac::family::{FamilyKind, FracOrder, GridKind};
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: f64,
    pub generator: PathBuf,
    #[serde(default = "default_kind")]
    pub kind: String,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default = "default_quad_order")]
    pub quad_order: usize,
    #[serde(default = "default_ml_tol")]
    pub ml_tol: f64,
    /// Initial vector for the Cauchy problem; defaults to e_1.
    #[serde(default)]
    pub initial: Option<Vec<f64>>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// (t, s) pairs for the functional-equation checks; defaults to the
    /// {0.25, 0.5, 1, 2}² grid.
    #[serde(default)]
    pub pairs: Option<Vec<(f64, f64)>>,
    /// (λ, μ) abscissa pairs for the Laplace check.
    #[serde(default = "default_lam_mu")]
    pub lam_mu: Vec<(f64, f64)>,
    #[serde(default = "default_laplace_horizon")]
    pub laplace_horizon: f64,
    #[serde(default)]
    pub laplace_abscissa: Option<f64>,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_grid_kind")]
    pub kind: String,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_grid_count")]
    pub count: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            kind: default_grid_kind(),
            t_max: default_t_max(),
            count: default_grid_count(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "tol_resolvent")]
    pub resolvent: f64,
    #[serde(default = "tol_cosine")]
    pub cosine: f64,
    #[serde(default = "tol_generator")]
    pub generator: f64,
    #[serde(default = "tol_caputo")]
    pub caputo: f64,
    #[serde(default = "tol_laplace_closed")]
    pub laplace_closed: f64,
    #[serde(default = "tol_laplace_numerical")]
    pub laplace_numerical: f64,
    #[serde(default = "tol_uniqueness")]
    pub uniqueness: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            resolvent: tol_resolvent(),
            cosine: tol_cosine(),
            generator: tol_generator(),
            caputo: tol_caputo(),
            laplace_closed: tol_laplace_closed(),
            laplace_numerical: tol_laplace_numerical(),
            uniqueness: tol_uniqueness(),
        }
    }
}

fn default_kind() -> String {
    "rl".into()
}
fn default_quad_order() -> usize {
    32
}
fn default_ml_tol() -> f64 {
    1e-10
}
fn default_lam_mu() -> Vec<(f64, f64)> {
    vec![(3.0, 4.5), (3.5, 5.5)]
}
fn default_laplace_horizon() -> f64 {
    40.0
}
fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_grid_kind() -> String {
    "combined".into()
}
fn default_t_max() -> f64 {
    2.0
}
fn default_grid_count() -> usize {
    48
}
fn tol_resolvent() -> f64 {
    1e-7
}
fn tol_cosine() -> f64 {
    1e-3
}
fn tol_generator() -> f64 {
    1e-5
}
fn tol_caputo() -> f64 {
    1e-7
}
fn tol_laplace_closed() -> f64 {
    1e-9
}
fn tol_laplace_numerical() -> f64 {
    1e-5
}
fn tol_uniqueness() -> f64 {
    1e-8
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidInput(format!("cannot read config {}: {e}", path.display()))
        })?;
        let config: RunConfig = serde_json::from_str(&text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        FracOrder::new(self.alpha)?;
        if self.quad_order < 8 {
            return Err(Error::InvalidInput(format!(
                "quad_order must be >= 8, got {}",
                self.quad_order
            )));
        }
        self.family_kind()?;
        self.grid_kind()?;
        if !(self.grid.t_max > 0.0) || self.grid.count == 0 {
            return Err(Error::InvalidInput("grid t_max and count must be positive".into()));
        }
        if !(self.ml_tol > 1e-15 && self.ml_tol < 1e-2) {
            return Err(Error::InvalidInput(format!(
                "ml_tol must lie in (1e-15, 1e-2), got {}",
                self.ml_tol
            )));
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("resolvent", t.resolvent),
            ("cosine", t.cosine),
            ("generator", t.generator),
            ("caputo", t.caputo),
            ("laplace_closed", t.laplace_closed),
            ("laplace_numerical", t.laplace_numerical),
            ("uniqueness", t.uniqueness),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("tolerance {name} must be positive")));
            }
        }
        if let Some(pairs) = &self.pairs {
            if pairs.iter().any(|&(a, b)| a <= 0.0 || b <= 0.0) {
                return Err(Error::InvalidInput("pairs must be strictly positive".into()));
            }
        }
        if !(self.laplace_horizon > 1.0) {
            return Err(Error::InvalidInput("laplace_horizon must exceed 1".into()));
        }
        Ok(())
    }

    pub fn order(&self) -> FracOrder {
        FracOrder::new(self.alpha).expect("validated")
    }

    pub fn family_kind(&self) -> Result<FamilyKind> {
        match self.kind.as_str() {
            "rl" => Ok(FamilyKind::RiemannLiouville),
            "caputo" => Ok(FamilyKind::Caputo),
            other => Err(Error::InvalidInput(format!(
                "kind must be \"rl\" or \"caputo\", got \"{other}\""
            ))),
        }
    }

    pub fn grid_kind(&self) -> Result<GridKind> {
        match self.grid.kind.as_str() {
            "geometric" => Ok(GridKind::Geometric),
            "uniform" => Ok(GridKind::Uniform),
            "combined" => Ok(GridKind::Combined),
            other => Err(Error::InvalidInput(format!(
                "grid kind must be geometric, uniform or combined, got \"{other}\""
            ))),
        }
    }

    pub fn check_pairs(&self) -> Vec<(f64, f64)> {
        self.pairs
            .clone()
            .unwrap_or_else(|| rlfrac::verify::default_pair_grid(self.alpha))
    }
}
