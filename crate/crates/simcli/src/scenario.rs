//! Scenario files: JSON in, validated [`Scenario`] out.
//!
//! ```json
//! {
//!   "inertia": [9 reals, row-major, kg·m²],
//!   "k1": 0.04, "k2": 0.04,
//!   "L": 0.04                       // λ meaning λ·I, or 9 reals row-major
//!   "omega0": [3], "sigma_lb0": [3], "sigma_ld": [3],
//!   "t_final": 300.0, "sample_dt": 0.1,
//!   "integrator": { "rel_tol": .., "abs_tol": .., "h_init": .., "h_min": .., "h_max": .., "max_steps": .. },
//!   "convergence_tol": 1e-3
//! }
//! ```
//!
//! `integrator` and `convergence_tol` are optional; every other key is required.

use std::path::{Path, PathBuf};

use mrp_smc::{Config, Gains, GainsError, Inertia, Mat3, Vec3};
use serde::Deserialize;
use thiserror::Error;

/// The bundled reference scenario.
pub const REFERENCE_JSON: &str = include_str!("../scenarios/reference.json");

/// Default threshold on `‖σ_db‖` and `‖ω‖` for declaring convergence.
pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed scenario JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid scenario field `{field}`: {message}")]
    Invalid { field: &'static str, message: String },
}

fn invalid(field: &'static str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum GainMatrixFile {
    Scalar(f64),
    Matrix([f64; 9]),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntegratorFile {
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
    h_init: Option<f64>,
    h_min: Option<f64>,
    h_max: Option<f64>,
    max_steps: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    inertia: [f64; 9],
    k1: f64,
    k2: f64,
    #[serde(rename = "L")]
    l: GainMatrixFile,
    omega0: [f64; 3],
    sigma_lb0: [f64; 3],
    sigma_ld: [f64; 3],
    t_final: f64,
    sample_dt: f64,
    #[serde(default)]
    integrator: Option<IntegratorFile>,
    #[serde(default)]
    convergence_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub inertia: Inertia,
    pub gains: Gains,
    pub omega0: Vec3,
    pub sigma_lb0: Vec3,
    pub sigma_ld: Vec3,
    pub t_final: f64,
    pub sample_dt: f64,
    pub integrator: Config,
    pub convergence_tol: f64,
}

fn finite_vec(field: &'static str, v: [f64; 3]) -> Result<Vec3, ScenarioError> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(Vec3::from(v))
    } else {
        Err(invalid(field, "all components must be finite"))
    }
}

fn positive(field: &'static str, x: f64) -> Result<f64, ScenarioError> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(invalid(field, format!("must be positive and finite, got {x}")))
    }
}

impl ScenarioFile {
    fn validate(self) -> Result<Scenario, ScenarioError> {
        let inertia =
            Inertia::new(Mat3::from_row_slice(&self.inertia)).map_err(|e| invalid("inertia", e.to_string()))?;

        let l = match self.l {
            GainMatrixFile::Scalar(lambda) => Mat3::identity().scale(lambda),
            GainMatrixFile::Matrix(m) => Mat3::from_row_slice(&m),
        };
        let gains = Gains::new(self.k1, self.k2, l).map_err(|e| match e {
            GainsError::ZeroK1 => invalid("k1", e.to_string()),
            GainsError::ZeroK2 => invalid("k2", e.to_string()),
            GainsError::GainSignMismatch => invalid("k2", e.to_string()),
            GainsError::NonFinite => invalid("k1", e.to_string()),
            GainsError::LNotPositiveDefinite => invalid("L", e.to_string()),
        })?;

        let omega0 = finite_vec("omega0", self.omega0)?;
        let sigma_lb0 = finite_vec("sigma_lb0", self.sigma_lb0)?;
        let sigma_ld = finite_vec("sigma_ld", self.sigma_ld)?;
        let t_final = positive("t_final", self.t_final)?;
        let sample_dt = positive("sample_dt", self.sample_dt)?;

        let file = self.integrator.unwrap_or_default();
        let defaults = Config::default();
        let integrator = Config {
            rel_tol: file.rel_tol.unwrap_or(defaults.rel_tol),
            abs_tol: file.abs_tol.unwrap_or(defaults.abs_tol),
            h_init: file.h_init.unwrap_or(defaults.h_init),
            h_min: file.h_min.unwrap_or(defaults.h_min),
            h_max: file.h_max.unwrap_or(defaults.h_max),
            max_steps: file.max_steps.unwrap_or(defaults.max_steps),
        };
        integrator
            .validate()
            .map_err(|e| invalid("integrator", e.to_string()))?;

        let convergence_tol = positive(
            "convergence_tol",
            self.convergence_tol.unwrap_or(DEFAULT_CONVERGENCE_TOL),
        )?;

        Ok(Scenario {
            inertia,
            gains,
            omega0,
            sigma_lb0,
            sigma_ld,
            t_final,
            sample_dt,
            integrator,
            convergence_tol,
        })
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = serde_json::from_str(text)?;
        file.validate()
    }

    /// The bundled reference scenario.
    pub fn reference() -> Self {
        Self::from_json(REFERENCE_JSON).expect("bundled reference scenario is valid")
    }
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Scenario::from_json(&text)
}
