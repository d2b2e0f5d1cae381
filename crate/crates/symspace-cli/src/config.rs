//! Experiment configuration: a single JSON file plus command-line overrides,
//! where flags win.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Catalog label such as "H3R", "H2C" or "SL3R".
    pub space: Option<String>,
    /// Radial distances d = |x+| along the chamber direction.
    pub r: Option<Vec<f64>>,
    /// Spectral parameters for the Green envelope (real parts; must be > 0).
    pub s: Option<Vec<f64>>,
    /// Heat times (must be > 0).
    pub t: Option<Vec<f64>>,
    /// Ball radii for the volume comparison (must lie in (0, 1)).
    pub epsilon: Option<Vec<f64>>,
    /// Chamber direction for building x+; defaults to the interior direction.
    pub direction: Option<Vec<f64>>,
    /// RNG seed; required by any command that uses Monte-Carlo sampling.
    pub seed: Option<u64>,
    /// Worker threads for parallel sections; defaults to all cores.
    pub threads: Option<usize>,
    /// Monte-Carlo samples per grid point (volume command).
    pub budget: Option<u64>,
    /// Evaluation budget for adaptive quadratures (validate command).
    pub quad_budget: Option<usize>,
    /// Evaluate envelopes below the d >= 2 hypothesis, marking those rows.
    pub allow_short_distance: Option<bool>,
    /// Bottom of the spectrum of the operator; defaults to |rho|^2.
    pub alpha0: Option<f64>,
    /// Report destination; stdout for CSV commands when absent.
    pub out: Option<PathBuf>,
    /// Path to a group description file for the lattice command.
    pub lattice_path: Option<PathBuf>,
    /// Word-ball radius for orbit enumeration.
    pub max_word_length: Option<u32>,
    /// Relative tolerance for orbit deduplication.
    pub dedup_tol: Option<f64>,
    /// Hard cap on enumerated orbit points.
    pub orbit_cap: Option<usize>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read config {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::Usage(format!("invalid config {}: {e}", path.display()))
        })
    }

    /// Flags win over config-file values.
    pub fn apply_flags(
        &mut self,
        space: Option<String>,
        seed: Option<u64>,
        threads: Option<usize>,
        out: Option<PathBuf>,
    ) {
        if space.is_some() {
            self.space = space;
        }
        if seed.is_some() {
            self.seed = seed;
        }
        if threads.is_some() {
            self.threads = threads;
        }
        if out.is_some() {
            self.out = out;
        }
    }

    pub fn space(&self) -> &str {
        self.space.as_deref().unwrap_or("H3R")
    }

    pub fn r_grid(&self, default: &[f64]) -> Result<Vec<f64>, CliError> {
        grid(self.r.as_deref(), default, "r", |v| v >= 0.0, "nonnegative")
    }

    pub fn s_grid(&self) -> Result<Vec<f64>, CliError> {
        grid(
            self.s.as_deref(),
            &[0.25, 0.5, 1.0, 2.0],
            "s",
            |v| v > 0.0,
            "positive",
        )
    }

    pub fn t_grid(&self) -> Result<Vec<f64>, CliError> {
        grid(
            self.t.as_deref(),
            &[0.25, 0.5, 1.0, 2.0, 4.0, 8.0],
            "t",
            |v| v > 0.0,
            "positive",
        )
    }

    pub fn epsilon_grid(&self) -> Result<Vec<f64>, CliError> {
        grid(
            self.epsilon.as_deref(),
            &[0.1, 0.3, 0.5, 0.7, 0.9],
            "epsilon",
            |v| v > 0.0 && v < 1.0,
            "inside (0, 1)",
        )
    }
}

fn grid(
    given: Option<&[f64]>,
    default: &[f64],
    name: &str,
    ok: impl Fn(f64) -> bool,
    req: &str,
) -> Result<Vec<f64>, CliError> {
    let values = given.unwrap_or(default);
    if values.is_empty() {
        return Err(CliError::Usage(format!("grid `{name}` must not be empty")));
    }
    for &v in values {
        if !v.is_finite() || !ok(v) {
            return Err(CliError::Usage(format!(
                "grid `{name}` entries must be finite and {req}, got {v}"
            )));
        }
    }
    Ok(values.to_vec())
}
