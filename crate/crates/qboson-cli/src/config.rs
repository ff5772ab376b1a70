//! Run configuration: defaults, flat key=value config files, and flag
//! overrides. Flags win over file values, file values over defaults.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use qboson_core::{DeformationParams, Error as CoreError};

/// Everything a command needs to run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
    pub dim: usize,
    pub order: u32,
    pub tol: Option<f64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub timings: bool,
    // coherent scan
    pub nmax: u32,
    // bipartite state and scan
    pub zeta: f64,
    pub zeta1: f64,
    pub zeta2: f64,
    pub delta: f64,
    pub q_min: Option<f64>,
    pub q_max: Option<f64>,
    pub q_steps: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            q: 1.2,
            alpha: 2.0,
            beta: 1.0,
            dim: 16,
            order: 4,
            tol: None,
            seed: 42,
            out: None,
            timings: false,
            nmax: 8,
            zeta: 0.4,
            zeta1: 0.3,
            zeta2: 0.3,
            delta: 0.5,
            q_min: None,
            q_max: None,
            q_steps: 8,
        }
    }
}

/// A problem with the configuration (exit code 2).
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<CoreError> for ConfigError {
    fn from(e: CoreError) -> Self {
        ConfigError(e.to_string())
    }
}

/// Parses a flat `key = value` file; `#` starts a comment.
pub fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError(format!(
                "{}:{}: expected key=value, got {line:?}",
                path.display(),
                lineno + 1
            )));
        };
        out.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(out)
}

impl RunConfig {
    /// Applies file values onto the defaults (only known keys accepted).
    pub fn apply_file(&mut self, kv: &BTreeMap<String, String>) -> Result<(), ConfigError> {
        for (key, value) in kv {
            let bad = |e: &dyn std::fmt::Display| ConfigError(format!("key {key}: {e}"));
            match key.as_str() {
                "q" => self.q = value.parse().map_err(|e| bad(&e))?,
                "alpha" => self.alpha = value.parse().map_err(|e| bad(&e))?,
                "beta" => self.beta = value.parse().map_err(|e| bad(&e))?,
                "dim" => self.dim = value.parse().map_err(|e| bad(&e))?,
                "order" => self.order = value.parse().map_err(|e| bad(&e))?,
                "tol" => self.tol = Some(value.parse().map_err(|e| bad(&e))?),
                "seed" => self.seed = value.parse().map_err(|e| bad(&e))?,
                "out" => self.out = Some(PathBuf::from(value)),
                "timings" => self.timings = value.parse().map_err(|e| bad(&e))?,
                "nmax" => self.nmax = value.parse().map_err(|e| bad(&e))?,
                "zeta" => self.zeta = value.parse().map_err(|e| bad(&e))?,
                "zeta1" => self.zeta1 = value.parse().map_err(|e| bad(&e))?,
                "zeta2" => self.zeta2 = value.parse().map_err(|e| bad(&e))?,
                "delta" => self.delta = value.parse().map_err(|e| bad(&e))?,
                "q_min" => self.q_min = Some(value.parse().map_err(|e| bad(&e))?),
                "q_max" => self.q_max = Some(value.parse().map_err(|e| bad(&e))?),
                "q_steps" => self.q_steps = value.parse().map_err(|e| bad(&e))?,
                other => return Err(ConfigError(format!("unknown config key {other:?}"))),
            }
        }
        Ok(())
    }

    /// Validated deformation parameters; rejects the exact classical point.
    pub fn params(&self) -> Result<DeformationParams, ConfigError> {
        if self.q == 1.0 {
            return Err(ConfigError(
                "q = 1 exactly is the guarded classical point; use q = 1 ± ε".into(),
            ));
        }
        Ok(DeformationParams::new(self.q, self.alpha, self.beta)?)
    }
}
