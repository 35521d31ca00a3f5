//! Run configuration: arithmetic mode, tolerance, grid, output and workers.
//!
//! A grid file is JSON; every field is optional and falls back to the
//! default grid:
//!
//! ```json
//! { "mode": "exact", "tol": 1e-9, "output": "csv", "parallelism": 4,
//!   "grid": { "a": ["-1/3", 0, "1/3"], "mu": [1] },
//!   "n_list": [4, 5], "m_list": [3] }
//! ```

use serde::Deserialize;
use wintgen_core::grid::GridSpec;

use crate::model_file::Rat;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridValues {
    pub a: Option<Vec<Rat>>,
    pub b: Option<Vec<Rat>>,
    pub c: Option<Vec<Rat>>,
    pub mu: Option<Vec<Rat>>,
    pub k_tilde: Option<Vec<Rat>>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    pub mode: Option<Mode>,
    pub tol: Option<f64>,
    pub grid: Option<GridValues>,
    pub n_list: Option<Vec<usize>>,
    pub m_list: Option<Vec<usize>>,
    pub output: Option<OutputFormat>,
    pub parallelism: Option<usize>,
}

/// Resolved settings; command-line flags take precedence over the file.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: Mode,
    /// Used in float mode only.
    pub tol: f64,
    pub grid: GridSpec,
    pub output: OutputFormat,
    pub jobs: Option<usize>,
}

impl RunConfig {
    /// Effective tolerance: exact mode is tolerance-free.
    pub fn tol(&self) -> f64 {
        match self.mode {
            Mode::Exact => 0.0,
            Mode::Float => self.tol,
        }
    }
}

fn values(v: Option<Vec<Rat>>, fallback: &[wintgen_core::Rational]) -> Vec<wintgen_core::Rational> {
    match v {
        Some(v) => v.into_iter().map(|r| r.0).collect(),
        None => fallback.to_vec(),
    }
}

impl RunConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("grid file: {e}")))
    }

    /// Read `path`, or use the defaults when it is `default`.
    pub fn load(path: &str) -> Result<Self, CliError> {
        if path == "default" {
            return Ok(Self::default());
        }
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
        Self::parse(&text)
    }

    pub fn grid(&self, base: &GridSpec) -> Result<GridSpec, CliError> {
        let g = self.grid.clone().unwrap_or_default();
        let spec = GridSpec {
            a: values(g.a, &base.a),
            b: values(g.b, &base.b),
            c: values(g.c, &base.c),
            mu: values(g.mu, &base.mu),
            k_tilde: values(g.k_tilde, &base.k_tilde),
            n_list: self.n_list.clone().unwrap_or_else(|| base.n_list.clone()),
            m_list: self.m_list.clone().unwrap_or_else(|| base.m_list.clone()),
        };
        spec.validate().map_err(|e| CliError::Input(format!("grid file: {e}")))?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use wintgen_core::q;

    #[test]
    fn partial_file_falls_back_to_default_grid() {
        let f = RunConfigFile::parse(r#"{"grid":{"a":["1/2",0]},"n_list":[5]}"#).unwrap();
        let g = f.grid(&GridSpec::default_grid()).unwrap();
        assert_eq!(g.a, vec![q(1, 2), q(0, 1)]);
        assert_eq!(g.b.len(), 5);
        assert_eq!(g.n_list, vec![5]);
    }

    #[test]
    fn invalid_grids_are_input_errors() {
        assert!(RunConfigFile::parse(r#"{"mode":"fast"}"#).is_err());
        assert!(RunConfigFile::parse(r#"{"bogus":1}"#).is_err());
        let f = RunConfigFile::parse(r#"{"n_list":[3]}"#).unwrap();
        assert!(f.grid(&GridSpec::default_grid()).is_err());
        let f = RunConfigFile::parse(r#"{"grid":{"mu":[]}}"#).unwrap();
        assert!(f.grid(&GridSpec::default_grid()).is_err());
    }
}
