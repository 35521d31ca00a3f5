//! JSON model files.
//!
//! ```json
//! { "n": 4, "m": 3, "k_tilde": "0", "choi_lu": { "a": 1, "b": "1/2", "c": 0, "mu": 1 } }
//! ```
//!
//! or, with explicit shape operators, `"shape_operators": [[[...n], ...n], ...m]`.
//! Numbers may be JSON integers, finite decimals, or strings `"p/q"`.

use std::str::FromStr;

use serde::Deserialize;
use serde_json::Value;
use wintgen_core::curvature::SubmanifoldModel;
use wintgen_core::wintgen::choi_lu_shape_ops;
use wintgen_core::{ChoiLuParams, Rational, SymMatrix};

use crate::CliError;

/// A JSON number or string read as an exact rational.
#[derive(Clone, Debug, PartialEq)]
pub struct Rat(pub Rational);

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        parse_rational(&v).map(Rat).map_err(serde::de::Error::custom)
    }
}

pub fn parse_rational(v: &Value) -> Result<Rational, String> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(format!("expected a rational, found {other}")),
    };
    Rational::from_str(&text).map_err(|e| e.to_string())
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiLuSpec {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub mu: Rat,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub n: usize,
    pub m: usize,
    pub k_tilde: Rat,
    #[serde(default)]
    pub shape_operators: Option<Vec<Vec<Vec<Rat>>>>,
    #[serde(default)]
    pub choi_lu: Option<ChoiLuSpec>,
}

/// A validated model, remembering its Choi–Lu parameters when given.
#[derive(Clone, Debug)]
pub struct LoadedModel {
    pub model: SubmanifoldModel<Rational>,
    pub choi_lu: Option<ChoiLuParams<Rational>>,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<ModelFile, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("model file: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<LoadedModel, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Self::parse(&text)?.build()
    }

    pub fn build(&self) -> Result<LoadedModel, CliError> {
        let bad = |m: String| CliError::Input(format!("model file: {m}"));
        match (&self.shape_operators, &self.choi_lu) {
            (Some(_), Some(_)) => Err(bad("give either shape_operators or choi_lu, not both".into())),
            (None, None) => Err(bad("missing shape_operators or choi_lu".into())),
            (None, Some(cl)) => {
                let p = ChoiLuParams {
                    n: self.n,
                    m: self.m,
                    a: cl.a.0.clone(),
                    b: cl.b.0.clone(),
                    c: cl.c.0.clone(),
                    mu: cl.mu.0.clone(),
                    k_tilde: self.k_tilde.0.clone(),
                };
                let model = choi_lu_shape_ops(&p).map_err(|e| bad(e.to_string()))?;
                Ok(LoadedModel { model, choi_lu: Some(p) })
            }
            (Some(ops), None) => {
                if ops.len() != self.m {
                    return Err(bad(format!("m = {} but {} shape operators given", self.m, ops.len())));
                }
                let mut mats = Vec::with_capacity(ops.len());
                for (alpha, rows) in ops.iter().enumerate() {
                    if rows.len() != self.n || rows.iter().any(|r| r.len() != self.n) {
                        return Err(bad(format!("shape operator {} is not {}x{}", alpha + 1, self.n, self.n)));
                    }
                    let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect();
                    let a = SymMatrix::from_rows(rows).map_err(|e| bad(format!("shape operator {}: {e}", alpha + 1)))?;
                    mats.push(a);
                }
                let model = SubmanifoldModel::new(self.n, self.k_tilde.0.clone(), mats).map_err(|e| bad(e.to_string()))?;
                Ok(LoadedModel { model, choi_lu: None })
            }
        }
    }
}
