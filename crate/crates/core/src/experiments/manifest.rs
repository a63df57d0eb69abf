use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::amr::{AmrConfig, DualMesh, EstimatorKind};
use crate::discretization::{Method, MethodParams, Sign};
use crate::error::{Error, Result};
use crate::estimator::WeightConfig;
use crate::fem::Continuity;

/// Kind of convergence study.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StudyKind {
    Uniform,
    Amr,
    Pw,
}

/// A check on the finished records.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assertion {
    /// See [`super::metric`] for the accepted forms.
    pub metric: String,
    #[serde(default)]
    pub min: Option<f64>,
    #[serde(default)]
    pub max: Option<f64>,
    /// Exclusive bounds instead of inclusive ones.
    #[serde(default)]
    pub strict: bool,
    /// Compare against another study of the same manifest.
    #[serde(default)]
    pub relative_to: Option<String>,
    #[serde(default)]
    pub mode: Relative,
}

/// How a value is compared with the same metric of another study.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relative {
    /// `value / other`, where for `last:` metrics the other curve is
    /// interpolated in log-log at this study's final `N`.
    #[default]
    Ratio,
    /// `value - other`.
    Difference,
}

/// One fully resolved study: the manifest defaults merged with the study's
/// own keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Study {
    pub name: String,
    pub kind: StudyKind,
    pub problem: String,
    #[serde(default = "default_method")]
    pub method: Method,
    #[serde(default = "one")]
    pub k: usize,
    #[serde(default)]
    pub kprime: usize,
    #[serde(default = "default_continuity")]
    pub continuity: Continuity,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub sign: Sign,
    #[serde(default)]
    pub estimator: EstimatorKind,
    #[serde(rename = "C1", default = "one_f")]
    pub c1: f64,
    #[serde(rename = "C2", default = "one_f")]
    pub c2: f64,
    #[serde(default = "default_theta")]
    pub theta: f64,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(rename = "M", default = "default_level")]
    pub level: usize,
    #[serde(default = "yes")]
    pub patch_terms: bool,
    #[serde(default)]
    pub initial_n: Option<usize>,
    /// `null` disables `E₁`.
    #[serde(default = "default_dual")]
    pub dual: Option<DualMesh>,
    /// Uniform studies: `h = 1/n` for each entry.
    #[serde(default)]
    pub levels: Vec<usize>,
    /// Graded studies: grading parameters.
    #[serde(default)]
    pub h: Vec<f64>,
    #[serde(default = "default_cap")]
    pub cap: usize,
    #[serde(default)]
    pub assertions: Vec<Assertion>,
}

fn default_method() -> Method {
    Method::Nitsche
}
fn one() -> usize {
    1
}
fn one_f() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}
fn default_continuity() -> Continuity {
    Continuity::Discontinuous
}
fn default_gamma() -> f64 {
    10.0
}
fn default_alpha() -> f64 {
    0.1
}
fn default_theta() -> f64 {
    0.5
}
fn default_budget() -> usize {
    20_000
}
fn default_level() -> usize {
    crate::norm_eval::DEFAULT_LEVEL
}
fn default_dual() -> Option<DualMesh> {
    Some(DualMesh::Uniform(64))
}
fn default_cap() -> usize {
    1_000_000
}

impl Study {
    pub fn config(&self) -> AmrConfig {
        let params = MethodParams {
            method: self.method,
            k: self.k,
            kprime: self.kprime,
            continuity: self.continuity,
            gamma: self.gamma,
            alpha: self.alpha,
            sign: self.sign,
        };
        AmrConfig {
            params,
            weights: WeightConfig {
                c1: self.c1,
                c2: self.c2,
                k: self.k,
            },
            estimator: self.estimator,
            theta: self.theta,
            budget: self.budget,
            level: self.level,
            patch_terms: self.patch_terms,
            initial_n: self.initial_n,
            dual: self.dual,
        }
    }
}

/// Top-level keys act as defaults for every entry of `studies`.
#[derive(Clone, Debug, PartialEq)]
pub struct Manifest {
    pub studies: Vec<Study>,
}

impl Manifest {
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_value(serde_json::from_str(text)?)
    }

    pub fn from_value(value: Value) -> Result<Self> {
        let Value::Object(mut top) = value else {
            return Err(Error::InvalidArgument(
                "manifest must be a JSON object".into(),
            ));
        };
        let studies = match top.remove("studies") {
            None => Vec::new(),
            Some(Value::Array(items)) => items,
            Some(_) => return Err(Error::InvalidArgument("`studies` must be an array".into())),
        };
        let mut out = Vec::with_capacity(studies.len());
        for (i, item) in studies.into_iter().enumerate() {
            let Value::Object(own) = item else {
                return Err(Error::InvalidArgument(format!(
                    "study {i} must be an object"
                )));
            };
            let mut merged: Map<String, Value> = top.clone();
            merged.extend(own);
            let study: Study = serde_json::from_value(Value::Object(merged))?;
            if out.iter().any(|s: &Study| s.name == study.name) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate study name `{}`",
                    study.name
                )));
            }
            out.push(study);
        }
        Ok(Self { studies: out })
    }
}
