use serde::{Deserialize, Serialize};

use crate::discretization::MethodParams;
use crate::error::{Error, Result};
use crate::estimator::{EtaOptions, WeightConfig};
use crate::geometry::DomainKind;
use crate::mesh::Mesh;
use crate::norm_eval::DEFAULT_LEVEL;
use crate::scalar::Real;

/// Which indicator drives the marking.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorKind {
    /// Distance-weighted estimator `η`.
    #[default]
    Eta,
    /// Unweighted residual estimator.
    Classical,
}

/// Mesh on which the Neumann lifting for `E₁` is solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualMesh {
    /// `r` uniform refinements of the current mesh.
    Refine(usize),
    /// Structured mesh with `h = 1/n`.
    Uniform(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmrConfig {
    pub params: MethodParams,
    /// Weight constants; `k` is taken from `params.k` by [`AmrConfig::new`].
    pub weights: WeightConfig,
    pub estimator: EstimatorKind,
    /// Marking fraction `θ ∈ (0, 1]`.
    pub theta: f64,
    /// Largest admissible number of unknowns.
    pub budget: usize,
    /// Finest wavelet level `M`.
    pub level: usize,
    pub patch_terms: bool,
    /// Initial subdivision; `None` picks the domain default.
    pub initial_n: Option<usize>,
    /// Where `E₁` is evaluated; `None` skips it. The adaptive loop only
    /// evaluates it at the final step.
    pub dual: Option<DualMesh>,
}

impl AmrConfig {
    pub fn new(params: MethodParams) -> Self {
        Self {
            params,
            weights: WeightConfig {
                k: params.k,
                ..WeightConfig::default()
            },
            estimator: EstimatorKind::Eta,
            theta: 0.5,
            budget: 20_000,
            level: DEFAULT_LEVEL,
            patch_terms: true,
            initial_n: None,
            dual: Some(DualMesh::Uniform(64)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "marking fraction {} not in (0, 1]",
                self.theta
            )));
        }
        if self.params.k == 0 {
            return Err(Error::InvalidArgument(
                "polynomial order must be >= 1".into(),
            ));
        }
        if matches!(self.dual, Some(DualMesh::Uniform(0))) {
            return Err(Error::InvalidArgument(
                "dual mesh subdivision must be >= 1".into(),
            ));
        }
        Ok(())
    }

    pub fn eta_options(&self) -> EtaOptions {
        EtaOptions {
            method: self.params.method,
            gamma: self.params.gamma,
            alpha: self.params.alpha,
            patch_terms: self.patch_terms,
        }
    }
}

/// Structured mesh with `h = 1/n` on either domain.
pub fn uniform_mesh<T: Real>(domain: DomainKind, n: usize) -> Result<Mesh<T>> {
    match domain {
        DomainKind::UnitSquare => Mesh::unit_square(n),
        DomainKind::LShape => Mesh::lshape(n),
    }
}

/// Starting mesh of the adaptive loop: `4 x 4` on the square and `h = 1/2`
/// on the L-shape unless `n` is given.
pub fn initial_mesh<T: Real>(domain: DomainKind, n: Option<usize>) -> Result<Mesh<T>> {
    let n = n.unwrap_or(match domain {
        DomainKind::UnitSquare => 4,
        DomainKind::LShape => 2,
    });
    uniform_mesh(domain, n)
}
