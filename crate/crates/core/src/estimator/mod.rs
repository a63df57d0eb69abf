//! Residual-based a posteriori estimators for the boundary flux, with
//! distance-dependent weights on interior residuals.

mod assemble;
mod residuals;
mod weights;

pub use assemble::{
    assemble_eta, assemble_eta_classical, compute_weights, Eta, EtaOptions, IndicatorField, Weights,
};
pub use residuals::{compute_residuals, Residuals};
pub use weights::{weight_element, weight_facet, WeightConfig};

use crate::discretization::{DiscreteSolution, ProblemSpec};
use crate::error::Result;
use crate::mesh::DistanceField;
use crate::scalar::Real;

/// Residuals, weights and both estimators for one solution.
pub fn estimate<T: Real>(
    solution: &DiscreteSolution<T>,
    problem: &ProblemSpec<T>,
    distance: &DistanceField<T>,
    weights: &WeightConfig,
    options: &EtaOptions,
) -> Result<IndicatorField<T>> {
    let mesh = solution.space.mesh();
    let residuals = compute_residuals(solution, problem, distance)?;
    let w = compute_weights(mesh, distance, weights);
    let eta = assemble_eta(mesh, &residuals, &w, options);
    let eta_classical = assemble_eta_classical(mesh, &residuals, options);
    Ok(IndicatorField {
        h: (0..mesh.num_elements()).map(|e| mesh.diameter(e)).collect(),
        rho: distance.rho.clone(),
        residuals,
        weights: w,
        eta,
        eta_classical,
    })
}
