use std::io::Write;

use crate::discretization::Method;
use crate::mesh::{DistanceField, Mesh};
use crate::scalar::{lit, to_f64, Real};

use super::residuals::Residuals;
use super::weights::{weight_element, weight_facet, WeightConfig};

/// Element and facet weights.
#[derive(Clone, Debug)]
pub struct Weights<T> {
    /// `ς_T` per element.
    pub element: Vec<T>,
    /// `ς_F` per mesh facet; boundary facets carry the owner's weight.
    pub facet: Vec<T>,
}

pub fn compute_weights<T: Real>(
    mesh: &Mesh<T>,
    distance: &DistanceField<T>,
    config: &WeightConfig,
) -> Weights<T> {
    let element: Vec<T> = (0..mesh.num_elements())
        .map(|e| weight_element(mesh.diameter(e), distance.rho[e], config))
        .collect();
    let facet = mesh
        .facets()
        .iter()
        .map(|f| match f.outer {
            Some(o) => weight_facet(element[f.inner], element[o]),
            None => element[f.inner],
        })
        .collect();
    Weights { element, facet }
}

/// Method-dependent parameters entering the boundary terms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaOptions {
    pub method: Method,
    pub gamma: f64,
    pub alpha: f64,
    /// Include the `r(F,P)` patch terms for Nitsche and Barbosa–Hughes.
    pub patch_terms: bool,
}

/// Per-element indicators and the global estimator.
#[derive(Clone, Debug)]
pub struct Eta<T> {
    pub per_element: Vec<T>,
    pub total: T,
}

fn finish<T: Real>(sq: Vec<T>) -> Eta<T> {
    let total = sq.iter().copied().sum::<T>().sqrt();
    Eta {
        per_element: sq.into_iter().map(|s| s.sqrt()).collect(),
        total,
    }
}

/// Dual-weighted indicator `η_T`. Interior facet terms appear in both
/// neighbouring elements.
pub fn assemble_eta<T: Real>(
    mesh: &Mesh<T>,
    residuals: &Residuals<T>,
    weights: &Weights<T>,
    options: &EtaOptions,
) -> Eta<T> {
    let shares = match (options.method, options.patch_terms) {
        (Method::Lagrange, _) | (_, false) => vec![T::zero(); residuals.r1_facet.len()],
        _ => residuals.patch_shares(),
    };
    let one = T::one();
    let sq = (0..mesh.num_elements())
        .map(|e| {
            let s = weights.element[e] * residuals.r1_element[e];
            let mut v = s * s;
            for f in mesh.element_facets(e) {
                let facet = &mesh.facets()[f];
                match facet.boundary {
                    None => {
                        let t = weights.facet[f] * residuals.r0[f];
                        v += t * t;
                    }
                    Some(b) => {
                        let (r1, r2, r3) =
                            (residuals.r1_facet[b], residuals.r2[b], residuals.r3[b]);
                        v += match options.method {
                            Method::Lagrange => r1 * r1 + r2 * r2,
                            Method::Nitsche => {
                                let g = lit::<T>(options.gamma);
                                (one + g * g) * r3 * r3 + shares[b]
                            }
                            Method::BarbosaHughes => {
                                let a = lit::<T>(options.alpha);
                                (one + a * a) * r1 * r1 + shares[b]
                            }
                        };
                    }
                }
            }
            v
        })
        .collect();
    finish(sq)
}

/// Unweighted residual estimator. Each interior facet contributes half of
/// `r₀(F)²` to both neighbours, so the global value counts it once.
pub fn assemble_eta_classical<T: Real>(
    mesh: &Mesh<T>,
    residuals: &Residuals<T>,
    options: &EtaOptions,
) -> Eta<T> {
    let half = lit::<T>(0.5);
    let sq = (0..mesh.num_elements())
        .map(|e| {
            let r = residuals.r1_element[e];
            let mut v = r * r;
            for f in mesh.element_facets(e) {
                match mesh.facets()[f].boundary {
                    None => v += half * residuals.r0[f] * residuals.r0[f],
                    Some(b) => {
                        let (r1, r3) = (residuals.r1_facet[b], residuals.r3[b]);
                        v += match options.method {
                            Method::Nitsche => {
                                let g = lit::<T>(options.gamma);
                                g * g * r3 * r3
                            }
                            _ => r1 * r1 + r3 * r3,
                        };
                    }
                }
            }
            v
        })
        .collect();
    finish(sq)
}

/// Everything the estimator produces for one solution.
#[derive(Clone, Debug)]
pub struct IndicatorField<T> {
    pub h: Vec<T>,
    pub rho: Vec<T>,
    pub residuals: Residuals<T>,
    pub weights: Weights<T>,
    pub eta: Eta<T>,
    pub eta_classical: Eta<T>,
}

impl<T: Real> IndicatorField<T> {
    /// CSV with columns `element_id,h_T,rho_T,sigma_T,r1T,etaT`.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "element_id,h_T,rho_T,sigma_T,r1T,etaT")?;
        for e in 0..self.h.len() {
            writeln!(
                w,
                "{},{:e},{:e},{:e},{:e},{:e}",
                e,
                to_f64(self.h[e]),
                to_f64(self.rho[e]),
                to_f64(self.weights.element[e]),
                to_f64(self.residuals.r1_element[e]),
                to_f64(self.eta.per_element[e])
            )?;
        }
        Ok(())
    }
}
