use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::scalar::Real;

use super::basis::lagrange_1d;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Continuity {
    Discontinuous,
    Continuous,
}

/// Piecewise polynomials of order `k′` on the boundary facets.
///
/// Local node `j` of a facet sits at parameter `j / k′` along its
/// counterclockwise orientation. For `k′ = 0` the single basis function is
/// the facet indicator, so coefficients are facet averages.
#[derive(Clone, Debug)]
pub struct BoundarySpace<T> {
    mesh: Arc<Mesh<T>>,
    order: usize,
    continuity: Continuity,
    n_dofs: usize,
}

impl<T: Real> BoundarySpace<T> {
    pub fn new(mesh: Arc<Mesh<T>>, order: usize, continuity: Continuity) -> Result<Self> {
        let nb = mesh.boundary_facets().len();
        let n_dofs = match continuity {
            Continuity::Discontinuous => nb * (order + 1),
            Continuity::Continuous => {
                if order == 0 {
                    return Err(Error::InvalidArgument(
                        "continuous multipliers need order at least 1".into(),
                    ));
                }
                nb + nb * (order - 1)
            }
        };
        Ok(Self {
            mesh,
            order,
            continuity,
            n_dofs,
        })
    }

    pub fn mesh(&self) -> &Arc<Mesh<T>> {
        &self.mesh
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn continuity(&self) -> Continuity {
        self.continuity
    }

    pub fn n_dofs(&self) -> usize {
        self.n_dofs
    }

    pub fn n_local(&self) -> usize {
        self.order + 1
    }

    /// Global dofs of boundary facet `b` in local node order.
    pub fn facet_dofs(&self, b: usize) -> Vec<usize> {
        let k = self.order;
        match self.continuity {
            Continuity::Discontinuous => (b * (k + 1)..(b + 1) * (k + 1)).collect(),
            Continuity::Continuous => {
                let nb = self.mesh.boundary_facets().len();
                let mut d = Vec::with_capacity(k + 1);
                d.push(b);
                d.extend((0..k - 1).map(|j| nb + b * (k - 1) + j));
                d.push((b + 1) % nb);
                d
            }
        }
    }

    /// Local basis values at parameter `t ∈ [0, 1]`.
    pub fn values(&self, t: T) -> Vec<T> {
        lagrange_1d(self.order, t)
    }

    /// Derivative of the local basis with respect to `t`.
    pub fn derivatives(&self, t: T) -> Vec<T> {
        let k = self.order;
        if k == 0 {
            return vec![T::zero()];
        }
        let kk = crate::scalar::count::<T>(k);
        let nodes: Vec<T> = (0..=k).map(|j| crate::scalar::count::<T>(j) / kk).collect();
        (0..=k)
            .map(|j| {
                let mut s = T::zero();
                for m in 0..=k {
                    if m == j {
                        continue;
                    }
                    let mut p = T::one() / (nodes[j] - nodes[m]);
                    for (i, &xi) in nodes.iter().enumerate() {
                        if i != j && i != m {
                            p = p * (t - xi) / (nodes[j] - xi);
                        }
                    }
                    s += p;
                }
                s
            })
            .collect()
    }

    /// Evaluates the function with coefficients `c` on facet `b`.
    pub fn eval(&self, c: &[T], b: usize, t: T) -> T {
        self.facet_dofs(b)
            .iter()
            .zip(self.values(t))
            .fold(T::zero(), |s, (&d, v)| s + c[d] * v)
    }
}
