use crate::error::{Error, Result};
use crate::fem::{BoundarySpace, FeFunction, FeSpace};
use crate::scalar::Real;

use super::methods::{Method, Sign};
use super::problem::ProblemSpec;

/// How `λ_h` is represented.
#[derive(Clone, Debug)]
pub enum Multiplier<T> {
    /// Explicit multiplier unknowns.
    Coefficients {
        space: BoundarySpace<T>,
        coeffs: Vec<T>,
    },
    /// `λ_h = a ∂_ν u_h + γ h_F⁻¹ (g - u_h)`.
    Nitsche { gamma: T },
}

#[derive(Clone, Debug)]
pub struct DiscreteSolution<T> {
    pub method: Method,
    pub space: FeSpace<T>,
    pub u: Vec<T>,
    pub multiplier: Multiplier<T>,
    pub sign: Sign,
    /// Barbosa–Hughes stabilization parameter.
    pub alpha: Option<T>,
}

impl<T: Real> DiscreteSolution<T> {
    pub fn new(
        method: Method,
        space: FeSpace<T>,
        u: Vec<T>,
        multiplier: Multiplier<T>,
        sign: Sign,
        alpha: Option<T>,
    ) -> Self {
        Self {
            method,
            space,
            u,
            multiplier,
            sign,
            alpha,
        }
    }

    pub fn uh(&self) -> FeFunction<'_, T> {
        FeFunction::new(&self.space, &self.u)
    }

    /// Bulk plus multiplier unknowns.
    pub fn n_dofs(&self) -> usize {
        self.space.n_dofs() + self.n_multiplier_dofs()
    }

    pub fn n_multiplier_dofs(&self) -> usize {
        match &self.multiplier {
            Multiplier::Coefficients { space, .. } => space.n_dofs(),
            Multiplier::Nitsche { .. } => 0,
        }
    }

    pub fn gamma(&self) -> Option<T> {
        match self.multiplier {
            Multiplier::Nitsche { gamma } => Some(gamma),
            _ => None,
        }
    }

    /// The discrete flux as a function on the boundary facets.
    pub fn flux<'a>(&'a self, problem: &'a ProblemSpec<T>) -> DiscreteFlux<'a, T> {
        DiscreteFlux {
            solution: self,
            problem,
        }
    }
}

/// Evaluator for `λ_h` on boundary facets.
#[derive(Clone, Copy)]
pub struct DiscreteFlux<'a, T> {
    solution: &'a DiscreteSolution<T>,
    problem: &'a ProblemSpec<T>,
}

impl<'a, T: Real> DiscreteFlux<'a, T> {
    /// `λ_h` on boundary facet `b` at parameter `t` (counterclockwise).
    pub fn eval(&self, b: usize, t: T) -> T {
        let sol = self.solution;
        match &sol.multiplier {
            Multiplier::Coefficients { space, coeffs } => space.eval(coeffs, b, t),
            Multiplier::Nitsche { gamma } => {
                let mesh = sol.space.mesh();
                let bf = &mesh.boundary_facets()[b];
                let x = mesh
                    .vertex(bf.vertices[0])
                    .lerp(mesh.vertex(bf.vertices[1]), t);
                let v = sol.uh().eval_boundary(b, t);
                let a = (self.problem.a)(x);
                a * v.gradient.dot(bf.normal) + *gamma / bf.length * ((self.problem.g)(x) - v.value)
            }
        }
    }
}

/// The post-processed Nitsche flux.
pub fn postprocess_nitsche_flux<'a, T: Real>(
    solution: &'a DiscreteSolution<T>,
    problem: &'a ProblemSpec<T>,
) -> Result<DiscreteFlux<'a, T>> {
    if solution.method != Method::Nitsche {
        return Err(Error::InvalidArgument(format!(
            "flux post-processing needs a Nitsche solution, got {}",
            solution.method.tag()
        )));
    }
    Ok(solution.flux(problem))
}
