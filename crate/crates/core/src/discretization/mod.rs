//! Weak imposition of Dirichlet data: Lagrange multipliers, Barbosa–Hughes
//! stabilization and Nitsche's method.

mod methods;
mod problem;
mod solution;

pub use methods::{
    energy_error, solve_barbosa_hughes, solve_lagrange, solve_method, solve_nitsche, Method,
    MethodParams, Sign,
};
pub use problem::{
    linear_problem, scalar_field, vector_field, ExactSolution, ProblemSpec, ScalarField,
    VectorField,
};
pub use solution::{postprocess_nitsche_flux, DiscreteFlux, DiscreteSolution, Multiplier};
