pub mod amr;
pub mod discretization;
pub mod error;
pub mod estimator;
pub mod experiments;
pub mod fem;
pub mod geometry;
pub mod mesh;
pub mod norm_eval;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision aliases.
pub type Mesh = mesh::Mesh<f64>;
pub type Point = geometry::Point2<f64>;
pub type Problem = discretization::ProblemSpec<f64>;
pub type Solution = discretization::DiscreteSolution<f64>;
pub type FeSpace = fem::FeSpace<f64>;
pub type Indicators = estimator::IndicatorField<f64>;
pub type Pyramid = norm_eval::WaveletPyramid<f64>;
