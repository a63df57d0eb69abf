//! Lagrange finite elements on triangles: quadrature, shape functions, dof
//! maps, boundary multiplier spaces, assembly and sparse solves.

pub mod assembly;
pub mod basis;
pub mod boundary_space;
pub mod dense;
pub mod projection;
pub mod quadrature;
pub mod solve;
pub mod space;
pub mod sparse;

pub use assembly::{
    assemble_boundary_load, assemble_load, assemble_stiffness, boundary_facet_points,
    default_degree, FacetPoint,
};
pub use basis::{LagrangeBasis, ShapeEval};
pub use boundary_space::{BoundarySpace, Continuity};
pub use projection::patch_l2_projection_linear;
pub use quadrature::{segment_rule, triangle_rule, SegmentRule, TriangleRule};
pub use solve::solve;
pub use space::{ElementGeometry, FeFunction, FeSpace, PointEval};
pub use sparse::{CsrMatrix, SparseSystem, Structure, TripletBuilder};
