use crate::error::Result;
use crate::estimator::{compute_weights, WeightConfig};
use crate::geometry::Point2;
use crate::mesh::{compute_distance_field, Mesh};
use crate::scalar::{lit, Real};

use super::marking::mark_strict;

/// Meshes produced by refining on the weights alone.
#[derive(Clone, Debug)]
pub struct WeightDemo<T> {
    /// Initial mesh followed by the mesh after each step.
    pub meshes: Vec<Mesh<T>>,
}

impl<T: Real> WeightDemo<T> {
    pub fn last(&self) -> &Mesh<T> {
        self.meshes.last().expect("at least the initial mesh")
    }

    /// Deepest bisection level among elements touching the boundary.
    pub fn boundary_level(&self) -> u32 {
        let m = self.last();
        (0..m.num_elements())
            .filter(|&e| m.triangles()[e].iter().any(|&v| m.is_boundary_vertex(v)))
            .map(|e| m.level(e))
            .max()
            .unwrap_or(0)
    }

    /// Deepest bisection level among elements whose closure contains the
    /// centre of the square.
    pub fn center_level(&self) -> u32 {
        let m = self.last();
        let c = Point2::new(lit::<T>(0.5), lit::<T>(0.5));
        let tol = lit::<T>(-1e-12);
        (0..m.num_elements())
            .filter(|&e| {
                let [a, b, d] = m.element_points(e);
                [(a, b), (b, d), (d, a)]
                    .iter()
                    .all(|&(p, q)| (q - p).cross(c - p) >= tol)
            })
            .map(|e| m.level(e))
            .max()
            .unwrap_or(0)
    }
}

/// Refines the `4 x 4` square `steps` times, marking `ς_T > θ max ς`.
pub fn weight_demo<T: Real>(k: usize, c2: f64, steps: usize, theta: f64) -> Result<WeightDemo<T>> {
    let cfg = WeightConfig { c1: 1.0, c2, k };
    let mut meshes = vec![Mesh::unit_square(4)?];
    for _ in 0..steps {
        let mesh = meshes.last().expect("nonempty");
        let w = compute_weights(mesh, &compute_distance_field(mesh), &cfg);
        let next = mesh.refine(&mark_strict(&w.element, lit::<T>(theta))?)?;
        meshes.push(next);
    }
    Ok(WeightDemo { meshes })
}
