//! A-priori boundary-concentrated meshes: size `h^2` on the boundary and
//! `h * sqrt(dist(T, Γ))` in the interior.

use crate::error::{Error, Result};
use crate::geometry::DomainKind;
use crate::scalar::Real;

use super::{compute_distance_field, Mesh};

/// Local size target `max(h^2, h * sqrt(dist))`.
pub fn pw_size_target<T: Real>(h: T, dist: T) -> T {
    (h * h).max(h * dist.max(T::zero()).sqrt())
}

/// Bisects every element violating its size target until none remains.
/// The element distance is the smallest vertex distance to the boundary.
pub fn generate_pw_mesh<T: Real>(domain: DomainKind, h: T, cap: usize) -> Result<Mesh<T>> {
    if !(h > T::zero() && h <= T::one()) {
        return Err(Error::InvalidArgument(format!(
            "grading parameter {h} not in (0, 1]"
        )));
    }
    let mut mesh = match domain {
        DomainKind::UnitSquare => Mesh::unit_square(1)?,
        DomainKind::LShape => Mesh::lshape(1)?,
    };
    let h2 = h * h;
    loop {
        let dist = compute_distance_field(&mesh);
        let mut marked = Vec::new();
        for e in 0..mesh.num_elements() {
            let d = mesh.triangles()[e]
                .iter()
                .map(|&v| dist.vertex_distance[v])
                .fold(T::infinity(), T::min);
            if mesh.diameter(e) > pw_size_target(h, d) {
                marked.push(e);
            }
        }
        for bf in mesh.boundary_facets() {
            if bf.length > h2 {
                marked.push(bf.element);
            }
        }
        if marked.is_empty() {
            return Ok(mesh);
        }
        marked.sort_unstable();
        marked.dedup();
        mesh = mesh.refine(&marked)?;
        if mesh.num_elements() > cap {
            return Err(Error::MeshCapExceeded { cap });
        }
    }
}
