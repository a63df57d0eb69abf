use crate::scalar::Real;

use super::Mesh;

/// Distances of element patches to the boundary.
#[derive(Clone, Debug)]
pub struct DistanceField<T> {
    /// `d_Γ(x)` for every mesh vertex; exactly zero on boundary vertices.
    pub vertex_distance: Vec<T>,
    /// `ρ_T`: minimum of `vertex_distance` over the vertices of the patch.
    pub rho: Vec<T>,
    /// Elements sharing at least one vertex with each element (itself included).
    pub element_patches: Vec<Vec<usize>>,
    /// For each boundary vertex, the boundary facets (indices into
    /// [`Mesh::boundary_facets`]) that contain it, in arc order.
    pub vertex_patches: Vec<(usize, Vec<usize>)>,
}

pub fn compute_distance_field<T: Real>(mesh: &Mesh<T>) -> DistanceField<T> {
    let chart = mesh.chart();
    let vertex_distance: Vec<T> = (0..mesh.num_vertices())
        .map(|v| {
            if mesh.is_boundary_vertex(v) {
                T::zero()
            } else {
                chart.distance(mesh.vertex(v))
            }
        })
        .collect();

    let mut vertex_elements: Vec<Vec<usize>> = vec![Vec::new(); mesh.num_vertices()];
    for (e, tri) in mesh.triangles().iter().enumerate() {
        for &v in tri {
            vertex_elements[v].push(e);
        }
    }

    let mut element_patches = Vec::with_capacity(mesh.num_elements());
    let mut rho = Vec::with_capacity(mesh.num_elements());
    for tri in mesh.triangles() {
        let mut patch: Vec<usize> = tri
            .iter()
            .flat_map(|&v| vertex_elements[v].iter().copied())
            .collect();
        patch.sort_unstable();
        patch.dedup();
        let r = patch
            .iter()
            .flat_map(|&e| mesh.triangles()[e].iter())
            .map(|&v| vertex_distance[v])
            .fold(T::infinity(), T::min);
        rho.push(r);
        element_patches.push(patch);
    }

    let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); mesh.num_vertices()];
    for (i, bf) in mesh.boundary_facets().iter().enumerate() {
        per_vertex[bf.vertices[0]].push(i);
        per_vertex[bf.vertices[1]].push(i);
    }
    let mut vertex_patches = Vec::new();
    // walk boundary vertices in arc order: the start vertex of each facet
    for bf in mesh.boundary_facets() {
        let v = bf.vertices[0];
        let mut facets = per_vertex[v].clone();
        facets.sort_by(|a, b| {
            let sa = mesh.boundary_facets()[*a].arc[0];
            let sb = mesh.boundary_facets()[*b].arc[0];
            sa.partial_cmp(&sb).unwrap()
        });
        // keep the chain order (incoming facet first) across the anchor
        if facets.len() == 2 && mesh.boundary_facets()[facets[1]].vertices[1] == v {
            facets.swap(0, 1);
        }
        vertex_patches.push((v, facets));
    }

    DistanceField {
        vertex_distance,
        rho,
        element_patches,
        vertex_patches,
    }
}
