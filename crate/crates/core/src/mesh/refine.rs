//! Newest-vertex bisection with conforming closure.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::Mesh;

impl<T: Real> Mesh<T> {
    /// Refines the mesh by newest-vertex bisection. Every marked triangle is
    /// bisected at least once; neighbours are bisected as needed so the
    /// result stays conforming. Children record the id of the triangle
    /// they came from in `self`.
    pub fn refine(&self, marked: &[usize]) -> Result<Self> {
        let nf = self.num_facets();
        let mut edge_marked = vec![false; nf];
        let mut stack = Vec::new();
        for &e in marked {
            if e >= self.num_elements() {
                return Err(Error::InvalidArgument(format!(
                    "marked element {e} out of range"
                )));
            }
            let f = self.element_facets[e][0];
            if !edge_marked[f] {
                edge_marked[f] = true;
                stack.push(f);
            }
        }
        if stack.is_empty() {
            return Ok(self.clone_with_identity_parents());
        }
        // closure: a triangle with any marked edge must bisect its
        // refinement edge
        while let Some(f) = stack.pop() {
            let facet = &self.facets[f];
            for e in std::iter::once(facet.inner).chain(facet.outer) {
                let r = self.element_facets[e][0];
                if !edge_marked[r] {
                    edge_marked[r] = true;
                    stack.push(r);
                }
            }
        }

        let mut vertices = self.vertices.clone();
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        for (f, &m) in edge_marked.iter().enumerate() {
            if m {
                let [a, b] = self.facets[f].vertices;
                midpoint.insert((a, b), vertices.len());
                vertices.push(self.vertices[a].midpoint(self.vertices[b]));
            }
        }

        let mut triangles = Vec::with_capacity(self.num_elements() * 2);
        let mut parent = Vec::with_capacity(self.num_elements() * 2);
        let mut level = Vec::with_capacity(self.num_elements() * 2);
        for (e, &tri) in self.triangles.iter().enumerate() {
            bisect(tri, self.level[e], &midpoint, &mut |t, l| {
                triangles.push(t);
                parent.push(Some(e));
                level.push(l);
            });
        }
        Mesh::from_parts(self.domain, vertices, triangles, parent, level)
    }

    fn clone_with_identity_parents(&self) -> Self {
        let mut m = self.clone();
        m.parent = (0..self.num_elements()).map(Some).collect();
        m
    }
}

fn bisect(
    tri: [usize; 3],
    level: u32,
    midpoint: &HashMap<(usize, usize), usize>,
    emit: &mut impl FnMut([usize; 3], u32),
) {
    let [v0, v1, v2] = tri;
    let key = (v1.min(v2), v1.max(v2));
    match midpoint.get(&key) {
        Some(&m) => {
            bisect([m, v0, v1], level + 1, midpoint, emit);
            bisect([m, v2, v0], level + 1, midpoint, emit);
        }
        None => emit(tri, level),
    }
}
