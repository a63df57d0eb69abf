//! Conforming triangular meshes with a boundary arc-length chart.
//!
//! Triangles are stored counterclockwise with the *newest vertex* in local
//! slot 0, so the refinement edge of every triangle is the edge opposite
//! slot 0 (local vertices 1 and 2). Facets are numbered in order of first
//! appearance while scanning triangles; boundary facets are additionally
//! listed in arc-length order starting at the domain anchor.

mod build;
mod distance;
mod io;
mod pw;
mod refine;

pub use distance::{compute_distance_field, DistanceField};
pub use io::write_mesh;
pub use pw::{generate_pw_mesh, pw_size_target};

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{DomainKind, Point2, PolygonBoundary};
use crate::scalar::{lit, Real};

/// An edge of the triangulation.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    /// Endpoints with the smaller vertex id first.
    pub vertices: [usize; 2],
    /// First incident triangle (the one that owns boundary facets).
    pub inner: usize,
    /// Second incident triangle for interior facets.
    pub outer: Option<usize>,
    /// Position in [`Mesh::boundary_facets`] for facets on the boundary.
    pub boundary: Option<usize>,
}

impl Facet {
    pub fn is_boundary(&self) -> bool {
        self.outer.is_none()
    }
}

/// A facet on the boundary, oriented counterclockwise along the domain.
#[derive(Clone, Debug)]
pub struct BoundaryFacet<T> {
    pub facet: usize,
    pub element: usize,
    /// Local index (in `element`) of the vertex opposite this facet.
    pub local: usize,
    /// Endpoints in counterclockwise order.
    pub vertices: [usize; 2],
    /// Arc-length interval `[start, end)`; `end` equals the perimeter for the
    /// facet closing the loop.
    pub arc: [T; 2],
    pub segment: usize,
    pub length: T,
    pub normal: Point2<T>,
    pub tangent: Point2<T>,
}

#[derive(Clone, Debug)]
pub struct Mesh<T> {
    domain: DomainKind,
    chart: PolygonBoundary<T>,
    vertices: Vec<Point2<T>>,
    triangles: Vec<[usize; 3]>,
    parent: Vec<Option<usize>>,
    level: Vec<u32>,
    facets: Vec<Facet>,
    element_facets: Vec<[usize; 3]>,
    boundary_facets: Vec<BoundaryFacet<T>>,
    on_boundary: Vec<bool>,
    diameters: Vec<T>,
}

impl<T: Real> Mesh<T> {
    /// Assembles a mesh from raw vertex and triangle lists and builds its
    /// topology. Fails if a triangle is degenerate or clockwise, an edge is
    /// shared by more than two triangles, or an edge with a single neighbour
    /// does not lie on the domain boundary (hanging node).
    pub fn from_parts(
        domain: DomainKind,
        vertices: Vec<Point2<T>>,
        triangles: Vec<[usize; 3]>,
        parent: Vec<Option<usize>>,
        level: Vec<u32>,
    ) -> Result<Self> {
        if parent.len() != triangles.len() || level.len() != triangles.len() {
            return Err(Error::InvalidMesh("metadata length mismatch".into()));
        }
        let chart = domain.boundary::<T>();
        let mut edge_map: HashMap<(usize, usize), usize> =
            HashMap::with_capacity(triangles.len() * 2);
        let mut facets: Vec<Facet> = Vec::with_capacity(triangles.len() * 3 / 2 + 8);
        let mut element_facets = Vec::with_capacity(triangles.len());
        let mut diameters = Vec::with_capacity(triangles.len());

        for (e, tri) in triangles.iter().enumerate() {
            for &v in tri {
                if v >= vertices.len() {
                    return Err(Error::InvalidMesh(format!(
                        "triangle {e} references vertex {v}"
                    )));
                }
            }
            let [a, b, c] = tri.map(|v| vertices[v]);
            let area2 = (b - a).cross(c - a);
            if area2 <= T::zero() {
                return Err(Error::InvalidMesh(format!(
                    "triangle {e} has non-positive signed area"
                )));
            }
            diameters.push((b - a).norm().max((c - b).norm()).max((a - c).norm()));
            let mut local = [0usize; 3];
            for i in 0..3 {
                let p = tri[(i + 1) % 3];
                let q = tri[(i + 2) % 3];
                let key = (p.min(q), p.max(q));
                let f = match edge_map.get(&key) {
                    Some(&f) => {
                        let facet = &mut facets[f];
                        if facet.outer.is_some() {
                            return Err(Error::InvalidMesh(format!(
                                "edge {key:?} shared by more than two triangles"
                            )));
                        }
                        facet.outer = Some(e);
                        f
                    }
                    None => {
                        let f = facets.len();
                        facets.push(Facet {
                            vertices: [key.0, key.1],
                            inner: e,
                            outer: None,
                            boundary: None,
                        });
                        edge_map.insert(key, f);
                        f
                    }
                };
                local[i] = f;
            }
            element_facets.push(local);
        }

        let mut boundary_facets = Vec::new();
        let mut on_boundary = vec![false; vertices.len()];
        for (f, facet) in facets.iter().enumerate() {
            if facet.outer.is_some() {
                continue;
            }
            let e = facet.inner;
            let local = element_facets[e].iter().position(|&g| g == f).unwrap();
            let tri = triangles[e];
            let p = tri[(local + 1) % 3];
            let q = tri[(local + 2) % 3];
            let (pa, pb) = (vertices[p], vertices[q]);
            let (segment, start) = chart.locate_edge(pa, pb).ok_or_else(|| {
                Error::InvalidMesh(format!(
                    "edge ({p}, {q}) has one neighbour but is not on the boundary"
                ))
            })?;
            let length = (pb - pa).norm();
            let tangent = (pb - pa) * (T::one() / length);
            on_boundary[p] = true;
            on_boundary[q] = true;
            boundary_facets.push(BoundaryFacet {
                facet: f,
                element: e,
                local,
                vertices: [p, q],
                arc: [start, start + length],
                segment,
                length,
                normal: chart.outward_normal(segment),
                tangent,
            });
        }
        boundary_facets.sort_by(|a, b| a.arc[0].partial_cmp(&b.arc[0]).unwrap());
        // the facet closing the loop ends exactly at the perimeter
        if let Some(last) = boundary_facets.last_mut() {
            let per = chart.perimeter();
            if (last.arc[1] - per).abs() <= lit::<T>(1e-9) * per {
                last.arc[1] = per;
            }
        }
        for (i, bf) in boundary_facets.iter().enumerate() {
            facets[bf.facet].boundary = Some(i);
        }

        Ok(Self {
            domain,
            chart,
            vertices,
            triangles,
            parent,
            level,
            facets,
            element_facets,
            boundary_facets,
            on_boundary,
            diameters,
        })
    }

    pub fn domain(&self) -> DomainKind {
        self.domain
    }

    pub fn chart(&self) -> &PolygonBoundary<T> {
        &self.chart
    }

    pub fn perimeter(&self) -> T {
        self.chart.perimeter()
    }

    pub fn vertices(&self) -> &[Point2<T>] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> Point2<T> {
        self.vertices[v]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_elements(&self) -> usize {
        self.triangles.len()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    /// Facet ids of triangle `e`; entry `i` is opposite local vertex `i`.
    pub fn element_facets(&self, e: usize) -> [usize; 3] {
        self.element_facets[e]
    }

    pub fn boundary_facets(&self) -> &[BoundaryFacet<T>] {
        &self.boundary_facets
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.on_boundary[v]
    }

    pub fn parent(&self, e: usize) -> Option<usize> {
        self.parent[e]
    }

    /// Number of bisections separating `e` from its initial ancestor.
    pub fn level(&self, e: usize) -> u32 {
        self.level[e]
    }

    /// Element diameter `h_T` (longest edge).
    pub fn diameter(&self, e: usize) -> T {
        self.diameters[e]
    }

    /// Facet length `h_F`.
    pub fn facet_length(&self, f: usize) -> T {
        let [a, b] = self.facets[f].vertices;
        (self.vertices[b] - self.vertices[a]).norm()
    }

    pub fn element_points(&self, e: usize) -> [Point2<T>; 3] {
        self.triangles[e].map(|v| self.vertices[v])
    }

    pub fn area(&self, e: usize) -> T {
        let [a, b, c] = self.element_points(e);
        (b - a).cross(c - a) * lit::<T>(0.5)
    }

    pub fn centroid(&self, e: usize) -> Point2<T> {
        let [a, b, c] = self.element_points(e);
        (a + b + c) * (T::one() / lit::<T>(3.0))
    }

    /// Ratio of circumradius to inradius of triangle `e`.
    pub fn shape_ratio(&self, e: usize) -> T {
        let [a, b, c] = self.element_points(e);
        let (la, lb, lc) = ((c - b).norm(), (a - c).norm(), (b - a).norm());
        let area = self.area(e);
        let s = (la + lb + lc) * lit::<T>(0.5);
        let inradius = area / s;
        let circumradius = la * lb * lc / (area * lit::<T>(4.0));
        circumradius / inradius
    }

    /// Checks the structural invariants: positive orientation, facet
    /// incidence, arc-length tiling of the boundary and the shape ratio
    /// bound. Returns a description of the first violation.
    pub fn check_invariants(&self, max_shape_ratio: T) -> std::result::Result<(), String> {
        for e in 0..self.num_elements() {
            if self.area(e) <= T::zero() {
                return Err(format!("triangle {e} is not positively oriented"));
            }
            let r = self.shape_ratio(e);
            if !(r <= max_shape_ratio) {
                return Err(format!("triangle {e} has shape ratio {r}"));
            }
        }
        let mut incidence = vec![0usize; self.num_facets()];
        for ef in &self.element_facets {
            for &f in ef {
                incidence[f] += 1;
            }
        }
        for (f, facet) in self.facets.iter().enumerate() {
            let expect = if facet.is_boundary() { 1 } else { 2 };
            if incidence[f] != expect {
                return Err(format!("facet {f} has {} incident triangles", incidence[f]));
            }
        }
        let per = self.perimeter();
        let tol = lit::<T>(1e-12) * per;
        let mut s = T::zero();
        for (i, bf) in self.boundary_facets.iter().enumerate() {
            if (bf.arc[0] - s).abs() > tol {
                return Err(format!(
                    "boundary facet {i} starts at {} instead of {s}",
                    bf.arc[0]
                ));
            }
            if (bf.arc[1] - bf.arc[0] - bf.length).abs() > tol {
                return Err(format!("boundary facet {i} arc length mismatch"));
            }
            if i > 0 && self.boundary_facets[i - 1].vertices[1] != bf.vertices[0] {
                return Err(format!("boundary facets {} and {i} are not chained", i - 1));
            }
            s = bf.arc[1];
        }
        if (s - per).abs() > tol {
            return Err(format!("boundary arcs sum to {s}, perimeter is {per}"));
        }
        if let (Some(first), Some(last)) =
            (self.boundary_facets.first(), self.boundary_facets.last())
        {
            if last.vertices[1] != first.vertices[0] {
                return Err("boundary loop is not closed".into());
            }
        }
        Ok(())
    }

    /// Index of the boundary facet whose arc interval contains `s`.
    pub fn boundary_facet_at(&self, s: T) -> usize {
        let bfs = &self.boundary_facets;
        let idx = bfs.partition_point(|bf| bf.arc[1] <= s);
        idx.min(bfs.len() - 1)
    }

    /// Bisects every triangle twice, halving all diameters.
    pub fn uniform_refine(&self) -> Result<Self> {
        let all: Vec<usize> = (0..self.num_elements()).collect();
        let once = self.refine(&all)?;
        let all: Vec<usize> = (0..once.num_elements()).collect();
        let mut twice = once.refine(&all)?;
        // parent ids should point into `self`
        for p in twice.parent.iter_mut() {
            *p = p.and_then(|q| once.parent[q]);
        }
        Ok(twice)
    }
}

#[cfg(test)]
mod tests;
