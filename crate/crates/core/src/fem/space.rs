use std::sync::Arc;

use crate::geometry::Point2;
use crate::mesh::Mesh;
use crate::scalar::{lit, Real};

use super::basis::{LagrangeBasis, ShapeEval};
use super::quadrature::TriangleRule;

/// Affine geometry of one triangle.
#[derive(Clone, Copy, Debug)]
pub struct ElementGeometry<T> {
    pub points: [Point2<T>; 3],
    pub area: T,
    /// Constant gradients of the barycentric coordinates.
    pub grad_lambda: [Point2<T>; 3],
}

impl<T: Real> ElementGeometry<T> {
    pub fn new(points: [Point2<T>; 3]) -> Self {
        let [p0, p1, p2] = points;
        let area2 = (p1 - p0).cross(p2 - p0);
        let inv = T::one() / area2;
        let grad_lambda = [
            (p2 - p1).perp() * inv,
            (p0 - p2).perp() * inv,
            (p1 - p0).perp() * inv,
        ];
        Self {
            points,
            area: area2 * lit::<T>(0.5),
            grad_lambda,
        }
    }

    pub fn map(&self, lambda: [T; 3]) -> Point2<T> {
        self.points[0] * lambda[0] + self.points[1] * lambda[1] + self.points[2] * lambda[2]
    }

    /// Barycentric coordinates of a reference point `(ξ, η)`.
    pub fn reference_lambda(xi: T, eta: T) -> [T; 3] {
        [T::one() - xi - eta, xi, eta]
    }

    /// Barycentric coordinates of a physical point.
    pub fn barycentric(&self, p: Point2<T>) -> [T; 3] {
        let l1 = (p - self.points[0]).dot(self.grad_lambda[1]);
        let l2 = (p - self.points[0]).dot(self.grad_lambda[2]);
        [T::one() - l1 - l2, l1, l2]
    }

    /// Cartesian gradient of shape function `i`.
    pub fn gradient(&self, shape: &ShapeEval<T>, i: usize) -> Point2<T> {
        let d = shape.d1[i];
        self.grad_lambda[0] * d[0] + self.grad_lambda[1] * d[1] + self.grad_lambda[2] * d[2]
    }

    /// Cartesian Laplacian of shape function `i`.
    pub fn laplacian(&self, shape: &ShapeEval<T>, i: usize) -> T {
        let d2 = &shape.d2[i];
        let mut s = T::zero();
        for m in 0..3 {
            for n in 0..3 {
                s += d2[m][n] * self.grad_lambda[m].dot(self.grad_lambda[n]);
            }
        }
        s
    }
}

/// Continuous Lagrange space of order `p` on a mesh.
///
/// Global numbering: vertex dofs first, then `p - 1` dofs per facet ordered
/// from the smaller to the larger vertex id, then interior dofs.
#[derive(Clone, Debug)]
pub struct FeSpace<T> {
    mesh: Arc<Mesh<T>>,
    basis: LagrangeBasis,
    element_dofs: Vec<usize>,
    n_dofs: usize,
    boundary_dofs: Vec<usize>,
}

impl<T: Real> FeSpace<T> {
    pub fn new(mesh: Arc<Mesh<T>>, order: usize) -> Self {
        let basis = LagrangeBasis::new(order);
        let p = order;
        let nv = mesh.num_vertices();
        let nf = mesh.num_facets();
        let n_int = basis.num_interior();
        let n_local = basis.len();
        let mut element_dofs = Vec::with_capacity(mesh.num_elements() * n_local);
        for (e, tri) in mesh.triangles().iter().enumerate() {
            element_dofs.extend_from_slice(tri);
            let facets = mesh.element_facets(e);
            for i in 0..3 {
                let a = tri[(i + 1) % 3];
                let base = nv + facets[i] * (p - 1);
                for j in 1..p {
                    // local node j runs from a to b; global runs min -> max
                    let k = if a < tri[(i + 2) % 3] {
                        j - 1
                    } else {
                        p - 1 - j
                    };
                    element_dofs.push(base + k);
                }
            }
            let base = nv + nf * (p - 1) + e * n_int;
            element_dofs.extend(base..base + n_int);
        }
        let n_dofs = nv + nf * (p - 1) + mesh.num_elements() * n_int;

        let mut is_boundary = vec![false; n_dofs];
        for bf in mesh.boundary_facets() {
            let dofs = &element_dofs[bf.element * n_local..(bf.element + 1) * n_local];
            for l in facet_local_nodes(&basis, bf.local) {
                is_boundary[dofs[l]] = true;
            }
        }
        let boundary_dofs = (0..n_dofs).filter(|&d| is_boundary[d]).collect();
        Self {
            mesh,
            basis,
            element_dofs,
            n_dofs,
            boundary_dofs,
        }
    }

    pub fn mesh(&self) -> &Arc<Mesh<T>> {
        &self.mesh
    }

    pub fn order(&self) -> usize {
        self.basis.order()
    }

    pub fn basis(&self) -> &LagrangeBasis {
        &self.basis
    }

    pub fn n_dofs(&self) -> usize {
        self.n_dofs
    }

    pub fn n_local(&self) -> usize {
        self.basis.len()
    }

    pub fn element_dofs(&self, e: usize) -> &[usize] {
        let n = self.basis.len();
        &self.element_dofs[e * n..(e + 1) * n]
    }

    pub fn boundary_dofs(&self) -> &[usize] {
        &self.boundary_dofs
    }

    pub fn geometry(&self, e: usize) -> ElementGeometry<T> {
        ElementGeometry::new(self.mesh.element_points(e))
    }

    /// Physical location of every dof.
    pub fn dof_points(&self) -> Vec<Point2<T>> {
        let mut pts = vec![Point2::default(); self.n_dofs];
        let p = crate::scalar::count::<T>(self.order());
        for e in 0..self.mesh.num_elements() {
            let g = self.geometry(e);
            for (l, &d) in self.element_dofs(e).iter().enumerate() {
                let a = self.basis.nodes()[l];
                let lam = a.map(|x| crate::scalar::count::<T>(x) / p);
                pts[d] = g.map(lam);
            }
        }
        pts
    }

    /// Interpolates a function at the dof nodes.
    pub fn interpolate(&self, f: impl Fn(Point2<T>) -> T) -> Vec<T> {
        self.dof_points().into_iter().map(f).collect()
    }

    /// Shape function evaluations at every point of a triangle rule.
    pub fn tabulate(&self, rule: &TriangleRule<T>) -> Vec<ShapeEval<T>> {
        rule.points
            .iter()
            .map(|p| {
                self.basis
                    .eval(ElementGeometry::reference_lambda(p[0], p[1]))
            })
            .collect()
    }

    /// Barycentric coordinates, in element `e`, of the point at parameter
    /// `t` along the segment from mesh vertex `from` to mesh vertex `to`
    /// (both must be vertices of `e`).
    pub fn edge_lambda(&self, e: usize, from: usize, to: usize, t: T) -> [T; 3] {
        let tri = self.mesh.triangles()[e];
        let mut lam = [T::zero(); 3];
        for i in 0..3 {
            if tri[i] == from {
                lam[i] = T::one() - t;
            } else if tri[i] == to {
                lam[i] = t;
            }
        }
        lam
    }
}

/// Local node indices lying on the edge opposite local vertex `i`.
pub fn facet_local_nodes(basis: &LagrangeBasis, i: usize) -> Vec<usize> {
    basis
        .nodes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a[i] == 0)
        .map(|(l, _)| l)
        .collect()
}

/// A finite element function: a space together with coefficients.
#[derive(Clone, Copy)]
pub struct FeFunction<'a, T> {
    pub space: &'a FeSpace<T>,
    pub coeffs: &'a [T],
}

/// Value, gradient and Laplacian of a discrete function at one point.
#[derive(Clone, Copy, Debug)]
pub struct PointEval<T> {
    pub value: T,
    pub gradient: Point2<T>,
    pub laplacian: T,
}

impl<'a, T: Real> FeFunction<'a, T> {
    pub fn new(space: &'a FeSpace<T>, coeffs: &'a [T]) -> Self {
        assert_eq!(space.n_dofs(), coeffs.len());
        Self { space, coeffs }
    }

    /// Evaluates on element `e` from precomputed shape data.
    pub fn eval_with(
        &self,
        e: usize,
        geo: &ElementGeometry<T>,
        shape: &ShapeEval<T>,
    ) -> PointEval<T> {
        let dofs = self.space.element_dofs(e);
        let mut value = T::zero();
        let mut d1 = [T::zero(); 3];
        let mut d2 = [[T::zero(); 3]; 3];
        for (l, &d) in dofs.iter().enumerate() {
            let c = self.coeffs[d];
            value += c * shape.values[l];
            for m in 0..3 {
                d1[m] += c * shape.d1[l][m];
                for n in 0..3 {
                    d2[m][n] += c * shape.d2[l][m][n];
                }
            }
        }
        let g = &geo.grad_lambda;
        let gradient = g[0] * d1[0] + g[1] * d1[1] + g[2] * d1[2];
        let mut laplacian = T::zero();
        for m in 0..3 {
            for n in 0..3 {
                laplacian += d2[m][n] * g[m].dot(g[n]);
            }
        }
        PointEval {
            value,
            gradient,
            laplacian,
        }
    }

    /// Evaluates on element `e` at barycentric coordinates `lambda`.
    pub fn eval(&self, e: usize, lambda: [T; 3]) -> PointEval<T> {
        let geo = self.space.geometry(e);
        let shape = self.space.basis().eval(lambda);
        self.eval_with(e, &geo, &shape)
    }

    /// Evaluates on boundary facet `b` (arc-ordered index) at parameter `t`
    /// along its counterclockwise orientation.
    pub fn eval_boundary(&self, b: usize, t: T) -> PointEval<T> {
        let bf = &self.space.mesh().boundary_facets()[b];
        let lam = self
            .space
            .edge_lambda(bf.element, bf.vertices[0], bf.vertices[1], t);
        self.eval(bf.element, lam)
    }
}
