use rayon::prelude::*;

use crate::discretization::{DiscreteSolution, ProblemSpec};
use crate::error::Result;
use crate::fem::{
    default_degree, patch_l2_projection_linear, segment_rule, triangle_rule, ElementGeometry,
};
use crate::geometry::Point2;
use crate::mesh::DistanceField;
use crate::scalar::{lit, Real};

/// Local residuals of a discrete solution.
#[derive(Clone, Debug)]
pub struct Residuals<T> {
    /// `r₁(T) = h_T ‖f + ∇·a∇u_h‖_{0,T}` per element.
    pub r1_element: Vec<T>,
    /// `r₀(F) = h_F^{1/2} ‖⟦a∂_ν u_h⟧‖_{0,F}` per mesh facet (zero on Γ).
    pub r0: Vec<T>,
    /// `r₁(F) = h_F^{1/2} ‖λ_h - a∂_ν u_h‖_{0,F}` per boundary facet.
    pub r1_facet: Vec<T>,
    /// `r₂(F) = h_F^{1/2} |g - u_h|_{1,F}` per boundary facet.
    pub r2: Vec<T>,
    /// `r₃(F) = h_F^{-1/2} ‖u_h - g‖_{0,F}` per boundary facet.
    pub r3: Vec<T>,
    /// For each boundary vertex `P`: the vertex and `(facet, r(F,P))` for the
    /// facets of its patch.
    pub patches: Vec<(usize, Vec<(usize, T)>)>,
}

impl<T: Real> Residuals<T> {
    /// Multiplies every residual by `c`.
    pub fn scaled(&self, c: T) -> Self {
        let s = |v: &Vec<T>| v.iter().map(|&x| x * c).collect();
        Self {
            r1_element: s(&self.r1_element),
            r0: s(&self.r0),
            r1_facet: s(&self.r1_facet),
            r2: s(&self.r2),
            r3: s(&self.r3),
            patches: self
                .patches
                .iter()
                .map(|(p, v)| (*p, v.iter().map(|&(f, x)| (f, x * c)).collect()))
                .collect(),
        }
    }

    /// `Σ_{F ⊆ Δ_P} r(F,P)²` split evenly between the facets of each patch,
    /// accumulated per boundary facet.
    pub fn patch_shares(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.r1_facet.len()];
        for (_, terms) in &self.patches {
            let total = terms.iter().fold(T::zero(), |s, &(_, r)| s + r * r);
            let share = total / crate::scalar::count::<T>(terms.len());
            for &(f, _) in terms {
                out[f] += share;
            }
        }
        out
    }
}

/// Tangential derivative of `g` along a facet, from the supplied gradient or
/// central differences with step `h_F · 1e-6`.
fn g_tangential<T: Real>(problem: &ProblemSpec<T>, x: Point2<T>, t: Point2<T>, h: T) -> T {
    problem.g_tangential(x, t).unwrap_or_else(|| {
        let eps = h * lit::<T>(1e-6);
        ((problem.g)(x + t * eps) - (problem.g)(x - t * eps)) / (eps + eps)
    })
}

pub fn compute_residuals<T: Real>(
    solution: &DiscreteSolution<T>,
    problem: &ProblemSpec<T>,
    distance: &DistanceField<T>,
) -> Result<Residuals<T>> {
    let space = &solution.space;
    let mesh = space.mesh();
    let k = space.order();
    let degree = default_degree(k);
    let uh = solution.uh();
    let two = T::one() + T::one();

    let tri = triangle_rule::<T>(degree)?;
    let shapes = space.tabulate(&tri);
    let r1_element: Vec<T> = (0..mesh.num_elements())
        .into_par_iter()
        .map(|e| {
            let geo = space.geometry(e);
            let mut s = T::zero();
            for (q, sh) in shapes.iter().enumerate() {
                let [xi, eta] = tri.points[q];
                let x = geo.map(ElementGeometry::reference_lambda(xi, eta));
                let v = uh.eval_with(e, &geo, sh);
                let r = (problem.f)(x)
                    + (problem.a)(x) * v.laplacian
                    + (problem.grad_a)(x).dot(v.gradient);
                s += tri.weights[q] * two * geo.area * r * r;
            }
            mesh.diameter(e) * s.sqrt()
        })
        .collect();

    let seg = segment_rule::<T>(degree)?;
    let r0: Vec<T> = mesh
        .facets()
        .par_iter()
        .enumerate()
        .map(|(f, facet)| {
            let Some(outer) = facet.outer else {
                return T::zero();
            };
            let [v0, v1] = facet.vertices;
            let (p0, p1) = (mesh.vertex(v0), mesh.vertex(v1));
            let h = mesh.facet_length(f);
            let n = (p1 - p0).perp() * (T::one() / h);
            let mut s = T::zero();
            for (&t, &w) in seg.points.iter().zip(&seg.weights) {
                let x = p0.lerp(p1, t);
                let gi = uh
                    .eval(facet.inner, space.edge_lambda(facet.inner, v0, v1, t))
                    .gradient;
                let go = uh.eval(outer, space.edge_lambda(outer, v0, v1, t)).gradient;
                let j = (problem.a)(x) * (gi - go).dot(n);
                s += w * h * j * j;
            }
            h.sqrt() * s.sqrt()
        })
        .collect();

    let flux = solution.flux(problem);
    let nb = mesh.boundary_facets().len();
    let boundary: Vec<(T, T, T)> = (0..nb)
        .into_par_iter()
        .map(|b| {
            let bf = &mesh.boundary_facets()[b];
            let (p0, p1) = (mesh.vertex(bf.vertices[0]), mesh.vertex(bf.vertices[1]));
            let h = bf.length;
            let (mut s1, mut s2, mut s3) = (T::zero(), T::zero(), T::zero());
            for (&t, &w) in seg.points.iter().zip(&seg.weights) {
                let x = p0.lerp(p1, t);
                let v = uh.eval_boundary(b, t);
                let a = (problem.a)(x);
                let d1 = flux.eval(b, t) - a * v.gradient.dot(bf.normal);
                let d2 = g_tangential(problem, x, bf.tangent, h) - v.gradient.dot(bf.tangent);
                let d3 = v.value - (problem.g)(x);
                s1 += w * h * d1 * d1;
                s2 += w * h * d2 * d2;
                s3 += w * h * d3 * d3;
            }
            (
                h.sqrt() * s1.sqrt(),
                h.sqrt() * s2.sqrt(),
                s3.sqrt() / h.sqrt(),
            )
        })
        .collect();

    let patch_degree = default_degree(k.max(1));
    let patches: Vec<(usize, Vec<(usize, T)>)> = distance
        .vertex_patches
        .par_iter()
        .map(|(p, facets)| -> Result<(usize, Vec<(usize, T)>)> {
            let bfs = mesh.boundary_facets();
            let mut nodes = vec![mesh.vertex(bfs[facets[0]].vertices[0])];
            for &f in facets {
                nodes.push(mesh.vertex(bfs[f].vertices[1]));
            }
            let gp = patch_l2_projection_linear(&nodes, |x| (problem.g)(x), patch_degree)?;
            let terms = facets
                .iter()
                .enumerate()
                .map(|(i, &f)| {
                    let bf = &bfs[f];
                    let h = bf.length;
                    let (p0, p1) = (nodes[i], nodes[i + 1]);
                    let slope = (gp[i + 1] - gp[i]) / h;
                    let (mut s0, mut s1) = (T::zero(), T::zero());
                    for (&t, &w) in seg.points.iter().zip(&seg.weights) {
                        let x = p0.lerp(p1, t);
                        let ghp = gp[i] + (gp[i + 1] - gp[i]) * t;
                        let d0 = uh.eval_boundary(f, t).value - ghp;
                        let d1 = slope - g_tangential(problem, x, bf.tangent, h);
                        s0 += w * h * d0 * d0;
                        s1 += w * h * d1 * d1;
                    }
                    (f, (s0 / h + h * s1).sqrt())
                })
                .collect();
            Ok((*p, terms))
        })
        .collect::<Result<_>>()?;

    Ok(Residuals {
        r1_element,
        r0,
        r1_facet: boundary.iter().map(|r| r.0).collect(),
        r2: boundary.iter().map(|r| r.1).collect(),
        r3: boundary.iter().map(|r| r.2).collect(),
        patches,
    })
}
