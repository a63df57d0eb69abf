use rayon::prelude::*;

use crate::error::Result;
use crate::geometry::Point2;
use crate::scalar::Real;

use super::basis::ShapeEval;
use super::quadrature::{segment_rule, triangle_rule, SegmentRule};
use super::space::{ElementGeometry, FeSpace};
use super::sparse::{CsrMatrix, TripletBuilder};

/// Default quadrature degree for order-`k` elements with non-polynomial data.
pub fn default_degree(k: usize) -> usize {
    2 * k + 4
}

/// A quadrature point on a boundary facet with the owning element's shape
/// data. `weight` includes the facet length.
#[derive(Clone, Debug)]
pub struct FacetPoint<T> {
    pub t: T,
    pub x: Point2<T>,
    pub weight: T,
    pub shape: ShapeEval<T>,
}

/// Quadrature points of `rule` on boundary facet `b`.
pub fn boundary_facet_points<T: Real>(
    space: &FeSpace<T>,
    b: usize,
    rule: &SegmentRule<T>,
) -> Vec<FacetPoint<T>> {
    let mesh = space.mesh();
    let bf = &mesh.boundary_facets()[b];
    let (p0, p1) = (mesh.vertex(bf.vertices[0]), mesh.vertex(bf.vertices[1]));
    rule.points
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| {
            let lam = space.edge_lambda(bf.element, bf.vertices[0], bf.vertices[1], t);
            FacetPoint {
                t,
                x: p0.lerp(p1, t),
                weight: w * bf.length,
                shape: space.basis().eval(lam),
            }
        })
        .collect()
}

/// Element matrices in element order, computed in parallel.
fn element_blocks<T: Real, F>(space: &FeSpace<T>, local: F) -> Vec<Vec<T>>
where
    F: Fn(usize, &ElementGeometry<T>) -> Vec<T> + Sync,
{
    (0..space.mesh().num_elements())
        .into_par_iter()
        .map(|e| local(e, &space.geometry(e)))
        .collect()
}

/// `K_ij = ∫ a ∇φ_j·∇φ_i`.
pub fn assemble_stiffness<T: Real>(
    space: &FeSpace<T>,
    a: impl Fn(Point2<T>) -> T + Sync,
    degree: usize,
) -> Result<CsrMatrix<T>> {
    let rule = triangle_rule::<T>(degree)?;
    let shapes = space.tabulate(&rule);
    let n = space.n_local();
    let blocks = element_blocks(space, |_, geo| {
        let mut k = vec![T::zero(); n * n];
        let mut grads = vec![Point2::default(); n];
        for (q, shape) in shapes.iter().enumerate() {
            let [xi, eta] = rule.points[q];
            let x = geo.map(ElementGeometry::reference_lambda(xi, eta));
            let w = rule.weights[q] * geo.area * (T::one() + T::one()) * a(x);
            for (i, g) in grads.iter_mut().enumerate() {
                *g = geo.gradient(shape, i);
            }
            for i in 0..n {
                for j in 0..n {
                    k[i * n + j] += w * grads[i].dot(grads[j]);
                }
            }
        }
        k
    });
    let mut t = TripletBuilder::with_capacity(space.n_dofs(), space.n_dofs(), blocks.len() * n * n);
    for (e, k) in blocks.iter().enumerate() {
        let dofs = space.element_dofs(e);
        t.add_block(dofs, dofs, k);
    }
    Ok(t.build())
}

/// `b_i = ∫ f φ_i`.
pub fn assemble_load<T: Real>(
    space: &FeSpace<T>,
    f: impl Fn(Point2<T>) -> T + Sync,
    degree: usize,
) -> Result<Vec<T>> {
    let rule = triangle_rule::<T>(degree)?;
    let shapes = space.tabulate(&rule);
    let n = space.n_local();
    let blocks = element_blocks(space, |_, geo| {
        let mut b = vec![T::zero(); n];
        for (q, shape) in shapes.iter().enumerate() {
            let [xi, eta] = rule.points[q];
            let x = geo.map(ElementGeometry::reference_lambda(xi, eta));
            let w = rule.weights[q] * geo.area * (T::one() + T::one()) * f(x);
            for i in 0..n {
                b[i] += w * shape.values[i];
            }
        }
        b
    });
    let mut out = vec![T::zero(); space.n_dofs()];
    for (e, b) in blocks.iter().enumerate() {
        for (&d, &v) in space.element_dofs(e).iter().zip(b) {
            out[d] += v;
        }
    }
    Ok(out)
}

/// `b_i = ∫_Γ g φ_i`.
pub fn assemble_boundary_load<T: Real>(
    space: &FeSpace<T>,
    g: impl Fn(Point2<T>) -> T,
    degree: usize,
) -> Result<Vec<T>> {
    let rule = segment_rule::<T>(degree)?;
    let mut out = vec![T::zero(); space.n_dofs()];
    for (b, bf) in space.mesh().boundary_facets().iter().enumerate() {
        let dofs = space.element_dofs(bf.element);
        for p in boundary_facet_points(space, b, &rule) {
            let w = p.weight * g(p.x);
            for (i, &d) in dofs.iter().enumerate() {
                out[d] += w * p.shape.values[i];
            }
        }
    }
    Ok(out)
}
