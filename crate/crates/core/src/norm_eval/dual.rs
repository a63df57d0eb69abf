use std::sync::Arc;

use log::warn;

use crate::error::{Error, Result};
use crate::fem::{
    assemble_stiffness, default_degree, segment_rule, solve, triangle_rule, ElementGeometry,
    FeFunction, FeSpace, SparseSystem, Structure,
};
use crate::mesh::Mesh;
use crate::scalar::{lit, to_f64, Real};

use super::boundary_fn::{for_each_overlap, BoundaryFunction};

/// Result of the Neumann lifting.
#[derive(Clone, Debug)]
pub struct DualError<T> {
    /// `|∇w_h|_{0,Ω}`, the value reported as `E₁`.
    pub e1: T,
    /// `⟨δ, w_h⟩_Γ^{1/2}`.
    pub pairing: T,
    /// `∫_Γ δ`.
    pub mean: T,
    /// `‖δ‖_{L¹(Γ)}`.
    pub l1: T,
    /// Whether `|∫_Γ δ| ≤ 1e-7 ‖δ‖_{L¹}` held.
    pub compatible: bool,
    pub n_dofs: usize,
}

/// Solves `∫∇w·∇v = ∫_Γ δ v` for all `v` with `∫_Γ w = 0` using elements of
/// the given order on `mesh`, and returns `|∇w_h|`.
pub fn neumann_dual_error<T: Real>(
    delta: &dyn BoundaryFunction<T>,
    mesh: Arc<Mesh<T>>,
    order: usize,
) -> Result<DualError<T>> {
    let space = FeSpace::new(mesh.clone(), order);
    let degree = default_degree(order).min(crate::fem::quadrature::MAX_TRIANGLE_DEGREE);
    let stiffness = assemble_stiffness(&space, |_| T::one(), degree)?;

    let rule = segment_rule::<T>(default_degree(order))?;
    let pieces = delta.pieces();
    let mut rhs = vec![T::zero(); space.n_dofs()];
    let mut constraint = vec![T::zero(); space.n_dofs()];
    let (mut mean, mut l1) = (T::zero(), T::zero());
    for bf in mesh.boundary_facets() {
        let dofs = space.element_dofs(bf.element);
        let [s0, s1] = bf.arc;
        let len = s1 - s0;
        for_each_overlap(&pieces, s0, s1, |piece, lo, hi| {
            let sub = hi - lo;
            for (&q, &w) in rule.points.iter().zip(&rule.weights) {
                let s = lo + sub * q;
                let t = (s - s0) / len;
                let lam = space.edge_lambda(bf.element, bf.vertices[0], bf.vertices[1], t);
                let phi = space.basis().eval(lam).values;
                let d = delta.eval(piece, s);
                let ww = w * sub * bf.length / len;
                mean += ww * d;
                l1 += ww * d.abs();
                for (i, &dof) in dofs.iter().enumerate() {
                    rhs[dof] += ww * d * phi[i];
                    constraint[dof] += ww * phi[i];
                }
            }
        });
    }
    let compatible = mean.abs() <= lit::<T>(1e-7) * l1;
    if !compatible {
        warn!(
            "dual problem data not compatible: mean {:e}, L1 norm {:e}",
            to_f64(mean),
            to_f64(l1)
        );
    }

    let system = SparseSystem::new(stiffness, rhs, Structure::Symmetric);
    let w =
        solve(&system, Some(&constraint)).map_err(|e| e.with_context("Neumann dual problem"))?;
    let pairing_sq = system
        .rhs
        .iter()
        .zip(&w)
        .fold(T::zero(), |s, (&b, &x)| s + b * x);

    let tri = triangle_rule::<T>(2 * order)?;
    let shapes = space.tabulate(&tri);
    let wh = FeFunction::new(&space, &w);
    let two = T::one() + T::one();
    let mut energy = T::zero();
    for e in 0..mesh.num_elements() {
        let geo: ElementGeometry<T> = space.geometry(e);
        for (q, sh) in shapes.iter().enumerate() {
            let g = wh.eval_with(e, &geo, sh).gradient;
            energy += tri.weights[q] * two * geo.area * g.dot(g);
        }
    }
    let e1 = energy.sqrt();
    let pairing = pairing_sq.max(T::zero()).sqrt();
    let scale = e1.max(pairing);
    if scale > T::zero() && (e1 - pairing).abs() > lit::<T>(0.01) * scale {
        return Err(Error::NormMismatch {
            energy: to_f64(e1),
            pairing: to_f64(pairing),
        });
    }
    Ok(DualError {
        e1,
        pairing,
        mean,
        l1,
        compatible,
        n_dofs: space.n_dofs(),
    })
}
