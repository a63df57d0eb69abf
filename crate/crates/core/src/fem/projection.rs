use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::scalar::{lit, Real};

use super::dense::dense_solve;
use super::quadrature::segment_rule;

/// L² projection of `g` onto continuous piecewise linears on a chain of
/// boundary facets given by its `nodes` (`nodes.len() - 1` facets).
/// Returns the nodal values.
pub fn patch_l2_projection_linear<T: Real>(
    nodes: &[Point2<T>],
    g: impl Fn(Point2<T>) -> T,
    degree: usize,
) -> Result<Vec<T>> {
    if nodes.len() < 2 {
        return Err(Error::InvalidArgument(
            "a patch needs at least one facet".into(),
        ));
    }
    let n = nodes.len();
    let rule = segment_rule::<T>(degree.max(2))?;
    let mut mass = vec![T::zero(); n * n];
    let mut rhs = vec![T::zero(); n];
    let third = T::one() / lit::<T>(3.0);
    let sixth = T::one() / lit::<T>(6.0);
    for f in 0..n - 1 {
        let (a, b) = (nodes[f], nodes[f + 1]);
        let len = (b - a).norm();
        mass[f * n + f] += len * third;
        mass[(f + 1) * n + f + 1] += len * third;
        mass[f * n + f + 1] += len * sixth;
        mass[(f + 1) * n + f] += len * sixth;
        for (&t, &w) in rule.points.iter().zip(&rule.weights) {
            let gv = g(a.lerp(b, t)) * w * len;
            rhs[f] += gv * (T::one() - t);
            rhs[f + 1] += gv * t;
        }
    }
    dense_solve(mass, rhs)
        .ok_or_else(|| Error::InvalidArgument("degenerate patch in L2 projection".into()))
}
