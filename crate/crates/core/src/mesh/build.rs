use crate::error::{Error, Result};
use crate::geometry::{DomainKind, Point2};
use crate::scalar::{count, Real};

use super::Mesh;

impl<T: Real> Mesh<T> {
    /// Structured mesh of `[0,1]^2` with `n x n` cells, each split along the
    /// diagonal from its lower-left to its upper-right corner.
    pub fn unit_square(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "subdivision count must be >= 1".into(),
            ));
        }
        structured(DomainKind::UnitSquare, n, T::zero(), |_, _| true, n + 1)
    }

    /// Structured mesh of the L-shape `[-1,1]^2 \ (0,1)x(-1,0)`: each of the
    /// three unit squares carries `n x n` cells split like
    /// [`Mesh::unit_square`].
    pub fn lshape(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "subdivision count must be >= 1".into(),
            ));
        }
        // cell (i, j) of the 2n x 2n grid over [-1,1]^2 is kept unless it is
        // in the removed lower-right quadrant
        structured(
            DomainKind::LShape,
            2 * n,
            -T::one(),
            move |i, j| !(i >= n && j < n),
            2 * n + 1,
        )
    }
}

fn structured<T: Real>(
    domain: DomainKind,
    cells: usize,
    origin: T,
    keep: impl Fn(usize, usize) -> bool,
    side: usize,
) -> Result<Mesh<T>> {
    let width = match domain {
        DomainKind::UnitSquare => T::one(),
        DomainKind::LShape => T::one() + T::one(),
    };
    let step = width / count::<T>(cells);
    let mut ids = vec![usize::MAX; side * side];
    let mut vertices = Vec::new();
    let touched = |i: usize, j: usize| -> bool {
        // a grid node exists if any of the four surrounding cells is kept
        let cand = [
            (i.wrapping_sub(1), j.wrapping_sub(1)),
            (i, j.wrapping_sub(1)),
            (i.wrapping_sub(1), j),
            (i, j),
        ];
        cand.iter()
            .any(|&(ci, cj)| ci < cells && cj < cells && keep(ci, cj))
    };
    for j in 0..side {
        for i in 0..side {
            if touched(i, j) {
                ids[j * side + i] = vertices.len();
                let x = origin + step * count::<T>(i);
                let y = origin + step * count::<T>(j);
                vertices.push(Point2::new(x, y));
            }
        }
    }
    let mut triangles = Vec::new();
    for j in 0..cells {
        for i in 0..cells {
            if !keep(i, j) {
                continue;
            }
            let v00 = ids[j * side + i];
            let v10 = ids[j * side + i + 1];
            let v01 = ids[(j + 1) * side + i];
            let v11 = ids[(j + 1) * side + i + 1];
            // newest vertex at the right angle so the diagonal is the
            // refinement edge of both halves
            triangles.push([v10, v11, v00]);
            triangles.push([v01, v00, v11]);
        }
    }
    let n = triangles.len();
    Mesh::from_parts(domain, vertices, triangles, vec![None; n], vec![0; n])
}
