use crate::discretization::{DiscreteFlux, ProblemSpec};
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::scalar::Real;

/// A scalar function of arc length on Γ, smooth on each of its pieces.
pub trait BoundaryFunction<T: Real>: Sync {
    /// Arc-length intervals tiling `[0, |Γ|)` in increasing order.
    fn pieces(&self) -> Vec<[T; 2]>;

    /// Value at arc length `s` inside piece `piece` (one-sided at its ends).
    fn eval(&self, piece: usize, s: T) -> T;

    fn perimeter(&self) -> T {
        self.pieces().last().map(|p| p[1]).unwrap_or_else(T::zero)
    }
}

/// A closure of arc length with breakpoints at given positions.
pub struct ArcFunction<T, F> {
    breaks: Vec<T>,
    f: F,
}

impl<T: Real, F: Fn(T) -> T + Sync> ArcFunction<T, F> {
    /// `breaks` must start at 0 and end at the perimeter.
    pub fn new(breaks: Vec<T>, f: F) -> Self {
        assert!(breaks.len() >= 2);
        Self { breaks, f }
    }

    /// Breakpoints at the corners of a domain chart.
    pub fn on_chart(chart: &crate::geometry::PolygonBoundary<T>, f: F) -> Self {
        let mut breaks: Vec<T> = (0..chart.num_segments()).map(|i| chart.offset(i)).collect();
        breaks.push(chart.perimeter());
        Self::new(breaks, f)
    }
}

impl<T: Real, F: Fn(T) -> T + Sync> BoundaryFunction<T> for ArcFunction<T, F> {
    fn pieces(&self) -> Vec<[T; 2]> {
        self.breaks.windows(2).map(|w| [w[0], w[1]]).collect()
    }

    fn eval(&self, _piece: usize, s: T) -> T {
        (self.f)(s)
    }
}

/// `δ = λ - λ_h` on the boundary facets of the solution mesh.
pub struct FluxError<'a, T> {
    mesh: &'a Mesh<T>,
    flux: DiscreteFlux<'a, T>,
    problem: &'a ProblemSpec<T>,
}

impl<'a, T: Real> FluxError<'a, T> {
    pub fn new(
        mesh: &'a Mesh<T>,
        flux: DiscreteFlux<'a, T>,
        problem: &'a ProblemSpec<T>,
    ) -> Result<Self> {
        if problem.exact.is_none() {
            return Err(Error::MissingExactSolution(
                "flux error needs the exact flux",
            ));
        }
        Ok(Self {
            mesh,
            flux,
            problem,
        })
    }
}

impl<T: Real> BoundaryFunction<T> for FluxError<'_, T> {
    fn pieces(&self) -> Vec<[T; 2]> {
        self.mesh
            .boundary_facets()
            .iter()
            .map(|bf| bf.arc)
            .collect()
    }

    fn eval(&self, piece: usize, s: T) -> T {
        let bf = &self.mesh.boundary_facets()[piece];
        let t = (s - bf.arc[0]) / (bf.arc[1] - bf.arc[0]);
        let x = self
            .mesh
            .vertex(bf.vertices[0])
            .lerp(self.mesh.vertex(bf.vertices[1]), t);
        let exact = self
            .problem
            .exact_flux(x, bf.normal)
            .unwrap_or_else(T::zero);
        exact - self.flux.eval(piece, t)
    }
}

/// Calls `visit(piece, lo, hi)` for every overlap of `[a, b)` with a piece.
pub(crate) fn for_each_overlap<T: Real>(
    pieces: &[[T; 2]],
    a: T,
    b: T,
    mut visit: impl FnMut(usize, T, T),
) {
    let start = pieces.partition_point(|p| p[1] <= a);
    for (i, p) in pieces.iter().enumerate().skip(start) {
        if p[0] >= b {
            break;
        }
        let lo = p[0].max(a);
        let hi = p[1].min(b);
        if hi > lo {
            visit(i, lo, hi);
        }
    }
}
