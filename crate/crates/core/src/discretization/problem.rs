use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{DomainKind, Point2};
use crate::scalar::{lit, to_f64, Real};

pub type ScalarField<T> = Arc<dyn Fn(Point2<T>) -> T + Send + Sync>;
pub type VectorField<T> = Arc<dyn Fn(Point2<T>) -> Point2<T> + Send + Sync>;

/// Lifts an `f64` scalar field to the working precision.
pub fn scalar_field<T: Real>(
    f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
) -> ScalarField<T> {
    Arc::new(move |p: Point2<T>| lit::<T>(f(to_f64(p.x), to_f64(p.y))))
}

/// Lifts an `f64` vector field to the working precision.
pub fn vector_field<T: Real>(
    f: impl Fn(f64, f64) -> [f64; 2] + Send + Sync + 'static,
) -> VectorField<T> {
    Arc::new(move |p: Point2<T>| {
        let [x, y] = f(to_f64(p.x), to_f64(p.y));
        Point2::new(lit::<T>(x), lit::<T>(y))
    })
}

#[derive(Clone)]
pub struct ExactSolution<T> {
    pub u: ScalarField<T>,
    pub grad: VectorField<T>,
}

/// `-∇·(a∇u) = f` in Ω, `u = g` on Γ.
#[derive(Clone)]
pub struct ProblemSpec<T> {
    pub name: String,
    pub domain: DomainKind,
    pub a: ScalarField<T>,
    pub grad_a: VectorField<T>,
    pub f: ScalarField<T>,
    pub g: ScalarField<T>,
    /// Gradient of an extension of `g`, used for tangential derivatives.
    pub grad_g: Option<VectorField<T>>,
    pub exact: Option<ExactSolution<T>>,
}

impl<T> fmt::Debug for ProblemSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl<T: Real> ProblemSpec<T> {
    /// Exact flux `a ∂_ν u` at `x` for outward normal `n`.
    pub fn exact_flux(&self, x: Point2<T>, n: Point2<T>) -> Option<T> {
        self.exact
            .as_ref()
            .map(|e| (self.a)(x) * (e.grad)(x).dot(n))
    }

    /// Tangential derivative of `g` along `t`, if an extension gradient is
    /// available.
    pub fn g_tangential(&self, x: Point2<T>, t: Point2<T>) -> Option<T> {
        self.grad_g.as_ref().map(|gg| gg(x).dot(t))
    }
}

impl ProblemSpec<f64> {
    /// Checks positivity of `a` on a grid, the supplied gradients against
    /// central differences, and the PDE residual of the exact solution by a
    /// conservative finite-difference stencil at random interior points.
    pub fn verify(&self, n_points: usize, seed: u64) -> Result<(), String> {
        let chart = self.domain.boundary::<f64>();
        let (lo, hi) = match self.domain {
            DomainKind::UnitSquare => (0.0, 1.0),
            DomainKind::LShape => (-1.0, 1.0),
        };
        let inside = |p: Point2<f64>| match self.domain {
            DomainKind::UnitSquare => p.x > 0.0 && p.x < 1.0 && p.y > 0.0 && p.y < 1.0,
            DomainKind::LShape => {
                p.x > -1.0 && p.x < 1.0 && p.y > -1.0 && p.y < 1.0 && !(p.x > 0.0 && p.y < 0.0)
            }
        };
        for i in 0..=40 {
            for j in 0..=40 {
                let p = Point2::new(
                    lo + (hi - lo) * i as f64 / 40.0,
                    lo + (hi - lo) * j as f64 / 40.0,
                );
                let a = (self.a)(p);
                if !(a > 0.0 && a.is_finite()) {
                    return Err(format!("coefficient not positive at {p:?}: {a}"));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = 1e-5;
        let mut checked = 0;
        while checked < n_points {
            let p = Point2::new(rng.gen_range(lo..hi), rng.gen_range(lo..hi));
            if !inside(p) || chart.distance(p) < 1e-2 {
                continue;
            }
            checked += 1;
            let (ex, ey) = (Point2::new(h, 0.0), Point2::new(0.0, h));
            let ga = (self.grad_a)(p);
            let fd_ga = Point2::new(
                ((self.a)(p + ex) - (self.a)(p - ex)) / (2.0 * h),
                ((self.a)(p + ey) - (self.a)(p - ey)) / (2.0 * h),
            );
            if (ga - fd_ga).norm() > 1e-4 * ga.norm().max(1.0) {
                return Err(format!("grad a mismatch at {p:?}: {ga:?} vs {fd_ga:?}"));
            }
            let Some(exact) = &self.exact else { continue };
            let u = &exact.u;
            let gu = (exact.grad)(p);
            let fd_gu = Point2::new(
                (u(p + ex) - u(p - ex)) / (2.0 * h),
                (u(p + ey) - u(p - ey)) / (2.0 * h),
            );
            if (gu - fd_gu).norm() > 1e-4 * gu.norm().max(1.0) {
                return Err(format!("grad u mismatch at {p:?}: {gu:?} vs {fd_gu:?}"));
            }
            let half = 0.5;
            let mut div = 0.0;
            for e in [ex, ey] {
                let ap = (self.a)(p + e * half);
                let am = (self.a)(p - e * half);
                div += (ap * (u(p + e) - u(p)) - am * (u(p) - u(p - e))) / (h * h);
            }
            let f = (self.f)(p);
            if (-div - f).abs() > 1e-4 * f.abs().max(1.0) {
                return Err(format!("PDE residual at {p:?}: -div = {}, f = {f}", -div));
            }
            if let Some(gg) = &self.grad_g {
                if (gg(p) - gu).norm() > 1e-8 * gu.norm().max(1.0) {
                    return Err(format!("grad g differs from grad u at {p:?}"));
                }
            }
        }
        if let Some(exact) = &self.exact {
            for i in 0..chart.num_segments() {
                let (a, b) = chart.segment(i);
                for j in 0..=8 {
                    let x = a.lerp(b, j as f64 / 8.0);
                    if ((exact.u)(x) - (self.g)(x)).abs() > 1e-12 * (self.g)(x).abs().max(1.0) {
                        return Err(format!("g differs from u at {x:?}"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Linear solution `u = c0 + c1 x + c2 y` with `a ≡ 1`, `f = 0`.
pub fn linear_problem<T: Real>(domain: DomainKind, c: [f64; 3]) -> ProblemSpec<T> {
    let u = move |x: f64, y: f64| c[0] + c[1] * x + c[2] * y;
    let grad = move |_: f64, _: f64| [c[1], c[2]];
    ProblemSpec {
        name: "linear".into(),
        domain,
        a: scalar_field(|_, _| 1.0),
        grad_a: vector_field(|_, _| [0.0, 0.0]),
        f: scalar_field(|_, _| 0.0),
        g: scalar_field(u),
        grad_g: Some(vector_field(grad)),
        exact: Some(ExactSolution {
            u: scalar_field(u),
            grad: vector_field(grad),
        }),
    }
}
