use std::f64::consts::PI;

use crate::discretization::{scalar_field, vector_field, ExactSolution, ProblemSpec};
use crate::error::{Error, Result};
use crate::geometry::DomainKind;
use crate::scalar::Real;

/// Registered problem names with a one-line description.
pub const PROBLEMS: [(&str, &str); 3] = [
    (
        "franke",
        "Poisson on the unit square, Franke function solution",
    ),
    (
        "varcoef-peak",
        "a = 1 + sin^2(pi r) on the unit square, Gaussian peak at (0.2, 0.2)",
    ),
    (
        "lshape-singular",
        "Poisson on the L-shape, r^(2/3) sin(2t/3) plus a Gaussian peak",
    ),
];

pub fn problem<T: Real>(name: &str) -> Result<ProblemSpec<T>> {
    match name {
        "franke" => Ok(franke()),
        "varcoef-peak" => Ok(varcoef_peak()),
        "lshape-singular" => Ok(lshape_singular()),
        other => Err(Error::UnknownProblem(other.to_string())),
    }
}

/// `u`, `∇u` and `Δu` at one point.
#[derive(Clone, Copy, Debug)]
struct Jet {
    u: f64,
    grad: [f64; 2],
    lap: f64,
}

impl std::ops::Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            u: self.u + o.u,
            grad: [self.grad[0] + o.grad[0], self.grad[1] + o.grad[1]],
            lap: self.lap + o.lap,
        }
    }
}

const ZERO: Jet = Jet {
    u: 0.0,
    grad: [0.0, 0.0],
    lap: 0.0,
};

/// `c exp(q)` for an exponent `q` with known first and second derivatives.
fn exp_term(c: f64, q: f64, qx: f64, qy: f64, qxx: f64, qyy: f64) -> Jet {
    let e = c * q.exp();
    Jet {
        u: e,
        grad: [e * qx, e * qy],
        lap: e * (qxx + qx * qx + qyy + qy * qy),
    }
}

fn franke_jet(x: f64, y: f64) -> Jet {
    // c exp(-kx (9x - x0)^2 - ky (9y - y0)^2)
    let gauss = |c: f64, kx: f64, x0: f64, ky: f64, y0: f64| {
        let (dx, dy) = (9.0 * x - x0, 9.0 * y - y0);
        exp_term(
            c,
            -kx * dx * dx - ky * dy * dy,
            -18.0 * kx * dx,
            -18.0 * ky * dy,
            -162.0 * kx,
            -162.0 * ky,
        )
    };
    let dx = 9.0 * x + 1.0;
    let second = exp_term(
        0.75,
        -dx * dx / 49.0 - (9.0 * y + 1.0) / 10.0,
        -18.0 * dx / 49.0,
        -0.9,
        -162.0 / 49.0,
        0.0,
    );
    gauss(0.75, 0.25, 2.0, 0.25, 2.0)
        + second
        + gauss(0.5, 0.25, 7.0, 0.25, 3.0)
        + gauss(-0.2, 1.0, 4.0, 1.0, 7.0)
}

/// `exp(-200 ((x - 0.2)^2 + (y - 0.2)^2))`.
fn peak_jet(x: f64, y: f64) -> Jet {
    let (dx, dy) = (x - 0.2, y - 0.2);
    exp_term(
        1.0,
        -200.0 * (dx * dx + dy * dy),
        -400.0 * dx,
        -400.0 * dy,
        -400.0,
        -400.0,
    )
}

/// Angle in `[0, 2π)` from the positive x-axis.
fn angle(x: f64, y: f64) -> f64 {
    let t = y.atan2(x);
    if t < 0.0 {
        t + 2.0 * PI
    } else {
        t
    }
}

/// `r^{2/3} sin(2θ/3)`; harmonic, gradient zero at the origin by convention.
fn corner_jet(x: f64, y: f64) -> Jet {
    let al = 2.0 / 3.0;
    let r = x.hypot(y);
    if r == 0.0 {
        return ZERO;
    }
    let t = angle(x, y);
    let c = al * r.powf(al - 1.0);
    Jet {
        u: r.powf(al) * (al * t).sin(),
        grad: [c * ((al - 1.0) * t).sin(), c * ((al - 1.0) * t).cos()],
        lap: 0.0,
    }
}

fn from_jet<T: Real>(
    name: &str,
    domain: DomainKind,
    jet: fn(f64, f64) -> Jet,
    a: fn(f64, f64) -> f64,
    grad_a: fn(f64, f64) -> [f64; 2],
) -> ProblemSpec<T> {
    let u = move |x, y| jet(x, y).u;
    let grad = move |x, y| jet(x, y).grad;
    ProblemSpec {
        name: name.into(),
        domain,
        a: scalar_field(a),
        grad_a: vector_field(grad_a),
        f: scalar_field(move |x, y| {
            let j = jet(x, y);
            let ga = grad_a(x, y);
            -(a(x, y) * j.lap + ga[0] * j.grad[0] + ga[1] * j.grad[1])
        }),
        g: scalar_field(u),
        grad_g: Some(vector_field(grad)),
        exact: Some(ExactSolution {
            u: scalar_field(u),
            grad: vector_field(grad),
        }),
    }
}

fn unit(_: f64, _: f64) -> f64 {
    1.0
}

fn flat(_: f64, _: f64) -> [f64; 2] {
    [0.0, 0.0]
}

fn franke<T: Real>() -> ProblemSpec<T> {
    from_jet("franke", DomainKind::UnitSquare, franke_jet, unit, flat)
}

fn varcoef_peak<T: Real>() -> ProblemSpec<T> {
    fn a(x: f64, y: f64) -> f64 {
        1.0 + (PI * x.hypot(y)).sin().powi(2)
    }
    fn grad_a(x: f64, y: f64) -> [f64; 2] {
        let r = x.hypot(y);
        if r == 0.0 {
            return [0.0, 0.0];
        }
        let s = PI * (2.0 * PI * r).sin() / r;
        [s * x, s * y]
    }
    from_jet("varcoef-peak", DomainKind::UnitSquare, peak_jet, a, grad_a)
}

fn lshape_singular<T: Real>() -> ProblemSpec<T> {
    fn jet(x: f64, y: f64) -> Jet {
        corner_jet(x, y) + peak_jet(x, y)
    }
    from_jet("lshape-singular", DomainKind::LShape, jet, unit, flat)
}
