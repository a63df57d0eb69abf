//! Gauss rules on the unit segment and the reference triangle.
//!
//! Triangle rules are collapsed (Duffy) products of Gauss–Legendre rules,
//! so all weights are positive and all points interior.

use crate::error::{Error, Result};
use crate::scalar::{count, lit, Real};

pub const MAX_TRIANGLE_DEGREE: usize = 12;
pub const MAX_SEGMENT_DEGREE: usize = 20;

/// Rule on `[0, 1]`; weights sum to 1.
#[derive(Clone, Debug)]
pub struct SegmentRule<T> {
    pub points: Vec<T>,
    pub weights: Vec<T>,
}

/// Rule on the reference triangle `(0,0), (1,0), (0,1)`; weights sum to 1/2.
#[derive(Clone, Debug)]
pub struct TriangleRule<T> {
    pub points: Vec<[T; 2]>,
    pub weights: Vec<T>,
}

/// `n`-point Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    for i in 0..n.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = lit::<T>(guess);
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= T::epsilon() * lit::<T>(4.0) {
                let (_, d) = legendre(n, x);
                dp = d;
                break;
            }
        }
        let w = lit::<T>(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    if n == 0 {
        return (T::one(), T::zero());
    }
    for k in 2..=n {
        let kf = count::<T>(k);
        let p2 = ((lit::<T>(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = count::<T>(n);
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Gauss–Legendre rule on `[0,1]` exact for polynomials of `degree`.
pub fn segment_rule<T: Real>(degree: usize) -> Result<SegmentRule<T>> {
    if degree > MAX_SEGMENT_DEGREE {
        return Err(Error::UnsupportedQuadrature {
            shape: "segment",
            degree,
            max: MAX_SEGMENT_DEGREE,
        });
    }
    Ok(unit_gauss(degree / 2 + 1))
}

fn unit_gauss<T: Real>(n: usize) -> SegmentRule<T> {
    let (x, w) = gauss_legendre::<T>(n);
    let half = lit::<T>(0.5);
    SegmentRule {
        points: x.iter().map(|&t| (t + T::one()) * half).collect(),
        weights: w.iter().map(|&t| t * half).collect(),
    }
}

/// Collapsed Gauss rule on the reference triangle exact for `degree`.
pub fn triangle_rule<T: Real>(degree: usize) -> Result<TriangleRule<T>> {
    if degree > MAX_TRIANGLE_DEGREE {
        return Err(Error::UnsupportedQuadrature {
            shape: "triangle",
            degree,
            max: MAX_TRIANGLE_DEGREE,
        });
    }
    // x = a (1 - b), y = b, dx dy = (1 - b) da db
    let ra: SegmentRule<T> = unit_gauss(degree / 2 + 1);
    let rb: SegmentRule<T> = unit_gauss(degree.div_ceil(2) + 1);
    let mut points = Vec::with_capacity(ra.points.len() * rb.points.len());
    let mut weights = Vec::with_capacity(points.capacity());
    for (&b, &wb) in rb.points.iter().zip(&rb.weights) {
        for (&a, &wa) in ra.points.iter().zip(&ra.weights) {
            points.push([a * (T::one() - b), b]);
            weights.push(wa * wb * (T::one() - b));
        }
    }
    Ok(TriangleRule { points, weights })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact value of the monomial integral over the reference triangle:
    /// `a! b! / (a + b + 2)!`.
    fn monomial_exact(a: u32, b: u32) -> f64 {
        let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
        fact(a) * fact(b) / fact(a + b + 2)
    }

    #[test]
    fn triangle_degree_one_area() {
        let r = triangle_rule::<f64>(1).unwrap();
        let s: f64 = r.weights.iter().sum();
        assert!((s - 0.5).abs() < 1e-15);
    }

    #[test]
    fn segment_cubic() {
        let r = segment_rule::<f64>(3).unwrap();
        assert_eq!(r.points.len(), 2);
        let v: f64 = r
            .points
            .iter()
            .zip(&r.weights)
            .map(|(x, w)| w * x.powi(3))
            .sum();
        assert!((v - 0.25).abs() < 1e-15);
    }

    #[test]
    fn triangle_degree_six_monomial() {
        let r = triangle_rule::<f64>(6).unwrap();
        let v: f64 = r
            .points
            .iter()
            .zip(&r.weights)
            .map(|(p, w)| w * p[0].powi(2) * p[1].powi(4))
            .sum();
        // 2! 4! / 8! = 48 / 40320
        assert!((v - 48.0 / 40320.0).abs() < 1e-16);
    }

    #[test]
    fn triangle_exact_all_degrees() {
        for d in 0..=MAX_TRIANGLE_DEGREE {
            let r = triangle_rule::<f64>(d).unwrap();
            assert!(r.weights.iter().all(|&w| w > 0.0));
            for p in &r.points {
                assert!(p[0] > 0.0 && p[1] > 0.0 && p[0] + p[1] < 1.0);
            }
            for a in 0..=d as u32 {
                for b in 0..=(d as u32 - a) {
                    let v: f64 = r
                        .points
                        .iter()
                        .zip(&r.weights)
                        .map(|(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32))
                        .sum();
                    let exact = monomial_exact(a, b);
                    assert!(
                        (v - exact).abs() <= 1e-14 * exact.max(1e-3),
                        "deg {d} x^{a} y^{b}"
                    );
                }
            }
        }
    }

    #[test]
    fn segment_exact_all_degrees() {
        for d in 0..=MAX_SEGMENT_DEGREE {
            let r = segment_rule::<f64>(d).unwrap();
            assert!(r.weights.iter().all(|&w| w > 0.0));
            for p in 0..=d as i32 {
                let v: f64 = r
                    .points
                    .iter()
                    .zip(&r.weights)
                    .map(|(x, w)| w * x.powi(p))
                    .sum();
                assert!((v - 1.0 / (p as f64 + 1.0)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn unsupported_degrees() {
        assert!(triangle_rule::<f64>(13).is_err());
        assert!(segment_rule::<f64>(21).is_err());
    }

    #[test]
    fn single_precision_rule() {
        let r = triangle_rule::<f32>(4).unwrap();
        let s: f32 = r.weights.iter().sum();
        assert!((s - 0.5).abs() < 1e-6);
    }
}
