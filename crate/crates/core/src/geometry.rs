//! Planar points and the polygonal domains used by the meshes.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Real};

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Point2<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the planar cross product.
    #[inline]
    pub fn cross(self, other: Self) -> T {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    /// Rotation by +90 degrees.
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    #[inline]
    pub fn lerp(self, other: Self, t: T) -> Self {
        self + (other - self) * t
    }

    pub fn midpoint(self, other: Self) -> Self {
        (self + other) * lit::<T>(0.5)
    }
}

impl<T: Real> Add for Point2<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Real> Sub for Point2<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Real> Mul<T> for Point2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl<T: Real> Neg for Point2<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Euclidean distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance<T: Real>(p: Point2<T>, a: Point2<T>, b: Point2<T>) -> T {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 <= T::zero() {
        return (p - a).norm();
    }
    let t = ((p - a).dot(ab) / len2).max(T::zero()).min(T::one());
    (p - (a + ab * t)).norm()
}

/// The two computational domains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    /// `[0,1]^2`, arc length anchored at `(0,0)`.
    UnitSquare,
    /// `[-1,1]^2 \ (0,1)x(-1,0)`, arc length anchored at `(-1,-1)`.
    LShape,
}

impl DomainKind {
    pub fn boundary<T: Real>(self) -> PolygonBoundary<T> {
        let corners: &[(f64, f64)] = match self {
            DomainKind::UnitSquare => &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
            DomainKind::LShape => &[
                (-1.0, -1.0),
                (0.0, -1.0),
                (0.0, 0.0),
                (1.0, 0.0),
                (1.0, 1.0),
                (-1.0, 1.0),
            ],
        };
        PolygonBoundary::new(
            corners
                .iter()
                .map(|&(x, y)| Point2::new(lit(x), lit(y)))
                .collect(),
        )
    }

    pub fn area(self) -> f64 {
        match self {
            DomainKind::UnitSquare => 1.0,
            DomainKind::LShape => 3.0,
        }
    }
}

/// Closed polygon traversed counterclockwise, with an arc-length chart
/// starting at the first corner.
#[derive(Clone, Debug)]
pub struct PolygonBoundary<T> {
    corners: Vec<Point2<T>>,
    offsets: Vec<T>,
    perimeter: T,
}

impl<T: Real> PolygonBoundary<T> {
    pub fn new(corners: Vec<Point2<T>>) -> Self {
        let mut offsets = Vec::with_capacity(corners.len());
        let mut s = T::zero();
        for i in 0..corners.len() {
            offsets.push(s);
            let (a, b) = (corners[i], corners[(i + 1) % corners.len()]);
            s += (b - a).norm();
        }
        Self {
            corners,
            offsets,
            perimeter: s,
        }
    }

    pub fn perimeter(&self) -> T {
        self.perimeter
    }

    pub fn corners(&self) -> &[Point2<T>] {
        &self.corners
    }

    pub fn num_segments(&self) -> usize {
        self.corners.len()
    }

    pub fn segment(&self, i: usize) -> (Point2<T>, Point2<T>) {
        (self.corners[i], self.corners[(i + 1) % self.corners.len()])
    }

    /// Arc-length position of corner `i`.
    pub fn offset(&self, i: usize) -> T {
        self.offsets[i]
    }

    pub fn distance(&self, p: Point2<T>) -> T {
        (0..self.num_segments())
            .map(|i| {
                let (a, b) = self.segment(i);
                point_segment_distance(p, a, b)
            })
            .fold(T::infinity(), T::min)
    }

    /// Finds the boundary segment containing both `a` and `b` (in that
    /// counterclockwise order) and returns its index and the arc position
    /// of `a`.
    pub fn locate_edge(&self, a: Point2<T>, b: Point2<T>) -> Option<(usize, T)> {
        let scale = self.perimeter;
        let tol = T::epsilon() * lit::<T>(64.0) * scale;
        for i in 0..self.num_segments() {
            let (c0, c1) = self.segment(i);
            let dir = c1 - c0;
            let len = dir.norm();
            let on = |p: Point2<T>| -> Option<T> {
                let rel = p - c0;
                if (dir.cross(rel) / len).abs() > tol {
                    return None;
                }
                let t = rel.dot(dir) / len;
                if t < -tol || t > len + tol {
                    None
                } else {
                    Some(t)
                }
            };
            if let (Some(ta), Some(tb)) = (on(a), on(b)) {
                if tb > ta {
                    return Some((i, self.offsets[i] + ta));
                }
            }
        }
        None
    }

    /// Point at arc-length position `s` (taken modulo the perimeter).
    pub fn point_at(&self, s: T) -> Point2<T> {
        let mut s = s % self.perimeter;
        if s < T::zero() {
            s += self.perimeter;
        }
        let n = self.num_segments();
        let mut i = n - 1;
        for j in 1..n {
            if s < self.offsets[j] {
                i = j - 1;
                break;
            }
        }
        let (a, b) = self.segment(i);
        let len = (b - a).norm();
        a.lerp(b, (s - self.offsets[i]) / len)
    }

    /// Outward unit normal of segment `i`.
    pub fn outward_normal(&self, i: usize) -> Point2<T> {
        let (a, b) = self.segment(i);
        let d = b - a;
        let n = d.norm();
        Point2::new(d.y / n, -d.x / n)
    }

    /// Interior angle at corner `i`.
    pub fn interior_angle(&self, i: usize) -> T {
        let n = self.num_segments();
        let prev = self.corners[(i + n - 1) % n];
        let here = self.corners[i];
        let next = self.corners[(i + 1) % n];
        let u = prev - here;
        let v = next - here;
        // angle measured from v to u counterclockwise
        let mut ang = v.cross(u).atan2(v.dot(u));
        if ang < T::zero() {
            ang += lit::<T>(2.0) * T::PI();
        }
        ang
    }
}
