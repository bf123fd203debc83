//! Small 2-D vector/point type and polyline helpers.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// A point or vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3-D cross product.
    #[inline]
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    #[inline]
    pub fn normalized(self) -> Vec2 {
        self / self.norm()
    }

    /// Rotation by +90 degrees; maps a tangent to the positively oriented normal.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    #[inline]
    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Distance from `q` to the segment `ab`.
pub fn segment_distance(q: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return q.distance(a);
    }
    let t = ((q - a).dot(ab) / len2).clamp(0.0, 1.0);
    q.distance(a + ab * t)
}

/// Distance from `q` to a closed polyline.
pub fn polyline_distance(poly: &[Vec2], q: Vec2) -> f64 {
    let n = poly.len();
    if n == 0 {
        return f64::INFINITY;
    }
    let mut best = f64::INFINITY;
    for i in 0..n {
        let d = segment_distance(q, poly[i], poly[(i + 1) % n]);
        if d < best {
            best = d;
        }
    }
    best
}

/// Axis-aligned bounding box of a point set; `None` for an empty set.
pub fn bounding_box(pts: &[Vec2]) -> Option<(Vec2, Vec2)> {
    let first = *pts.first()?;
    let mut lo = first;
    let mut hi = first;
    for p in pts {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    Some((lo, hi))
}

/// Least-squares point minimizing the squared distances to lines through
/// `base[i]` with unit directions `dir[i]`. Returns `None` when the normal
/// equations are singular (all directions parallel).
pub fn least_squares_line_point(base: &[Vec2], dir: &[Vec2]) -> Option<Vec2> {
    // distance to the line = |<x - base, dir_perp>|, so project on dir_perp.
    let mut a11 = 0.0;
    let mut a12 = 0.0;
    let mut a22 = 0.0;
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for (p, d) in base.iter().zip(dir.iter()) {
        let e = d.perp();
        a11 += e.x * e.x;
        a12 += e.x * e.y;
        a22 += e.y * e.y;
        let pe = p.dot(e);
        b1 += e.x * pe;
        b2 += e.y * pe;
    }
    let det = a11 * a22 - a12 * a12;
    let scale = (a11 + a22).max(f64::MIN_POSITIVE);
    if det.abs() < 1e-14 * scale * scale {
        return None;
    }
    Some(Vec2::new(
        (b1 * a22 - b2 * a12) / det,
        (a11 * b2 - a12 * b1) / det,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perp_is_positive_rotation() {
        let t = Vec2::new(1.0, 0.0);
        let n = t.perp();
        assert_eq!(n, Vec2::new(0.0, 1.0));
        // det [T N] = +1
        assert!((t.cross(n) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn segment_distance_basics() {
        let a = Vec2::new(0.0, 0.0);
        let b = Vec2::new(2.0, 0.0);
        assert!((segment_distance(Vec2::new(1.0, 1.0), a, b) - 1.0).abs() < 1e-15);
        assert!((segment_distance(Vec2::new(-1.0, 0.0), a, b) - 1.0).abs() < 1e-15);
        assert!((segment_distance(Vec2::new(3.0, 0.0), a, b) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lsq_point_of_three_concurrent_lines() {
        // lines through (1,0), (0,1), (-1,-1) all passing through the origin
        let base = [
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(-1.0, -1.0),
        ];
        let dir = [
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(1.0, 1.0).normalized(),
        ];
        let p = least_squares_line_point(&base, &dir).unwrap();
        assert!(p.norm() < 1e-12);
    }

    #[test]
    fn lsq_point_parallel_lines_is_singular() {
        let base = [
            Vec2::new(0.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(0.0, 2.0),
        ];
        let dir = [Vec2::new(1.0, 0.0); 3];
        assert!(least_squares_line_point(&base, &dir).is_none());
    }
}
