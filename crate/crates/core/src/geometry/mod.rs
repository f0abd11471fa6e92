//! Sampled curves, charts, projective directions and graph fits.

mod chart;
mod curve;
mod graph;

pub use chart::{center_chart, Chart, DEFAULT_GRID, INVERSE_TOL};
pub use curve::{arc_length_parameterize, curve_distance, Curve, DEFAULT_NODES};
pub use graph::{fit_horizontal_graph, fit_vertical_graph, valuable_curvature, GraphFit, CURV_FLOOR, GRAD_TOL};

#[allow(unused_imports)]
use crate::math::FloatExt as _;
use core::f64::consts::PI;
use core::ops::{Add, Mul, Sub};

/// Point in phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    #[inline]
    pub fn new(x: f64, y: f64) -> Point2 {
        Point2 { x, y }
    }

    #[inline]
    pub fn dist(&self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

/// Projective tangent direction, an angle normalized to `[0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionP {
    angle: f64,
}

impl DirectionP {
    pub fn from_angle(angle: f64) -> DirectionP {
        let mut a = angle % PI;
        if a < 0.0 {
            a += PI;
        }
        if a >= PI {
            a = 0.0;
        }
        DirectionP { angle: a }
    }

    pub fn from_vector(vx: f64, vy: f64) -> DirectionP {
        DirectionP::from_angle(vy.atan2(vx))
    }

    pub const HORIZONTAL: DirectionP = DirectionP { angle: 0.0 };

    pub fn vertical() -> DirectionP {
        DirectionP { angle: PI / 2.0 }
    }

    #[inline]
    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// Representative unit vector.
    pub fn unit(&self) -> (f64, f64) {
        (self.angle.cos(), self.angle.sin())
    }

    /// Projective angle distance, symmetric, in `[0, pi/2]`.
    pub fn angle_to(&self, other: DirectionP) -> f64 {
        let d = (self.angle - other.angle).abs();
        d.min(PI - d)
    }
}

/// Closed real interval with positive length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Interval {
        debug_assert!(lo < hi, "interval must have positive length");
        Interval { lo, hi }
    }

    /// Interval spanned by two endpoints in either order.
    pub fn hull(a: f64, b: f64) -> Interval {
        Interval::new(a.min(b), a.max(b))
    }

    #[inline]
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    #[inline]
    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    /// Signed distance of `t` into the interval (positive inside).
    pub fn margin(&self, t: f64) -> f64 {
        (t - self.lo).min(self.hi - t)
    }

    pub fn expand(&self, pad: f64) -> Interval {
        Interval::new(self.lo - pad, self.hi + pad)
    }

    pub fn intersect(&self, other: Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo < hi {
            Some(Interval::new(lo, hi))
        } else {
            None
        }
    }
}

/// Axis-aligned rectangle `I x J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub h: Interval,
    pub v: Interval,
}

impl Rect {
    pub fn new(h: Interval, v: Interval) -> Rect {
        Rect { h, v }
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.h.contains(p.x) && self.v.contains(p.y)
    }

    /// Smallest distance of `p` to the boundary, positive inside.
    pub fn margin(&self, p: Point2) -> f64 {
        self.h.margin(p.x).min(self.v.margin(p.y))
    }

    pub fn width(&self) -> f64 {
        self.h.len()
    }

    pub fn height(&self) -> f64 {
        self.v.len()
    }

    pub fn center(&self) -> Point2 {
        Point2::new(self.h.mid(), self.v.mid())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_normalization_and_distance() {
        let d1 = DirectionP::from_vector(1.0, 0.0);
        let d2 = DirectionP::from_vector(-1.0, 0.0);
        assert!(d1.angle_to(d2) < 1e-15);
        let d3 = DirectionP::from_vector(0.0, -1.0);
        assert!((d3.angle() - PI / 2.0).abs() < 1e-15);
        let a = DirectionP::from_angle(0.1);
        let b = DirectionP::from_angle(PI - 0.1);
        assert!((a.angle_to(b) - 0.2).abs() < 1e-12);
    }
}
