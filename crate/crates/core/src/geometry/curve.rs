//! Polyline curves with arc-length tables and sampled tangents.

use alloc::vec::Vec;

use super::{DirectionP, Point2};
use crate::error::{Error, Result};
#[allow(unused_imports)]
use crate::math::FloatExt as _;

/// Node count used when the pipeline synthesizes curves.
pub const DEFAULT_NODES: usize = 256;

/// Sampled curve: ordered nodes, chordal arc-length table and per-node
/// tangent directions from centered differences.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    samples: Vec<Point2>,
    cumulative_length: Vec<f64>,
    tangents: Vec<DirectionP>,
}

impl Curve {
    /// Builds a curve from its nodes. Consecutive nodes must be distinct.
    pub fn new(samples: Vec<Point2>) -> Result<Curve> {
        if samples.len() < 2 {
            return Err(Error::DegenerateCurve);
        }
        let mut cumulative_length = Vec::with_capacity(samples.len());
        cumulative_length.push(0.0);
        for k in 1..samples.len() {
            let step = samples[k].dist(samples[k - 1]);
            if step == 0.0 || !step.is_finite() {
                return Err(Error::DegenerateCurve);
            }
            cumulative_length.push(cumulative_length[k - 1] + step);
        }
        let tangents = tangents_of(&samples);
        Ok(Curve {
            samples,
            cumulative_length,
            tangents,
        })
    }

    /// Uniformly sampled parametric curve `t in [t0, t1] -> f(t)`.
    pub fn from_fn(t0: f64, t1: f64, n: usize, mut f: impl FnMut(f64) -> Point2) -> Result<Curve> {
        let n = n.max(2);
        let mut samples = Vec::with_capacity(n);
        for k in 0..n {
            let t = t0 + (t1 - t0) * (k as f64) / ((n - 1) as f64);
            samples.push(f(t));
        }
        Curve::new(samples)
    }

    /// Straight segment with `n` nodes.
    pub fn segment(a: Point2, b: Point2, n: usize) -> Result<Curve> {
        Curve::from_fn(0.0, 1.0, n, |t| a + (b - a) * t)
    }

    pub fn samples(&self) -> &[Point2] {
        &self.samples
    }

    pub fn cumulative_length(&self) -> &[f64] {
        &self.cumulative_length
    }

    pub fn tangents(&self) -> &[DirectionP] {
        &self.tangents
    }

    pub fn len_nodes(&self) -> usize {
        self.samples.len()
    }

    /// Total chordal length.
    pub fn total_length(&self) -> f64 {
        *self.cumulative_length.last().unwrap()
    }

    pub fn first(&self) -> Point2 {
        self.samples[0]
    }

    pub fn last(&self) -> Point2 {
        *self.samples.last().unwrap()
    }

    /// Point at arc length `s` (clamped to `[0, |curve|]`), by linear
    /// interpolation along the polyline.
    pub fn point_at(&self, s: f64) -> Point2 {
        let s = s.clamp(0.0, self.total_length());
        let k = match self
            .cumulative_length
            .binary_search_by(|c| c.partial_cmp(&s).unwrap())
        {
            Ok(k) => return self.samples[k],
            Err(k) => k.clamp(1, self.samples.len() - 1),
        };
        let s0 = self.cumulative_length[k - 1];
        let s1 = self.cumulative_length[k];
        let t = (s - s0) / (s1 - s0);
        self.samples[k - 1] + (self.samples[k] - self.samples[k - 1]) * t
    }

    /// Tangent direction at arc length `s` from the nearest node.
    pub fn tangent_at(&self, s: f64) -> DirectionP {
        let s = s.clamp(0.0, self.total_length());
        let k = match self
            .cumulative_length
            .binary_search_by(|c| c.partial_cmp(&s).unwrap())
        {
            Ok(k) => k,
            Err(k) => {
                let k = k.clamp(1, self.samples.len() - 1);
                if s - self.cumulative_length[k - 1] < self.cumulative_length[k] - s {
                    k - 1
                } else {
                    k
                }
            }
        };
        self.tangents[k]
    }

    /// Resamples to `n` nodes at uniform arc-length spacing.
    ///
    /// The nodes lie on this polyline and the arc-length table is inherited
    /// from it rather than re-chorded, so the total length is preserved and
    /// resampling is idempotent.
    pub fn resample(&self, n: usize) -> Result<Curve> {
        let n = n.max(2);
        let total = self.total_length();
        let mut samples = Vec::with_capacity(n);
        let mut cumulative_length = Vec::with_capacity(n);
        for k in 0..n {
            let s = total * (k as f64) / ((n - 1) as f64);
            samples.push(self.point_at(s));
            cumulative_length.push(s);
        }
        for k in 1..n {
            if samples[k] == samples[k - 1] {
                return Err(Error::DegenerateCurve);
            }
        }
        let tangents = tangents_of(&samples);
        Ok(Curve {
            samples,
            cumulative_length,
            tangents,
        })
    }

    /// Maps nodes through `f` and rebuilds lengths and tangents.
    pub fn map_nodes(&self, mut f: impl FnMut(Point2) -> Result<Point2>) -> Result<Curve> {
        let mut samples = Vec::with_capacity(self.samples.len());
        for &p in &self.samples {
            samples.push(f(p)?);
        }
        Curve::new(samples)
    }

    /// Smallest distance from `p` to the polyline.
    pub fn distance_to_point(&self, p: Point2) -> f64 {
        let mut best = f64::INFINITY;
        for k in 1..self.samples.len() {
            let a = self.samples[k - 1];
            let b = self.samples[k];
            let ab = b - a;
            let len2 = ab.x * ab.x + ab.y * ab.y;
            let t = if len2 > 0.0 {
                (((p - a).x * ab.x + (p - a).y * ab.y) / len2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            best = best.min(p.dist(a + ab * t));
        }
        best
    }
}

fn tangents_of(samples: &[Point2]) -> Vec<DirectionP> {
    let n = samples.len();
    let mut tangents = Vec::with_capacity(n);
    for k in 0..n {
        let (lo, hi) = if k == 0 {
            (samples[0], samples[1])
        } else if k == n - 1 {
            (samples[n - 2], samples[n - 1])
        } else {
            (samples[k - 1], samples[k + 1])
        };
        tangents.push(DirectionP::from_vector(hi.x - lo.x, hi.y - lo.y));
    }
    tangents
}

/// Returns the curve resampled at uniform arc-length spacing with the same
/// node count; total length is preserved to rounding.
pub fn arc_length_parameterize(curve: &Curve) -> Result<Curve> {
    curve.resample(curve.len_nodes())
}

/// Minimal sup distance of unit-speed parameterizations over aligned
/// windows: the shorter curve slides along the longer one and the offset
/// is minimized by golden-section search. `order` 0 compares values,
/// `order` 1 also compares tangent angles.
pub fn curve_distance(c1: &Curve, c2: &Curve, order: u8) -> Result<f64> {
    let (long, short) = if c1.total_length() >= c2.total_length() {
        (c1, c2)
    } else {
        (c2, c1)
    };
    let l_long = long.total_length();
    let l_short = short.total_length();
    if !(l_long.is_finite() && l_short.is_finite()) || l_short == 0.0 {
        return Err(Error::DegenerateCurve);
    }
    let n = short.len_nodes().max(64);
    let eval = |offset: f64| -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let s = l_short * (k as f64) / ((n - 1) as f64);
            let p_long = long.point_at(offset + s);
            let p_short = short.point_at(s);
            let mut d = p_long.dist(p_short);
            if order >= 1 {
                let a = long.tangent_at(offset + s).angle_to(short.tangent_at(s));
                d = d.max(a);
            }
            worst = worst.max(d);
        }
        worst
    };
    let span = l_long - l_short;
    if span <= 0.0 {
        return Ok(eval(0.0));
    }
    // Coarse scan to localize the best window, then golden-section.
    let coarse = 32;
    let mut best_k: usize = 0;
    let mut best_val = f64::INFINITY;
    for k in 0..=coarse {
        let off = span * (k as f64) / (coarse as f64);
        let v = eval(off);
        if v < best_val {
            best_val = v;
            best_k = k;
        }
    }
    let lo = span * ((best_k.saturating_sub(1)) as f64) / (coarse as f64);
    let hi = span * ((best_k + 1).min(coarse) as f64) / (coarse as f64);
    let phi = 0.5 * (3.0 - 5.0_f64.sqrt());
    let (mut a, mut b) = (lo, hi);
    let mut x1 = a + phi * (b - a);
    let mut x2 = b - phi * (b - a);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    for _ in 0..60 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + phi * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - phi * (b - a);
            f2 = eval(x2);
        }
        if b - a < 1e-12 * l_long.max(1.0) {
            break;
        }
    }
    Ok(best_val.min(f1).min(f2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_point_query() {
        // Straight-line midpoint at arc length 2.5 of the (0,0)->(3,4)
        // segment of length 5.
        let c = Curve::segment(Point2::new(0.0, 0.0), Point2::new(3.0, 4.0), 65).unwrap();
        let p = c.point_at(2.5);
        assert!((p.x - 1.5).abs() < 1e-12 && (p.y - 2.0).abs() < 1e-12);
    }

    #[test]
    fn arclength_idempotent() {
        let c = Curve::from_fn(0.0, 1.0, 128, |t| Point2::new(t, t * t)).unwrap();
        let c1 = arc_length_parameterize(&c).unwrap();
        let c2 = arc_length_parameterize(&c1).unwrap();
        for (p, q) in c1.samples().iter().zip(c2.samples()) {
            assert!(p.dist(*q) < 1e-12);
        }
        assert!((c1.total_length() - c.total_length()).abs() / c.total_length() < 1e-9);
    }

    #[test]
    fn quarter_circle_length() {
        let c = Curve::from_fn(0.0, core::f64::consts::FRAC_PI_2, 256, |t| {
            Point2::new(t.cos(), t.sin())
        })
        .unwrap();
        assert!((c.total_length() - core::f64::consts::FRAC_PI_2).abs() < 1e-4);
    }

    #[test]
    fn degenerate_curve_rejected() {
        let p = Point2::new(1.0, 1.0);
        assert_eq!(Curve::new(alloc::vec![p, p]), Err(Error::DegenerateCurve));
    }

    #[test]
    fn distance_identical_and_offset() {
        let c1 = Curve::segment(Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), 65).unwrap();
        assert!(curve_distance(&c1, &c1, 0).unwrap() < 1e-14);
        let c2 = Curve::segment(Point2::new(0.0, 0.25), Point2::new(1.0, 0.25), 65).unwrap();
        let d = curve_distance(&c1, &c2, 0).unwrap();
        assert!((d - 0.25).abs() < 1e-9);
    }

    #[test]
    fn distance_subsegment_alignment() {
        // Middle third of a segment sits on the segment: distance ~ 0.
        let c1 = Curve::segment(Point2::new(0.0, 0.0), Point2::new(3.0, 0.0), 193).unwrap();
        let c2 = Curve::segment(Point2::new(1.0, 0.0), Point2::new(2.0, 0.0), 65).unwrap();
        let d = curve_distance(&c1, &c2, 0).unwrap();
        assert!(d < 1e-9, "window alignment failed: {d}");
    }

    #[test]
    fn distance_symmetry_and_triangle_on_equal_lengths() {
        let mk = |amp: f64| {
            Curve::from_fn(0.0, 1.0, 97, |t| {
                Point2::new(t, amp * (core::f64::consts::PI * t).sin())
            })
            .unwrap()
        };
        let (a, b, c) = (mk(0.0), mk(0.05), mk(0.1));
        let dab = curve_distance(&a, &b, 0).unwrap();
        let dba = curve_distance(&b, &a, 0).unwrap();
        assert!((dab - dba).abs() < 1e-9);
        let dac = curve_distance(&a, &c, 0).unwrap();
        let dbc = curve_distance(&b, &c, 0).unwrap();
        assert!(dac <= dab + dbc + 1e-9);
    }
}
