//! R-periodic domains: construction heuristic and sampled verification.
//!
//! A candidate domain is a quadrilateral bounded above and below by
//! genuine horizontal segments and laterally by integral curves of the
//! most contracting direction field of `DF^R`. The construction fattens
//! the orbit-class hulls of the critical orbit; verification of the
//! periodicity conditions is authoritative.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{Curve, Interval, Point2};
use crate::henon::{most_contracting_of_product, HenonLikeMap};
use crate::math::FloatExt as _;

/// Sampled near-vertical leaf stored as a graph `x = l(y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafGraph {
    ys: Vec<f64>,
    xs: Vec<f64>,
}

impl LeafGraph {
    pub fn eval(&self, y: f64) -> f64 {
        let n = self.ys.len();
        let y = y.clamp(self.ys[0], self.ys[n - 1]);
        let k = match self.ys.binary_search_by(|c| c.partial_cmp(&y).unwrap()) {
            Ok(k) => return self.xs[k],
            Err(k) => k.clamp(1, n - 1),
        };
        let w = (y - self.ys[k - 1]) / (self.ys[k] - self.ys[k - 1]);
        self.xs[k - 1] + (self.xs[k] - self.xs[k - 1]) * w
    }

    pub fn to_curve(&self, n: usize) -> Result<Curve> {
        let pts: Vec<Point2> = self
            .ys
            .iter()
            .zip(&self.xs)
            .map(|(&y, &x)| Point2::new(x, y))
            .collect();
        Curve::new(pts)?.resample(n)
    }
}

/// Verified R-periodic quadrilateral.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicDomain {
    pub period: usize,
    pub y_range: Interval,
    pub center_y: f64,
    /// Abscissa range of the central horizontal section.
    pub section_x: Interval,
    pub left_leaf: LeafGraph,
    pub right_leaf: LeafGraph,
    /// Containment gap of `F^R(B^1)` inside `B^1` (phase distance).
    pub margin: f64,
    pub disjointness_ok: bool,
    /// Smallest boundary separation over the intermediate iterates.
    pub min_separation: f64,
}

impl PeriodicDomain {
    /// Positive outside-deficit of `p` (0 when inside).
    pub fn outside_amount(&self, p: Point2) -> f64 {
        let mut d: f64 = 0.0;
        d = d.max(self.y_range.lo - p.y).max(p.y - self.y_range.hi);
        let yc = p.y.clamp(self.y_range.lo, self.y_range.hi);
        d = d
            .max(self.left_leaf.eval(yc) - p.x)
            .max(p.x - self.right_leaf.eval(yc));
        d
    }

    /// Positive inside-margin of `p` (negative outside).
    pub fn inside_margin(&self, p: Point2) -> f64 {
        let dy = self.y_range.margin(p.y);
        let dx = (p.x - self.left_leaf.eval(p.y)).min(self.right_leaf.eval(p.y) - p.x);
        dx.min(dy)
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.inside_margin(p) >= 0.0
    }

    /// Boundary as four curves: bottom, right, top, left.
    pub fn boundary(&self, n: usize) -> Result<[Curve; 4]> {
        let y0 = self.y_range.lo;
        let y1 = self.y_range.hi;
        let bottom = Curve::from_fn(0.0, 1.0, n, |t| {
            let x = self.left_leaf.eval(y0) + t * (self.right_leaf.eval(y0) - self.left_leaf.eval(y0));
            Point2::new(x, y0)
        })?;
        let top = Curve::from_fn(0.0, 1.0, n, |t| {
            let x = self.left_leaf.eval(y1) + t * (self.right_leaf.eval(y1) - self.left_leaf.eval(y1));
            Point2::new(x, y1)
        })?;
        let left = Curve::from_fn(y0, y1, n, |y| Point2::new(self.left_leaf.eval(y), y))?;
        let right = Curve::from_fn(y0, y1, n, |y| Point2::new(self.right_leaf.eval(y), y))?;
        Ok([bottom, right, top, left])
    }

    /// Rough diameter of the quadrilateral.
    pub fn diameter(&self) -> f64 {
        let w = (self.section_x.len()).max(
            (self.right_leaf.eval(self.y_range.lo) - self.left_leaf.eval(self.y_range.lo)).abs(),
        );
        w.hypot(self.y_range.len())
    }
}

/// Unit vector field of the most contracting direction of `DF^period`,
/// oriented upward.
pub(crate) fn contracting_field(
    map: &HenonLikeMap,
    period: usize,
) -> impl Fn(Point2) -> Result<(f64, f64)> + '_ {
    move |p: Point2| {
        let orbit = map.iterate(p, period)?;
        let dir = most_contracting_of_product(&orbit.jacobians()[..period])?;
        let (vx, vy) = dir.unit();
        if vy.abs() < 0.05 {
            // Field nearly horizontal: integration as x = l(y) ill-posed.
            return Err(Error::FoliationIntegrationFailed);
        }
        if vy < 0.0 {
            Ok((-vx, -vy))
        } else {
            Ok((vx, vy))
        }
    }
}

/// Integrates `dx/dy = Vx/Vy` from `(x0, y0)` across the monotone levels
/// `ys` (first entry equal to `y0`), `substeps` RK4 steps per level gap.
pub(crate) fn integrate_leaf(
    field: &impl Fn(Point2) -> Result<(f64, f64)>,
    x0: f64,
    ys: &[f64],
    substeps: usize,
) -> Result<Vec<f64>> {
    let slope = |x: f64, y: f64| -> Result<f64> {
        let (vx, vy) = field(Point2::new(x, y))?;
        Ok(vx / vy)
    };
    let mut xs = Vec::with_capacity(ys.len());
    let mut x = x0;
    xs.push(x);
    for k in 1..ys.len() {
        let h = (ys[k] - ys[k - 1]) / (substeps as f64);
        let mut y = ys[k - 1];
        for _ in 0..substeps {
            let k1 = slope(x, y)?;
            let k2 = slope(x + 0.5 * h * k1, y + 0.5 * h)?;
            let k3 = slope(x + 0.5 * h * k2, y + 0.5 * h)?;
            let k4 = slope(x + h * k3, y + h)?;
            x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            y += h;
        }
        xs.push(x);
    }
    Ok(xs)
}

fn leaf_through(
    field: &impl Fn(Point2) -> Result<(f64, f64)>,
    x0: f64,
    y0: f64,
    y_range: Interval,
    levels: usize,
    substeps: usize,
) -> Result<LeafGraph> {
    // March down and up from (x0, y0) across uniform levels.
    let mut ys = Vec::with_capacity(levels);
    for k in 0..levels {
        ys.push(y_range.lo + y_range.len() * (k as f64) / ((levels - 1) as f64));
    }
    let split = ys.partition_point(|&y| y <= y0);
    let mut down: Vec<f64> = ys[..split].iter().rev().copied().collect();
    down.insert(0, y0);
    let xs_down = integrate_leaf(field, x0, &down, substeps)?;
    let mut up: Vec<f64> = ys[split..].to_vec();
    up.insert(0, y0);
    let xs_up = integrate_leaf(field, x0, &up, substeps)?;
    let mut xs = Vec::with_capacity(levels);
    for k in 0..split {
        xs.push(xs_down[split - k]);
    }
    xs.extend_from_slice(&xs_up[1..]);
    Ok(LeafGraph { ys, xs })
}

/// Collects a settled orbit of the profile's critical point.
fn settled_orbit(map: &HenonLikeMap, length: usize) -> Result<Vec<Point2>> {
    let prof = map.profile_1d(512)?;
    let mut p = Point2::new(prof.critical_point, 0.0);
    for k in 0..600 {
        if !map.domain().contains(p) {
            return Err(Error::EscapedDomain(k));
        }
        p = map.apply(p);
    }
    let mut orbit = Vec::with_capacity(length);
    for k in 0..length {
        if !map.domain().contains(p) {
            return Err(Error::EscapedDomain(600 + k));
        }
        orbit.push(p);
        p = map.apply(p);
    }
    Ok(orbit)
}

/// Detects and verifies an `R`-periodic domain around the critical-value
/// orbit class.
pub fn find_periodic_domain(map: &HenonLikeMap, period: usize) -> Result<PeriodicDomain> {
    if period < 2 {
        return Err(Error::NoPeriodicDomain("period must be at least 2", 0));
    }
    let orbit = settled_orbit(map, (period * 64).clamp(256, 4096))?;
    // Critical-value class: the residue class (mod R) of the maximal
    // abscissa (the image of the fold).
    let arg_max = orbit
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.x.partial_cmp(&b.1.x).unwrap())
        .unwrap()
        .0;
    let class: Vec<Point2> = orbit
        .iter()
        .enumerate()
        .filter(|(j, _)| j % period == arg_max % period)
        .map(|(_, &p)| p)
        .collect();
    let x_lo = class.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
    let x_hi = class.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
    let y_lo = class.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
    let y_hi = class.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
    let wx = x_hi - x_lo;
    let wy = y_hi - y_lo;
    if !(wx > 1e-12 && wy > 1e-12) {
        return Err(Error::NoPeriodicDomain("orbit class hull degenerate", 0));
    }
    let field = contracting_field(map, period);
    let mut last_err = Error::NoPeriodicDomain("no pad admitted a verified domain", 0);
    for &pad in &[0.30_f64, 0.20, 0.45, 0.12, 0.60] {
        let jx = Interval::new(x_lo - pad * wx, x_hi + pad * wx);
        let jy = Interval::new(y_lo - pad * wy, y_hi + pad * wy);
        match build_and_verify(map, period, &field, jx, jy) {
            Ok(domain) => return Ok(domain),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

fn build_and_verify(
    map: &HenonLikeMap,
    period: usize,
    field: &impl Fn(Point2) -> Result<(f64, f64)>,
    section_x: Interval,
    y_range: Interval,
) -> Result<PeriodicDomain> {
    let center_y = y_range.mid();
    let levels = 257;
    let substeps = 4;
    let left_leaf = leaf_through(field, section_x.lo, center_y, y_range, levels, substeps)
        .map_err(|_| Error::NoPeriodicDomain("left leaf integration failed", 0))?;
    let right_leaf = leaf_through(field, section_x.hi, center_y, y_range, levels, substeps)
        .map_err(|_| Error::NoPeriodicDomain("right leaf integration failed", 0))?;
    let mut domain = PeriodicDomain {
        period,
        y_range,
        center_y,
        section_x,
        left_leaf,
        right_leaf,
        margin: 0.0,
        disjointness_ok: false,
        min_separation: 0.0,
    };
    // Sample the boundary densely plus an interior grid.
    let boundary = domain
        .boundary(129)
        .map_err(|_| Error::NoPeriodicDomain("degenerate boundary", 0))?;
    let mut samples: Vec<Point2> = Vec::new();
    for c in &boundary {
        samples.extend_from_slice(c.samples());
    }
    let interior_n = 12;
    for j in 0..interior_n {
        let y = y_range.lo + y_range.len() * (j as f64 + 0.5) / interior_n as f64;
        for i in 0..interior_n {
            let xl = domain.left_leaf.eval(y);
            let xr = domain.right_leaf.eval(y);
            let x = xl + (xr - xl) * (i as f64 + 0.5) / interior_n as f64;
            samples.push(Point2::new(x, y));
        }
    }
    // Containment: F^R maps every sample strictly inside.
    let mut margin = f64::INFINITY;
    for &p in &samples {
        let q = map
            .iterate_point(p, period)
            .map_err(|_| Error::NoPeriodicDomain("orbit escaped during containment", period))?;
        margin = margin.min(domain.inside_margin(q));
    }
    let scale = domain.diameter();
    if !(margin > 1e-9 * scale) {
        return Err(Error::NoPeriodicDomain("containment failed", period));
    }
    // Disjointness: intermediate iterates stay strictly outside.
    let mut min_separation = f64::INFINITY;
    for i in 1..period {
        for &p in &samples {
            let q = map
                .iterate_point(p, i)
                .map_err(|_| Error::NoPeriodicDomain("orbit escaped during disjointness", i))?;
            let out = domain.outside_amount(q);
            if out <= 0.0 {
                return Err(Error::NoPeriodicDomain("disjointness failed", i));
            }
            min_separation = min_separation.min(out);
        }
    }
    domain.margin = margin;
    domain.disjointness_ok = true;
    domain.min_separation = min_separation;
    Ok(domain)
}
