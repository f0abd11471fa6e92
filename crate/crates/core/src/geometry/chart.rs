//! Sampled diffeomorphisms onto rectangles.
//!
//! A chart stores the inverse map on a regular lattice of its target
//! rectangle. The inverse direction is evaluated by local bicubic
//! interpolation; the forward direction by damped Newton on the
//! interpolant.

use alloc::vec::Vec;

use super::{Curve, Interval, Point2, Rect};
use crate::error::{Error, Result};
use crate::linalg::Mat2;
#[allow(unused_imports)]
use crate::math::FloatExt as _;

/// Default lattice resolution.
pub const DEFAULT_GRID: usize = 129;
/// Newton tolerance for the forward direction (phase-space residual).
pub const INVERSE_TOL: f64 = 1e-12;

/// Sampled chart `Phi: quadrilateral -> rectangle`, stored as the image of
/// a regular lattice on the target rectangle under `Phi^{-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    m: usize,
    target: Rect,
    grid: Vec<Point2>,
    center: Point2,
}

impl Chart {
    /// Builds a chart by sampling `inv(u, v) = Phi^{-1}(u, v)` on an
    /// `m x m` lattice of `target`.
    pub fn from_fn(
        m: usize,
        target: Rect,
        center: Point2,
        mut inv: impl FnMut(f64, f64) -> Result<Point2>,
    ) -> Result<Chart> {
        let m = m.max(4);
        let mut grid = Vec::with_capacity(m * m);
        for j in 0..m {
            let v = target.v.lo + target.v.len() * (j as f64) / ((m - 1) as f64);
            for i in 0..m {
                let u = target.h.lo + target.h.len() * (i as f64) / ((m - 1) as f64);
                let p = inv(u, v)?;
                if !p.is_finite() {
                    return Err(Error::FoliationIntegrationFailed);
                }
                grid.push(p);
            }
        }
        Ok(Chart {
            m,
            target,
            grid,
            center,
        })
    }

    /// Identity chart on `rect`.
    pub fn identity(rect: Rect, m: usize) -> Chart {
        Chart::from_fn(m, rect, rect.center(), |u, v| Ok(Point2::new(u, v))).unwrap()
    }

    pub fn grid_size(&self) -> usize {
        self.m
    }

    pub fn target(&self) -> Rect {
        self.target
    }

    pub fn center(&self) -> Point2 {
        self.center
    }

    pub fn grid(&self) -> &[Point2] {
        &self.grid
    }

    #[inline]
    fn node(&self, i: usize, j: usize) -> Point2 {
        self.grid[j * self.m + i]
    }

    fn du(&self) -> f64 {
        self.target.h.len() / ((self.m - 1) as f64)
    }

    fn dv(&self) -> f64 {
        self.target.v.len() / ((self.m - 1) as f64)
    }

    /// Inverse direction: target coordinates to phase space, by local
    /// bicubic interpolation. Fails when `z` is outside the target.
    pub fn invert(&self, z: Point2) -> Result<Point2> {
        let eps_u = 1e-9 * self.target.h.len();
        let eps_v = 1e-9 * self.target.v.len();
        if z.x < self.target.h.lo - eps_u
            || z.x > self.target.h.hi + eps_u
            || z.y < self.target.v.lo - eps_v
            || z.y > self.target.v.hi + eps_v
        {
            return Err(Error::OutOfDomain);
        }
        Ok(self.interp(z.x, z.y).0)
    }

    /// Forward direction: phase space to target coordinates, by damped
    /// Newton on the interpolated inverse, seeded from the nearest grid
    /// node (or an explicit seed).
    pub fn apply(&self, p: Point2) -> Result<Point2> {
        self.apply_seeded(p, None)
    }

    pub fn apply_seeded(&self, p: Point2, seed: Option<(f64, f64)>) -> Result<Point2> {
        let uv = match seed {
            Some(s) => s,
            None => self.nearest_node_uv(p, (self.m / 16).max(1)),
        };
        match self.newton(p, uv) {
            Ok(z) => Ok(z),
            Err(Error::NewtonDiverged) if seed.is_some() => {
                // Retry from a fresh global seed before giving up.
                let uv = self.nearest_node_uv(p, (self.m / 16).max(1));
                self.newton(p, uv)
            }
            Err(e) => Err(e),
        }
    }

    /// True when `p` lies in the chart domain (forward map converges and
    /// lands inside the target rectangle).
    pub fn contains_phase(&self, p: Point2) -> bool {
        self.apply(p).is_ok()
    }

    /// Chart-coordinate margin of `p` to the target boundary, negative or
    /// an error when outside.
    pub fn phase_margin(&self, p: Point2) -> Result<f64> {
        let z = self.apply(p)?;
        Ok(self.target.margin(z))
    }

    /// Pushes a tangent direction forward through `DPhi` at `p`.
    pub fn push_direction(&self, p: Point2, v: (f64, f64)) -> Result<(f64, f64)> {
        let z = self.apply(p)?;
        let (_, jac_inv) = self.interp(z.x, z.y);
        let jac = jac_inv.inverse().ok_or(Error::NewtonDiverged)?;
        Ok(jac.mul_vec(v))
    }

    /// Pulls a tangent direction back through `DPhi^{-1}` at target point `z`.
    pub fn pull_direction(&self, z: Point2, v: (f64, f64)) -> Result<(f64, f64)> {
        if !self.target.contains(Point2::new(
            z.x.clamp(self.target.h.lo, self.target.h.hi),
            z.y.clamp(self.target.v.lo, self.target.v.hi),
        )) {
            return Err(Error::OutOfDomain);
        }
        let (_, jac_inv) = self.interp(z.x, z.y);
        Ok(jac_inv.mul_vec(v))
    }

    /// Maps a curve into chart coordinates with a rolling Newton seed.
    pub fn apply_curve(&self, curve: &Curve) -> Result<Curve> {
        let mut seed: Option<(f64, f64)> = None;
        curve.map_nodes(|p| {
            let z = self.apply_seeded(p, seed)?;
            seed = Some((z.x, z.y));
            Ok(z)
        })
    }

    /// Maps a curve from chart coordinates to phase space.
    pub fn invert_curve(&self, curve: &Curve) -> Result<Curve> {
        curve.map_nodes(|z| self.invert(z))
    }

    /// Structural check: consecutive nodes distinct, interpolated Jacobian
    /// determinant positive at nodes, forward/inverse roundtrip below
    /// `INVERSE_TOL` on a node subsample.
    pub fn validate(&self) -> Result<()> {
        let m = self.m;
        for j in 0..m {
            for i in 1..m {
                if self.node(i, j) == self.node(i - 1, j) {
                    return Err(Error::DegenerateCurve);
                }
            }
        }
        for i in 0..m {
            for j in 1..m {
                if self.node(i, j) == self.node(i, j - 1) {
                    return Err(Error::DegenerateCurve);
                }
            }
        }
        let orient = {
            let (_, jac) = self.interp(self.target.h.mid(), self.target.v.mid());
            jac.det()
        };
        if orient == 0.0 {
            return Err(Error::ShapeTestFailed);
        }
        for j in 0..m {
            let v = self.target.v.lo + self.dv() * j as f64;
            for i in 0..m {
                let u = self.target.h.lo + self.du() * i as f64;
                let (_, jac) = self.interp(u, v);
                if jac.det() * orient <= 0.0 {
                    return Err(Error::ShapeTestFailed);
                }
            }
        }
        let stride = (m / 16).max(1);
        for j in (0..m).step_by(stride) {
            let v = self.target.v.lo + self.dv() * j as f64;
            for i in (0..m).step_by(stride) {
                let u = self.target.h.lo + self.du() * i as f64;
                let z = self.apply_seeded(self.node(i, j), Some((u, v)))?;
                let back = self.interp(z.x, z.y).0;
                if back.dist(self.node(i, j)) > INVERSE_TOL.max(1e-11) {
                    return Err(Error::NewtonDiverged);
                }
            }
        }
        Ok(())
    }

    fn nearest_node_uv(&self, p: Point2, stride: usize) -> (f64, f64) {
        let m = self.m;
        let mut best = (0usize, 0usize);
        let mut best_d = f64::INFINITY;
        for j in (0..m).step_by(stride) {
            for i in (0..m).step_by(stride) {
                let d = self.node(i, j).dist(p);
                if d < best_d {
                    best_d = d;
                    best = (i, j);
                }
            }
        }
        if stride > 1 {
            let (bi, bj) = best;
            let lo_i = bi.saturating_sub(stride);
            let hi_i = (bi + stride).min(m - 1);
            let lo_j = bj.saturating_sub(stride);
            let hi_j = (bj + stride).min(m - 1);
            for j in lo_j..=hi_j {
                for i in lo_i..=hi_i {
                    let d = self.node(i, j).dist(p);
                    if d < best_d {
                        best_d = d;
                        best = (i, j);
                    }
                }
            }
        }
        (
            self.target.h.lo + self.du() * best.0 as f64,
            self.target.v.lo + self.dv() * best.1 as f64,
        )
    }

    fn newton(&self, p: Point2, seed: (f64, f64)) -> Result<Point2> {
        let mut u = seed.0;
        let mut v = seed.1;
        // Allow one cell of extrapolation while iterating; classify at the end.
        let band_u = Interval::new(self.target.h.lo - self.du(), self.target.h.hi + self.du());
        let band_v = Interval::new(self.target.v.lo - self.dv(), self.target.v.hi + self.dv());
        let max_step_u = 4.0 * self.du();
        let max_step_v = 4.0 * self.dv();
        let (mut val, mut jac) = self.interp(u, v);
        let mut res = val.dist(p);
        for _ in 0..50 {
            if res < INVERSE_TOL {
                break;
            }
            let inv = jac.inverse().ok_or(Error::NewtonDiverged)?;
            let (mut su, mut sv) = inv.mul_vec((p.x - val.x, p.y - val.y));
            su = su.clamp(-max_step_u, max_step_u);
            sv = sv.clamp(-max_step_v, max_step_v);
            let mut t = 1.0;
            let mut improved = false;
            for _ in 0..8 {
                let nu = (u + t * su).clamp(band_u.lo, band_u.hi);
                let nv = (v + t * sv).clamp(band_v.lo, band_v.hi);
                let (nval, njac) = self.interp(nu, nv);
                let nres = nval.dist(p);
                if nres < res {
                    u = nu;
                    v = nv;
                    val = nval;
                    jac = njac;
                    res = nres;
                    improved = true;
                    break;
                }
                t *= 0.5;
            }
            if !improved {
                break;
            }
        }
        if res >= INVERSE_TOL.max(1e-11) {
            return Err(Error::NewtonDiverged);
        }
        let eps_u = 1e-9 * self.target.h.len().max(1e-300);
        let eps_v = 1e-9 * self.target.v.len().max(1e-300);
        if u < self.target.h.lo - eps_u
            || u > self.target.h.hi + eps_u
            || v < self.target.v.lo - eps_v
            || v > self.target.v.hi + eps_v
        {
            return Err(Error::OutOfDomain);
        }
        Ok(Point2::new(u, v))
    }

    /// Bicubic Lagrange value and Jacobian of the interpolated inverse at
    /// target coordinates `(u, v)` (extrapolates smoothly just outside).
    fn interp(&self, u: f64, v: f64) -> (Point2, Mat2) {
        let m = self.m;
        let s = (u - self.target.h.lo) / self.du();
        let t = (v - self.target.v.lo) / self.dv();
        let i0 = (s.floor() as isize - 1).clamp(0, m as isize - 4) as usize;
        let j0 = (t.floor() as isize - 1).clamp(0, m as isize - 4) as usize;
        let xi = s - i0 as f64;
        let eta = t - j0 as f64;
        let (wu, dwu) = cubic_weights(xi);
        let (wv, dwv) = cubic_weights(eta);
        let mut val = Point2::new(0.0, 0.0);
        let mut d_du = Point2::new(0.0, 0.0);
        let mut d_dv = Point2::new(0.0, 0.0);
        for j in 0..4 {
            let mut row = Point2::new(0.0, 0.0);
            let mut drow = Point2::new(0.0, 0.0);
            for i in 0..4 {
                let g = self.node(i0 + i, j0 + j);
                row = row + g * wu[i];
                drow = drow + g * dwu[i];
            }
            val = val + row * wv[j];
            d_du = d_du + drow * wv[j];
            d_dv = d_dv + row * dwv[j];
        }
        let jac = Mat2::new(
            d_du.x / self.du(),
            d_dv.x / self.dv(),
            d_du.y / self.du(),
            d_dv.y / self.dv(),
        );
        (val, jac)
    }
}

/// Cubic Lagrange weights and derivatives at local coordinate `x` over
/// nodes 0..=3.
fn cubic_weights(x: f64) -> ([f64; 4], [f64; 4]) {
    let x1 = x - 1.0;
    let x2 = x - 2.0;
    let x3 = x - 3.0;
    let w = [
        -x1 * x2 * x3 / 6.0,
        x * x2 * x3 / 2.0,
        -x * x1 * x3 / 2.0,
        x * x1 * x2 / 6.0,
    ];
    let dw = [
        -(x1 * x2 + x1 * x3 + x2 * x3) / 6.0,
        (x * x2 + x * x3 + x2 * x3) / 2.0,
        -(x * x1 + x * x3 + x1 * x3) / 2.0,
        (x * x1 + x * x2 + x1 * x2) / 6.0,
    ];
    (w, dw)
}

/// Re-centers a chart at `q`: same leaves, `q` maps to the origin, and
/// both axis curves become arc-length (unit-speed) parameterized.
pub fn center_chart(chart: &Chart, q: Point2) -> Result<Chart> {
    let zq = chart.apply(q)?;
    let m = chart.grid_size();
    let fine = 8 * m;
    // Arc-length tables along the two axis leaves through q.
    let h_table = axis_arclength(chart, zq, true, fine)?;
    let v_table = axis_arclength(chart, zq, false, fine)?;
    let new_target = Rect::new(
        Interval::new(h_table.s.first().copied().unwrap(), *h_table.s.last().unwrap()),
        Interval::new(v_table.s.first().copied().unwrap(), *v_table.s.last().unwrap()),
    );
    // Precompute the old coordinates for the new lattice, one axis at a time.
    let mut us = Vec::with_capacity(m);
    let mut vs = Vec::with_capacity(m);
    for k in 0..m {
        let su = new_target.h.lo + new_target.h.len() * (k as f64) / ((m - 1) as f64);
        let sv = new_target.v.lo + new_target.v.len() * (k as f64) / ((m - 1) as f64);
        us.push(h_table.coord_of(su));
        vs.push(v_table.coord_of(sv));
    }
    let du = new_target.h.len() / ((m - 1) as f64);
    let dv = new_target.v.len() / ((m - 1) as f64);
    Chart::from_fn(m, new_target, q, |su, sv| {
        let i = ((su - new_target.h.lo) / du).round() as usize;
        let j = ((sv - new_target.v.lo) / dv).round() as usize;
        chart.invert(Point2::new(us[i.min(m - 1)], vs[j.min(m - 1)]))
    })
}

struct AxisTable<'a> {
    /// Original chart coordinate per fine node (uniform spacing).
    t: Vec<f64>,
    /// Signed arc length per fine node (zero at the center).
    s: Vec<f64>,
    /// Axis speed at an arbitrary coordinate (smooth).
    speed: alloc::boxed::Box<dyn Fn(f64) -> f64 + 'a>,
}

impl AxisTable<'_> {
    /// Smooth increment of arc length from table node `k` to coordinate `t`.
    fn s_from_node(&self, k: usize, t: f64) -> f64 {
        let t0 = self.t[k];
        let mid = 0.5 * (t0 + t);
        self.s[k] + (t - t0) / 6.0 * ((self.speed)(t0) + 4.0 * (self.speed)(mid) + (self.speed)(t))
    }

    /// Original coordinate whose arc length equals `s`: table lookup plus
    /// Newton refinement against the smooth speed integral.
    fn coord_of(&self, s: f64) -> f64 {
        let n = self.s.len();
        let s = s.clamp(self.s[0], self.s[n - 1]);
        let k = match self.s.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
            Ok(k) => return self.t[k],
            Err(k) => k.clamp(1, n - 1) - 1,
        };
        let (s0, s1) = (self.s[k], self.s[k + 1]);
        let w = (s - s0) / (s1 - s0);
        let mut t = self.t[k] + (self.t[k + 1] - self.t[k]) * w;
        for _ in 0..4 {
            let res = self.s_from_node(k, t) - s;
            let v = (self.speed)(t);
            if v <= 0.0 {
                break;
            }
            let step = res / v;
            t -= step;
            if step.abs() < 1e-15 * (1.0 + t.abs()) {
                break;
            }
        }
        t.clamp(self.t[0], self.t[n - 1])
    }
}

fn axis_arclength(
    chart: &Chart,
    zq: Point2,
    horizontal: bool,
    fine: usize,
) -> Result<AxisTable<'_>> {
    let range = if horizontal {
        chart.target().h
    } else {
        chart.target().v
    };
    // Align fine nodes with interpolation cells and integrate the axis
    // speed by composite Simpson, so the interpolant's cell boundaries do
    // not degrade the arc-length table.
    let per_cell = (fine / (chart.grid_size() - 1)).max(4);
    let fine = per_cell * (chart.grid_size() - 1);
    let speed = move |c: f64| -> f64 {
        let z = if horizontal {
            Point2::new(c, zq.y)
        } else {
            Point2::new(zq.x, c)
        };
        let (_, jac) = chart.interp(z.x, z.y);
        if horizontal {
            jac.a.hypot(jac.c)
        } else {
            jac.b.hypot(jac.d)
        }
    };
    let mut t = Vec::with_capacity(fine + 1);
    for k in 0..=fine {
        t.push(range.lo + range.len() * (k as f64) / (fine as f64));
    }
    let mut s = Vec::with_capacity(fine + 1);
    s.push(0.0);
    for k in 1..=fine {
        let h = t[k] - t[k - 1];
        let inc = (h / 6.0) * (speed(t[k - 1]) + 4.0 * speed(0.5 * (t[k - 1] + t[k])) + speed(t[k]));
        s.push(s[k - 1] + inc);
    }
    let mut table = AxisTable {
        t,
        s,
        speed: alloc::boxed::Box::new(speed),
    };
    // Shift so that the arc length vanishes at q's coordinate.
    let cq = if horizontal { zq.x } else { zq.y };
    let k = match table.t.binary_search_by(|c| c.partial_cmp(&cq).unwrap()) {
        Ok(k) => k,
        Err(k) => k.clamp(1, table.t.len() - 1) - 1,
    };
    let s_q = table.s_from_node(k.min(table.t.len() - 1), cq);
    for v in &mut table.s {
        *v -= s_q;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_rect() -> Rect {
        Rect::new(Interval::new(-1.0, 1.0), Interval::new(-1.0, 1.0))
    }

    #[test]
    fn identity_chart_roundtrip() {
        let c = Chart::identity(unit_rect(), 17);
        let p = Point2::new(0.3, -0.4);
        let z = c.apply(p).unwrap();
        assert!(z.dist(p) < 1e-12);
        assert!(c.invert(z).unwrap().dist(p) < 1e-12);
        c.validate().unwrap();
    }

    #[test]
    fn affine_chart_invert() {
        // Phi(p) = 2p + (1, 0), so Phi^{-1}(z) = (z - (1,0))/2.
        let target = Rect::new(Interval::new(-1.0, 3.0), Interval::new(-2.0, 2.0));
        let c = Chart::from_fn(9, target, Point2::new(0.0, 0.0), |u, v| {
            Ok(Point2::new((u - 1.0) / 2.0, v / 2.0))
        })
        .unwrap();
        let z = Point2::new(0.6, -0.8);
        let p = c.invert(z).unwrap();
        assert!((p.x - (z.x - 1.0) / 2.0).abs() < 1e-13);
        assert!((p.y - z.y / 2.0).abs() < 1e-13);
        let back = c.apply(p).unwrap();
        assert!(back.dist(z) < 1e-11);
    }

    #[test]
    fn smooth_chart_roundtrip_probes() {
        // Mildly warped smooth chart; 1000 probes stay below 1e-10.
        let target = unit_rect();
        let c = Chart::from_fn(65, target, Point2::new(0.0, 0.0), |u, v| {
            Ok(Point2::new(
                u + 0.1 * (0.9 * v).sin() + 0.03 * (1.3 * u * v).cos(),
                v + 0.08 * (1.1 * u).sin(),
            ))
        })
        .unwrap();
        let mut worst: f64 = 0.0;
        let mut seed = None;
        for k in 0..1000 {
            let u = -0.95 + 1.9 * ((k % 40) as f64) / 39.0;
            let v = -0.95 + 1.9 * ((k / 40) as f64) / 24.0;
            let p = c.invert(Point2::new(u, v)).unwrap();
            let z = c.apply_seeded(p, seed).unwrap();
            seed = Some((z.x, z.y));
            let back = c.invert(z).unwrap();
            worst = worst.max(back.dist(p));
        }
        assert!(worst < 1e-10, "roundtrip residual {worst}");
    }

    #[test]
    fn out_of_domain_rejected() {
        let c = Chart::identity(unit_rect(), 17);
        assert!(matches!(
            c.invert(Point2::new(2.0, 0.0)),
            Err(Error::OutOfDomain)
        ));
        assert!(c.apply(Point2::new(5.0, 5.0)).is_err());
    }

    #[test]
    fn center_identity_is_translation() {
        let c = Chart::identity(unit_rect(), 33);
        let q = Point2::new(0.3, 0.2);
        let cc = center_chart(&c, q).unwrap();
        // Identity chart centered at q is the translation by -q.
        let p = Point2::new(0.1, -0.5);
        let z = cc.apply(p).unwrap();
        assert!((z.x - (p.x - q.x)).abs() < 1e-10);
        assert!((z.y - (p.y - q.y)).abs() < 1e-10);
        assert!(cc.center().dist(q) < 1e-15);
    }

    #[test]
    fn center_is_idempotent() {
        let target = unit_rect();
        let c = Chart::from_fn(33, target, Point2::new(0.0, 0.0), |u, v| {
            Ok(Point2::new(u + 0.05 * v * v, v))
        })
        .unwrap();
        let q = Point2::new(0.05 * 0.04, 0.2);
        let c1 = center_chart(&c, q).unwrap();
        let c2 = center_chart(&c1, q).unwrap();
        let mut worst: f64 = 0.0;
        for (a, b) in c1.grid().iter().zip(c2.grid()) {
            worst = worst.max(a.dist(*b));
        }
        assert!(worst < 1e-8, "re-centering moved the grid by {worst}");
    }

    #[test]
    fn center_unit_speed_axes_on_anisotropic_chart() {
        // Chart stretching x by 3 and y by 0.5.
        let target = unit_rect();
        let c = Chart::from_fn(33, target, Point2::new(0.0, 0.0), |u, v| {
            Ok(Point2::new(3.0 * u, 0.5 * v))
        })
        .unwrap();
        let cc = center_chart(&c, Point2::new(0.0, 0.0)).unwrap();
        // Axis speeds: finite differences along both axis leaves.
        for &(dx, dy) in &[(1e-4, 0.0), (0.0, 1e-4)] {
            let a = cc.invert(Point2::new(-dx, -dy)).unwrap();
            let b = cc.invert(Point2::new(dx, dy)).unwrap();
            let speed = a.dist(b) / (2.0 * dx.max(dy));
            assert!(
                (speed - 1.0).abs() < 1e-6,
                "axis speed {speed} not unit after centering"
            );
        }
    }
}
