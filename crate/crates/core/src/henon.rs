//! Hénon-like maps `F(x, y) = (f(x, y), x)`, orbit iteration, derivative
//! cocycles and contracting/neutral direction estimation.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{DirectionP, Interval, Point2, Rect};
use crate::linalg::{normalize, Mat2};
#[allow(unused_imports)]
use crate::math::FloatExt as _;

/// Finite-difference step for evaluator-backed Jacobians.
const FD_STEP: f64 = 1e-6;

/// The profile `f(x, y)` backing a Hénon-like map.
#[derive(Clone)]
pub enum Profile {
    /// Canonical family `f = a - x^2 - b y` with `b >= 0`.
    Canonical { a: f64, b: f64 },
    /// Arbitrary evaluator; derivatives by centered differences.
    Custom(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl core::fmt::Debug for Profile {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Profile::Canonical { a, b } => write!(f, "Canonical {{ a: {a}, b: {b} }}"),
            Profile::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Hénon-like map `F(x, y) = (f(x, y), x)` on a rectangle.
#[derive(Debug, Clone)]
pub struct HenonLikeMap {
    profile: Profile,
    domain: Rect,
}

impl HenonLikeMap {
    /// Canonical family member on the default rectangle `[-w, w]^2`.
    pub fn canonical(a: f64, b: f64) -> HenonLikeMap {
        let w = 2.5_f64.max(1.0 + (1.0 + a.abs()).sqrt());
        HenonLikeMap::canonical_on(
            a,
            b,
            Rect::new(Interval::new(-w, w), Interval::new(-w, w)),
        )
    }

    pub fn canonical_on(a: f64, b: f64, domain: Rect) -> HenonLikeMap {
        assert!(b >= 0.0, "dissipation parameter must be nonnegative");
        HenonLikeMap {
            profile: Profile::Canonical { a, b },
            domain,
        }
    }

    /// Evaluator-backed map.
    pub fn custom(
        f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
        domain: Rect,
    ) -> HenonLikeMap {
        HenonLikeMap {
            profile: Profile::Custom(f),
            domain,
        }
    }

    pub fn domain(&self) -> Rect {
        self.domain
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// Canonical dissipation parameter, if this is a canonical member.
    pub fn b(&self) -> Option<f64> {
        match self.profile {
            Profile::Canonical { b, .. } => Some(b),
            Profile::Custom(_) => None,
        }
    }

    pub fn profile_value(&self, x: f64, y: f64) -> f64 {
        match &self.profile {
            Profile::Canonical { a, b } => a - x * x - b * y,
            Profile::Custom(f) => f(x, y),
        }
    }

    /// One application of `F`.
    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(self.profile_value(p.x, p.y), p.x)
    }

    /// `F^m(p)` without recording the orbit; checks domain containment.
    pub fn iterate_point(&self, p: Point2, m: usize) -> Result<Point2> {
        let mut q = p;
        for k in 0..m {
            if !self.domain.contains(q) {
                return Err(Error::EscapedDomain(k));
            }
            q = self.apply(q);
        }
        if !self.domain.contains(q) {
            return Err(Error::EscapedDomain(m));
        }
        Ok(q)
    }

    /// Derivative `DF` at `p`: `[[df/dx, df/dy], [1, 0]]`.
    pub fn jacobian(&self, p: Point2) -> Mat2 {
        match &self.profile {
            Profile::Canonical { b, .. } => Mat2::new(-2.0 * p.x, -*b, 1.0, 0.0),
            Profile::Custom(f) => {
                let fx = (f(p.x + FD_STEP, p.y) - f(p.x - FD_STEP, p.y)) / (2.0 * FD_STEP);
                let fy = (f(p.x, p.y + FD_STEP) - f(p.x, p.y - FD_STEP)) / (2.0 * FD_STEP);
                Mat2::new(fx, fy, 1.0, 0.0)
            }
        }
    }

    /// `F^{-1}(q)`. The second coordinate of `F` is `x`, so the preimage
    /// abscissa is `q.y` and the ordinate solves `f(q.y, y) = q.x`.
    pub fn inverse(&self, q: Point2) -> Result<Point2> {
        match &self.profile {
            Profile::Canonical { a, b } => {
                if *b == 0.0 {
                    return Err(Error::NotADiffeomorphism);
                }
                Ok(Point2::new(q.y, (a - q.y * q.y - q.x) / b))
            }
            Profile::Custom(f) => {
                let x = q.y;
                let mut y = self.domain.v.mid();
                let mut best = f64::INFINITY;
                for _ in 0..80 {
                    let r = f(x, y) - q.x;
                    if r.abs() < 1e-13 {
                        return Ok(Point2::new(x, y));
                    }
                    let fy = (f(x, y + FD_STEP) - f(x, y - FD_STEP)) / (2.0 * FD_STEP);
                    if fy.abs() < 1e-14 {
                        return Err(Error::NotADiffeomorphism);
                    }
                    let mut step = -r / fy;
                    let cap = self.domain.v.len();
                    step = step.clamp(-cap, cap);
                    y += step;
                    if r.abs() >= best && step.abs() < 1e-16 {
                        break;
                    }
                    best = best.min(r.abs());
                }
                let r = f(x, y) - q.x;
                if r.abs() < 1e-10 {
                    Ok(Point2::new(x, y))
                } else {
                    Err(Error::NewtonDiverged)
                }
            }
        }
    }

    /// Backward orbit `p, F^{-1}p, ..., F^{-m}p`.
    pub fn backward_orbit(&self, p: Point2, m: usize) -> Result<Vec<Point2>> {
        let mut pts = Vec::with_capacity(m + 1);
        pts.push(p);
        let mut q = p;
        for _ in 0..m {
            q = self.inverse(q)?;
            pts.push(q);
        }
        Ok(pts)
    }

    /// Records `m` forward steps with per-step Jacobians.
    pub fn iterate(&self, p: Point2, m: usize) -> Result<OrbitSegment> {
        let mut points = Vec::with_capacity(m + 1);
        let mut jacobians = Vec::with_capacity(m + 1);
        let mut log_det_prefix = Vec::with_capacity(m + 1);
        let mut q = p;
        log_det_prefix.push(0.0);
        for k in 0..=m {
            if !self.domain.contains(q) {
                return Err(Error::EscapedDomain(k));
            }
            let jac = self.jacobian(q);
            points.push(q);
            jacobians.push(jac);
            if k < m {
                log_det_prefix.push(log_det_prefix[k] + jac.det().abs().ln());
                q = self.apply(q);
            }
        }
        Ok(OrbitSegment {
            points,
            jacobians,
            log_det_prefix,
        })
    }

    /// Sampled 1D profile `f(., 0)` with its critical point.
    pub fn profile_1d(&self, n: usize) -> Result<Profile1D> {
        let n = n.max(64);
        let i = self.domain.h;
        let mut xs = Vec::with_capacity(n);
        let mut ys = Vec::with_capacity(n);
        for k in 0..n {
            let x = i.lo + i.len() * (k as f64) / ((n - 1) as f64);
            xs.push(x);
            ys.push(self.profile_value(x, 0.0));
        }
        // Unimodality: at most one sign change of the sampled derivative.
        let mut changes = 0;
        let mut last_sign = 0i8;
        for k in 1..n {
            let d = ys[k] - ys[k - 1];
            let s = if d > 0.0 {
                1i8
            } else if d < 0.0 {
                -1
            } else {
                0
            };
            if s != 0 {
                if last_sign != 0 && s != last_sign {
                    changes += 1;
                }
                last_sign = s;
            }
        }
        if changes > 1 {
            return Err(Error::NotUnimodal);
        }
        if changes == 0 {
            return Err(Error::NotUnimodal);
        }
        // Locate the interior extremum by golden-section.
        let kmax = (1..n - 1)
            .max_by(|&a, &b| {
                let fa = ys[a];
                let fb = ys[b];
                let (fa, fb) = if ys[0] > ys[n / 2] {
                    (-fa, -fb)
                } else {
                    (fa, fb)
                };
                fa.partial_cmp(&fb).unwrap()
            })
            .unwrap();
        let maximizing = ys[0] <= ys[n / 2];
        let obj = |x: f64| {
            let v = self.profile_value(x, 0.0);
            if maximizing {
                -v
            } else {
                v
            }
        };
        let (mut a, mut b) = (xs[kmax.saturating_sub(1)], xs[(kmax + 1).min(n - 1)]);
        let phi = 0.5 * (3.0 - 5.0_f64.sqrt());
        let mut x1 = a + phi * (b - a);
        let mut x2 = b - phi * (b - a);
        let mut f1 = obj(x1);
        let mut f2 = obj(x2);
        for _ in 0..200 {
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = a + phi * (b - a);
                f1 = obj(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = b - phi * (b - a);
                f2 = obj(x2);
            }
            if b - a < 1e-14 * (1.0 + a.abs()) {
                break;
            }
        }
        let critical_point = 0.5 * (a + b);
        Ok(Profile1D {
            xs,
            ys,
            critical_point,
            critical_value: self.profile_value(critical_point, 0.0),
        })
    }

    /// Most contracting direction of `DF^m` at `p`: the right singular
    /// direction with the smaller singular value, from the cocycle product
    /// re-orthonormalized every 10 steps.
    pub fn most_contracting_direction(&self, p: Point2, m: usize) -> Result<DirectionEstimate> {
        let orbit = self.iterate(p, m)?;
        let half = (m / 2).max(1);
        let d_half = most_contracting_of_product(&orbit.jacobians[..half])?;
        let d_full = most_contracting_of_product(&orbit.jacobians[..m])?;
        Ok(DirectionEstimate {
            direction: d_full,
            iterates_used: m,
            residual: d_full.angle_to(d_half),
        })
    }

    /// Strong-stable direction estimate: most contracting direction of
    /// `DF^m`, doubling `m` until the angle moves less than `tol`.
    pub fn strong_stable_direction(&self, p: Point2, tol: f64) -> Result<DirectionEstimate> {
        let mut m = 2usize;
        let mut prev: Option<DirectionP> = None;
        let mut max_reached = 0;
        while m <= 4096 {
            let orbit = match self.iterate(p, m) {
                Ok(o) => o,
                Err(Error::EscapedDomain(k)) if k > 2 && prev.is_some() => {
                    return Err(Error::NoConvergence(k))
                }
                Err(e) => return Err(e),
            };
            let dir = most_contracting_of_product(&orbit.jacobians[..m])?;
            if let Some(prev_dir) = prev {
                let res = dir.angle_to(prev_dir);
                if res < tol {
                    return Ok(DirectionEstimate {
                        direction: dir,
                        iterates_used: m,
                        residual: res,
                    });
                }
            }
            prev = Some(dir);
            max_reached = m;
            m *= 2;
        }
        Err(Error::NoConvergence(max_reached))
    }

    /// Center direction estimate: the direction least contracted by
    /// `DF^{-m}`, i.e. the dominant left singular direction of the forward
    /// cocycle along the backward orbit; `m` doubles until the angle
    /// settles below `tol`.
    pub fn center_direction(&self, p: Point2, tol: f64) -> Result<DirectionEstimate> {
        if self.b() == Some(0.0) {
            return Err(Error::NotADiffeomorphism);
        }
        let mut m = 2usize;
        let mut prev: Option<DirectionP> = None;
        let mut max_reached = 0;
        while m <= 4096 {
            let pts = self.backward_orbit(p, m)?;
            // Forward Jacobians along p_{-m}, ..., p_{-1}; their product is
            // DF^m at p_{-m}, mapping onto the tangent space at p.
            let jacs: Vec<Mat2> = pts[1..=m]
                .iter()
                .rev()
                .map(|&q| self.jacobian(q))
                .collect();
            let dir = dominant_left_of_product(&jacs)?;
            if let Some(prev_dir) = prev {
                let res = dir.angle_to(prev_dir);
                if res < tol {
                    return Ok(DirectionEstimate {
                        direction: dir,
                        iterates_used: m,
                        residual: res,
                    });
                }
            }
            prev = Some(dir);
            max_reached = m;
            m *= 2;
        }
        Err(Error::NoConvergence(max_reached))
    }
}

/// Orbit segment with per-step Jacobians and log-determinant prefix sums.
#[derive(Debug, Clone)]
pub struct OrbitSegment {
    points: Vec<Point2>,
    jacobians: Vec<Mat2>,
    log_det_prefix: Vec<f64>,
}

impl OrbitSegment {
    pub fn from_parts(points: Vec<Point2>, jacobians: Vec<Mat2>) -> OrbitSegment {
        let mut log_det_prefix = Vec::with_capacity(points.len());
        log_det_prefix.push(0.0);
        for k in 0..points.len().saturating_sub(1) {
            log_det_prefix.push(log_det_prefix[k] + jacobians[k].det().abs().ln());
        }
        OrbitSegment {
            points,
            jacobians,
            log_det_prefix,
        }
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn jacobians(&self) -> &[Mat2] {
        &self.jacobians
    }

    /// Number of recorded steps `M` (points run `p_0 ... p_M`).
    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }

    /// `log |Jac F^m|` at the base point, for `0 <= m <= M`.
    pub fn log_jacobian(&self, m: usize) -> f64 {
        self.log_det_prefix[m]
    }

    /// `log ||DF^m|_E||` for all `0 <= m <= M` along a fixed direction at
    /// the base point, by normalized sequential application (no overflow).
    pub fn log_norms_along(&self, e0: (f64, f64)) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.points.len());
        out.push(0.0);
        let mut e = normalize(e0);
        let mut acc = 0.0;
        for k in 0..self.steps() {
            let v = self.jacobians[k].mul_vec(e);
            let n = v.0.hypot(v.1);
            acc += n.ln();
            out.push(acc);
            if n == 0.0 {
                // Direction killed (b = 0 kernel); stay at -inf afterwards.
                for _ in k + 1..self.steps() {
                    out.push(f64::NEG_INFINITY);
                }
                break;
            }
            e = (v.0 / n, v.1 / n);
        }
        out
    }

    /// Product `DF^m` at the base point as a normalized matrix and the log
    /// of the applied scale, re-orthonormalizing every 10 steps.
    pub fn scaled_product(&self, m: usize) -> (Mat2, f64) {
        scaled_product(&self.jacobians[..m])
    }
}

/// Direction estimate with its convergence residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionEstimate {
    pub direction: DirectionP,
    pub iterates_used: usize,
    pub residual: f64,
}

/// Sampled 1D profile with its located critical point.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile1D {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub critical_point: f64,
    pub critical_value: f64,
}

fn scaled_product(jacs: &[Mat2]) -> (Mat2, f64) {
    let mut m = Mat2::IDENTITY;
    let mut log_scale = 0.0;
    for (k, j) in jacs.iter().enumerate() {
        m = j.mul(&m);
        if (k + 1) % 10 == 0 {
            let s = m.a.abs().max(m.b.abs()).max(m.c.abs()).max(m.d.abs());
            if s > 0.0 && s.is_finite() {
                m = Mat2::new(m.a / s, m.b / s, m.c / s, m.d / s);
                log_scale += s.ln();
            }
        }
    }
    let s = m.a.abs().max(m.b.abs()).max(m.c.abs()).max(m.d.abs());
    if s > 0.0 && s.is_finite() {
        m = Mat2::new(m.a / s, m.b / s, m.c / s, m.d / s);
        log_scale += s.ln();
    }
    (m, log_scale)
}

/// Most contracting right singular direction of a Jacobian product.
///
/// The dominant right singular direction is numerically stable even for
/// severely ill-conditioned products, and in 2D the contracting direction
/// is exactly its perpendicular.
pub fn most_contracting_of_product(jacs: &[Mat2]) -> Result<DirectionP> {
    let (m, log_scale) = scaled_product(jacs);
    let (s1, s2, v1) = m.svd();
    if s1 <= 0.0 {
        return Err(Error::SingularValueTie);
    }
    // Tie test in log space; log(s2) may be -inf for a singular product.
    let log_s1 = s1.ln() + log_scale;
    let log_s2 = if s2 > 0.0 {
        s2.ln() + log_scale
    } else {
        f64::NEG_INFINITY
    };
    if log_s1 - log_s2 < 1e-9 {
        return Err(Error::SingularValueTie);
    }
    Ok(DirectionP::from_vector(-v1.1, v1.0))
}

/// Dominant left singular direction of a Jacobian product.
pub fn dominant_left_of_product(jacs: &[Mat2]) -> Result<DirectionP> {
    let (m, log_scale) = scaled_product(jacs);
    let (s1, s2, v1t) = m.transpose().svd();
    if s1 <= 0.0 {
        return Err(Error::SingularValueTie);
    }
    let log_s1 = s1.ln() + log_scale;
    let log_s2 = if s2 > 0.0 {
        s2.ln() + log_scale
    } else {
        f64::NEG_INFINITY
    };
    if log_s1 - log_s2 < 1e-9 {
        return Err(Error::SingularValueTie);
    }
    Ok(DirectionP::from_vector(v1t.0, v1t.1))
}

/// First period-doubling parameter of the canonical family: the fixed
/// point `x* = (1+b)/2` has `DF` eigenvalue `-1` at `a = 3(1+b)^2/4`.
pub fn period_doubling_parameter(b: f64) -> f64 {
    0.75 * (1.0 + b) * (1.0 + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_arithmetic() {
        let f = HenonLikeMap::canonical(1.0, 0.3);
        let q = f.apply(Point2::new(0.0, 0.0));
        assert_eq!(q, Point2::new(1.0, 0.0));
        let f = HenonLikeMap::canonical(1.4, 0.3);
        let q = f.apply(Point2::new(1.0, 1.0));
        assert!((q.x - 0.1).abs() < 1e-15 && q.y == 1.0);
    }

    #[test]
    fn iterate_matches_composition() {
        let f = HenonLikeMap::canonical(1.2, 0.2);
        let p = Point2::new(0.3, -0.1);
        let o = f.iterate(p, 2).unwrap();
        let direct = f.apply(f.apply(p));
        assert!(o.points()[2].dist(direct) < 1e-15);
    }

    #[test]
    fn jacobian_det_is_b() {
        let b = 0.3;
        let f = HenonLikeMap::canonical(1.0, b);
        let j = f.jacobian(Point2::new(0.0, 0.0));
        assert_eq!(j, Mat2::new(0.0, -b, 1.0, 0.0));
        for k in 0..100 {
            let p = Point2::new(-2.0 + 0.04 * k as f64, 1.7 - 0.033 * k as f64);
            assert!((f.jacobian(p).det() - b).abs() < 1e-12);
        }
    }

    #[test]
    fn finite_difference_jacobian_close_to_analytic() {
        let a = 1.3;
        let b = 0.25;
        let analytic = HenonLikeMap::canonical(a, b);
        let custom = HenonLikeMap::custom(
            Arc::new(move |x, y| a - x * x - b * y),
            analytic.domain(),
        );
        let mut worst: f64 = 0.0;
        for k in 0..1000 {
            let p = Point2::new(
                -2.0 + 4.0 * ((k * 37) % 1000) as f64 / 999.0,
                -2.0 + 4.0 * ((k * 123) % 1000) as f64 / 999.0,
            );
            let ja = analytic.jacobian(p);
            let jc = custom.jacobian(p);
            worst = worst
                .max((ja.a - jc.a).abs())
                .max((ja.b - jc.b).abs())
                .max((ja.c - jc.c).abs())
                .max((ja.d - jc.d).abs());
        }
        assert!(worst < 1e-6, "finite-difference error {worst}");
    }

    #[test]
    fn profile_is_unimodal_parabola() {
        let f = HenonLikeMap::canonical(2.0, 0.1);
        let p = f.profile_1d(512).unwrap();
        assert!(p.critical_point.abs() < 1e-7);
        assert!((p.critical_value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn monotone_profile_rejected() {
        let f = HenonLikeMap::custom(
            Arc::new(|x, _y| 0.5 * x + 0.1),
            Rect::new(Interval::new(-1.0, 1.0), Interval::new(-1.0, 1.0)),
        );
        assert!(matches!(f.profile_1d(128), Err(Error::NotUnimodal)));
    }

    #[test]
    fn contracting_direction_of_constant_cocycles() {
        let jacs = alloc::vec![Mat2::diag(2.0, 0.5); 7];
        let d = most_contracting_of_product(&jacs).unwrap();
        assert!(d.angle_to(DirectionP::vertical()) < 1e-12);
        let m = Mat2::rotation(core::f64::consts::FRAC_PI_2).mul(&Mat2::diag(2.0, 0.5));
        let jacs = alloc::vec![m; 1];
        let d = most_contracting_of_product(&jacs).unwrap();
        // One factor: right singular directions of the rotated diagonal.
        assert!(d.angle_to(DirectionP::vertical()) < 1e-12);
    }

    #[test]
    fn contracting_direction_matches_dense_svd_oracle() {
        // Hénon orbit of the fixed point; compare against the SVD of the
        // densely accumulated product (scalar-rescaled to avoid overflow).
        let f = HenonLikeMap::canonical(1.4, 0.05);
        // Fixed point: x = a - x^2 - b x.
        let a = 1.4;
        let b = 0.05;
        let x = (-(1.0 + b) + ((1.0 + b) * (1.0 + b) + 4.0 * a).sqrt()) / 2.0;
        let p = Point2::new(x, x);
        let m = 20;
        let est = f.most_contracting_direction(p, m).unwrap();
        let orbit = f.iterate(p, m).unwrap();
        let mut dense = Mat2::IDENTITY;
        let mut scale = 0.0_f64;
        for j in &orbit.jacobians()[..m] {
            dense = j.mul(&dense);
            let s = dense.a.abs().max(dense.b.abs()).max(dense.c.abs()).max(dense.d.abs());
            dense = Mat2::new(dense.a / s, dense.b / s, dense.c / s, dense.d / s);
            scale += s.ln();
        }
        let _ = scale;
        let (_, _, v1) = dense.svd();
        let oracle = DirectionP::from_vector(-v1.1, v1.0);
        assert!(
            est.direction.angle_to(oracle) < 1e-8,
            "angle deviation {}",
            est.direction.angle_to(oracle)
        );
    }

    #[test]
    fn strong_stable_matches_eigendirection_at_fixed_point() {
        let a = 1.4;
        let b = 0.05;
        let f = HenonLikeMap::canonical(a, b);
        let x = (-(1.0 + b) + ((1.0 + b) * (1.0 + b) + 4.0 * a).sqrt()) / 2.0;
        let p = Point2::new(x, x);
        assert!(f.apply(p).dist(p) < 1e-12);
        let est = f.strong_stable_direction(p, 1e-10).unwrap();
        let j = f.jacobian(p);
        let (l1, l2) = j.eigenvalues().unwrap();
        let weak = if l1.abs() < l2.abs() { l1 } else { l2 };
        let v = j.eigenvector(weak);
        let oracle = DirectionP::from_vector(v.0, v.1);
        assert!(est.direction.angle_to(oracle) < 1e-8);
    }

    #[test]
    fn center_direction_matches_expanding_eigendirection_at_fixed_point() {
        let a = 1.4;
        let b = 0.05;
        let f = HenonLikeMap::canonical(a, b);
        let x = (-(1.0 + b) + ((1.0 + b) * (1.0 + b) + 4.0 * a).sqrt()) / 2.0;
        let p = Point2::new(x, x);
        let est = f.center_direction(p, 1e-10).unwrap();
        let j = f.jacobian(p);
        let (l1, _) = j.eigenvalues().unwrap();
        let v = j.eigenvector(l1);
        let oracle = DirectionP::from_vector(v.0, v.1);
        assert!(est.direction.angle_to(oracle) < 1e-8);
    }

    #[test]
    fn center_direction_rejects_degenerate_map() {
        let f = HenonLikeMap::canonical(1.4, 0.0);
        assert_eq!(
            f.center_direction(Point2::new(0.5, 0.5), 1e-8),
            Err(Error::NotADiffeomorphism)
        );
    }

    #[test]
    fn flip_parameter_oracle() {
        assert!((period_doubling_parameter(0.0) - 0.75).abs() < 1e-15);
        assert!((period_doubling_parameter(1.0) - 3.0).abs() < 1e-15);
        // Eigenvalue of DF at the fixed point equals -1 at a_1(b).
        let b = 0.17;
        let a1 = period_doubling_parameter(b);
        let f = HenonLikeMap::canonical(a1, b);
        let x = (1.0 + b) / 2.0;
        let p = Point2::new(x, x);
        assert!(f.apply(p).dist(p) < 1e-12);
        let (l1, l2) = f.jacobian(p).eigenvalues().unwrap();
        let closest = if (l1 + 1.0).abs() < (l2 + 1.0).abs() {
            l1
        } else {
            l2
        };
        assert!((closest + 1.0).abs() < 1e-10);
    }

    #[test]
    fn stable_direction_is_equivariant() {
        let f = HenonLikeMap::canonical(1.3, 0.05);
        let tol = 1e-9;
        // A settled attractor point.
        let mut p = Point2::new(0.1, 0.1);
        for _ in 0..200 {
            p = f.apply(p);
        }
        let e_p = f.strong_stable_direction(p, tol).unwrap();
        let e_fp = f.strong_stable_direction(f.apply(p), tol).unwrap();
        let pushed = f.jacobian(p).mul_vec(e_p.direction.unit());
        let pushed_dir = DirectionP::from_vector(pushed.0, pushed.1);
        assert!(pushed_dir.angle_to(e_fp.direction) < 2.0 * tol.max(e_p.residual + e_fp.residual));
    }
}
