//! Vertical-graph fits of curves in chart coordinates.

use alloc::vec::Vec;

use super::{Chart, Curve};
use crate::error::{Error, Result};
#[allow(unused_imports)]
use crate::math::FloatExt as _;

/// Derivative-root tolerance for quadratic critical points.
pub const GRAD_TOL: f64 = 1e-8;
/// Smallest accepted quadratic curvature.
pub const CURV_FLOOR: f64 = 1e-6;

/// A curve fitted as a vertical graph `x = g(y)` in chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphFit {
    /// Ordinates (graph parameter), strictly increasing.
    pub params: Vec<f64>,
    /// Function values `g(param)`.
    pub g_values: Vec<f64>,
    /// `sup |g'|`: the `t` of t-verticality (0 exactly for a vertical leaf).
    pub sup_deriv: f64,
    /// `sup |g|`.
    pub sup_norm: f64,
    /// Quadratic critical point of `g`, when requested and present.
    pub crit_point: Option<f64>,
    /// `g''` at the critical point, when present.
    pub curvature: Option<f64>,
}

impl GraphFit {
    /// Value of the fitted graph by linear interpolation.
    pub fn eval(&self, y: f64) -> f64 {
        let n = self.params.len();
        let y = y.clamp(self.params[0], self.params[n - 1]);
        let k = match self
            .params
            .binary_search_by(|c| c.partial_cmp(&y).unwrap())
        {
            Ok(k) => return self.g_values[k],
            Err(k) => k.clamp(1, n - 1),
        };
        let w = (y - self.params[k - 1]) / (self.params[k] - self.params[k - 1]);
        self.g_values[k - 1] + (self.g_values[k] - self.g_values[k - 1]) * w
    }

    /// Sampled derivative: centered in the interior, second-order one-sided
    /// at the ends (exact on quadratics).
    pub fn derivative_samples(&self) -> Vec<f64> {
        derivative_samples(&self.params, &self.g_values)
    }
}

fn derivative_samples(y: &[f64], g: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut d = Vec::with_capacity(n);
    for k in 0..n {
        let v = if k == 0 {
            one_sided(y[0], y[1], y[2], g[0], g[1], g[2])
        } else if k == n - 1 {
            one_sided(y[n - 1], y[n - 2], y[n - 3], g[n - 1], g[n - 2], g[n - 3])
        } else {
            centered(y[k - 1], y[k], y[k + 1], g[k - 1], g[k], g[k + 1])
        };
        d.push(v);
    }
    d
}

/// Derivative at `y0` from the quadratic through three points (y0 nearest).
fn one_sided(y0: f64, y1: f64, y2: f64, g0: f64, g1: f64, g2: f64) -> f64 {
    let h1 = y1 - y0;
    let h2 = y2 - y0;
    // g(y) ~ g0 + a (y-y0) + b (y-y0)^2; solve for a.
    let det = h1 * h2 * h2 - h2 * h1 * h1;
    ((g1 - g0) * h2 * h2 - (g2 - g0) * h1 * h1) / det
}

/// Centered three-point derivative on a possibly nonuniform grid.
fn centered(ym: f64, y0: f64, yp: f64, gm: f64, g0: f64, gp: f64) -> f64 {
    let hm = y0 - ym;
    let hp = yp - y0;
    (gp * hm * hm - gm * hp * hp + g0 * (hp * hp - hm * hm)) / (hm * hp * (hm + hp))
}

/// Fits the chart image of a curve as a vertical graph `x = g(y)` and
/// reports `sup |g'|` (the `t` of t-verticality).
pub fn fit_vertical_graph(curve: &Curve, chart: &Chart) -> Result<GraphFit> {
    let image = chart.apply_curve(curve)?;
    fit_graph(image.samples().iter().map(|p| (p.y, p.x)))
}

/// Fits the chart image of a curve as a horizontal graph `y = g(x)`.
pub fn fit_horizontal_graph(curve: &Curve, chart: &Chart) -> Result<GraphFit> {
    let image = chart.apply_curve(curve)?;
    fit_graph(image.samples().iter().map(|p| (p.x, p.y)))
}

/// Shared graph fit over (parameter, value) samples.
fn fit_graph(points: impl Iterator<Item = (f64, f64)>) -> Result<GraphFit> {
    let pts: Vec<(f64, f64)> = points.collect();
    if pts.len() < 3 {
        return Err(Error::DegenerateCurve);
    }
    // Orientation: the graph parameter must be strictly monotone.
    let ascending = pts[pts.len() - 1].0 > pts[0].0;
    let mut params = Vec::with_capacity(pts.len());
    let mut g_values = Vec::with_capacity(pts.len());
    let iter: Vec<_> = if ascending {
        pts.iter().copied().collect()
    } else {
        pts.iter().rev().copied().collect()
    };
    let span = (iter[iter.len() - 1].0 - iter[0].0).abs().max(1e-300);
    let graph_tol = 1e-12 * span.max(1.0);
    for (t, x) in iter {
        if let Some(&last) = params.last() {
            if t <= last {
                // Two samples at (numerically) the same parameter: a graph
                // only if the values agree too.
                let x_prev: f64 = *g_values.last().unwrap();
                if (t - last).abs() <= graph_tol && (x - x_prev).abs() <= 1e-9 {
                    continue;
                }
                return Err(Error::NotAGraph);
            }
        }
        params.push(t);
        g_values.push(x);
    }
    if params.len() < 3 {
        return Err(Error::NotAGraph);
    }
    let mean_x = g_values.iter().sum::<f64>() / g_values.len() as f64;
    let x_var = g_values
        .iter()
        .map(|x| (x - mean_x) * (x - mean_x))
        .sum::<f64>()
        / g_values.len() as f64;
    let sup_norm = g_values.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let sup_deriv = if x_var < 1e-24 {
        // Vertical leaf: x-variance below noise means t = 0 exactly.
        0.0
    } else {
        derivative_samples(&params, &g_values)
            .iter()
            .fold(0.0_f64, |m, d| m.max(d.abs()))
    };
    Ok(GraphFit {
        params,
        g_values,
        sup_deriv,
        sup_norm,
        crit_point: None,
        curvature: None,
    })
}

/// Fits the curve as a vertical graph and extracts its quadratic critical
/// point: the root of `g'` (bracketed by a sign change) and the curvature
/// `g''` from a 5-point local quadratic fit.
pub fn valuable_curvature(curve: &Curve, chart: &Chart) -> Result<GraphFit> {
    let mut fit = fit_vertical_graph(curve, chart)?;
    if fit.sup_deriv == 0.0 {
        return Err(Error::NoQuadraticCritical);
    }
    let d = fit.derivative_samples();
    let n = d.len();
    let mut bracket = None;
    for k in 0..n - 1 {
        if d[k] == 0.0 && k > 0 {
            bracket = Some((k.saturating_sub(1), k + 1));
            break;
        }
        if d[k] * d[k + 1] < 0.0 {
            bracket = Some((k, k + 1));
            break;
        }
    }
    let (k0, k1) = bracket.ok_or(Error::NoQuadraticCritical)?;
    // Root of the interpolated derivative.
    let (mut ya, mut yb) = (fit.params[k0], fit.params[k1]);
    let (mut da, db) = (d[k0], d[k1]);
    if da == 0.0 {
        yb = ya;
    } else if db != 0.0 {
        let interp_d = |y: f64| -> f64 {
            // Linear interpolation of the derivative samples.
            let mut k = k0;
            while k + 1 < n && fit.params[k + 1] < y {
                k += 1;
            }
            let w = (y - fit.params[k]) / (fit.params[k + 1] - fit.params[k]);
            d[k] + (d[k + 1] - d[k]) * w
        };
        for _ in 0..80 {
            let ym = 0.5 * (ya + yb);
            let dm = interp_d(ym);
            if dm == 0.0 || (yb - ya).abs() < 1e-15 * (1.0 + ym.abs()) {
                ya = ym;
                yb = ym;
                break;
            }
            if dm * da < 0.0 {
                yb = ym;
            } else {
                ya = ym;
                da = dm;
            }
        }
    }
    let c = 0.5 * (ya + yb);
    // 5-point local quadratic least-squares fit around the critical point.
    let kc = nearest_index(&fit.params, c);
    let lo = kc.saturating_sub(2).min(n - 5);
    let idx: Vec<usize> = (lo..lo + 5).collect();
    let (beta, gamma) = local_quadratic(&fit.params, &fit.g_values, &idx, c);
    let kappa = 2.0 * gamma;
    if kappa.abs() < CURV_FLOOR {
        return Err(Error::NoQuadraticCritical);
    }
    // Consistency: the fitted derivative at the root must be tiny.
    let refined_c = c - beta / kappa;
    let d_at_c = beta + kappa * (refined_c - c);
    if d_at_c.abs() > GRAD_TOL.max(1e-8 * fit.sup_deriv) {
        return Err(Error::NoQuadraticCritical);
    }
    fit.crit_point = Some(refined_c);
    fit.curvature = Some(kappa);
    Ok(fit)
}

fn nearest_index(ys: &[f64], y: f64) -> usize {
    match ys.binary_search_by(|c| c.partial_cmp(&y).unwrap()) {
        Ok(k) => k,
        Err(k) => {
            if k == 0 {
                0
            } else if k >= ys.len() {
                ys.len() - 1
            } else if y - ys[k - 1] < ys[k] - y {
                k - 1
            } else {
                k
            }
        }
    }
}

/// Least-squares fit `g ~ alpha + beta (y - c) + gamma (y - c)^2` over the
/// given sample indices; returns `(beta, gamma)`.
fn local_quadratic(ys: &[f64], gs: &[f64], idx: &[usize], c: f64) -> (f64, f64) {
    let mut s = [0.0_f64; 5];
    let mut b = [0.0_f64; 3];
    for &k in idx {
        let t = ys[k] - c;
        let mut tp = 1.0;
        for (j, sj) in s.iter_mut().enumerate() {
            *sj += tp;
            if j < 4 {
                tp *= t;
            }
        }
        b[0] += gs[k];
        b[1] += gs[k] * t;
        b[2] += gs[k] * t * t;
    }
    // Solve the 3x3 normal equations by Gaussian elimination.
    let mut a = [
        [s[0], s[1], s[2], b[0]],
        [s[1], s[2], s[3], b[1]],
        [s[2], s[3], s[4], b[2]],
    ];
    for col in 0..3 {
        let mut piv = col;
        for r in col + 1..3 {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        a.swap(col, piv);
        for r in 0..3 {
            if r != col && a[col][col] != 0.0 {
                let f = a[r][col] / a[col][col];
                for cc in col..4 {
                    a[r][cc] -= f * a[col][cc];
                }
            }
        }
    }
    let beta = a[1][3] / a[1][1];
    let gamma = a[2][3] / a[2][2];
    (beta, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Interval, Point2, Rect};

    fn chart() -> Chart {
        Chart::identity(
            Rect::new(Interval::new(-4.0, 4.0), Interval::new(-4.0, 4.0)),
            17,
        )
    }

    #[test]
    fn vertical_segment_is_a_leaf() {
        let c = Curve::segment(Point2::new(0.5, -1.0), Point2::new(0.5, 1.0), 65).unwrap();
        let fit = fit_vertical_graph(&c, &chart()).unwrap();
        assert_eq!(fit.sup_deriv, 0.0);
    }

    #[test]
    fn slanted_line_slope() {
        let c = Curve::from_fn(-1.0, 1.0, 65, |y| Point2::new(0.5 * y, y)).unwrap();
        let fit = fit_vertical_graph(&c, &chart()).unwrap();
        assert!((fit.sup_deriv - 0.5).abs() < 1e-12);
    }

    #[test]
    fn parabola_sup_slope() {
        let c = Curve::from_fn(-1.0, 1.0, 65, |y| Point2::new(y * y, y)).unwrap();
        let fit = fit_vertical_graph(&c, &chart()).unwrap();
        assert!((fit.sup_deriv - 2.0).abs() < 1e-12);
    }

    #[test]
    fn horizontal_curve_is_not_a_graph() {
        let c = Curve::segment(Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0), 65).unwrap();
        assert_eq!(fit_vertical_graph(&c, &chart()), Err(Error::NotAGraph));
    }

    #[test]
    fn curvature_of_parabola() {
        let c = Curve::from_fn(-1.0, 1.0, 65, |y| Point2::new(y * y, y)).unwrap();
        let fit = valuable_curvature(&c, &chart()).unwrap();
        assert!(fit.crit_point.unwrap().abs() < 1e-10);
        assert!((fit.curvature.unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn curvature_of_quartic_perturbation() {
        let c = Curve::from_fn(-1.0, 1.0, 257, |y| Point2::new(3.0 * y * y + y.powi(4), y))
            .unwrap();
        let fit = valuable_curvature(&c, &chart()).unwrap();
        assert!(fit.crit_point.unwrap().abs() < 1e-8);
        assert!((fit.curvature.unwrap() - 6.0).abs() < 1e-3);
    }

    #[test]
    fn straight_leaf_has_no_quadratic_critical() {
        let c = Curve::segment(Point2::new(0.2, -1.0), Point2::new(0.2, 1.0), 65).unwrap();
        assert_eq!(valuable_curvature(&c, &chart()), Err(Error::NoQuadraticCritical));
    }

    #[test]
    fn curvature_chart_covariance() {
        // Scaling the chart target vertically by s multiplies kappa by 1/s^2.
        let c = Curve::from_fn(-1.0, 1.0, 129, |y| Point2::new(y * y, y)).unwrap();
        let s = 2.5;
        let scaled = Chart::from_fn(
            17,
            Rect::new(Interval::new(-4.0, 4.0), Interval::new(-4.0 * s, 4.0 * s)),
            Point2::new(0.0, 0.0),
            |u, v| Ok(Point2::new(u, v / s)),
        )
        .unwrap();
        let base = valuable_curvature(&c, &chart()).unwrap();
        let tilted = valuable_curvature(&c, &scaled).unwrap();
        let expected = base.curvature.unwrap() / (s * s);
        let got = tilted.curvature.unwrap();
        assert!(
            ((got - expected) / expected).abs() < 1e-6,
            "covariance failed: {got} vs {expected}"
        );
    }
}
