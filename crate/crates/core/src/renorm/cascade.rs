//! Period-doubling cascade: flip and superstable parameters of the
//! canonical family.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::henon::{period_doubling_parameter, HenonLikeMap};
use crate::linalg::Mat2;
use crate::math::FloatExt as _;

/// One cascade depth: flip parameter `a_n`, superstable parameter `s_n`
/// and the ordinate of the superstable orbit point on the critical line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeEntry {
    pub n: usize,
    /// Parameter where the period-2^{n-1} orbit flips (eigenvalue -1).
    pub flip_a: f64,
    /// Parameter where the critical orbit is periodic of period 2^n.
    pub superstable_a: f64,
    /// `y` such that `(0, y)` lies on the superstable cycle.
    pub orbit_y: f64,
}

/// Cascade parameters up to the first failing depth.
#[derive(Debug, Clone, PartialEq)]
pub struct Cascade {
    pub b: f64,
    pub entries: Vec<CascadeEntry>,
    /// Depth at which bracketing failed, when the cascade is partial.
    pub failed_at: Option<usize>,
}

impl Cascade {
    pub fn superstable(&self, n: usize) -> Option<f64> {
        self.entries.get(n - 1).map(|e| e.superstable_a)
    }

    /// Feigenbaum ratio estimates `(s_n - s_{n-1}) / (s_{n+1} - s_n)`.
    pub fn delta_estimates(&self) -> Vec<(usize, f64)> {
        let s: Vec<f64> = self.entries.iter().map(|e| e.superstable_a).collect();
        let mut out = Vec::new();
        for n in 1..s.len().saturating_sub(1) {
            out.push((n + 1, (s[n] - s[n - 1]) / (s[n + 1] - s[n])));
        }
        out
    }
}

/// Orbit of `(0, y)` under the canonical map with tangents with respect to
/// `y`; after `m` steps the state is `(x_m, x_{m-1})` and the tangent is
/// `(dx_m/dy, dx_{m-1}/dy)`.
fn orbit_from_critical_line(a: f64, b: f64, y: f64, steps: usize) -> Option<(Point2, (f64, f64))> {
    let mut p = Point2::new(0.0, y);
    let mut v = (0.0_f64, 1.0_f64);
    for _ in 0..steps {
        if p.x.abs() > 1e3 || p.y.abs() > 1e3 {
            return None;
        }
        let jac = Mat2::new(-2.0 * p.x, -b, 1.0, 0.0);
        v = jac.mul_vec(v);
        p = Point2::new(a - p.x * p.x - b * p.y, p.x);
    }
    Some((p, v))
}

/// Solves the closure ordinate: `y` with `x_{R-1}(0, y) = y`, by Newton
/// with a bisection fallback.
fn solve_orbit_y(a: f64, b: f64, period: usize, seed: f64) -> Option<f64> {
    if b == 0.0 {
        // Degenerate family: the ordinate is slaved to the 1D orbit.
        return orbit_from_critical_line(a, 0.0, 0.0, period).map(|(p, _)| p.y);
    }
    let rho = |y: f64| orbit_from_critical_line(a, b, y, period).map(|(p, _)| p.y - y);
    let mut y = seed;
    for _ in 0..60 {
        let (p, v) = orbit_from_critical_line(a, b, y, period)?;
        let r = p.y - y;
        if r.abs() < 1e-13 {
            return Some(y);
        }
        let dr = v.1 - 1.0;
        if dr.abs() < 1e-12 {
            break;
        }
        let step = (-r / dr).clamp(-0.5, 0.5);
        y += step;
        if step.abs() < 1e-16 {
            break;
        }
    }
    if let Some(r) = rho(y) {
        if r.abs() < 1e-10 {
            return Some(y);
        }
    }
    // Bisection fallback around the seed.
    let mut lo = seed - 0.5;
    let mut hi = seed + 0.5;
    let mut flo = rho(lo)?;
    let fhi = rho(hi)?;
    if flo * fhi > 0.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = rho(mid)?;
        if fm == 0.0 || hi - lo < 1e-15 {
            return Some(mid);
        }
        if fm * flo < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Signed superstable functional: the abscissa of the orbit of the
/// critical line after one full period, at the closure ordinate.
fn superstable_functional(a: f64, b: f64, period: usize) -> Option<f64> {
    let seed = orbit_from_critical_line(a, 0.0, 0.0, period)?.0.y;
    let y = solve_orbit_y(a, b, period, seed)?;
    orbit_from_critical_line(a, b, y, period).map(|(p, _)| p.x)
}

fn bisect_superstable(b: f64, period: usize, lo: f64, hi: f64) -> Option<(f64, f64)> {
    let f = |a: f64| superstable_functional(a, b, period);
    // Scan for a sign change, then bisect.
    let scan = 64;
    let mut bracket = None;
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..=scan {
        let a = lo + (hi - lo) * (k as f64) / (scan as f64);
        let Some(v) = f(a) else {
            prev = None;
            continue;
        };
        if let Some((pa, pv)) = prev {
            if pv == 0.0 {
                bracket = Some((pa, pa));
                break;
            }
            if pv * v < 0.0 {
                bracket = Some((pa, a));
                break;
            }
        }
        prev = Some((a, v));
    }
    let (mut lo, mut hi) = bracket?;
    let mut flo = f(lo)?;
    for _ in 0..200 {
        if hi - lo < f64::EPSILON * (1.0 + hi.abs()) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if fm * flo < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    let a = 0.5 * (lo + hi);
    let seed = orbit_from_critical_line(a, 0.0, 0.0, period)?.0.y;
    let y = solve_orbit_y(a, b, period, seed)?;
    Some((a, y))
}

/// Newton solve for a period-`m` point of the canonical map near `seed`.
fn periodic_point(a: f64, b: f64, m: usize, seed: Point2) -> Option<Point2> {
    let map = HenonLikeMap::canonical(a, b);
    let mut p = seed;
    for _ in 0..80 {
        let mut q = p;
        let mut dm = Mat2::IDENTITY;
        for _ in 0..m {
            if q.x.abs() > 1e3 || q.y.abs() > 1e3 {
                return None;
            }
            dm = map.jacobian(q).mul(&dm);
            q = map.apply(q);
        }
        let g = q - p;
        if g.norm() < 1e-13 {
            return Some(p);
        }
        let j = Mat2::new(dm.a - 1.0, dm.b, dm.c, dm.d - 1.0);
        let inv = j.inverse()?;
        let (sx, sy) = inv.mul_vec((-g.x, -g.y));
        p = Point2::new(p.x + sx.clamp(-0.2, 0.2), p.y + sy.clamp(-0.2, 0.2));
    }
    None
}

/// Leading multiplier of the period-`m` orbit through `p`; complex pairs
/// are reported as `-|mu|` (they occur only deep inside the stable window).
fn leading_multiplier(a: f64, b: f64, m: usize, p: Point2) -> f64 {
    let map = HenonLikeMap::canonical(a, b);
    let mut q = p;
    let mut dm = Mat2::IDENTITY;
    for _ in 0..m {
        dm = map.jacobian(q).mul(&dm);
        q = map.apply(q);
    }
    match dm.eigenvalues() {
        Some((l1, _)) => l1,
        None => -(dm.det().abs().sqrt()),
    }
}

/// Flip parameter of the period-`m` orbit: multiplier passes through -1.
/// Bisects on `[lo, hi]` with the orbit continued from `seed`.
fn bisect_flip(b: f64, m: usize, lo: f64, hi: f64, seed: Point2) -> Option<f64> {
    let eval = |a: f64, seed: Point2| -> Option<(f64, Point2)> {
        let p = periodic_point(a, b, m, seed)?;
        Some((leading_multiplier(a, b, m, p) + 1.0, p))
    };
    let (mut flo, mut seed_lo) = eval(lo, seed)?;
    let (fhi, _) = eval(hi, seed)?;
    if flo * fhi > 0.0 {
        return None;
    }
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..200 {
        if hi - lo < f64::EPSILON * (1.0 + hi.abs()) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let (fm, pm) = eval(mid, seed_lo)?;
        if fm == 0.0 {
            return Some(mid);
        }
        if fm * flo < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
            seed_lo = pm;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Computes flip and superstable parameters for depths `1..=n_max`.
///
/// Superstable parameters solve "the orbit of the critical line closes up
/// with period 2^n" by bisection on a signed distance functional; flip
/// parameters track the leading multiplier of the period-2^{n-1} orbit
/// through -1. On bracketing failure the cascade is returned up to the
/// last good depth with `failed_at` set.
pub fn find_cascade(b: f64, n_max: usize) -> Cascade {
    let mut entries: Vec<CascadeEntry> = Vec::new();
    let mut failed_at = None;
    let delta_guess = 4.669;
    for n in 1..=n_max {
        let period = 1usize << n;
        let result = (|| -> Option<CascadeEntry> {
            let (lo, hi, flip_a) = if n == 1 {
                let flip = period_doubling_parameter(b);
                // s_1 = (1+b)^2 exactly; bracket generously around it.
                let s1 = (1.0 + b) * (1.0 + b);
                (0.7 * s1, 1.3 * s1 + 0.05, flip)
            } else {
                let prev = entries[n - 2];
                let gap = if n == 2 {
                    prev.superstable_a - prev.flip_a
                } else {
                    prev.superstable_a - entries[n - 3].superstable_a
                };
                let step = (gap / delta_guess).abs().max(1e-14);
                let guess = prev.superstable_a + step;
                let lo = prev.superstable_a + 0.05 * step;
                let hi = guess + 2.5 * step;
                // Flip of the period-2^{n-1} orbit sits in (s_{n-1}, s_n);
                // continue that orbit from the superstable cycle point.
                let seed = Point2::new(0.0, prev.orbit_y);
                let flip_a = bisect_flip(b, period / 2, prev.superstable_a, hi, seed)?;
                (lo, hi, flip_a)
            };
            let (a, y) = bisect_superstable(b, period, lo, hi)?;
            Some(CascadeEntry {
                n,
                flip_a,
                superstable_a: a,
                orbit_y: y,
            })
        })();
        match result {
            Some(e) => entries.push(e),
            None => {
                failed_at = Some(n);
                break;
            }
        }
    }
    Cascade {
        b,
        entries,
        failed_at,
    }
}

/// Convenience: superstable parameters only, or the bracketing error.
pub fn superstable_parameters(b: f64, n_max: usize) -> Result<Vec<f64>> {
    let c = find_cascade(b, n_max);
    match c.failed_at {
        Some(n) => Err(Error::BisectionFailed(n)),
        None => Ok(c.entries.iter().map(|e| e.superstable_a).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent 1D oracle: superstable parameters of `x -> a - x^2` by
    /// brute-force bisection of `f_a^{2^n}(0)`.
    fn oracle_1d(n_max: usize) -> Vec<f64> {
        let f = |a: f64, period: usize| -> f64 {
            let mut x = 0.0_f64;
            for _ in 0..period {
                x = a - x * x;
            }
            x
        };
        let mut out: Vec<f64> = Vec::new();
        for n in 1..=n_max {
            let period = 1usize << n;
            let (mut lo, mut hi) = if n == 1 {
                (0.8, 1.2)
            } else {
                let prev = out[n - 2];
                let gap = if n == 2 { 0.3 } else { out[n - 2] - out[n - 3] };
                (prev + 0.01 * gap / 4.669, prev + 2.0 * gap / 4.669)
            };
            // Scan then bisect the sign change nearest to lo.
            let mut bracket = None;
            let scan = 256;
            let mut prev_v: Option<(f64, f64)> = None;
            for k in 0..=scan {
                let a = lo + (hi - lo) * (k as f64) / (scan as f64);
                let v = f(a, period);
                if let Some((pa, pv)) = prev_v {
                    if pv * v <= 0.0 {
                        bracket = Some((pa, a));
                        break;
                    }
                }
                prev_v = Some((a, v));
            }
            let (la, lb) = bracket.expect("oracle bracket");
            lo = la;
            hi = lb;
            let mut flo = f(lo, period);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid, period);
                if fm == 0.0 || hi - lo < 1e-15 {
                    break;
                }
                if fm * flo < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        out
    }

    #[test]
    fn degenerate_first_entries() {
        let c = find_cascade(0.0, 2);
        assert!(c.failed_at.is_none());
        assert!((c.entries[0].flip_a - 0.75).abs() < 1e-12);
        assert!((c.entries[0].superstable_a - 1.0).abs() < 1e-10);
    }

    #[test]
    fn superstable_closed_form_s1() {
        // s_1 = (1+b)^2 for the canonical family.
        for &b in &[0.0, 0.05, 0.2, 0.3] {
            let c = find_cascade(b, 1);
            assert!(
                (c.entries[0].superstable_a - (1.0 + b) * (1.0 + b)).abs() < 1e-9,
                "b={b}"
            );
        }
    }

    #[test]
    fn matches_1d_oracle_at_b_zero() {
        let n_max = 7;
        let c = find_cascade(0.0, n_max);
        assert!(c.failed_at.is_none(), "cascade failed at {:?}", c.failed_at);
        let oracle = oracle_1d(n_max);
        for (e, o) in c.entries.iter().zip(&oracle) {
            assert!(
                (e.superstable_a - o).abs() < 1e-8,
                "depth {}: {} vs oracle {}",
                e.n,
                e.superstable_a,
                o
            );
        }
        // Accumulation estimate and delta ratio.
        let s = &c.entries;
        let a_inf = s[n_max - 1].superstable_a;
        assert!((a_inf - 1.4012).abs() < 1e-3, "a_inf estimate {a_inf}");
        let d = c.delta_estimates();
        let (n, d6) = *d.last().unwrap();
        assert_eq!(n, 6);
        assert!((4.4..=4.9).contains(&d6), "delta_6 = {d6}");
    }

    #[test]
    fn dissipative_cascade_runs() {
        let c = find_cascade(0.05, 5);
        assert!(c.failed_at.is_none());
        // Parameters increase and gaps shrink.
        for w in c.entries.windows(2) {
            assert!(w[1].superstable_a > w[0].superstable_a);
            assert!(w[1].flip_a > w[0].flip_a);
            assert!(w[0].flip_a < w[0].superstable_a);
        }
    }

    #[test]
    fn flip_multiplier_is_minus_one() {
        let b = 0.05;
        let c = find_cascade(b, 3);
        // At a_2, the period-2 orbit has multiplier -1.
        let a2 = c.entries[1].flip_a;
        let seed = Point2::new(0.0, c.entries[0].orbit_y);
        let p = periodic_point(a2, b, 2, seed).unwrap();
        let mu = leading_multiplier(a2, b, 2, p);
        assert!((mu + 1.0).abs() < 1e-7, "multiplier {mu}");
    }
}
