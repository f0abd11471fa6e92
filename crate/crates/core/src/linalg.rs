//! Hand-rolled 2x2 linear algebra for derivative cocycles.

#[allow(unused_imports)]
use crate::math::FloatExt as _;

/// Row-major 2x2 real matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    #[inline]
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    #[inline]
    pub fn diag(a: f64, d: f64) -> Mat2 {
        Mat2::new(a, 0.0, 0.0, d)
    }

    /// Counterclockwise rotation by `theta` radians.
    pub fn rotation(theta: f64) -> Mat2 {
        let (s, c) = (theta.sin(), theta.cos());
        Mat2::new(c, -s, s, c)
    }

    #[inline]
    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    #[inline]
    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(Mat2::new(
            self.d / det,
            -self.b / det,
            -self.c / det,
            self.a / det,
        ))
    }

    #[inline]
    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }

    #[inline]
    pub fn mul_vec(&self, v: (f64, f64)) -> (f64, f64) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        self.svd().0
    }

    /// Singular values and principal right singular direction.
    ///
    /// Returns `(sigma1, sigma2, v1)` with `sigma1 >= sigma2 >= 0` and `v1`
    /// a unit vector. `sigma2` is recovered from the determinant, which
    /// stays accurate even when the matrix is severely ill-conditioned.
    pub fn svd(&self) -> (f64, f64, (f64, f64)) {
        let m = self.transpose().mul(self);
        let p = m.a;
        let q = m.b;
        let r = m.d;
        let tr = p + r;
        let gap = ((p - r) * (p - r) + 4.0 * q * q).sqrt();
        let lam1 = 0.5 * (tr + gap);
        let sigma1 = lam1.max(0.0).sqrt();
        let sigma2 = if sigma1 > 0.0 {
            self.det().abs() / sigma1
        } else {
            0.0
        };
        // Eigenvector of M for lam1; pick the formula with the larger residue.
        let cand1 = (q, lam1 - p);
        let cand2 = (lam1 - r, q);
        let n1 = cand1.0.hypot(cand1.1);
        let n2 = cand2.0.hypot(cand2.1);
        let v1 = if n1 >= n2 {
            if n1 == 0.0 {
                (1.0, 0.0)
            } else {
                (cand1.0 / n1, cand1.1 / n1)
            }
        } else {
            (cand2.0 / n2, cand2.1 / n2)
        };
        (sigma1, sigma2, v1)
    }

    /// Real eigenvalues sorted by decreasing modulus, if they exist.
    pub fn eigenvalues(&self) -> Option<(f64, f64)> {
        let tr = self.a + self.d;
        let det = self.det();
        let disc = tr * tr - 4.0 * det;
        if disc < 0.0 {
            return None;
        }
        let s = disc.sqrt();
        let l1 = 0.5 * (tr + s);
        let l2 = 0.5 * (tr - s);
        if l1.abs() >= l2.abs() {
            Some((l1, l2))
        } else {
            Some((l2, l1))
        }
    }

    /// Unit eigenvector for the given real eigenvalue.
    pub fn eigenvector(&self, lambda: f64) -> (f64, f64) {
        // (A - lambda I) v = 0; pick the row with the larger norm.
        let r1 = (self.a - lambda, self.b);
        let r2 = (self.c, self.d - lambda);
        let (rx, ry) = if r1.0.hypot(r1.1) >= r2.0.hypot(r2.1) {
            r1
        } else {
            r2
        };
        let n = rx.hypot(ry);
        if n == 0.0 {
            return (1.0, 0.0);
        }
        (-ry / n, rx / n)
    }
}

pub fn normalize(v: (f64, f64)) -> (f64, f64) {
    let n = v.0.hypot(v.1);
    if n == 0.0 {
        (1.0, 0.0)
    } else {
        (v.0 / n, v.1 / n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svd_of_diagonal() {
        let (s1, s2, v1) = Mat2::diag(2.0, 0.5).svd();
        assert!((s1 - 2.0).abs() < 1e-14);
        assert!((s2 - 0.5).abs() < 1e-14);
        assert!(v1.0.abs() > 0.999);
    }

    #[test]
    fn svd_small_singular_value_from_det() {
        // sigma2 = |det|/sigma1 survives conditioning that would destroy
        // the direct eigenvalue subtraction.
        let m = Mat2::new(1e8, 0.0, 0.0, 1e-8);
        let (s1, s2, _) = m.svd();
        assert!((s1 - 1e8).abs() / 1e8 < 1e-12);
        assert!((s2 - 1e-8).abs() / 1e-8 < 1e-12);
    }

    #[test]
    fn eigen_pair() {
        let m = Mat2::new(3.0, 1.0, 0.0, 0.5);
        let (l1, l2) = m.eigenvalues().unwrap();
        assert!((l1 - 3.0).abs() < 1e-14 && (l2 - 0.5).abs() < 1e-14);
        let v = m.eigenvector(3.0);
        let mv = m.mul_vec(v);
        assert!((mv.0 - 3.0 * v.0).abs() < 1e-12 && (mv.1 - 3.0 * v.1).abs() < 1e-12);
    }
}
