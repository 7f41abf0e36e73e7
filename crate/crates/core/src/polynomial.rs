//! Cubic scalar profiles `phi(u)` used as the `u`-dependence of every flux.
//!
//! All interval bounds (extrema, derivative maxima) are exact: they are taken
//! over the interval endpoints and the interior critical points.

use crate::error::{Error, Result};

/// Polynomial of degree at most three, `c0 + c1 u + c2 u^2 + c3 u^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polynomial {
    coeffs: [f64; 4],
}

impl Polynomial {
    pub const ZERO: Polynomial = Polynomial { coeffs: [0.0; 4] };

    /// Builds from ascending coefficients; at most four are accepted.
    pub fn new(coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() > 4 {
            return Err(Error::InvalidFlux(format!(
                "profiles are limited to degree 3, got {} coefficients",
                coeffs.len()
            )));
        }
        let mut c = [0.0; 4];
        for (dst, &src) in c.iter_mut().zip(coeffs) {
            if !src.is_finite() {
                return Err(Error::InvalidFlux(format!("non-finite coefficient {src}")));
            }
            *dst = src;
        }
        Ok(Self { coeffs: c })
    }

    pub const fn from_array(coeffs: [f64; 4]) -> Self {
        Self { coeffs }
    }

    /// `u`
    pub const fn linear(speed: f64) -> Self {
        Self::from_array([0.0, speed, 0.0, 0.0])
    }

    /// Burgers potential `u^2 / 2`.
    pub const fn burgers() -> Self {
        Self::from_array([0.0, 0.0, 0.5, 0.0])
    }

    pub fn coeffs(&self) -> [f64; 4] {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        let [c0, c1, c2, c3] = self.coeffs;
        c0 + u * (c1 + u * (c2 + u * c3))
    }

    #[inline]
    pub fn deriv(&self, u: f64) -> f64 {
        let [_, c1, c2, c3] = self.coeffs;
        c1 + u * (2.0 * c2 + u * 3.0 * c3)
    }

    #[inline]
    pub fn second_deriv(&self, u: f64) -> f64 {
        let [_, _, c2, c3] = self.coeffs;
        2.0 * c2 + 6.0 * c3 * u
    }

    /// `phi'` as a polynomial.
    pub fn derivative(&self) -> Self {
        let [_, c1, c2, c3] = self.coeffs;
        Self::from_array([c1, 2.0 * c2, 3.0 * c3, 0.0])
    }

    pub fn scaled(&self, w: f64) -> Self {
        let mut c = self.coeffs;
        for x in &mut c {
            *x *= w;
        }
        Self { coeffs: c }
    }

    /// `self + w * other`
    pub fn add_scaled(&self, other: &Polynomial, w: f64) -> Self {
        let mut c = self.coeffs;
        for (x, y) in c.iter_mut().zip(other.coeffs) {
            *x += w * y;
        }
        Self { coeffs: c }
    }

    /// `max |phi'|` over `[lo, hi]` (arguments may come in either order).
    pub fn max_abs_deriv(&self, lo: f64, hi: f64) -> f64 {
        let (lo, hi) = ordered(lo, hi);
        let mut m = self.deriv(lo).abs().max(self.deriv(hi).abs());
        let [_, _, c2, c3] = self.coeffs;
        if c3 != 0.0 {
            let vertex = -c2 / (3.0 * c3);
            if vertex > lo && vertex < hi {
                m = m.max(self.deriv(vertex).abs());
            }
        }
        m
    }

    /// `max |phi''|` over `[lo, hi]`; `phi''` is affine so endpoints suffice.
    pub fn max_abs_second_deriv(&self, lo: f64, hi: f64) -> f64 {
        self.second_deriv(lo).abs().max(self.second_deriv(hi).abs())
    }

    /// `(min phi, max phi)` over `[lo, hi]`.
    pub fn min_max(&self, lo: f64, hi: f64) -> (f64, f64) {
        let (lo, hi) = ordered(lo, hi);
        let mut min = self.eval(lo).min(self.eval(hi));
        let mut max = self.eval(lo).max(self.eval(hi));
        for r in self.critical_points() {
            if r > lo && r < hi {
                let v = self.eval(r);
                min = min.min(v);
                max = max.max(v);
            }
        }
        (min, max)
    }

    /// Real roots of `phi'`.
    fn critical_points(&self) -> impl Iterator<Item = f64> {
        let [_, c1, c2, c3] = self.coeffs;
        // phi' = 3 c3 u^2 + 2 c2 u + c1
        let (qa, qb, qc) = (3.0 * c3, 2.0 * c2, c1);
        let mut roots = [f64::NAN; 2];
        if qa == 0.0 {
            if qb != 0.0 {
                roots[0] = -qc / qb;
            }
        } else {
            let disc = qb * qb - 4.0 * qa * qc;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                let q = -0.5 * (qb + qb.signum() * sq);
                if q != 0.0 {
                    roots[0] = q / qa;
                    roots[1] = qc / q;
                } else {
                    roots[0] = 0.0;
                }
            }
        }
        roots.into_iter().filter(|r| r.is_finite())
    }
}

#[inline]
fn ordered(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}
