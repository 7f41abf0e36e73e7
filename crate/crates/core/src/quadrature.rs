//! Composite Gauss-Legendre quadrature with panel doubling.

use crate::error::{Error, Result};

const NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

const MAX_PANELS: usize = 1 << 16;

fn composite<const N: usize, F>(f: &F, a: f64, b: f64, panels: usize) -> [f64; N]
where
    F: Fn(f64) -> [f64; N],
{
    let h = (b - a) / panels as f64;
    let mut acc = [0.0; N];
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (x, w) in NODES.iter().zip(WEIGHTS) {
            let v = f(mid + 0.5 * h * x);
            for (s, vk) in acc.iter_mut().zip(v) {
                *s += 0.5 * h * w * vk;
            }
        }
    }
    acc
}

/// Integrates a vector-valued `f` over `[a, b]`, doubling the panel count until
/// successive estimates differ by at most `tol` in every component.
pub fn integrate_vec<const N: usize, F>(f: F, a: f64, b: f64, tol: f64) -> Result<[f64; N]>
where
    F: Fn(f64) -> [f64; N],
{
    if a == b {
        return Ok([0.0; N]);
    }
    let mut panels = 1;
    let mut prev = composite(&f, a, b, panels);
    let mut change = f64::INFINITY;
    while panels < MAX_PANELS {
        panels *= 2;
        let next = composite(&f, a, b, panels);
        change = prev.iter().zip(&next).map(|(p, n)| (p - n).abs()).fold(0.0, f64::max);
        if change <= tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureDiverged { change, panels })
}

pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate_vec(|x| [f(x)], a, b, tol).map(|[v]| v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_degree_nine() {
        let v = integrate(|x| x.powi(9) - 3.0 * x.powi(4), -1.0, 2.0, 1e-12).unwrap();
        let exact = (2f64.powi(10) - 1.0) / 10.0 - 3.0 * (32.0 + 1.0) / 5.0;
        assert!((v - exact).abs() < 1e-11);
    }

    #[test]
    fn smooth_transcendental() {
        let v = integrate(f64::sin, 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(integrate(|x| x, 1.0, 1.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn diverging_integrand_is_reported() {
        let r = integrate(|x| 1.0 / x.abs().sqrt(), -1.0, 1.0, 1e-14);
        assert!(matches!(r, Err(Error::QuadratureDiverged { .. })));
    }
}
