#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Composite Simpson rule with `2m` panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, m: usize) -> f64 {
    let n = 2 * m;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Plain bisection for an increasing function on `[lo, hi]`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Burgers solution `u = u0(x - t u)` by fixed-point iteration, valid before
/// characteristics cross.
pub fn burgers_characteristics<F: Fn(f64) -> f64>(u0: F, t: f64, x: f64) -> f64 {
    let mut u = u0(x);
    for _ in 0..500 {
        let next = u0(x - t * u);
        if (next - u).abs() < 1e-15 {
            return next;
        }
        u = next;
    }
    u
}

/// Largest increase between consecutive entries.
pub fn max_increase(series: &[f64]) -> f64 {
    series.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max)
}

pub fn order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}
