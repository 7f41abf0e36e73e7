//! Random-choice step for the homogeneous fluid system.

use super::fluid::{wave_speeds, FluidState};
use super::riemann::riemann_solve;
use crate::error::{Error, Result};

/// Radical inverse of `index` in `base`: the van der Corput point.
pub fn van_der_corput(mut index: u64, base: u64) -> f64 {
    let b = base as f64;
    let mut denom = 1.0;
    let mut x = 0.0;
    while index > 0 {
        denom *= b;
        x += (index % base) as f64 / denom;
        index /= base;
    }
    x
}

/// Largest characteristic speed of the fluid field.
pub fn max_speed(fluid: &[FluidState], cs: f64) -> f64 {
    fluid
        .iter()
        .map(|&f| {
            let (lm, lp) = wave_speeds(f, cs);
            lm.abs().max(lp.abs())
        })
        .fold(0.0, f64::max)
}

/// Solves the Riemann problem at every interface and samples each cell at
/// `x_i + (theta - 1/2) dx`, `theta` being the van der Corput point of
/// `step_index`. Requires `dt max|lambda| / dx <= 1/2`.
pub fn glimm_step(fluid: &[FluidState], dt: f64, dx: f64, step_index: u64, base: u64, cs: f64) -> Result<Vec<FluidState>> {
    let n = fluid.len();
    let lam = max_speed(fluid, cs);
    if dt * lam > 0.5 * dx * (1.0 + 1e-12) {
        return Err(Error::CflViolation { dt, admissible: 0.5 * dx / lam });
    }
    let theta = van_der_corput(step_index, base);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // interface between cells j and j + 1, sampled at offset `shift` from it
        let (j, shift) = if theta <= 0.5 { ((i + n - 1) % n, theta * dx) } else { (i, (theta - 1.0) * dx) };
        let (l, r) = (fluid[j], fluid[(j + 1) % n]);
        if l == r {
            out.push(l);
            continue;
        }
        let sol = riemann_solve(l, r, cs)?;
        out.push(sol.sample(shift / dt));
    }
    Ok(out)
}
