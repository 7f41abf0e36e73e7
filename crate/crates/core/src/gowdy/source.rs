//! Geometric source terms of the Euler equations `tau_t + S_x = T1`,
//! `S_t + Sigma_x = T2`.
//!
//! Expanding `div T = 0` in the Gowdy metric and multiplying by `e^{2a}` gives
//!
//! ```text
//! T1 = -[(tau + Sigma) a_t + 2 (tau + p) b_t + 2 S (a_x + b_x)]
//! T2 = -[2 S (a_t + b_t) + (tau + Sigma) a_x + 2 (Sigma - p) b_x]
//! ```
//!
//! The `c` derivatives cancel. See `docs/gowdy_sources.md` for the derivation.

use super::fluid::{conserved_to_primitive, pressure, primitive_to_conserved, FluidState};
use super::geometry::GeometryState;
use crate::error::{Error, Result};

/// Forcing added to `(T1, T2)` as a function of `(t, x)`.
pub type FluidForcing<'a> = &'a dyn Fn(f64, f64) -> [f64; 2];

/// Metric first derivatives seen by the fluid in one cell.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricSlopes {
    pub at: f64,
    pub ax: f64,
    pub bt: f64,
    pub bx: f64,
}

pub fn source_terms(tau: f64, s: f64, sigma: f64, p: f64, m: MetricSlopes) -> [f64; 2] {
    let t1 = -((tau + sigma) * m.at + 2.0 * (tau + p) * m.bt + 2.0 * s * (m.ax + m.bx));
    let t2 = -(2.0 * s * (m.at + m.bt) + (tau + sigma) * m.ax + 2.0 * (sigma - p) * m.bx);
    [t1, t2]
}

fn rate(tau: f64, s: f64, cs: f64, m: MetricSlopes, forcing: [f64; 2]) -> Result<[f64; 2]> {
    let f = conserved_to_primitive(tau, s, cs)?;
    let c = primitive_to_conserved(f, cs)?;
    let [t1, t2] = source_terms(tau, s, c.sigma, pressure(f.mu, cs), m);
    Ok([t1 + forcing[0], t2 + forcing[1]])
}

/// Explicit midpoint step of `d(tau, S)/dt = (T1, T2)` with the geometry frozen.
/// Cells with identically vanishing sources are left untouched.
pub fn fluid_source_step(
    fluid: &[FluidState],
    geo: &GeometryState,
    cs: f64,
    dx: f64,
    dt: f64,
    t: f64,
    forcing: Option<FluidForcing>,
) -> Result<Vec<FluidState>> {
    if geo.len() != fluid.len() {
        return Err(Error::LengthMismatch { expected: fluid.len(), got: geo.len() });
    }
    fluid
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let m = MetricSlopes { at: geo.at[i], ax: geo.ax[i], bt: geo.bt[i], bx: geo.bx[i] };
            let x = (i as f64 + 0.5) * dx;
            let (f0, fh) = match forcing {
                Some(g) => (g(t, x), g(t + 0.5 * dt, x)),
                None => ([0.0; 2], [0.0; 2]),
            };
            if dt == 0.0 || (m == MetricSlopes::default() && f0 == [0.0; 2] && fh == [0.0; 2]) {
                return Ok(f);
            }
            let c = primitive_to_conserved(f, cs)?;
            let k1 = rate(c.tau, c.s, cs, m, f0)?;
            let k2 = rate(c.tau + 0.5 * dt * k1[0], c.s + 0.5 * dt * k1[1], cs, m, fh)?;
            conserved_to_primitive(c.tau + dt * k2[0], c.s + dt * k2[1], cs)
        })
        .collect()
}
