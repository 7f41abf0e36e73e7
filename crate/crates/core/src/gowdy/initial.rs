//! Constraint-satisfying initial data.
//!
//! Every family uses `b = b0`, `b_x = 0` and a uniform `b_t = bt0 != 0`. The
//! constraints then reduce to
//!
//! ```text
//! a_x = (2 c_t c_x - kappa e^{2a} S) / (2 bt0)
//! a_t = (kappa e^{2a} tau - bt0^2 + c_t^2 + c_x^2) / (2 bt0)
//! ```
//!
//! The first is linear in `e^{-2a}`; it is integrated with RK4 from
//! `a(0) = a0` with the fluid sampled at cell centers; the data are rejected if `a` does not return to `a0` after one period.

use std::f64::consts::PI;

use super::fluid::{primitive_to_conserved, FluidState};
use super::geometry::GeometryState;
use crate::error::{Error, Result};

/// `c = amp cos(k x)`, `c_t = rate cos(k x)` with `k = 2 pi mode / L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveProfile {
    pub amp: f64,
    pub rate: f64,
    pub mode: u32,
}

impl WaveProfile {
    pub const NONE: WaveProfile = WaveProfile { amp: 0.0, rate: 0.0, mode: 1 };

    fn eval(&self, x: f64, length: f64) -> (f64, f64, f64) {
        let k = 2.0 * PI * self.mode as f64 / length;
        ((self.amp * (k * x).cos()), self.rate * (k * x).cos(), -self.amp * k * (k * x).sin())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialFamily {
    /// `mu = mu0 (1 + epsilon cos(2 pi x / L))` at rest plus a `c` wave.
    ConstrainedWave { mu0: f64, epsilon: f64, wave: WaveProfile, bt0: f64 },
    /// Fluid at rest with `mu_left` on `[0, L/2)` and `mu_right` on `[L/2, L)`.
    Riemann { mu_left: f64, mu_right: f64, bt0: f64 },
    /// Nearly vacuum, contracting: `b_t = bt0 < 0` drives `beta` to zero in
    /// finite time.
    Collapse { mu0: f64, bt0: f64 },
    /// Two streams `v = +speed` on `[0, L/2)` and `-speed` on `[L/2, L)`.
    Colliding { mu0: f64, speed: f64, bt0: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub fluid: Vec<FluidState>,
    pub geo: GeometryState,
    pub a_anchor: f64,
    pub beta_anchor: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct InitialParams {
    pub n_cells: usize,
    pub length: f64,
    pub cs: f64,
    pub kappa: f64,
    pub a0: f64,
    pub b0: f64,
}

pub fn build_initial(family: &InitialFamily, p: &InitialParams) -> Result<InitialData> {
    let l = p.length;
    let half = |x: f64| x < 0.5 * l;
    match *family {
        InitialFamily::ConstrainedWave { mu0, epsilon, wave, bt0 } => {
            if !(epsilon.abs() < 1.0) {
                return Err(Error::InvalidParameter(format!("epsilon must satisfy |epsilon| < 1, got {epsilon}")));
            }
            solve_constraints(p, bt0, wave, |x| FluidState::new(mu0 * (1.0 + epsilon * (2.0 * PI * x / l).cos()), 0.0))
        }
        InitialFamily::Riemann { mu_left, mu_right, bt0 } => {
            solve_constraints(p, bt0, WaveProfile::NONE, |x| FluidState::new(if half(x) { mu_left } else { mu_right }, 0.0))
        }
        InitialFamily::Collapse { mu0, bt0 } => {
            if !(bt0 < 0.0) {
                return Err(Error::InvalidParameter(format!("collapse needs bt0 < 0, got {bt0}")));
            }
            solve_constraints(p, bt0, WaveProfile::NONE, |_| FluidState::new(mu0, 0.0))
        }
        InitialFamily::Colliding { mu0, speed, bt0 } => {
            solve_constraints(p, bt0, WaveProfile::NONE, |x| FluidState::new(mu0, if half(x) { speed } else { -speed }))
        }
    }
}

/// Solves the constraints for `a` given the fluid and `c` data.
pub fn solve_constraints<F>(p: &InitialParams, bt0: f64, wave: WaveProfile, fluid_at: F) -> Result<InitialData>
where
    F: Fn(f64) -> Result<FluidState>,
{
    if p.n_cells < 4 {
        return Err(Error::InvalidMesh(format!("need at least 4 cells, got {}", p.n_cells)));
    }
    if !(bt0.is_finite() && bt0 != 0.0) {
        return Err(Error::InvalidParameter(format!("bt0 must be non-zero, got {bt0}")));
    }
    let (n, l, cs, kappa) = (p.n_cells, p.length, p.cs, p.kappa);
    let dx = l / n as f64;
    let cells: Vec<(FluidState, f64)> = (0..n)
        .map(|i| {
            let f = fluid_at((i as f64 + 0.5) * dx)?;
            Ok((f, primitive_to_conserved(f, cs)?.s))
        })
        .collect::<Result<_>>()?;
    // y = e^{-2a} solves the linear ODE y' = (kappa S - 2 c_t c_x y) / bt0
    let rhs = |x: f64, y: f64, s: f64| {
        let (_, ct, cx) = wave.eval(x, l);
        (kappa * s - 2.0 * ct * cx * y) / bt0
    };
    // RK4 with step dx/2 and the fluid frozen per cell: odd half-steps land
    // on cell centers
    let h = 0.5 * dx;
    let mut y = (-2.0 * p.a0).exp();
    let mut centers = Vec::with_capacity(n);
    for k in 0..2 * n {
        let x = k as f64 * h;
        let s = cells[k / 2].1;
        let k1 = rhs(x, y, s);
        let k2 = rhs(x + 0.5 * h, y + 0.5 * h * k1, s);
        let k3 = rhs(x + 0.5 * h, y + 0.5 * h * k2, s);
        let k4 = rhs(x + h, y + h * k3, s);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !(y > 0.0) {
            return Err(Error::InvalidParameter(format!("no solution for a: e^(-2a) reaches {y} at x = {}", x + h)));
        }
        if k % 2 == 0 {
            centers.push(-0.5 * y.ln());
        }
    }
    let a = -0.5 * y.ln();
    if !((a - p.a0).abs() <= 1e-6 * (1.0 + p.a0.abs())) {
        return Err(Error::InvalidParameter(format!(
            "initial data violate periodicity of a: a(L) - a(0) = {}",
            a - p.a0
        )));
    }

    let mut fluid = Vec::with_capacity(n);
    let mut geo = GeometryState::flat(n);
    for (i, &ai) in centers.iter().enumerate() {
        let x = (i as f64 + 0.5) * dx;
        let f = cells[i].0;
        let cons = primitive_to_conserved(f, cs)?;
        let (c, ct, cx) = wave.eval(x, l);
        let e2a = (2.0 * ai).exp();
        geo.a[i] = ai;
        geo.ax[i] = (2.0 * ct * cx - kappa * e2a * cons.s) / (2.0 * bt0);
        geo.at[i] = (kappa * e2a * cons.tau - bt0 * bt0 + ct * ct + cx * cx) / (2.0 * bt0);
        geo.b[i] = p.b0;
        geo.bt[i] = bt0;
        geo.c[i] = c;
        geo.ct[i] = ct;
        geo.cx[i] = cx;
        fluid.push(f);
    }
    Ok(InitialData { fluid, geo, a_anchor: p.a0, beta_anchor: (2.0 * p.b0).exp() })
}
