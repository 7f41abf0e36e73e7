//! Exact Riemann solver for the isothermal relativistic Euler equations
//! `tau_t + S_x = 0`, `S_t + Sigma_x = 0` in flat space.
//!
//! Wave curves are parametrised by `y = ln mu*` and written in rapidities
//! `theta = artanh v`. With `k = c / (1 + c^2)`:
//!
//! * rarefactions keep `theta + k ln mu` (1-family) or `theta - k ln mu`
//!   (2-family) constant;
//! * across a shock with density ratio `rho > 1` the two states move relative
//!   to each other with velocity `c (rho - 1) / sqrt((1 + c^2 rho)(rho + c^2))`.
//!
//! The middle state is the root of the strictly decreasing function
//! `theta_1(y) - theta_2(y)`.

use super::fluid::{wave_speeds, FluidState};
use crate::error::{Error, Result};
use crate::root;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wave {
    Shock { speed: f64 },
    /// Fan between the `head` (outer) and `tail` (inner) speeds.
    Rarefaction { head: f64, tail: f64 },
    /// Left and right state coincide.
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannSolution {
    pub left: FluidState,
    pub middle: FluidState,
    pub right: FluidState,
    pub wave1: Wave,
    pub wave2: Wave,
    cs: f64,
}

fn shock_relative_rapidity(rho: f64, cs: f64) -> f64 {
    let c2 = cs * cs;
    let w = cs * (rho - 1.0) / ((1.0 + c2 * rho) * (rho + c2)).sqrt();
    w.atanh()
}

/// Speed of a shock of density ratio `rho = mu* / mu_ref` moving into the
/// state `reference`; `sign = -1` for the 1-family, `+1` for the 2-family.
fn shock_speed(reference: FluidState, rho: f64, cs: f64, sign: f64) -> f64 {
    let c2 = cs * cs;
    let rest = sign * cs * ((rho + c2) / (1.0 + c2 * rho)).sqrt();
    (rest + reference.v) / (1.0 + rest * reference.v)
}

/// Rapidity reached from `left` along the 1-wave curve at `mu* = exp(y)`.
fn theta_1(left: FluidState, y: f64, k: f64, cs: f64) -> f64 {
    let d = y - left.mu.ln();
    if d > 0.0 {
        left.rapidity() - shock_relative_rapidity(d.exp(), cs)
    } else {
        left.rapidity() - k * d
    }
}

/// Rapidity reached backwards from `right` along the 2-wave curve.
fn theta_2(right: FluidState, y: f64, k: f64, cs: f64) -> f64 {
    let d = y - right.mu.ln();
    if d > 0.0 {
        right.rapidity() + shock_relative_rapidity(d.exp(), cs)
    } else {
        right.rapidity() + k * d
    }
}

pub fn riemann_solve(left: FluidState, right: FluidState, cs: f64) -> Result<RiemannSolution> {
    if left == right {
        return Ok(RiemannSolution { left, middle: left, right, wave1: Wave::Trivial, wave2: Wave::Trivial, cs });
    }
    let k = cs / (1.0 + cs * cs);
    let g = |y: f64| theta_1(left, y, k, cs) - theta_2(right, y, k, cs);

    let mut lo = left.mu.ln().min(right.mu.ln());
    let mut hi = left.mu.ln().max(right.mu.ln());
    let mut width = 1.0;
    while g(lo) <= 0.0 {
        lo -= width;
        width *= 2.0;
        if width > 1e4 {
            return Err(Error::RootFinding("no lower bracket for the middle density".into()));
        }
    }
    width = 1.0;
    while !(g(hi) < 0.0) {
        hi += width;
        width *= 2.0;
        if width > 1e4 {
            return Err(Error::RootFinding("no upper bracket for the middle density".into()));
        }
    }
    let y = root::illinois(g, lo, hi, 1e-14 * (1.0 + lo.abs().max(hi.abs())))?;
    // symmetric average keeps reflection-symmetric data exactly symmetric
    let theta = 0.5 * (theta_1(left, y, k, cs) + theta_2(right, y, k, cs));
    let middle = FluidState::new(y.exp(), theta.tanh())
        .map_err(|e| Error::Unphysical(format!("middle state: {e}")))?;

    let wave1 = if middle.mu > left.mu {
        Wave::Shock { speed: shock_speed(left, middle.mu / left.mu, cs, -1.0) }
    } else {
        Wave::Rarefaction { head: wave_speeds(left, cs).0, tail: wave_speeds(middle, cs).0 }
    };
    let wave2 = if middle.mu > right.mu {
        Wave::Shock { speed: shock_speed(right, middle.mu / right.mu, cs, 1.0) }
    } else {
        Wave::Rarefaction { head: wave_speeds(right, cs).1, tail: wave_speeds(middle, cs).1 }
    };
    Ok(RiemannSolution { left, middle, right, wave1, wave2, cs })
}

impl RiemannSolution {
    /// State at the self-similar coordinate `xi = x / t`.
    pub fn sample(&self, xi: f64) -> FluidState {
        let cs = self.cs;
        let k = cs / (1.0 + cs * cs);
        match self.wave1 {
            Wave::Trivial => return self.left,
            Wave::Shock { speed } if xi < speed => return self.left,
            Wave::Rarefaction { head, .. } if xi < head => return self.left,
            Wave::Rarefaction { tail, .. } if xi < tail => {
                let theta = xi.atanh() + cs.atanh();
                let mu = self.left.mu * ((self.left.rapidity() - theta) / k).exp();
                return FluidState { mu, v: theta.tanh() };
            }
            _ => {}
        }
        match self.wave2 {
            Wave::Trivial => self.middle,
            Wave::Shock { speed } => {
                if xi < speed {
                    self.middle
                } else {
                    self.right
                }
            }
            Wave::Rarefaction { head, tail } => {
                if xi < tail {
                    self.middle
                } else if xi < head {
                    let theta = xi.atanh() - cs.atanh();
                    let mu = self.right.mu * ((theta - self.right.rapidity()) / k).exp();
                    FluidState { mu, v: theta.tanh() }
                } else {
                    self.right
                }
            }
        }
    }

    pub fn sound_speed(&self) -> f64 {
        self.cs
    }
}
