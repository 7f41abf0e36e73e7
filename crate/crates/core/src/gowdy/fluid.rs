//! Isothermal relativistic perfect fluid, `p = c_s^2 mu`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidState {
    pub mu: f64,
    pub v: f64,
}

impl FluidState {
    pub fn new(mu: f64, v: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::Unphysical(format!("energy density must be positive, got {mu}")));
        }
        if !(v.abs() < 1.0) {
            return Err(Error::Causality { v: v.abs() });
        }
        Ok(Self { mu, v })
    }

    /// Rapidity `artanh v`.
    pub fn rapidity(&self) -> f64 {
        self.v.atanh()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedFluid {
    pub tau: f64,
    pub s: f64,
    pub sigma: f64,
}

pub fn check_sound_speed(cs: f64) -> Result<()> {
    if !(cs > 0.0 && cs < 1.0) {
        return Err(Error::InvalidParameter(format!("sound speed must satisfy 0<c_s<1, got {cs}")));
    }
    Ok(())
}

#[inline]
pub fn pressure(mu: f64, cs: f64) -> f64 {
    cs * cs * mu
}

pub fn primitive_to_conserved(f: FluidState, cs: f64) -> Result<ConservedFluid> {
    if !(f.v.abs() < 1.0) {
        return Err(Error::Causality { v: f.v.abs() });
    }
    let p = pressure(f.mu, cs);
    let xi2 = 1.0 / (1.0 - f.v * f.v);
    let h = (f.mu + p) * xi2;
    Ok(ConservedFluid { tau: h - p, s: h * f.v, sigma: h * f.v * f.v + p })
}

/// Inverts `(tau, S) -> (mu, v)` in closed form.
///
/// With `r = S / tau` the velocity solves `c^2 r v^2 - (1 + c^2) v + r = 0`;
/// the root in `(-1, 1)` is taken in the cancellation-free form. The physical
/// region is `tau > 0`, `|S| < tau`.
pub fn conserved_to_primitive(tau: f64, s: f64, cs: f64) -> Result<FluidState> {
    if !(tau.is_finite() && s.is_finite() && tau > 0.0) {
        return Err(Error::Unphysical(format!("tau = {tau}, S = {s}")));
    }
    if !(s.abs() < tau) {
        return Err(Error::Unphysical(format!("|S| = {} is not below tau = {tau}", s.abs())));
    }
    let c2 = cs * cs;
    let r = s / tau;
    let b = 1.0 + c2;
    let v = 2.0 * r / (b + (b * b - 4.0 * r * r * c2).sqrt());
    if !(v.abs() < 1.0) {
        return Err(Error::Causality { v: v.abs() });
    }
    let xi2 = 1.0 / (1.0 - v * v);
    let mu = tau / (b * xi2 - c2);
    FluidState::new(mu, v)
}

/// `(lambda_-, lambda_+) = ((v - c) / (1 - v c), (v + c) / (1 + v c))`
pub fn wave_speeds(f: FluidState, cs: f64) -> (f64, f64) {
    ((f.v - cs) / (1.0 - f.v * cs), (f.v + cs) / (1.0 + f.v * cs))
}

/// Physical flux `(S, Sigma)` of the homogeneous system.
pub fn flux(f: FluidState, cs: f64) -> [f64; 2] {
    let p = pressure(f.mu, cs);
    let h = (f.mu + p) / (1.0 - f.v * f.v);
    [h * f.v, h * f.v * f.v + p]
}
