//! Total variation and the blow-up classification of a run.

use super::fluid::FluidState;
use super::geometry::{reconstruct_metric, GeometryState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Running,
    GeometryBlowup,
    MatterBlowup,
    Completed,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Running => "running",
            Verdict::GeometryBlowup => "geometry_blowup",
            Verdict::MatterBlowup => "matter_blowup",
            Verdict::Completed => "completed",
        }
    }

    pub fn is_blowup(&self) -> bool {
        matches!(self, Verdict::GeometryBlowup | Verdict::MatterBlowup)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Ceiling on `sup alpha + sup |b|`.
    pub alpha_b_ceiling: f64,
    pub mu_ceiling: f64,
    pub beta_floor: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { alpha_b_ceiling: 1e6, mu_ceiling: 1e6, beta_floor: 1e-10 }
    }
}

/// Periodic total variation `sum_i |f_{i+1} - f_i|`, including the wrap.
pub fn tv_norm(f: &[f64]) -> f64 {
    let n = f.len();
    (0..n).map(|i| (f[(i + 1) % n] - f[i]).abs()).sum()
}

/// Smallest `K >= 0` with `tv(t) <= tv(0) e^{K t}` over the samples, or
/// `None` when the initial variation vanishes.
pub fn tv_growth_rate(t: &[f64], tv: &[f64]) -> Option<f64> {
    let (&t0, &v0) = (t.first()?, tv.first()?);
    if !(v0 > 0.0) {
        return None;
    }
    let k = t
        .iter()
        .zip(tv)
        .filter(|(s, _)| **s > t0)
        .map(|(s, v)| (v / v0).ln() / (s - t0))
        .fold(0.0, f64::max);
    Some(k)
}

/// `sup alpha + sup |b|`.
pub fn sup_alpha_b(geo: &GeometryState) -> f64 {
    let sa = geo.a.iter().map(|a| (2.0 * a).exp()).fold(f64::NEG_INFINITY, f64::max);
    let sb = geo.b.iter().map(|b| b.abs()).fold(0.0, f64::max);
    sa + sb
}

pub fn sup_mu(fluid: &[FluidState]) -> f64 {
    fluid.iter().map(|f| f.mu).fold(f64::NEG_INFINITY, f64::max)
}

/// Inputs to one classification.
#[derive(Debug, Clone, Copy)]
pub struct MonitorInput<'a> {
    pub geo: &'a GeometryState,
    pub fluid: &'a [FluidState],
    /// Anchors and spacing used to reconstruct `beta` from `beta_x`.
    pub beta_anchor: f64,
    pub a_anchor: f64,
    pub dx: f64,
    /// A fluid update failed even after step-size retries.
    pub fluid_failure: bool,
    pub finished: bool,
}

/// Geometry is checked first: `sup alpha + sup |b|` above its ceiling,
/// `beta` (carried or reconstructed) at or below its floor, or non-finite
/// geometry give `GeometryBlowup`. Then `sup mu` above its ceiling or a fluid
/// failure give `MatterBlowup`.
pub fn blowup_monitor(input: MonitorInput, th: &Thresholds) -> Verdict {
    let geo = input.geo;
    if !geo.is_finite() || !(sup_alpha_b(geo) <= th.alpha_b_ceiling) {
        return Verdict::GeometryBlowup;
    }
    let carried_min = geo.b.iter().map(|b| (2.0 * b).exp()).fold(f64::INFINITY, f64::min);
    if !(carried_min > th.beta_floor) {
        return Verdict::GeometryBlowup;
    }
    let beta_x = &geo.w()[3];
    match reconstruct_metric(&geo.ax, beta_x, input.a_anchor, input.beta_anchor, input.dx) {
        Ok(m) if m.beta.iter().all(|b| *b > th.beta_floor) => {}
        _ => return Verdict::GeometryBlowup,
    }
    if input.fluid_failure || !(sup_mu(input.fluid) <= th.mu_ceiling) {
        return Verdict::MatterBlowup;
    }
    if input.finished {
        Verdict::Completed
    } else {
        Verdict::Running
    }
}
