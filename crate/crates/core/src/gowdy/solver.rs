//! Operator-split time stepping of the coupled Gowdy system.

use super::fluid::{check_sound_speed, FluidState};
use super::geometry::{constraint_residual, geometry_step, matter_terms, GeometryState};
use super::glimm::{glimm_step, max_speed};
use super::initial::InitialData;
use super::monitor::{blowup_monitor, sup_alpha_b, sup_mu, tv_norm, MonitorInput, Thresholds, Verdict};
use super::source::fluid_source_step;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Splitting {
    /// random choice, then fluid sources, then geometry
    #[default]
    Lie,
    /// geometry and sources in half steps around the random-choice step
    Strang,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GowdyConfig {
    pub kappa: f64,
    pub cs: f64,
    pub n_cells: usize,
    pub length: f64,
    pub cfl: f64,
    pub t_end: f64,
    pub vdc_base: u64,
    pub splitting: Splitting,
    pub thresholds: Thresholds,
    pub record_every: usize,
}

impl Default for GowdyConfig {
    fn default() -> Self {
        Self {
            kappa: 1.0,
            cs: 0.5,
            n_cells: 128,
            length: 1.0,
            cfl: 0.45,
            t_end: 0.5,
            vdc_base: 2,
            splitting: Splitting::Lie,
            thresholds: Thresholds::default(),
            record_every: 1,
        }
    }
}

impl GowdyConfig {
    pub fn validate(&self) -> Result<()> {
        check_sound_speed(self.cs)?;
        if !(self.kappa.is_finite() && self.kappa >= 0.0) {
            return Err(Error::InvalidParameter(format!("kappa must be >= 0, got {}", self.kappa)));
        }
        if self.n_cells < 4 {
            return Err(Error::InvalidMesh(format!("need at least 4 cells, got {}", self.n_cells)));
        }
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(Error::InvalidMesh(format!("length must be positive, got {}", self.length)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 0.5) {
            return Err(Error::InvalidParameter(format!("random choice needs cfl in (0, 1/2], got {}", self.cfl)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::InvalidParameter(format!("t_end must be >= 0, got {}", self.t_end)));
        }
        if self.vdc_base < 2 {
            return Err(Error::InvalidParameter(format!("van der Corput base must be >= 2, got {}", self.vdc_base)));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidParameter("record_every must be >= 1".into()));
        }
        let th = &self.thresholds;
        if !(th.alpha_b_ceiling > 0.0 && th.mu_ceiling > 0.0 && th.beta_floor >= 0.0) {
            return Err(Error::InvalidParameter("blow-up thresholds must be positive".into()));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n_cells as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GowdyState {
    pub t: f64,
    /// Number of completed steps; step `n + 1` samples the `n + 1`-th point.
    pub step: u64,
    pub fluid: Vec<FluidState>,
    pub geo: GeometryState,
}

impl GowdyState {
    pub fn from_initial(init: &InitialData) -> Self {
        Self { t: 0.0, step: 0, fluid: init.fluid.clone(), geo: init.geo.clone() }
    }
}

/// `dt = cfl dx / max(max |lambda|, 1)`: light speed bounds the geometry.
pub fn stable_dt(fluid: &[FluidState], cfg: &GowdyConfig) -> f64 {
    cfg.cfl * cfg.dx() / max_speed(fluid, cfg.cs).max(1.0)
}

/// One split step of size `dt`.
pub fn gowdy_step(state: &GowdyState, dt: f64, cfg: &GowdyConfig) -> Result<GowdyState> {
    let dx = cfg.dx();
    let idx = state.step + 1;
    let t = state.t;
    let (fluid, geo) = match cfg.splitting {
        Splitting::Lie => {
            let f = glimm_step(&state.fluid, dt, dx, idx, cfg.vdc_base, cfg.cs)?;
            let f = fluid_source_step(&f, &state.geo, cfg.cs, dx, dt, t, None)?;
            let m = matter_terms(&f, cfg.cs)?;
            let g = geometry_step(&state.geo, &m, cfg.kappa, dx, dt, t, None)?;
            (f, g)
        }
        Splitting::Strang => {
            let h = 0.5 * dt;
            let m = matter_terms(&state.fluid, cfg.cs)?;
            let g = geometry_step(&state.geo, &m, cfg.kappa, dx, h, t, None)?;
            let f = fluid_source_step(&state.fluid, &g, cfg.cs, dx, h, t, None)?;
            let f = glimm_step(&f, dt, dx, idx, cfg.vdc_base, cfg.cs)?;
            let f = fluid_source_step(&f, &g, cfg.cs, dx, h, t + h, None)?;
            let m = matter_terms(&f, cfg.cs)?;
            let g = geometry_step(&g, &m, cfg.kappa, dx, h, t + h, None)?;
            (f, g)
        }
    };
    Ok(GowdyState { t: t + dt, step: idx, fluid, geo })
}

/// One row of the monitored time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    pub tv_mu: f64,
    pub tv_v: f64,
    pub tv_w: f64,
    pub sup_alpha_b: f64,
    pub sup_mu: f64,
    pub max_r1: f64,
    pub max_r2: f64,
    /// Largest jump of any `w` component between neighbouring cells.
    pub max_w_jump: f64,
    pub verdict: Verdict,
}

pub fn diagnostics(state: &GowdyState, cfg: &GowdyConfig, verdict: Verdict) -> SeriesRow {
    let mu: Vec<f64> = state.fluid.iter().map(|f| f.mu).collect();
    let v: Vec<f64> = state.fluid.iter().map(|f| f.v).collect();
    let w = state.geo.w();
    let n = mu.len();
    let max_w_jump = w
        .iter()
        .flat_map(|c| (0..n).map(move |i| (c[(i + 1) % n] - c[i]).abs()))
        .fold(0.0, f64::max);
    let (max_r1, max_r2) = match matter_terms(&state.fluid, cfg.cs) {
        Ok(m) => {
            let (r1, r2) = constraint_residual(&state.geo, &m, cfg.kappa, cfg.dx());
            (
                r1.iter().map(|r| r.abs()).fold(0.0, f64::max),
                r2.iter().map(|r| r.abs()).fold(0.0, f64::max),
            )
        }
        Err(_) => (f64::NAN, f64::NAN),
    };
    SeriesRow {
        t: state.t,
        tv_mu: tv_norm(&mu),
        tv_v: tv_norm(&v),
        tv_w: w.iter().map(|c| tv_norm(c)).sum(),
        sup_alpha_b: sup_alpha_b(&state.geo),
        sup_mu: sup_mu(&state.fluid),
        max_r1,
        max_r2,
        max_w_jump,
        verdict,
    }
}

#[derive(Debug, Clone)]
pub struct GowdyRun {
    pub state: GowdyState,
    pub verdict: Verdict,
    pub series: Vec<SeriesRow>,
    /// Message of the fluid failure that ended the run, if any.
    pub failure: Option<String>,
}

const MAX_RETRIES: usize = 4;

fn is_fluid_failure(e: &Error) -> bool {
    matches!(e, Error::Unphysical(_) | Error::Causality { .. } | Error::RootFinding(_))
}

/// Runs to `t_end` or until the monitor reports blow-up. The observer sees
/// every recorded state with its diagnostics row.
pub fn run<O>(init: &InitialData, cfg: &GowdyConfig, mut observer: O) -> Result<GowdyRun>
where
    O: FnMut(&GowdyState, &SeriesRow),
{
    cfg.validate()?;
    if init.fluid.len() != cfg.n_cells || init.geo.len() != cfg.n_cells {
        return Err(Error::LengthMismatch { expected: cfg.n_cells, got: init.fluid.len() });
    }
    let monitor = |s: &GowdyState, fluid_failure: bool, finished: bool| {
        blowup_monitor(
            MonitorInput {
                geo: &s.geo,
                fluid: &s.fluid,
                beta_anchor: init.beta_anchor,
                a_anchor: init.a_anchor,
                dx: cfg.dx(),
                fluid_failure,
                finished,
            },
            &cfg.thresholds,
        )
    };
    let mut state = GowdyState::from_initial(init);
    let mut verdict = monitor(&state, false, cfg.t_end == 0.0);
    let mut series = vec![diagnostics(&state, cfg, verdict)];
    observer(&state, &series[0]);
    let mut failure = None;

    while verdict == Verdict::Running {
        let mut dt = stable_dt(&state.fluid, cfg).min(cfg.t_end - state.t);
        let mut next = None;
        for _ in 0..=MAX_RETRIES {
            match gowdy_step(&state, dt, cfg) {
                Ok(s) => {
                    next = Some(s);
                    break;
                }
                Err(e) if is_fluid_failure(&e) => {
                    failure = Some(e.to_string());
                    dt *= 0.5;
                }
                Err(e) => return Err(e),
            }
        }
        let Some(mut s) = next else {
            verdict = monitor(&state, true, false);
            let row = diagnostics(&state, cfg, verdict);
            series.push(row);
            observer(&state, &row);
            break;
        };
        failure = None;
        let finished = s.t >= cfg.t_end || cfg.t_end - s.t <= 1e-14 * cfg.t_end;
        if finished {
            s.t = cfg.t_end;
        }
        state = s;
        verdict = monitor(&state, false, finished);
        if state.step.is_multiple_of(cfg.record_every as u64) || verdict != Verdict::Running {
            let row = diagnostics(&state, cfg, verdict);
            series.push(row);
            observer(&state, &row);
        }
    }
    Ok(GowdyRun { state, verdict, series, failure })
}
