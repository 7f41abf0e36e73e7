//! Explicit monotone finite-volume solver for `d_t u + div f(x, u) = 0` on the
//! periodic meshes of [`crate::geometry`].

use crate::error::{Error, Result};
use crate::flux_entropy::FluxField;
use crate::geometry::{CellField, Mesh};
use crate::scheme::{self, NumericalFlux};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FvConfig {
    pub cfl: f64,
    pub t_end: f64,
    pub numerical_flux: NumericalFlux,
    pub record_every: usize,
}

impl Default for FvConfig {
    fn default() -> Self {
        Self { cfl: 0.45, t_end: 0.0, numerical_flux: NumericalFlux::Rusanov, record_every: 1 }
    }
}

impl FvConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidParameter(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::InvalidParameter(format!("t_end must be >= 0, got {}", self.t_end)));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidParameter("record_every must be >= 1".into()));
        }
        Ok(())
    }
}

/// Volume-weighted norms of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct NormSeries {
    pub times: Vec<f64>,
    pub l1: Vec<f64>,
    pub l2: Vec<f64>,
    pub linf: Vec<f64>,
    pub mass: Vec<f64>,
}

impl NormSeries {
    pub fn push(&mut self, t: f64, n: Norms) {
        self.times.push(t);
        self.l1.push(n.l1);
        self.l2.push(n.l2);
        self.linf.push(n.linf);
        self.mass.push(n.mass);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, Norms)> {
        let i = self.len().checked_sub(1)?;
        Some((self.times[i], Norms { l1: self.l1[i], l2: self.l2[i], linf: self.linf[i], mass: self.mass[i] }))
    }
}

/// Sums run sequentially in cell order.
pub fn norms(mesh: &Mesh, u: &CellField) -> Norms {
    let (mut l1, mut l2, mut linf, mut mass) = (0.0, 0.0, 0.0_f64, 0.0);
    for (i, &v) in u.values().iter().enumerate() {
        let vol = mesh.volume_unchecked(i);
        l1 += vol * v.abs();
        l2 += vol * v * v;
        linf = linf.max(v.abs());
        mass += vol * v;
    }
    Norms { l1, l2: l2.sqrt(), linf, mass }
}

pub fn l1_distance(mesh: &Mesh, u: &CellField, v: &CellField) -> Result<f64> {
    if u.mesh_id() != v.mesh_id() {
        return Err(Error::MeshMismatch);
    }
    Ok(u.values().iter().zip(v.values()).enumerate().map(|(i, (a, b))| mesh.volume_unchecked(i) * (a - b).abs()).sum())
}

/// CFL number per unit time when the states lie in `[lo, hi]`.
pub fn cfl_rate(mesh: &Mesh, flux: &FluxField, lo: f64, hi: f64) -> f64 {
    let k = scheme::edge_speed_bound(flux.profile(), lo, hi);
    let bounds: Vec<f64> = (0..flux.n_edges()).map(|e| flux.edge_weight(e).abs() * k).collect();
    scheme::cfl_rate((0..mesh.n_cells()).map(|i| (mesh.edge_total(i, &bounds), mesh.volume_unchecked(i))))
}

/// Largest step with CFL number `cfl` for the range of `u`.
pub fn max_stable_dt(mesh: &Mesh, flux: &FluxField, u: &CellField, cfl: f64) -> f64 {
    let (lo, hi) = u.min_max();
    scheme::next_dt(cfl_rate(mesh, flux, lo, hi), cfl, f64::INFINITY)
}

fn check_inputs(mesh: &Mesh, u: &CellField, flux: &FluxField) -> Result<()> {
    flux.check_mesh(mesh)?;
    if u.mesh_id() != flux.mesh_id() {
        return Err(Error::MeshMismatch);
    }
    Ok(())
}

/// One forward-Euler step. Fails when `dt` exceeds the stability bound for the
/// range of `u`.
pub fn step(mesh: &Mesh, u: &CellField, flux: &FluxField, dt: f64, nf: NumericalFlux) -> Result<CellField> {
    check_inputs(mesh, u, flux)?;
    let (lo, hi) = u.min_max();
    scheme::check_cfl(dt, cfl_rate(mesh, flux, lo, hi))?;
    advance(mesh, u, flux, dt, nf)
}

pub(crate) fn edge_numerical_fluxes(mesh: &Mesh, u: &[f64], flux: &FluxField, nf: NumericalFlux) -> Vec<f64> {
    (0..flux.n_edges())
        .map(|e| {
            let (l, r) = mesh.edge_cells(e);
            nf.eval(&flux.edge_profile(e), u[l], u[r])
        })
        .collect()
}

fn advance(mesh: &Mesh, u: &CellField, flux: &FluxField, dt: f64, nf: NumericalFlux) -> Result<CellField> {
    let h = edge_numerical_fluxes(mesh, u.values(), flux, nf);
    let values = u
        .values()
        .iter()
        .enumerate()
        .map(|(i, &ui)| scheme::conservative_update(ui, dt, mesh.volume_unchecked(i), mesh.net_outflow(i, &h)))
        .collect();
    CellField::with_id(u.mesh_id(), u.len(), values)
}

#[derive(Debug, Clone)]
pub struct FvRun {
    pub state: CellField,
    pub norms: NormSeries,
    pub steps: usize,
    pub t: f64,
}

pub fn solve(mesh: &Mesh, u0: &CellField, flux: &FluxField, cfg: &FvConfig) -> Result<FvRun> {
    solve_with(mesh, u0, flux, cfg, |_, _, _| {})
}

/// Like [`solve`], calling `observer(step, t, state)` at every recorded step.
pub fn solve_with<O>(mesh: &Mesh, u0: &CellField, flux: &FluxField, cfg: &FvConfig, mut observer: O) -> Result<FvRun>
where
    O: FnMut(usize, f64, &CellField),
{
    cfg.validate()?;
    check_inputs(mesh, u0, flux)?;
    let mut u = u0.clone();
    let mut t = 0.0;
    let mut n = 0;
    let mut series = NormSeries::default();
    series.push(t, norms(mesh, &u));
    observer(0, t, &u);
    let mut last_recorded = 0;
    while t < cfg.t_end {
        let (lo, hi) = u.min_max();
        let dt = scheme::next_dt(cfl_rate(mesh, flux, lo, hi), cfg.cfl, cfg.t_end - t);
        u = advance(mesh, &u, flux, dt, cfg.numerical_flux)?;
        n += 1;
        t = if dt == cfg.t_end - t { cfg.t_end } else { t + dt };
        if n % cfg.record_every == 0 || t >= cfg.t_end {
            series.push(t, norms(mesh, &u));
            observer(n, t, &u);
            last_recorded = n;
        }
    }
    debug_assert!(last_recorded == n);
    Ok(FvRun { state: u, norms: series, steps: n, t })
}

/// Evolves two states with a shared time step and returns `(t, ||u - v||_1)`
/// at every recorded step.
///
/// The step is chosen for the union of both ranges, so the scheme is monotone
/// on every state either run can reach.
pub fn contraction_harness(
    mesh: &Mesh,
    u0: &CellField,
    v0: &CellField,
    flux: &FluxField,
    cfg: &FvConfig,
) -> Result<Vec<(f64, f64)>> {
    cfg.validate()?;
    check_inputs(mesh, u0, flux)?;
    check_inputs(mesh, v0, flux)?;
    let (mut u, mut v) = (u0.clone(), v0.clone());
    let mut t = 0.0;
    let mut n = 0;
    let mut series = vec![(t, l1_distance(mesh, &u, &v)?)];
    while t < cfg.t_end {
        let (ul, uh) = u.min_max();
        let (vl, vh) = v.min_max();
        let rate = cfl_rate(mesh, flux, ul.min(vl), uh.max(vh));
        let dt = scheme::next_dt(rate, cfg.cfl, cfg.t_end - t);
        u = advance(mesh, &u, flux, dt, cfg.numerical_flux)?;
        v = advance(mesh, &v, flux, dt, cfg.numerical_flux)?;
        n += 1;
        t = if dt == cfg.t_end - t { cfg.t_end } else { t + dt };
        if n % cfg.record_every == 0 || t >= cfg.t_end {
            series.push((t, l1_distance(mesh, &u, &v)?));
        }
    }
    Ok(series)
}

/// Cell residual of the discrete Kruzkov entropy inequality,
/// `(U(after) - U(before)) / dt + (1 / vol) sum_e G_e`, with `U = |u - k|` and
/// the numerical entropy flux paired with `nf`. Non-positive for a monotone step.
pub fn entropy_residual(
    mesh: &Mesh,
    before: &CellField,
    after: &CellField,
    flux: &FluxField,
    dt: f64,
    k: f64,
    nf: NumericalFlux,
) -> Result<Vec<f64>> {
    check_inputs(mesh, before, flux)?;
    check_inputs(mesh, after, flux)?;
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let u = before.values();
    let g: Vec<f64> = (0..flux.n_edges())
        .map(|e| {
            let (l, r) = mesh.edge_cells(e);
            nf.kruzkov_entropy_flux(&flux.edge_profile(e), u[l], u[r], k)
        })
        .collect();
    Ok(u
        .iter()
        .zip(after.values())
        .enumerate()
        .map(|(i, (&b, &a))| ((a - k).abs() - (b - k).abs()) / dt + mesh.net_outflow(i, &g) / mesh.volume_unchecked(i))
        .collect())
}
