//! Executes a run and assembles its summary.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use curvedflow_core::flux_entropy::ConvexEntropy;
use curvedflow_core::gowdy::{self, primitive_to_conserved, tv_growth_rate, GowdyState, SeriesRow, Verdict};
use curvedflow_core::lorentzian_fv::{evolve, l1_flux_distance, slice_integral, trace_entropy_norm};
use curvedflow_core::riemannian_fv::{norms, solve_with};
use curvedflow_core::{CellField, Mesh};
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{self, real, Csv};
use crate::problem::{self, GowdyProblem, LorentzianProblem, Problem, RiemannianProblem};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(#[from] crate::config::ConfigError),
    #[error("invalid problem: {0}")]
    Problem(curvedflow_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

pub type Scalars = BTreeMap<&'static str, f64>;

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub solver: &'static str,
    /// `ok` or `failed`; a detected blow-up is `ok`.
    pub status: &'static str,
    pub error: Option<String>,
    pub t_final: f64,
    pub steps: u64,
    pub initial: Scalars,
    #[serde(rename = "final")]
    pub last: Scalars,
    pub verdict: Option<&'static str>,
    /// Smallest `K` with `TV(t) <= TV(0) e^{K t}` over the recorded rows.
    pub tv_growth_rate: Option<f64>,
    /// Largest jump of a `w` component between neighbouring cells over the run.
    pub max_w_jump: Option<f64>,
    /// Last fluid failure when the run ended in matter blow-up.
    pub fluid_failure: Option<String>,
    pub files: Vec<String>,
    pub wall_time_s: f64,
    pub config: RunConfig,
}

impl Summary {
    fn new(cfg: &RunConfig) -> Self {
        Self {
            solver: cfg.solver.as_str(),
            status: "ok",
            error: None,
            t_final: 0.0,
            steps: 0,
            initial: Scalars::new(),
            last: Scalars::new(),
            verdict: None,
            tv_growth_rate: None,
            max_w_jump: None,
            fluid_failure: None,
            files: vec![],
            wall_time_s: 0.0,
            config: cfg.clone(),
        }
    }

    pub fn failed(&self) -> bool {
        self.status != "ok"
    }
}

/// Decides which recorded steps get a field snapshot.
struct Snapshots {
    every: usize,
    recorded: usize,
}

impl Snapshots {
    fn take(&mut self, last: bool) -> bool {
        let k = self.recorded;
        self.recorded += 1;
        k == 0 || last || (self.every > 0 && k.is_multiple_of(self.every))
    }
}

/// Output files written so far, in order.
struct Writer {
    dir: PathBuf,
    files: Vec<String>,
    err: Option<std::io::Error>,
}

impl Writer {
    fn put(&mut self, csv: &Csv) {
        if self.err.is_some() {
            return;
        }
        match csv.write(&self.dir) {
            Ok(_) => self.files.push(csv.name().to_string()),
            Err(e) => self.err = Some(e),
        }
    }

    fn finish(self) -> Result<Vec<String>, std::io::Error> {
        match self.err {
            Some(e) => Err(e),
            None => Ok(self.files),
        }
    }
}

/// Builds the problem; every failure here is a configuration error.
pub fn prepare(cfg: &RunConfig) -> Result<Problem, RunError> {
    problem::build(cfg).map_err(RunError::Problem)
}

/// Runs to completion and writes `summary.json` next to the CSV files. Solver
/// failures are recorded in the summary rather than returned.
pub fn execute(cfg: &RunConfig, out_dir: &Path) -> Result<Summary, RunError> {
    let problem = prepare(cfg)?;
    std::fs::create_dir_all(out_dir)?;
    let start = Instant::now();
    let mut summary = Summary::new(cfg);
    let mut w = Writer { dir: out_dir.to_path_buf(), files: vec![], err: None };
    let every = cfg.numerics.snapshot_every;
    let outcome = match &problem {
        Problem::Riemannian(p) => run_riemannian(p, every, &mut w, &mut summary),
        Problem::Lorentzian(p) => run_lorentzian(p, every, &mut w, &mut summary),
        Problem::Gowdy(p) => run_gowdy(p, every, &mut w, &mut summary),
    };
    if let Err(e) = outcome {
        summary.status = "failed";
        summary.error = Some(e.to_string());
    }
    summary.files = w.finish()?;
    summary.files.push("summary.json".into());
    summary.wall_time_s = start.elapsed().as_secs_f64();
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    std::fs::write(out_dir.join("summary.json"), json + "\n")?;
    Ok(summary)
}

fn norm_scalars(l1: f64, l2: f64, linf: f64, mass: f64) -> Scalars {
    Scalars::from([("l1", l1), ("l2", l2), ("linf", linf), ("mass", mass)])
}

fn field_csv(mesh: &Mesh, step: usize, u: &CellField) -> Csv {
    let header = if mesh.dim() == 1 { output::FIELD_1D } else { output::FIELD_2D };
    let mut csv = Csv::new(format!("field_{step}.csv"), header);
    for (i, v) in u.values().iter().enumerate() {
        let [x, y] = mesh.cell_center(i);
        let mut row = vec![i.to_string(), real(x)];
        if mesh.dim() == 2 {
            row.push(real(y));
        }
        row.push(real(*v));
        csv.row(row);
    }
    csv
}

fn run_riemannian(p: &RiemannianProblem, every: usize, w: &mut Writer, s: &mut Summary) -> curvedflow_core::Result<()> {
    let mut table = Csv::new("norms.csv", output::NORMS);
    let mut snaps = Snapshots { every, recorded: 0 };
    let t_end = p.cfg.t_end;
    let result = solve_with(&p.mesh, &p.u0, &p.flux, &p.cfg, |step, t, u| {
        let n = norms(&p.mesh, u);
        table.row([t, n.l1, n.l2, n.linf, n.mass].map(real));
        let scalars = norm_scalars(n.l1, n.l2, n.linf, n.mass);
        if step == 0 {
            s.initial = scalars.clone();
        }
        s.last = scalars;
        s.t_final = t;
        s.steps = step as u64;
        if snaps.take(t >= t_end) {
            w.put(&field_csv(&p.mesh, step, u));
        }
    });
    w.put(&table);
    result.map(|_| ())
}

fn run_lorentzian(p: &LorentzianProblem, every: usize, w: &mut Writer, s: &mut Summary) -> curvedflow_core::Result<()> {
    let (fol, flux) = (&p.fol, &p.flux);
    let mut table = Csv::new("norms.csv", output::NORMS);
    let mut traces = Csv::new("traces.csv", output::TRACES);
    let mut distance = Csv::new("distance.csv", output::DISTANCE);
    let mut entropies = vec![ConvexEntropy::Quadratic];
    entropies.extend(p.kruzkov_k.iter().map(|&k| ConvexEntropy::Kruzkov { k }));
    let mut initial = vec![p.u0.clone()];
    initial.extend(p.companion.clone());
    let mut snaps = Snapshots { every, recorded: 0 };
    let mut failure = None;
    let t_end = p.cfg.t_end;
    let result = evolve(flux, fol, &initial, &p.cfg, &p.kruzkov_k, |step, t, states| {
        let u = &states[0];
        let dx = fol.dx();
        let (mut l1, mut l2, mut linf) = (0.0, 0.0, 0.0f64);
        for (i, &v) in u.iter().enumerate() {
            let vol = fol.sqrt_gamma(t, fol.center(i)) * dx;
            l1 += v.abs() * vol;
            l2 += v * v * vol;
            linf = linf.max(v.abs());
        }
        let mass = slice_integral(flux, fol, t, u);
        table.row([t, l1, l2.sqrt(), linf, mass].map(real));
        let scalars = norm_scalars(l1, l2.sqrt(), linf, mass);
        if step == 0 {
            s.initial = scalars.clone();
        }
        s.last = scalars;
        s.t_final = t;
        s.steps = step as u64;
        for e in &entropies {
            match trace_entropy_norm(flux, fol, t, u, e) {
                Ok(v) => traces.row([real(t), e.name(), real(v)]),
                Err(err) => failure = failure.take().or(Some(err)),
            }
        }
        if let Some(v) = states.get(1) {
            match l1_flux_distance(flux, fol, t, u, v) {
                Ok(d) => distance.row([real(t), real(d)]),
                Err(err) => failure = failure.take().or(Some(err)),
            }
        }
        if snaps.take(t >= t_end) {
            let mut csv = Csv::new(format!("field_{step}.csv"), output::FIELD_1D);
            for (i, v) in u.iter().enumerate() {
                csv.row([i.to_string(), real(fol.center(i)), real(*v)]);
            }
            w.put(&csv);
        }
    });
    w.put(&table);
    w.put(&traces);
    if p.companion.is_some() {
        w.put(&distance);
    }
    result?;
    failure.map_or(Ok(()), Err)
}

fn series_scalars(r: &SeriesRow) -> Scalars {
    Scalars::from([
        ("tv_mu", r.tv_mu),
        ("tv_v", r.tv_v),
        ("tv_w", r.tv_w),
        ("sup_alpha_b", r.sup_alpha_b),
        ("sup_mu", r.sup_mu),
        ("max_r1", r.max_r1),
        ("max_r2", r.max_r2),
    ])
}

fn gowdy_snapshots(state: &GowdyState, p: &GowdyProblem) -> (Csv, Csv) {
    let dx = p.cfg.dx();
    let mut fluid = Csv::new(format!("gowdy_fluid_{}.csv", state.step), output::GOWDY_FLUID);
    for (i, f) in state.fluid.iter().enumerate() {
        let x = (i as f64 + 0.5) * dx;
        let (tau, s) = primitive_to_conserved(*f, p.cfg.cs).map_or((f64::NAN, f64::NAN), |c| (c.tau, c.s));
        fluid.row([i.to_string(), real(x), real(f.mu), real(f.v), real(tau), real(s)]);
    }
    let g = &state.geo;
    let (alpha, beta) = (g.alpha(), g.beta());
    let mut geo = Csv::new(format!("gowdy_geo_{}.csv", state.step), output::GOWDY_GEO);
    for i in 0..g.len() {
        let x = (i as f64 + 0.5) * dx;
        let vals = [x, g.a[i], g.b[i], g.c[i], g.at[i], g.ax[i], g.bt[i], g.bx[i], g.ct[i], g.cx[i], alpha[i], beta[i]];
        geo.row(std::iter::once(i.to_string()).chain(vals.map(real)));
    }
    (fluid, geo)
}

fn run_gowdy(p: &GowdyProblem, every: usize, w: &mut Writer, s: &mut Summary) -> curvedflow_core::Result<()> {
    let mut series = Csv::new("gowdy_series.csv", output::GOWDY_SERIES);
    let mut snaps = Snapshots { every, recorded: 0 };
    let (mut times, mut tv) = (vec![], vec![]);
    let mut max_jump = 0.0f64;
    let result = gowdy::run(&p.init, &p.cfg, |state, row| {
        let vals = [row.t, row.tv_mu, row.tv_v, row.tv_w, row.sup_alpha_b, row.sup_mu, row.max_r1, row.max_r2];
        series.row(vals.map(real).into_iter().chain([row.verdict.as_str().to_string()]));
        if times.is_empty() {
            s.initial = series_scalars(row);
        }
        s.last = series_scalars(row);
        times.push(row.t);
        tv.push(row.tv_mu + row.tv_v + row.tv_w);
        max_jump = max_jump.max(row.max_w_jump);
        if snaps.take(row.verdict != Verdict::Running) {
            let (fluid, geo) = gowdy_snapshots(state, p);
            w.put(&fluid);
            w.put(&geo);
        }
    });
    w.put(&series);
    s.tv_growth_rate = tv_growth_rate(&times, &tv);
    s.max_w_jump = Some(max_jump);
    let out = result?;
    s.t_final = out.state.t;
    s.steps = out.state.step;
    s.verdict = Some(out.verdict.as_str());
    s.fluid_failure = out.failure;
    Ok(())
}
