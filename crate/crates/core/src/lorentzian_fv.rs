//! Conservation laws `div f(u) = 0` on a 1+1 spacetime foliated by the slices
//! `t = const` of a periodic spatial circle.
//!
//! With lapse `N` and spatial volume element `sqrt(gamma)`, the law reads
//! `d_t P(u) + d_x Q(u) = 0` for the densitised components
//! `P = N sqrt(gamma) f^t` and `Q = N sqrt(gamma) f^x`. Built-in fluxes are
//!
//! ```text
//! P(t, x, u) = phi_t(u) + d_x s(t, x) phi(u)
//! Q(t, x, u) = phi_x(u) - d_t s(t, x) phi(u)
//! ```
//!
//! with `s = x + A (L / 2 pi) sin(2 pi x / L - omega t)`. The `s` part is
//! divergence free for every fixed `u`; it is discretised by exact differences
//! of `s` so that constant states stay constant to roundoff.
//!
//! The discrete unknown is the conserved density `V_i = P_i(u_i)`. After each
//! conservative update the state is recovered by inverting `u -> P_i(u)`,
//! which is strictly increasing for a future-directed time-like flux.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::flux_entropy::ConvexEntropy;
use crate::polynomial::Polynomial;
use crate::riemannian_fv::FvConfig;
use crate::root;
use crate::scheme::{self, NumericalFlux};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FoliationFamily {
    /// `N = 1`, `sqrt(gamma) = 1`
    Minkowski,
    /// `N = 1 + a sin(2 pi x / L)`, `sqrt(gamma) = 1`
    LapseWave { amplitude: f64 },
    /// `N = 1 + a sin(omega t + 2 pi x / L)`, `sqrt(gamma) = 1 + a cos(omega t)`
    Breathing { amplitude: f64, omega: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Foliation1p1 {
    n_cells: usize,
    period: f64,
    family: FoliationFamily,
}

impl Foliation1p1 {
    pub fn new(n_cells: usize, period: f64, family: FoliationFamily) -> Result<Self> {
        if n_cells < 4 {
            return Err(Error::InvalidMesh(format!("need at least 4 cells, got {n_cells}")));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidMesh(format!("period must be positive, got {period}")));
        }
        let amplitude = match family {
            FoliationFamily::Minkowski => 0.0,
            FoliationFamily::LapseWave { amplitude } => amplitude,
            FoliationFamily::Breathing { amplitude, omega } => {
                if !omega.is_finite() {
                    return Err(Error::InvalidParameter(format!("omega must be finite, got {omega}")));
                }
                amplitude
            }
        };
        if !(amplitude.is_finite() && amplitude.abs() < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "foliation amplitude must satisfy |a| < 1 so that N and sqrt(gamma) stay positive, got {amplitude}"
            )));
        }
        Ok(Self { n_cells, period, family })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn family(&self) -> FoliationFamily {
        self.family
    }

    pub fn dx(&self) -> f64 {
        self.period / self.n_cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx()
    }

    pub fn lapse(&self, t: f64, x: f64) -> f64 {
        let k = 2.0 * PI / self.period;
        match self.family {
            FoliationFamily::Minkowski => 1.0,
            FoliationFamily::LapseWave { amplitude } => 1.0 + amplitude * (k * x).sin(),
            FoliationFamily::Breathing { amplitude, omega } => 1.0 + amplitude * (omega * t + k * x).sin(),
        }
    }

    pub fn sqrt_gamma(&self, t: f64, _x: f64) -> f64 {
        match self.family {
            FoliationFamily::Breathing { amplitude, omega } => 1.0 + amplitude * (omega * t).cos(),
            _ => 1.0,
        }
    }
}

/// Densitised time-like flux family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimelikeFlux {
    pub phi_t: Polynomial,
    pub phi_x: Polynomial,
    /// Profile multiplying the stream part.
    pub phi: Polynomial,
    pub stream_amplitude: f64,
    pub stream_omega: f64,
}

impl TimelikeFlux {
    /// `P = u`, `Q = speed u`
    pub fn transport(speed: f64) -> Self {
        Self::plain(Polynomial::linear(1.0), Polynomial::linear(speed))
    }

    /// `P = u`, `Q = u^2 / 2`
    pub fn burgers() -> Self {
        Self::plain(Polynomial::linear(1.0), Polynomial::burgers())
    }

    pub fn plain(phi_t: Polynomial, phi_x: Polynomial) -> Self {
        Self { phi_t, phi_x, phi: Polynomial::ZERO, stream_amplitude: 0.0, stream_omega: 0.0 }
    }

    pub fn with_stream(mut self, phi: Polynomial, amplitude: f64, omega: f64) -> Self {
        self.phi = phi;
        self.stream_amplitude = amplitude;
        self.stream_omega = omega;
        self
    }

    /// Periodic part `sigma = s - x` of the stream function.
    fn sigma(&self, period: f64, t: f64, x: f64) -> f64 {
        if self.stream_amplitude == 0.0 {
            return 0.0;
        }
        self.stream_amplitude * period / (2.0 * PI) * (2.0 * PI * x / period - self.stream_omega * t).sin()
    }

    /// Cell coefficient `p_i(t) = (s(t, x_{i+1}) - s(t, x_i)) / dx`.
    fn cell_coefficient(&self, fol: &Foliation1p1, t: f64, i: usize) -> f64 {
        let dx = fol.dx();
        let l = fol.period;
        1.0 + (self.sigma(l, t, (i + 1) as f64 * dx) - self.sigma(l, t, i as f64 * dx)) / dx
    }

    /// Edge coefficient `q_e = -(s(t + dt, x_e) - s(t, x_e)) / dt` at `x_e = (e + 1) dx`.
    fn edge_coefficient(&self, fol: &Foliation1p1, t: f64, dt: f64, e: usize) -> f64 {
        if self.stream_amplitude == 0.0 {
            return 0.0;
        }
        let x = (e + 1) as f64 * fol.dx();
        -(self.sigma(fol.period, t + dt, x) - self.sigma(fol.period, t, x)) / dt
    }

    /// `P_i(t, .)` as a polynomial.
    pub fn cell_density(&self, fol: &Foliation1p1, t: f64, i: usize) -> Polynomial {
        self.phi_t.add_scaled(&self.phi, self.cell_coefficient(fol, t, i))
    }

    /// `Q_e` over the step `[t, t + dt]` as a polynomial.
    pub fn edge_flux(&self, fol: &Foliation1p1, t: f64, dt: f64, e: usize) -> Polynomial {
        self.phi_x.add_scaled(&self.phi, self.edge_coefficient(fol, t, dt, e))
    }

    /// Coordinate components `(f^t, f^x)` at the center of cell `i`.
    pub fn eval(&self, fol: &Foliation1p1, t: f64, i: usize, u: f64) -> [f64; 2] {
        let (p, q) = self.pointwise(fol, t, i);
        let x = fol.center(i);
        let w = fol.lapse(t, x) * fol.sqrt_gamma(t, x);
        [p.eval(u) / w, q.eval(u) / w]
    }

    /// `d_u (f^t, f^x)` at the center of cell `i`.
    pub fn deriv(&self, fol: &Foliation1p1, t: f64, i: usize, u: f64) -> [f64; 2] {
        let (p, q) = self.pointwise(fol, t, i);
        let x = fol.center(i);
        let w = fol.lapse(t, x) * fol.sqrt_gamma(t, x);
        [p.deriv(u) / w, q.deriv(u) / w]
    }

    fn pointwise(&self, fol: &Foliation1p1, t: f64, i: usize) -> (Polynomial, Polynomial) {
        let l = fol.period;
        let theta = 2.0 * PI * fol.center(i) / l - self.stream_omega * t;
        let ds_dt = -self.stream_amplitude * l / (2.0 * PI) * self.stream_omega * theta.cos();
        (self.cell_density(fol, t, i), self.phi_x.add_scaled(&self.phi, -ds_dt))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimelikeReport {
    /// Max of `g(d_u f, d_u f)`; negative for a time-like flux.
    pub max_norm: f64,
    /// Min of `d_u f^t`; positive for a future-directed flux.
    pub min_dft: f64,
    pub worst: (f64, usize, f64),
}

impl TimelikeReport {
    pub fn is_timelike(&self) -> bool {
        self.max_norm < 0.0 && self.min_dft > 0.0
    }
}

/// Evaluates `g(d_u f, d_u f) = -N^2 (d_u f^t)^2 + gamma (d_u f^x)^2` over every
/// cell, sample time and sample state.
pub fn check_timelike(flux: &TimelikeFlux, fol: &Foliation1p1, times: &[f64], states: &[f64]) -> TimelikeReport {
    let mut rep = TimelikeReport { max_norm: f64::NEG_INFINITY, min_dft: f64::INFINITY, worst: (0.0, 0, 0.0) };
    for &t in times {
        for i in 0..fol.n_cells {
            let x = fol.center(i);
            let (n, sg) = (fol.lapse(t, x), fol.sqrt_gamma(t, x));
            for &u in states {
                let [dt, dx] = flux.deriv(fol, t, i, u);
                let norm = -n * n * dt * dt + sg * sg * dx * dx;
                if norm > rep.max_norm {
                    rep.max_norm = norm;
                    rep.worst = (t, i, u);
                }
                rep.min_dft = rep.min_dft.min(dt);
            }
        }
    }
    rep
}

/// Solves `P(u) = value` on the interval where `P` is increasing.
fn invert(p: &Polynomial, value: f64, lo: f64, hi: f64, cell: usize) -> Result<f64> {
    let [c0, c1, c2, c3] = p.coeffs();
    if c2 == 0.0 && c3 == 0.0 && c1 > 0.0 {
        return Ok((value - c0) / c1);
    }
    let (plo, phi) = (p.eval(lo), p.eval(hi));
    if value < plo || value > phi {
        return Err(Error::InversionFailure { cell, value, lo: plo, hi: phi });
    }
    root::newton_bisect(|u| p.eval(u) - value, |u| p.deriv(u), lo, hi)
}

/// Per-step data shared by every state advanced with the same `dt`.
struct StepData {
    densities: Vec<Polynomial>,
    next_densities: Vec<Polynomial>,
    edge_fluxes: Vec<Polynomial>,
}

impl StepData {
    fn new(flux: &TimelikeFlux, fol: &Foliation1p1, t: f64, dt: f64) -> Self {
        let n = fol.n_cells;
        Self {
            densities: (0..n).map(|i| flux.cell_density(fol, t, i)).collect(),
            next_densities: (0..n).map(|i| flux.cell_density(fol, t + dt, i)).collect(),
            edge_fluxes: (0..n).map(|e| flux.edge_flux(fol, t, dt, e)).collect(),
        }
    }
}

/// Rate `r` with CFL number `dt * r`, for states in `[lo, hi]` at time `t`
/// and step `dt` (the edge fluxes depend weakly on `dt` through the stream).
fn cfl_rate(flux: &TimelikeFlux, fol: &Foliation1p1, t: f64, dt: f64, lo: f64, hi: f64) -> Result<f64> {
    let n = fol.n_cells;
    let dx = fol.dx();
    let bounds: Vec<f64> = (0..n).map(|e| scheme::edge_speed_bound(&flux.edge_flux(fol, t, dt, e), lo, hi)).collect();
    let mut cells = Vec::with_capacity(n);
    for i in 0..n {
        let dp = flux.cell_density(fol, t, i).derivative();
        let (min_dp, _) = dp.min_max(lo, hi);
        if !(min_dp > 0.0) {
            return Err(Error::NotTimelike { t, cell: i, u: lo, value: min_dp });
        }
        cells.push((bounds[i] + bounds[(i + n - 1) % n], dx * min_dp));
    }
    Ok(scheme::cfl_rate(cells))
}

/// Picks the step: the rate is re-evaluated with the trial `dt` until the
/// CFL number is within `cfl` (the stream coefficients depend on `dt`).
fn choose_dt(flux: &TimelikeFlux, fol: &Foliation1p1, t: f64, lo: f64, hi: f64, cfl: f64, remaining: f64) -> Result<f64> {
    let mut dt = scheme::next_dt(cfl_rate(flux, fol, t, remaining, lo, hi)?, cfl, remaining);
    if flux.stream_amplitude == 0.0 || flux.stream_omega == 0.0 {
        return Ok(dt);
    }
    for _ in 0..50 {
        let rate = cfl_rate(flux, fol, t, dt, lo, hi)?;
        if dt * rate <= cfl * (1.0 + 1e-12) {
            return Ok(dt);
        }
        dt = scheme::next_dt(rate, cfl, remaining).min(0.9 * dt);
    }
    Ok(dt)
}

fn advance(data: &StepData, u: &[f64], dt: f64, dx: f64, nf: NumericalFlux, lo: f64, hi: f64) -> Result<Vec<f64>> {
    let n = u.len();
    let h: Vec<f64> = (0..n).map(|e| nf.eval(&data.edge_fluxes[e], u[e], u[(e + 1) % n])).collect();
    // roundoff in the compatible update can put V a hair outside P([lo, hi])
    let pad = 1e-9 * (1.0 + (hi - lo).abs() + lo.abs().max(hi.abs()));
    (0..n)
        .map(|i| {
            let v = data.densities[i].eval(u[i]);
            let v_new = scheme::conservative_update(v, dt, dx, h[i] - h[(i + n - 1) % n]);
            let p = &data.next_densities[i];
            invert(p, v_new, lo, hi, i).or_else(|_| invert(p, v_new, lo - pad, hi + pad, i))
        })
        .collect()
}

/// One step of a single state with a prescribed `dt`.
pub fn step(
    flux: &TimelikeFlux,
    fol: &Foliation1p1,
    t: f64,
    u: &[f64],
    dt: f64,
    nf: NumericalFlux,
) -> Result<Vec<f64>> {
    if u.len() != fol.n_cells {
        return Err(Error::LengthMismatch { expected: fol.n_cells, got: u.len() });
    }
    let (lo, hi) = range(u);
    scheme::check_cfl(dt, cfl_rate(flux, fol, t, dt, lo, hi)?)?;
    advance(&StepData::new(flux, fol, t, dt), u, dt, fol.dx(), nf, lo, hi)
}

fn range(u: &[f64]) -> (f64, f64) {
    u.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)))
}

#[derive(Debug, Clone)]
pub struct LorentzRun {
    /// Final states, in input order.
    pub states: Vec<Vec<f64>>,
    /// Time of every slice reached, starting at 0.
    pub t_grid: Vec<f64>,
    pub steps: usize,
}

/// Evolves several states in lockstep with one shared `dt`, chosen so that the
/// scheme is monotone on the hull of all states and the extra values in
/// `range_hint` (e.g. the constants of Kruzkov entropies whose traces are
/// monitored). The observer sees `(step, t, states)` at every recorded step.
pub fn evolve<O>(
    flux: &TimelikeFlux,
    fol: &Foliation1p1,
    initial: &[Vec<f64>],
    cfg: &FvConfig,
    range_hint: &[f64],
    mut observer: O,
) -> Result<LorentzRun>
where
    O: FnMut(usize, f64, &[Vec<f64>]),
{
    cfg.validate()?;
    for u in initial {
        if u.len() != fol.n_cells {
            return Err(Error::LengthMismatch { expected: fol.n_cells, got: u.len() });
        }
        if let Some((cell, &value)) = u.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { cell, value });
        }
    }
    let mut states = initial.to_vec();
    let (mut t, mut n) = (0.0, 0);
    let mut t_grid = vec![0.0];
    observer(0, t, &states);
    while t < cfg.t_end {
        let (mut lo, mut hi) = range(range_hint);
        for u in &states {
            let (a, b) = range(u);
            lo = lo.min(a);
            hi = hi.max(b);
        }
        let remaining = cfg.t_end - t;
        let dt = choose_dt(flux, fol, t, lo, hi, cfg.cfl, remaining)?;
        let data = StepData::new(flux, fol, t, dt);
        states = states
            .iter()
            .map(|u| advance(&data, u, dt, fol.dx(), cfg.numerical_flux, lo, hi))
            .collect::<Result<_>>()?;
        n += 1;
        t = if dt == remaining { cfg.t_end } else { t + dt };
        t_grid.push(t);
        if n % cfg.record_every == 0 || t >= cfg.t_end {
            observer(n, t, &states);
        }
    }
    Ok(LorentzRun { states, t_grid, steps: n })
}

/// `sum_i P_i(u_i) dx`, the slice integral of the conserved density.
pub fn slice_integral(flux: &TimelikeFlux, fol: &Foliation1p1, t: f64, u: &[f64]) -> f64 {
    u.iter().enumerate().map(|(i, &v)| flux.cell_density(fol, t, i).eval(v) * fol.dx()).sum()
}

/// `sum_i N sqrt(gamma) |F^t(u_i)| dx` for the entropy flux of `entropy`.
/// The trace of the solution on the slice is taken to be the cell averages `u`.
///
/// `F^t = (int_0^u U'(s) d_s P(s) ds) / (N sqrt(gamma))`; for Kruzkov
/// entropies the closed form `sgn(u - k) (P(u) - P(k))` is used.
pub fn trace_entropy_norm(
    flux: &TimelikeFlux,
    fol: &Foliation1p1,
    t: f64,
    u: &[f64],
    entropy: &ConvexEntropy,
) -> Result<f64> {
    let dx = fol.dx();
    let mut sum = 0.0;
    for (i, &v) in u.iter().enumerate() {
        let x = fol.center(i);
        let w = fol.lapse(t, x) * fol.sqrt_gamma(t, x);
        let ft = entropy.flux_profile(&flux.cell_density(fol, t, i), v)? / w;
        sum += w * ft.abs() * dx;
    }
    Ok(sum)
}

/// `sum_i |P_i(u_i) - P_i(v_i)| dx`.
pub fn l1_flux_distance(flux: &TimelikeFlux, fol: &Foliation1p1, t: f64, u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() || u.len() != fol.n_cells {
        return Err(Error::LengthMismatch { expected: fol.n_cells, got: u.len().min(v.len()) });
    }
    Ok(u.iter()
        .zip(v)
        .enumerate()
        .map(|(i, (&a, &b))| {
            let p = flux.cell_density(fol, t, i);
            (p.eval(a) - p.eval(b)).abs() * fol.dx()
        })
        .sum())
}

/// Rankine-Hugoniot speed `[Q] / [P]` of a jump between two states.
pub fn shock_speed(phi_t: &Polynomial, phi_x: &Polynomial, ul: f64, ur: f64) -> f64 {
    (phi_x.eval(ul) - phi_x.eval(ur)) / (phi_t.eval(ul) - phi_t.eval(ur))
}
