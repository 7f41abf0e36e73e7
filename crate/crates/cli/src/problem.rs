//! Builds solver inputs from a validated [`RunConfig`].

use std::f64::consts::PI;

use curvedflow_core::flux_entropy::{burgers_1d, flux_from_field_1d, flux_from_potential_1d, flux_from_stream_2d, sample_corners};
use curvedflow_core::gowdy::{build_initial, GowdyConfig, InitialData, InitialFamily, InitialParams, Splitting, Thresholds, WaveProfile};
use curvedflow_core::lorentzian_fv::check_timelike;
use curvedflow_core::{
    build_circle_mesh, build_torus_mesh, CellField, Foliation1p1, FoliationFamily, FluxField, FvConfig, Mesh, NumericalFlux,
    Polynomial, TimelikeFlux,
};

use crate::config::*;

pub struct RiemannianProblem {
    pub mesh: Mesh,
    pub flux: FluxField,
    pub u0: CellField,
    pub cfg: FvConfig,
}

pub struct LorentzianProblem {
    pub fol: Foliation1p1,
    pub flux: TimelikeFlux,
    pub u0: Vec<f64>,
    pub companion: Option<Vec<f64>>,
    pub kruzkov_k: Vec<f64>,
    pub cfg: FvConfig,
}

pub struct GowdyProblem {
    pub init: InitialData,
    pub cfg: GowdyConfig,
}

pub enum Problem {
    Riemannian(RiemannianProblem),
    Lorentzian(LorentzianProblem),
    Gowdy(GowdyProblem),
}

type Result<T> = std::result::Result<T, curvedflow_core::Error>;

fn fv_config(n: &Numerics) -> FvConfig {
    let numerical_flux = match n.numerical_flux {
        FluxScheme::Rusanov => NumericalFlux::Rusanov,
        FluxScheme::Godunov => NumericalFlux::Godunov,
    };
    FvConfig { cfl: n.cfl, t_end: n.t_end, numerical_flux, record_every: n.record_every }
}

pub fn build(cfg: &RunConfig) -> Result<Problem> {
    match cfg.solver {
        SolverKind::Riemannian => riemannian(cfg.riemannian.as_ref().expect("materialized"), &cfg.numerics).map(Problem::Riemannian),
        SolverKind::Lorentzian => lorentzian(cfg.lorentzian.as_ref().expect("materialized"), &cfg.numerics).map(Problem::Lorentzian),
        SolverKind::Gowdy => gowdy(cfg.gowdy.as_ref().expect("materialized"), &cfg.numerics).map(Problem::Gowdy),
    }
}

fn scalar_initial(spec: &ScalarInitial, periods: (f64, f64)) -> impl Fn(f64, f64) -> f64 + '_ {
    move |x, y| {
        let (sx, sy) = (x / periods.0, y / periods.1);
        match *spec {
            ScalarInitial::Constant { value } => value,
            ScalarInitial::Box { inside, outside, from, to } => {
                if (from..to).contains(&sx) {
                    inside
                } else {
                    outside
                }
            }
            ScalarInitial::Sine { mean, amplitude, mode } => {
                let k = 2.0 * PI * mode as f64;
                mean + amplitude * (k * sx).sin() * (k * sy).cos()
            }
        }
    }
}

fn riemannian(s: &RiemannianSection, n: &Numerics) -> Result<RiemannianProblem> {
    let amp = match s.metric {
        MetricSpec::Flat => 0.0,
        MetricSpec::Sine { amplitude } => amplitude,
    };
    let poly = |c: &Vec<f64>| Polynomial::new(c);
    let (mesh, flux, periods) = match s.mesh {
        MeshSpec::Circle { n_cells, length } => {
            let m = build_circle_mesh(n_cells, length, |x| 1.0 + amp * (2.0 * PI * x / length).sin())?;
            let flux = match &s.flux {
                FluxSpec::Burgers1d => burgers_1d(&m),
                FluxSpec::Potential1d { coeffs } => flux_from_potential_1d(&m, poly(coeffs)?),
                FluxSpec::Field1d { coeffs, amplitude } => {
                    flux_from_field_1d(&m, |x| 1.0 + amplitude * (2.0 * PI * x / length).sin(), poly(coeffs)?)?
                }
                FluxSpec::Stream2d { .. } => unreachable!("rejected by validation"),
            };
            (Mesh::from(m), flux, (length, 1.0))
        }
        MeshSpec::Torus { nx, ny, length_x, length_y } => {
            let m = build_torus_mesh(nx, ny, (length_x, length_y), |x, y| {
                let gx = 1.0 + amp * (2.0 * PI * x / length_x).sin().powi(2);
                let gy = 1.0 + amp * (2.0 * PI * y / length_y).sin().powi(2);
                [gx, 0.0, gy]
            })?;
            let FluxSpec::Stream2d { coeffs, amplitude } = &s.flux else { unreachable!("rejected by validation") };
            let psi = sample_corners(&m, |x, y| amplitude * (2.0 * PI * x / length_x).sin() * (2.0 * PI * y / length_y).sin());
            let flux = flux_from_stream_2d(&m, &psi, poly(coeffs)?)?;
            (Mesh::from(m), flux, (length_x, length_y))
        }
    };
    let u0 = CellField::from_fn(&mesh, scalar_initial(&s.initial, periods))?;
    let cfg = fv_config(n);
    cfg.validate()?;
    Ok(RiemannianProblem { mesh, flux, u0, cfg })
}

fn lorentzian(s: &LorentzianSection, n: &Numerics) -> Result<LorentzianProblem> {
    let family = match s.foliation {
        FoliationSpec::Minkowski => FoliationFamily::Minkowski,
        FoliationSpec::LapseWave { amplitude } => FoliationFamily::LapseWave { amplitude },
        FoliationSpec::Breathing { amplitude, omega } => FoliationFamily::Breathing { amplitude, omega },
    };
    let fol = Foliation1p1::new(s.n_cells, s.period, family)?;
    let flux = match s.flux {
        TimelikeSpec::Transport { speed } => TimelikeFlux::transport(speed),
        TimelikeSpec::Burgers => TimelikeFlux::burgers(),
        TimelikeSpec::StreamedBurgers { amplitude, omega } => {
            TimelikeFlux::burgers().with_stream(Polynomial::linear(1.0), amplitude, omega)
        }
    };
    let sample = |spec: &ScalarInitial| -> Vec<f64> {
        let f = scalar_initial(spec, (s.period, 1.0));
        (0..s.n_cells).map(|i| f(fol.center(i), 0.0)).collect()
    };
    let u0 = sample(&s.initial);
    let companion = s.companion.as_ref().map(sample);
    let mut states: Vec<f64> = u0.iter().chain(companion.iter().flatten()).chain(&s.kruzkov_k).copied().collect();
    states.sort_by(f64::total_cmp);
    states.dedup();
    let report = check_timelike(&flux, &fol, &[0.0], &states);
    if !report.is_timelike() {
        let (t, cell, u) = report.worst;
        return Err(curvedflow_core::Error::NotTimelike { t, cell, u, value: report.max_norm });
    }
    let cfg = fv_config(n);
    cfg.validate()?;
    Ok(LorentzianProblem { fol, flux, u0, companion, kruzkov_k: s.kruzkov_k.clone(), cfg })
}

fn gowdy(s: &GowdySection, n: &Numerics) -> Result<GowdyProblem> {
    let cfg = GowdyConfig {
        kappa: s.kappa,
        cs: s.c_s,
        n_cells: s.n_cells,
        length: s.length,
        cfl: n.cfl,
        t_end: n.t_end,
        vdc_base: s.vdc_base,
        splitting: match s.splitting {
            SplittingSpec::Lie => Splitting::Lie,
            SplittingSpec::Strang => Splitting::Strang,
        },
        thresholds: Thresholds {
            alpha_b_ceiling: s.thresholds.alpha_b_ceiling,
            mu_ceiling: s.thresholds.mu_ceiling,
            beta_floor: s.thresholds.beta_floor,
        },
        record_every: n.record_every,
    };
    cfg.validate()?;
    let family = match s.initial {
        GowdyInitial::ConstrainedWave { mu0, epsilon, amp, rate, mode, bt0 } => {
            InitialFamily::ConstrainedWave { mu0, epsilon, wave: WaveProfile { amp, rate, mode }, bt0 }
        }
        GowdyInitial::Riemann { mu_left, mu_right, bt0 } => InitialFamily::Riemann { mu_left, mu_right, bt0 },
        GowdyInitial::Collapse { mu0, bt0 } => InitialFamily::Collapse { mu0, bt0 },
        GowdyInitial::Colliding { mu0, speed, bt0 } => InitialFamily::Colliding { mu0, speed, bt0 },
    };
    let params = InitialParams { n_cells: s.n_cells, length: s.length, cs: s.c_s, kappa: s.kappa, a0: s.a0, b0: s.b0 };
    let init = build_initial(&family, &params)?;
    Ok(GowdyProblem { init, cfg })
}
