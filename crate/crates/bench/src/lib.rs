//! Shared fixtures for the benchmarks.

use std::f64::consts::PI;

use curvedflow_core::flux_entropy::{burgers_1d, flux_from_stream_2d, sample_corners};
use curvedflow_core::gowdy::{build_initial, FluidState, GowdyConfig, InitialData, InitialFamily, InitialParams, WaveProfile};
use curvedflow_core::{build_circle_mesh, build_torus_mesh, CellField, FluxField, Mesh, Polynomial};

/// Curved torus with a stream-function flux and smooth data.
pub fn torus_problem(n: usize) -> (Mesh, FluxField, CellField) {
    let m = build_torus_mesh(n, n, (1.0, 1.0), |x, _| [1.0 + 0.3 * (2.0 * PI * x).sin().powi(2), 0.0, 1.0])
        .expect("torus mesh");
    let psi = sample_corners(&m, |x, y| (2.0 * PI * x).sin() * (2.0 * PI * y).sin());
    let flux = flux_from_stream_2d(&m, &psi, Polynomial::burgers()).expect("stream flux");
    let mesh: Mesh = m.into();
    let u = CellField::from_fn(&mesh, |x, y| (2.0 * PI * x).cos() * (2.0 * PI * y).sin()).expect("field");
    (mesh, flux, u)
}

/// Burgers on a curved circle with a sine profile.
pub fn circle_problem(n: usize) -> (Mesh, FluxField, CellField) {
    let m = build_circle_mesh(n, 1.0, |x| 1.0 + 0.4 * (2.0 * PI * x).sin()).expect("circle mesh");
    let flux = burgers_1d(&m);
    let mesh: Mesh = m.into();
    let u = CellField::from_fn(&mesh, |x, _| 0.5 + 0.4 * (2.0 * PI * x).sin()).expect("field");
    (mesh, flux, u)
}

pub fn gowdy_problem(n: usize) -> (InitialData, GowdyConfig) {
    let params = InitialParams { n_cells: n, length: 1.0, cs: 0.5, kappa: 1.0, a0: 0.0, b0: 0.0 };
    let family = InitialFamily::ConstrainedWave {
        mu0: 0.1,
        epsilon: 0.1,
        wave: WaveProfile { amp: 0.05, rate: 0.05, mode: 1 },
        bt0: 1.0,
    };
    let init = build_initial(&family, &params).expect("initial data");
    (init, GowdyConfig { n_cells: n, t_end: 0.1, ..GowdyConfig::default() })
}

/// Alternating Riemann data for the random-choice step.
pub fn fluid_jumps(n: usize) -> Vec<FluidState> {
    (0..n)
        .map(|i| {
            let (mu, v) = if (i / 8) % 2 == 0 { (2.0, 0.3) } else { (1.0, -0.2) };
            FluidState::new(mu, v).expect("physical state")
        })
        .collect()
}
