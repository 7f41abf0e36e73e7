mod common;

use std::f64::consts::PI;

use common::order;
use curvedflow_core::gowdy::{
    build_initial, fluid_source_step, geometry_step, glimm_step, matter_terms, primitive_to_conserved, reconstruct_metric,
    run, source_terms, wave_sources, FluidState, GeometryState, GowdyConfig, InitialData, InitialFamily, InitialParams,
    MatterTerms, MetricDerivatives, MetricSlopes, Verdict, WaveProfile,
};

const CS: f64 = 0.5;

/// Smooth metric used for manufactured solutions: values, first derivatives
/// and `f_tt - f_xx` for `a, b, c`.
fn metric_exact(t: f64, x: f64) -> ([f64; 3], MetricDerivatives, [f64; 3]) {
    let (pa, pb, pc) = (x + 0.5 * t, x - 0.3 * t, 2.0 * x + t);
    let vals = [0.3 * pa.sin() + 0.1 * t, 0.2 * pb.cos() + 0.1 + 0.05 * t * t, 0.25 * pc.sin()];
    let d = MetricDerivatives {
        at: 0.15 * pa.cos() + 0.1,
        ax: 0.3 * pa.cos(),
        bt: 0.06 * pb.sin() + 0.1 * t,
        bx: -0.2 * pb.sin(),
        ct: 0.25 * pc.cos(),
        cx: 0.5 * pc.cos(),
    };
    let boxes = [(-0.075 + 0.3) * pa.sin(), -0.018 * pb.cos() + 0.1 + 0.2 * pb.cos(), (-0.25 + 1.0) * pc.sin()];
    (vals, d, boxes)
}

fn geometry_exact(n: usize, t: f64) -> GeometryState {
    let dx = 2.0 * PI / n as f64;
    let mut g = GeometryState::flat(n);
    for i in 0..n {
        let ([a, b, c], d, _) = metric_exact(t, (i as f64 + 0.5) * dx);
        g.a[i] = a;
        g.b[i] = b;
        g.c[i] = c;
        g.at[i] = d.at;
        g.ax[i] = d.ax;
        g.bt[i] = d.bt;
        g.bx[i] = d.bx;
        g.ct[i] = d.ct;
        g.cx[i] = d.cx;
    }
    g
}

fn max_diff(g: &GeometryState, h: &GeometryState) -> f64 {
    let pairs = [
        (&g.a, &h.a),
        (&g.b, &h.b),
        (&g.c, &h.c),
        (&g.at, &h.at),
        (&g.ax, &h.ax),
        (&g.bt, &h.bt),
        (&g.bx, &h.bx),
        (&g.ct, &h.ct),
        (&g.cx, &h.cx),
    ];
    pairs.iter().flat_map(|(u, v)| u.iter().zip(v.iter()).map(|(p, q)| (p - q).abs())).fold(0.0, f64::max)
}

fn matter(f: FluidState) -> MatterTerms {
    matter_terms(&[f], CS).unwrap()[0]
}

#[test]
fn dalembert_wave_converges_at_second_order() {
    let t_end = 1.0;
    let mut errs = vec![];
    for n in [32, 64, 128] {
        let dx = 2.0 * PI / n as f64;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * dx).collect();
        let mut g = GeometryState::flat(n);
        for (i, x) in xs.iter().enumerate() {
            g.c[i] = x.cos();
            g.cx[i] = -x.sin();
        }
        let vacuum = vec![MatterTerms { tau: 0.0, s: 0.0, sigma: 0.0, p: 0.0 }; n];
        let steps = (t_end / (0.45 * dx)).ceil() as usize;
        let dt = t_end / steps as f64;
        for k in 0..steps {
            g = geometry_step(&g, &vacuum, 0.0, dx, dt, k as f64 * dt, None).unwrap();
        }
        errs.push(xs.iter().zip(&g.c).map(|(x, c)| (c - x.cos() * t_end.cos()).abs()).fold(0.0, f64::max));
    }
    for w in errs.windows(2) {
        assert!(order(w[0], w[1]) >= 1.8, "errors {errs:?}");
    }
}

#[test]
fn manufactured_geometry_converges_at_second_order() {
    // static matter, so the forcing is exact at every stage
    let kappa = 1.0;
    let fluid_at = |x: f64| FluidState::new(1.0 + 0.3 * x.cos(), 0.4 * x.sin()).unwrap();
    let t_end = 0.5;
    let mut errs = vec![];
    for n in [32, 64, 128] {
        let dx = 2.0 * PI / n as f64;
        let m: Vec<MatterTerms> = (0..n).map(|i| matter(fluid_at((i as f64 + 0.5) * dx))).collect();
        let forcing = |t: f64, x: f64| {
            let ([a, ..], d, boxes) = metric_exact(t, x);
            let rhs = wave_sources(a, d, matter(fluid_at(x)), kappa);
            [boxes[0] - rhs[0], boxes[1] - rhs[1], boxes[2] - rhs[2]]
        };
        let steps = (t_end / (0.45 * dx)).ceil() as usize;
        let dt = t_end / steps as f64;
        let mut g = geometry_exact(n, 0.0);
        for k in 0..steps {
            g = geometry_step(&g, &m, kappa, dx, dt, k as f64 * dt, Some(&forcing)).unwrap();
        }
        errs.push(max_diff(&g, &geometry_exact(n, t_end)));
    }
    for w in errs.windows(2) {
        assert!(order(w[0], w[1]) >= 1.8, "errors {errs:?}");
    }
}

/// Moving fluid for the split-step check.
fn fluid_exact(t: f64, x: f64) -> FluidState {
    FluidState::new(1.0 + 0.3 * (x + t).cos(), 0.4 * (x - t).sin()).unwrap()
}

fn conserved_exact(t: f64, x: f64) -> [f64; 2] {
    let c = primitive_to_conserved(fluid_exact(t, x), CS).unwrap();
    [c.tau, c.s]
}

#[test]
fn split_step_residual_is_second_order_in_dt() {
    // one source step followed by one geometry step starting from the exact
    // state; the transport part is left out of the fluid forcing
    let kappa = 1.0;
    let t0 = 0.2;
    let fluid_forcing = |t: f64, x: f64| {
        let h = 1e-4;
        let dq = |s: f64| conserved_exact(t + s, x);
        let (p2, p1, m1, m2) = (dq(2.0 * h), dq(h), dq(-h), dq(-2.0 * h));
        let rate = |k: usize| (-p2[k] + 8.0 * p1[k] - 8.0 * m1[k] + m2[k]) / (12.0 * h);
        let m = matter(fluid_exact(t, x));
        let (_, d, _) = metric_exact(t, x);
        let [t1, t2] = source_terms(m.tau, m.s, m.sigma, m.p, MetricSlopes { at: d.at, ax: d.ax, bt: d.bt, bx: d.bx });
        [rate(0) - t1, rate(1) - t2]
    };
    let geo_forcing = |t: f64, x: f64| {
        let ([a, ..], d, boxes) = metric_exact(t, x);
        let rhs = wave_sources(a, d, matter(fluid_exact(t, x)), kappa);
        [boxes[0] - rhs[0], boxes[1] - rhs[1], boxes[2] - rhs[2]]
    };
    let mut res = vec![];
    for n in [64, 128, 256] {
        let dx = 2.0 * PI / n as f64;
        let dt = 0.45 * dx;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * dx).collect();
        let fluid: Vec<FluidState> = xs.iter().map(|&x| fluid_exact(t0, x)).collect();
        let geo = geometry_exact(n, t0);
        let f1 = fluid_source_step(&fluid, &geo, CS, dx, dt, t0, Some(&fluid_forcing)).unwrap();
        let g1 = geometry_step(&geo, &matter_terms(&f1, CS).unwrap(), kappa, dx, dt, t0, Some(&geo_forcing)).unwrap();
        let fluid_err = xs
            .iter()
            .zip(&f1)
            .map(|(&x, f)| {
                let e = fluid_exact(t0 + dt, x);
                (f.mu - e.mu).abs().max((f.v - e.v).abs())
            })
            .fold(0.0, f64::max);
        res.push(fluid_err.max(max_diff(&g1, &geometry_exact(n, t0 + dt))));
    }
    for w in res.windows(2) {
        assert!(order(w[0], w[1]) >= 1.8, "residuals {res:?}");
    }
}

#[test]
fn reconstruction_integrates_to_second_order() {
    let mut errs = vec![];
    for n in [64, 128, 256] {
        let dx = 2.0 * PI / n as f64;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * dx).collect();
        let ax: Vec<f64> = xs.iter().map(|x| x.cos()).collect();
        let bx: Vec<f64> = xs.iter().map(|x| 0.5 * x.cos()).collect();
        let m = reconstruct_metric(&ax, &bx, 0.0, 1.0, dx).unwrap();
        let e = xs
            .iter()
            .enumerate()
            .map(|(i, x)| (m.a[i] - x.sin()).abs().max((m.beta[i] - 1.0 - 0.5 * x.sin()).abs()))
            .fold(0.0, f64::max);
        errs.push(e);
        let alpha_err = (0..n).map(|i| (m.alpha[i] - (2.0 * m.a[i]).exp()).abs()).fold(0.0, f64::max);
        assert!(alpha_err < 1e-14);
    }
    for w in errs.windows(2) {
        assert!(order(w[0], w[1]) >= 1.8, "errors {errs:?}");
    }
}

#[test]
fn collapsing_beta_is_rejected_by_reconstruction() {
    let n = 32;
    let dx = 1.0 / n as f64;
    let bx: Vec<f64> = (0..n).map(|i| -4.0 * (2.0 * PI * (i as f64 + 0.5) * dx).cos()).collect();
    assert!(reconstruct_metric(&vec![0.0; n], &bx, 0.0, 0.1, dx).is_err());
}

fn params(n: usize) -> InitialParams {
    InitialParams { n_cells: n, length: 1.0, cs: CS, kappa: 1.0, a0: 0.0, b0: 0.0 }
}

fn config(n: usize, t_end: f64) -> GowdyConfig {
    GowdyConfig { n_cells: n, t_end, cs: CS, ..GowdyConfig::default() }
}

fn verdict_of(family: InitialFamily) -> (Verdict, Vec<f64>) {
    let init = build_initial(&family, &params(128)).unwrap();
    let out = run(&init, &config(128, 2.0), |_, _| {}).unwrap();
    (out.verdict, out.series.iter().map(|r| r.tv_mu + r.tv_v + r.tv_w).collect())
}

#[test]
fn small_data_complete() {
    let (v, tv) = verdict_of(InitialFamily::ConstrainedWave {
        mu0: 0.01,
        epsilon: 0.1,
        wave: WaveProfile { amp: 0.01, rate: 0.01, mode: 1 },
        bt0: 1.0,
    });
    assert_eq!(v, Verdict::Completed);
    assert!(tv.len() > 2 && tv.iter().all(|t| t.is_finite()));
}

#[test]
fn collapse_blows_up_in_the_geometry() {
    let (v, _) = verdict_of(InitialFamily::Collapse { mu0: 1e-6, bt0: -1.0 });
    assert_eq!(v, Verdict::GeometryBlowup);
}

#[test]
fn ultrarelativistic_collision_blows_up_in_the_matter() {
    let (v, tv) = verdict_of(InitialFamily::Colliding { mu0: 1.0, speed: 0.999999, bt0: 1.0 });
    assert_eq!(v, Verdict::MatterBlowup);
    assert!(tv[0].is_finite());
}

#[test]
fn minkowski_limit_reduces_to_random_choice() {
    let n = 64;
    let dx = 1.0 / n as f64;
    let fluid: Vec<FluidState> = (0..n)
        .map(|i| {
            let x = (i as f64 + 0.5) * dx;
            FluidState::new(if x < 0.5 { 2.0 } else { 1.0 }, 0.3 * (2.0 * PI * x).sin()).unwrap()
        })
        .collect();
    let init = InitialData { fluid: fluid.clone(), geo: GeometryState::flat(n), a_anchor: 0.0, beta_anchor: 1.0 };
    let cfg = GowdyConfig { kappa: 0.0, ..config(n, 0.3) };
    let out = run(&init, &cfg, |_, _| {}).unwrap();
    assert_eq!(out.verdict, Verdict::Completed);
    assert_eq!(out.state.geo, GeometryState::flat(n));

    let mut f = fluid;
    let mut t = 0.0;
    let mut k = 0;
    while !(t >= cfg.t_end || cfg.t_end - t <= 1e-14 * cfg.t_end) {
        let dt = (cfg.cfl * dx).min(cfg.t_end - t);
        k += 1;
        f = glimm_step(&f, dt, dx, k, cfg.vdc_base, CS).unwrap();
        t += dt;
    }
    assert_eq!(out.state.step, k);
    assert_eq!(out.state.fluid, f);
}

#[test]
fn constraint_residuals_converge() {
    let fam = InitialFamily::ConstrainedWave {
        mu0: 0.01,
        epsilon: 0.1,
        wave: WaveProfile { amp: 0.05, rate: 0.05, mode: 1 },
        bt0: 1.0,
    };
    let mut res = vec![];
    for n in [128, 256, 512] {
        let init = build_initial(&fam, &params(n)).unwrap();
        let out = run(&init, &config(n, 0.5), |_, _| {}).unwrap();
        assert_eq!(out.verdict, Verdict::Completed);
        let last = out.series.last().unwrap();
        res.push(last.max_r1.max(last.max_r2));
    }
    for w in res.windows(2) {
        assert!(order(w[0], w[1]) >= 0.8, "residuals {res:?}");
    }
}
