mod common;

use curvedflow_core::gowdy::fluid::flux;
use curvedflow_core::gowdy::rusanov::rusanov_solve;
use curvedflow_core::gowdy::{
    conserved_to_primitive, glimm_step, primitive_to_conserved, riemann_solve, van_der_corput, wave_speeds, FluidState,
    RiemannSolution, Wave,
};
use proptest::prelude::*;
use rand::Rng;

fn state(mu: f64, v: f64) -> FluidState {
    FluidState::new(mu, v).unwrap()
}

/// Independent scalar evaluation of `(tau, S, Sigma)`.
fn conserved_oracle(mu: f64, v: f64, cs: f64) -> [f64; 3] {
    let p = cs * cs * mu;
    let g2 = 1.0 / ((1.0 - v) * (1.0 + v));
    [(mu + p) * g2 - p, (mu + p) * g2 * v, (mu + p) * g2 * v * v + p]
}

/// Root-find in `v` as an independent inverse: at fixed `v`, `mu` follows
/// linearly from `tau`, and `S(v)` is increasing.
fn c2p_oracle(tau: f64, s: f64, cs: f64) -> (f64, f64) {
    let c2 = cs * cs;
    let mu_of = |v: f64| tau / ((1.0 + c2) / (1.0 - v * v) - c2);
    let v = common::bisect(|v| mu_of(v) * (1.0 + c2) / (1.0 - v * v) * v - s, -1.0 + 1e-15, 1.0 - 1e-15);
    (mu_of(v), v)
}

#[test]
fn conserved_examples() {
    let c = primitive_to_conserved(state(1.0, 0.0), 0.5).unwrap();
    assert_eq!((c.tau, c.s, c.sigma), (1.0, 0.0, 0.25));
    let c = primitive_to_conserved(state(1.0, 0.6), 0.5).unwrap();
    let o = conserved_oracle(1.0, 0.6, 0.5);
    assert!((c.tau - 1.703125).abs() < 1e-14 && (c.s - 1.171875).abs() < 1e-14 && (c.sigma - 0.953125).abs() < 1e-14);
    assert!((c.tau - o[0]).abs() < 1e-14 && (c.s - o[1]).abs() < 1e-14 && (c.sigma - o[2]).abs() < 1e-14);
    let m = primitive_to_conserved(state(1.0, -0.6), 0.5).unwrap();
    assert_eq!((m.tau, m.s, m.sigma), (c.tau, -c.s, c.sigma));
    assert!(FluidState::new(1.0, 1.0).is_err());
}

#[test]
fn inverse_matches_bisection_oracle() {
    let c = primitive_to_conserved(state(1.0, 0.6), 0.5).unwrap();
    let f = conserved_to_primitive(c.tau, c.s, 0.5).unwrap();
    let (mu, v) = c2p_oracle(c.tau, c.s, 0.5);
    assert!((f.mu - 1.0).abs() < 1e-10 && (f.v - 0.6).abs() < 1e-10);
    assert!((f.mu - mu).abs() < 1e-10 && (f.v - v).abs() < 1e-10);
    let rest = conserved_to_primitive(1.0, 0.0, 0.5).unwrap();
    assert_eq!((rest.mu, rest.v), (1.0, 0.0));
}

#[test]
fn momentum_above_the_admissible_range_is_rejected() {
    // scan the admissible S at fixed tau over a v-grid; the supremum is tau
    let (tau, cs) = (2.0, 0.5);
    let c2 = cs * cs;
    let smax = (1..200_000)
        .map(|i| -1.0 + i as f64 * 1e-5)
        .map(|v: f64| tau / ((1.0 + c2) / (1.0 - v * v) - c2) * (1.0 + c2) / (1.0 - v * v) * v)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(smax < tau && smax > 0.999 * tau);
    assert!(conserved_to_primitive(tau, smax, cs).is_ok());
    assert!(conserved_to_primitive(tau, tau * (1.0 + 1e-9), cs).is_err());
    assert!(conserved_to_primitive(tau, -tau * (1.0 + 1e-9), cs).is_err());
}

#[test]
fn roundtrip_over_random_states() {
    let mut r = common::rng(17);
    for _ in 0..10_000 {
        let cs = r.random_range(0.05..0.95);
        let mu = 10f64.powf(r.random_range(-3.0..3.0));
        let v = r.random_range(-0.99..0.99);
        let c = primitive_to_conserved(state(mu, v), cs).unwrap();
        assert!(c.tau > 0.0 && c.tau * c.tau - c.s * c.s > 0.0);
        let f = conserved_to_primitive(c.tau, c.s, cs).unwrap();
        assert!((f.mu - mu).abs() <= 1e-10 * mu.max(1.0) && (f.v - v).abs() <= 1e-10, "{mu} {v} {cs}: {f:?}");
    }
}

#[test]
fn wave_speed_values() {
    let (lm, lp) = wave_speeds(state(1.0, 0.6), 0.5);
    assert!((lm - 0.1 / 0.7).abs() <= 1e-14 && (lp - 1.1 / 1.3).abs() <= 1e-14);
    assert!((lm - 0.142_857_142_857_142_85).abs() <= 1e-14 && (lp - 0.846_153_846_153_846_1).abs() <= 1e-14);
    assert_eq!(wave_speeds(state(1.0, 0.0), 0.3), (-0.3, 0.3));
    let (lm, lp) = wave_speeds(state(1.0, 1.0 - 1e-12), 0.5);
    assert!(lm < 1.0 && lp < 1.0 && lm > 0.999_999 && lp > 0.999_999);
    let mut r = common::rng(3);
    for _ in 0..1000 {
        let (v, cs) = (r.random_range(-0.999..0.999), r.random_range(0.01..0.99));
        let (lm, lp) = wave_speeds(state(1.0, v), cs);
        assert!(-1.0 < lm && lm < lp && lp < 1.0);
        assert!((lp - (v + cs) / (1.0 + v * cs)).abs() <= 1e-14 && (lm - (v - cs) / (1.0 - v * cs)).abs() <= 1e-14);
    }
}

fn rh_residual(a: FluidState, b: FluidState, s: f64, cs: f64) -> f64 {
    let (ca, cb) = (primitive_to_conserved(a, cs).unwrap(), primitive_to_conserved(b, cs).unwrap());
    let (fa, fb) = (flux(a, cs), flux(b, cs));
    let r1 = s * (cb.tau - ca.tau) - (fb[0] - fa[0]);
    let r2 = s * (cb.s - ca.s) - (fb[1] - fa[1]);
    r1.abs().max(r2.abs())
}

/// `theta + sign k ln mu`, constant across a rarefaction.
fn invariant(f: FluidState, cs: f64, sign: f64) -> f64 {
    f.rapidity() + sign * cs / (1.0 + cs * cs) * f.mu.ln()
}

fn check_solution(sol: &RiemannSolution, cs: f64) {
    if let Wave::Shock { speed } = sol.wave1 {
        assert!(rh_residual(sol.left, sol.middle, speed, cs) <= 1e-10);
        // Lax: characteristics enter the shock
        assert!(wave_speeds(sol.left, cs).0 > speed && speed > wave_speeds(sol.middle, cs).0);
    }
    if let Wave::Shock { speed } = sol.wave2 {
        assert!(rh_residual(sol.middle, sol.right, speed, cs) <= 1e-10);
        assert!(wave_speeds(sol.middle, cs).1 > speed && speed > wave_speeds(sol.right, cs).1);
    }
    let fans = [(sol.wave1, 1.0, 0), (sol.wave2, -1.0, 1)];
    for (w, sign, fam) in fans {
        if let Wave::Rarefaction { head, tail } = w {
            let (a, b) = if fam == 0 { (head, tail) } else { (tail, head) };
            let reference = invariant(sol.sample(a - 1e-9), cs, sign);
            let mut last = f64::NEG_INFINITY;
            for k in 0..=50 {
                let xi = a + (b - a) * k as f64 / 50.0;
                let f = sol.sample(xi);
                assert!((invariant(f, cs, sign) - reference).abs() <= 1e-10);
                let lam = if fam == 0 { wave_speeds(f, cs).0 } else { wave_speeds(f, cs).1 };
                assert!(lam >= last - 1e-12);
                last = lam;
            }
        }
    }
}

#[test]
fn riemann_jump_conditions_and_fans() {
    let cs = 0.5;
    let sol = riemann_solve(state(2.0, 0.0), state(1.0, 0.0), cs).unwrap();
    assert!(matches!(sol.wave1, Wave::Rarefaction { .. }) && matches!(sol.wave2, Wave::Shock { .. }));
    check_solution(&sol, cs);
    let mut r = common::rng(9);
    for _ in 0..300 {
        let cs = r.random_range(0.1..0.9);
        let l = state(10f64.powf(r.random_range(-2.0..2.0)), r.random_range(-0.95..0.95));
        let rt = state(10f64.powf(r.random_range(-2.0..2.0)), r.random_range(-0.95..0.95));
        let sol = riemann_solve(l, rt, cs).unwrap();
        check_solution(&sol, cs);
        for _ in 0..1000 {
            let f = sol.sample(r.random_range(-1.0..1.0));
            assert!(f.mu > 0.0 && f.v.abs() < 1.0);
        }
    }
}

#[test]
fn symmetric_collision_has_resting_middle_state() {
    for (mu, v, cs) in [(1.0, 0.5, 0.5), (3.0, 0.9, 0.3), (0.2, 0.1, 0.8)] {
        let sol = riemann_solve(state(mu, v), state(mu, -v), cs).unwrap();
        assert!(sol.middle.v.abs() <= 1e-12, "{sol:?}");
        let sol = riemann_solve(state(mu, -v), state(mu, v), cs).unwrap();
        assert!(sol.middle.v.abs() <= 1e-12);
    }
    let same = riemann_solve(state(1.3, 0.2), state(1.3, 0.2), 0.5).unwrap();
    for xi in [-0.9, 0.0, 0.7] {
        assert_eq!(same.sample(xi), state(1.3, 0.2));
    }
}

/// Riemann data on `[0, 1)` with the jump at `1/2` and the periodic return jump
/// at `0`; compared only on `[1/4, 3/4]`, which the return waves do not reach by `t`.
fn riemann_data(n: usize, l: FluidState, r: FluidState) -> Vec<FluidState> {
    (0..n).map(|i| if (i as f64 + 0.5) / (n as f64) < 0.5 { l } else { r }).collect()
}

fn exact_average(sol: &RiemannSolution, x0: f64, x1: f64, t: f64) -> f64 {
    // density average over [x0, x1] by midpoint sampling
    let m = 200;
    (0..m).map(|k| sol.sample((x0 + (k as f64 + 0.5) / m as f64 * (x1 - x0) - 0.5) / t).mu).sum::<f64>() / m as f64
}

#[test]
fn rusanov_converges_to_exact_riemann_solution() {
    let (l, r, cs, t) = (state(2.0, 0.0), state(1.0, 0.0), 0.5, 0.2);
    let sol = riemann_solve(l, r, cs).unwrap();
    let mut errs = vec![];
    for n in [200, 400, 800] {
        let dx = 1.0 / n as f64;
        let num = rusanov_solve(&riemann_data(n, l, r), dx, t, cs, 0.5).unwrap();
        let err: f64 = (n / 4..3 * n / 4)
            .map(|i| (num[i].mu - exact_average(&sol, i as f64 * dx, (i + 1) as f64 * dx, t)).abs() * dx)
            .sum();
        errs.push(err);
    }
    assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
    assert!(errs[2] < 0.6 * errs[0], "{errs:?}");
}

#[test]
fn glimm_tracks_fine_rusanov() {
    let (l, r, cs, t) = (state(2.0, 0.0), state(1.0, 0.0), 0.5, 0.2);
    let n = 128;
    let dx = 1.0 / n as f64;
    let mut u = riemann_data(n, l, r);
    let mut time = 0.0;
    let mut k = 0;
    while time < t {
        let dt = (0.45 * dx).min(t - time);
        k += 1;
        u = glimm_step(&u, dt, dx, k, 2, cs).unwrap();
        time += dt;
    }
    let fine_n = 8 * n;
    let fine = rusanov_solve(&riemann_data(fine_n, l, r), 1.0 / fine_n as f64, t, cs, 0.5).unwrap();
    let err: f64 = (0..n)
        .map(|i| {
            let avg = fine[8 * i..8 * i + 8].iter().map(|f| f.mu).sum::<f64>() / 8.0;
            (u[i].mu - avg).abs() * dx
        })
        .sum();
    assert!(err <= 3.0 * dx, "{err} vs {}", 3.0 * dx);
}

#[test]
fn van_der_corput_points() {
    let pts: Vec<f64> = (1..=4).map(|i| van_der_corput(i, 2)).collect();
    assert_eq!(pts, vec![0.5, 0.25, 0.75, 0.125]);
    assert_eq!(van_der_corput(1, 3), 1.0 / 3.0);
}

proptest! {
    #[test]
    fn glimm_keeps_uniform_fields(mu in 0.01f64..100.0, v in -0.99f64..0.99, k in 1u64..1000) {
        let u = vec![state(mu, v); 16];
        prop_assert_eq!(glimm_step(&u, 0.01, 0.1, k, 2, 0.5).unwrap(), u);
    }

    #[test]
    fn riemann_sampling_is_physical(ml in -3.0f64..3.0, mr in -3.0f64..3.0, vl in -0.99f64..0.99, vr in -0.99f64..0.99, xi in -1.0f64..1.0) {
        let sol = riemann_solve(state(ml.exp(), vl), state(mr.exp(), vr), 0.5).unwrap();
        let f = sol.sample(xi);
        prop_assert!(f.mu > 0.0 && f.v.abs() < 1.0);
    }
}
