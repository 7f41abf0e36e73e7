//! Metric functions of the polarized Gowdy ansatz
//! `ds^2 = e^{2a} (-dt^2 + dx^2) + e^{2b} (e^{2c} dy^2 + e^{-2c} dz^2)`.
//!
//! The wave equations for `a, b, c` are integrated as the first-order system
//! `a_t = at`, `at_t = d_x ax + RHS_a`, `ax_t = d_x at` (likewise for `b`, `c`)
//! with centered differences and the three-stage SSP Runge-Kutta method.

use super::fluid::{pressure, primitive_to_conserved, FluidState};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GeometryState {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub at: Vec<f64>,
    pub ax: Vec<f64>,
    pub bt: Vec<f64>,
    pub bx: Vec<f64>,
    pub ct: Vec<f64>,
    pub cx: Vec<f64>,
}

/// Forcing added to `(at_t, bt_t, ct_t)` as a function of `(t, x)`.
pub type GeometryForcing<'a> = &'a dyn Fn(f64, f64) -> [f64; 3];

/// Fluid quantities entering the geometry equations, per cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatterTerms {
    pub tau: f64,
    pub s: f64,
    pub sigma: f64,
    pub p: f64,
}

pub fn matter_terms(fluid: &[FluidState], cs: f64) -> Result<Vec<MatterTerms>> {
    fluid
        .iter()
        .map(|&f| {
            let c = primitive_to_conserved(f, cs)?;
            Ok(MatterTerms { tau: c.tau, s: c.s, sigma: c.sigma, p: pressure(f.mu, cs) })
        })
        .collect()
}

/// First derivatives of `a, b, c` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricDerivatives {
    pub at: f64,
    pub ax: f64,
    pub bt: f64,
    pub bx: f64,
    pub ct: f64,
    pub cx: f64,
}

/// Right-hand sides of `a_tt - a_xx = RHS_a`, `b_tt - b_xx = RHS_b`,
/// `c_tt - c_xx = RHS_c`.
pub fn wave_sources(a: f64, d: MetricDerivatives, m: MatterTerms, kappa: f64) -> [f64; 3] {
    let MetricDerivatives { bt, bx, ct, cx, .. } = d;
    let e2a = (2.0 * a).exp();
    [
        bt * bt - bx * bx - ct * ct + cx * cx + 0.5 * kappa * e2a * (-m.tau + m.sigma - 2.0 * m.p),
        -2.0 * bt * bt + 2.0 * bx * bx + 0.5 * kappa * e2a * (m.tau - m.sigma),
        -2.0 * bt * ct + 2.0 * bx * cx,
    ]
}

/// Pointwise constraint residuals given `b_xx` and `b_tx`.
pub fn constraints_at(a: f64, d: MetricDerivatives, bxx: f64, btx: f64, m: MatterTerms, kappa: f64) -> (f64, f64) {
    let MetricDerivatives { at, ax, bt, bx, ct, cx } = d;
    let e2a = (2.0 * a).exp();
    (
        2.0 * at * bt + 2.0 * ax * bx + bt * bt - 2.0 * bxx - 3.0 * bx * bx - ct * ct - cx * cx - kappa * e2a * m.tau,
        -2.0 * at * bx - 2.0 * ax * bt + 2.0 * btx + 2.0 * bt * bx + 2.0 * ct * cx - kappa * e2a * m.s,
    )
}

impl GeometryState {
    /// Flat, static geometry on `n` cells.
    pub fn flat(n: usize) -> Self {
        let z = vec![0.0; n];
        Self { a: z.clone(), b: z.clone(), c: z.clone(), at: z.clone(), ax: z.clone(), bt: z.clone(), bx: z.clone(), ct: z.clone(), cx: z }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn alpha(&self) -> Vec<f64> {
        self.a.iter().map(|a| (2.0 * a).exp()).collect()
    }

    pub fn beta(&self) -> Vec<f64> {
        self.b.iter().map(|b| (2.0 * b).exp()).collect()
    }

    /// `w = (at, ax, beta_t, beta_x, ct, cx)` with `beta_t = 2 bt beta`.
    pub fn w(&self) -> [Vec<f64>; 6] {
        let beta = self.beta();
        let bt: Vec<f64> = self.bt.iter().zip(&beta).map(|(d, b)| 2.0 * d * b).collect();
        let bx: Vec<f64> = self.bx.iter().zip(&beta).map(|(d, b)| 2.0 * d * b).collect();
        [self.at.clone(), self.ax.clone(), bt, bx, self.ct.clone(), self.cx.clone()]
    }

    pub fn is_finite(&self) -> bool {
        self.fields().iter().all(|f| f.iter().all(|v| v.is_finite()))
    }

    /// First derivatives carried in cell `i`.
    pub fn derivatives(&self, i: usize) -> MetricDerivatives {
        MetricDerivatives { at: self.at[i], ax: self.ax[i], bt: self.bt[i], bx: self.bx[i], ct: self.ct[i], cx: self.cx[i] }
    }

    fn fields(&self) -> [&Vec<f64>; 9] {
        [&self.a, &self.b, &self.c, &self.at, &self.ax, &self.bt, &self.bx, &self.ct, &self.cx]
    }

    fn fields_mut(&mut self) -> [&mut Vec<f64>; 9] {
        [&mut self.a, &mut self.b, &mut self.c, &mut self.at, &mut self.ax, &mut self.bt, &mut self.bx, &mut self.ct, &mut self.cx]
    }

    fn check_len(&self, n: usize) -> Result<()> {
        for f in self.fields() {
            if f.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: f.len() });
            }
        }
        Ok(())
    }

    /// Time derivative of all nine fields.
    fn rhs(&self, matter: &[MatterTerms], kappa: f64, dx: f64, t: f64, forcing: Option<GeometryForcing>) -> GeometryState {
        let n = self.len();
        let d = |f: &[f64], i: usize| (f[(i + 1) % n] - f[(i + n - 1) % n]) / (2.0 * dx);
        let mut out = GeometryState::flat(n);
        for i in 0..n {
            let [mut ra, mut rb, mut rc] = wave_sources(self.a[i], self.derivatives(i), matter[i], kappa);
            if let Some(f) = forcing {
                let [fa, fb, fc] = f(t, (i as f64 + 0.5) * dx);
                ra += fa;
                rb += fb;
                rc += fc;
            }
            out.a[i] = self.at[i];
            out.b[i] = self.bt[i];
            out.c[i] = self.ct[i];
            out.at[i] = d(&self.ax, i) + ra;
            out.bt[i] = d(&self.bx, i) + rb;
            out.ct[i] = d(&self.cx, i) + rc;
            out.ax[i] = d(&self.at, i);
            out.bx[i] = d(&self.bt, i);
            out.cx[i] = d(&self.ct, i);
        }
        out
    }

    /// `self * wa + other * wb + k * wk`, field by field.
    fn combine(&self, wa: f64, other: &GeometryState, wb: f64, k: &GeometryState, wk: f64) -> GeometryState {
        let mut out = self.clone();
        let src_b = other.fields();
        let src_k = k.fields();
        for (f, (ob, ok)) in out.fields_mut().into_iter().zip(src_b.iter().zip(src_k.iter())) {
            for (x, (y, z)) in f.iter_mut().zip(ob.iter().zip(ok.iter())) {
                *x = wa * *x + wb * y + wk * z;
            }
        }
        out
    }
}

/// One SSP-RK3 step of the geometry with the fluid frozen. `t` is only used
/// to evaluate the optional forcing.
pub fn geometry_step(
    geo: &GeometryState,
    matter: &[MatterTerms],
    kappa: f64,
    dx: f64,
    dt: f64,
    t: f64,
    forcing: Option<GeometryForcing>,
) -> Result<GeometryState> {
    let n = geo.len();
    geo.check_len(n)?;
    if matter.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: matter.len() });
    }
    if dt > dx {
        return Err(Error::CflViolation { dt, admissible: dx });
    }
    let k1 = geo.rhs(matter, kappa, dx, t, forcing);
    let u1 = geo.combine(1.0, geo, 0.0, &k1, dt);
    let k2 = u1.rhs(matter, kappa, dx, t + dt, forcing);
    let u2 = geo.combine(0.75, &u1, 0.25, &k2, 0.25 * dt);
    let k3 = u2.rhs(matter, kappa, dx, t + 0.5 * dt, forcing);
    Ok(geo.combine(1.0 / 3.0, &u2, 2.0 / 3.0, &k3, 2.0 / 3.0 * dt))
}

/// Reconstructed metric coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructedMetric {
    pub a: Vec<f64>,
    pub alpha: Vec<f64>,
    pub b: Vec<f64>,
    pub beta: Vec<f64>,
}

/// Cumulative trapezoid of a cell-centered field starting from `anchor` at
/// `x = 0`; the value at `x = 0` is taken as the mean of the last and first cell.
pub fn cumulative_from_origin(f: &[f64], anchor: f64, dx: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = Vec::with_capacity(n);
    let edge = 0.5 * (f[n - 1] + f[0]);
    let mut acc = anchor + 0.25 * dx * (edge + f[0]);
    out.push(acc);
    for i in 1..n {
        acc += 0.5 * dx * (f[i - 1] + f[i]);
        out.push(acc);
    }
    out
}

/// `a = a0 + int_0^x ax`, `beta = beta0 + int_0^x beta_x`, `alpha = e^{2a}`,
/// `b = ln(beta) / 2`. Fails if `beta <= 0` anywhere.
pub fn reconstruct_metric(ax: &[f64], beta_x: &[f64], a0: f64, beta0: f64, dx: f64) -> Result<ReconstructedMetric> {
    if ax.len() != beta_x.len() {
        return Err(Error::LengthMismatch { expected: ax.len(), got: beta_x.len() });
    }
    let a = cumulative_from_origin(ax, a0, dx);
    let beta = cumulative_from_origin(beta_x, beta0, dx);
    if let Some((cell, &b)) = beta.iter().enumerate().find(|(_, b)| !(**b > 0.0)) {
        return Err(Error::GeometryDegenerate { cell, beta: b });
    }
    Ok(ReconstructedMetric {
        alpha: a.iter().map(|v| (2.0 * v).exp()).collect(),
        b: beta.iter().map(|v| 0.5 * v.ln()).collect(),
        a,
        beta,
    })
}

/// Constraint residuals `(r1, r2)` per cell; `b_xx` and `b_tx` are centered
/// differences of the carried `bx` and `bt`.
pub fn constraint_residual(geo: &GeometryState, matter: &[MatterTerms], kappa: f64, dx: f64) -> (Vec<f64>, Vec<f64>) {
    let n = geo.len();
    let d = |f: &[f64], i: usize| (f[(i + 1) % n] - f[(i + n - 1) % n]) / (2.0 * dx);
    let mut r1 = Vec::with_capacity(n);
    let mut r2 = Vec::with_capacity(n);
    for i in 0..n {
        let (c1, c2) = constraints_at(geo.a[i], geo.derivatives(i), d(&geo.bx, i), d(&geo.bt, i), matter[i], kappa);
        r1.push(c1);
        r2.push(c2);
    }
    (r1, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn flat_vacuum_is_stationary() {
        let g = GeometryState::flat(16);
        let vacuum = vec![MatterTerms { tau: 0.0, s: 0.0, sigma: 0.0, p: 0.0 }; 16];
        let next = geometry_step(&g, &vacuum, 1.0, 0.1, 0.05, 0.0, None).unwrap();
        assert_eq!(next, g);
        let (r1, r2) = constraint_residual(&g, &vacuum, 1.0, 0.1);
        assert!(r1.iter().chain(&r2).all(|r| *r == 0.0));
    }

    #[test]
    fn reconstruction_of_cosine() {
        let n = 64;
        let dx = 2.0 * PI / n as f64;
        let ax: Vec<f64> = (0..n).map(|i| ((i as f64 + 0.5) * dx).cos()).collect();
        let m = reconstruct_metric(&ax, &vec![0.0; n], 0.0, 1.0, dx).unwrap();
        let err = (0..n).map(|i| (m.a[i] - ((i as f64 + 0.5) * dx).sin()).abs()).fold(0.0, f64::max);
        assert!(err < dx * dx);
        assert!(m.beta.iter().all(|b| *b == 1.0) && m.b.iter().all(|b| *b == 0.0));
        let zero = reconstruct_metric(&vec![0.0; n], &vec![0.0; n], 0.0, 1.0, dx).unwrap();
        assert!(zero.alpha.iter().all(|a| *a == 1.0));
    }

    #[test]
    fn negative_beta_is_degenerate() {
        let n = 16;
        let bx = vec![-1.0; n];
        assert!(matches!(
            reconstruct_metric(&vec![0.0; n], &bx, 0.0, 0.5, 0.1),
            Err(Error::GeometryDegenerate { .. })
        ));
    }

    #[test]
    fn tau_shift_moves_r1_linearly() {
        let n = 8;
        let mut g = GeometryState::flat(n);
        g.a = vec![0.3; n];
        let m0 = vec![MatterTerms { tau: 1.0, s: 0.0, sigma: 0.2, p: 0.2 }; n];
        let m1 = vec![MatterTerms { tau: 1.5, ..m0[0] }; n];
        let (r0, _) = constraint_residual(&g, &m0, 2.0, 0.1);
        let (r1, _) = constraint_residual(&g, &m1, 2.0, 0.1);
        let shift = -2.0 * (0.6f64).exp() * 0.5;
        assert!((r1[0] - r0[0] - shift).abs() < 1e-14);
    }
}
