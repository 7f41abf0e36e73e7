//! First-order Rusanov finite-volume solver for the homogeneous fluid system in
//! conserved variables. Independent of the exact Riemann solver; used as a
//! reference for it and for the random-choice scheme.

use super::fluid::{conserved_to_primitive, flux, primitive_to_conserved, wave_speeds, FluidState};
use crate::error::Result;

/// Evolves a periodic field to `t_end` with time step `cfl dx / max|lambda|`.
pub fn rusanov_solve(initial: &[FluidState], dx: f64, t_end: f64, cs: f64, cfl: f64) -> Result<Vec<FluidState>> {
    let n = initial.len();
    let mut u: Vec<[f64; 2]> = initial
        .iter()
        .map(|&f| primitive_to_conserved(f, cs).map(|c| [c.tau, c.s]))
        .collect::<Result<_>>()?;
    let mut prim = initial.to_vec();
    let mut t = 0.0;
    while t < t_end {
        let speeds: Vec<f64> = prim
            .iter()
            .map(|&f| {
                let (a, b) = wave_speeds(f, cs);
                a.abs().max(b.abs())
            })
            .collect();
        let smax = speeds.iter().cloned().fold(0.0, f64::max);
        let dt = (cfl * dx / smax).min(t_end - t);
        let fl: Vec<[f64; 2]> = prim.iter().map(|&f| flux(f, cs)).collect();
        let h: Vec<[f64; 2]> = (0..n)
            .map(|i| {
                let j = (i + 1) % n;
                let a = speeds[i].max(speeds[j]);
                [
                    0.5 * (fl[i][0] + fl[j][0]) - 0.5 * a * (u[j][0] - u[i][0]),
                    0.5 * (fl[i][1] + fl[j][1]) - 0.5 * a * (u[j][1] - u[i][1]),
                ]
            })
            .collect();
        for i in 0..n {
            let im = (i + n - 1) % n;
            u[i][0] -= dt / dx * (h[i][0] - h[im][0]);
            u[i][1] -= dt / dx * (h[i][1] - h[im][1]);
        }
        prim = u.iter().map(|c| conserved_to_primitive(c[0], c[1], cs)).collect::<Result<_>>()?;
        t += dt;
    }
    Ok(prim)
}
