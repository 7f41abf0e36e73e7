//! Polarized Gowdy spacetimes coupled to an isothermal perfect fluid.
//!
//! The fluid is advanced by a random-choice (Glimm) step for the flat-space
//! Euler equations followed by an ODE step for the geometric sources; the
//! metric functions `a, b, c` are evolved with their first derivatives.

pub mod fluid;
pub mod geometry;
pub mod glimm;
pub mod initial;
pub mod monitor;
pub mod riemann;
pub mod rusanov;
pub mod solver;
pub mod source;

pub use fluid::{conserved_to_primitive, primitive_to_conserved, wave_speeds, ConservedFluid, FluidState};
pub use geometry::{
    constraint_residual, constraints_at, geometry_step, matter_terms, reconstruct_metric, wave_sources, GeometryForcing, GeometryState,
    MatterTerms, MetricDerivatives,
};
pub use glimm::{glimm_step, van_der_corput};
pub use initial::{build_initial, InitialData, InitialFamily, InitialParams, WaveProfile};
pub use monitor::{blowup_monitor, tv_growth_rate, tv_norm, Thresholds, Verdict};
pub use riemann::{riemann_solve, RiemannSolution, Wave};
pub use solver::{gowdy_step, run, GowdyConfig, GowdyRun, GowdyState, SeriesRow, Splitting};
pub use source::{fluid_source_step, source_terms, FluidForcing, MetricSlopes};
