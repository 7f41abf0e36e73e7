//! Conservation laws on curved backgrounds.
//!
//! * [`riemannian_fv`]: scalar laws `d_t u + div f(x, u) = 0` on the circle and
//!   the torus with a variable metric.
//! * [`lorentzian_fv`]: scalar laws on a foliated 1+1 spacetime.
//! * [`gowdy`]: polarized Gowdy spacetimes with an isothermal fluid.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod flux_entropy;
pub mod geometry;
pub mod gowdy;
pub mod lorentzian_fv;
pub mod polynomial;
pub mod quadrature;
pub mod riemannian_fv;
pub mod root;
pub mod scheme;

pub use error::{Error, Result};
pub use flux_entropy::{ConvexEntropy, EntropyPair, FluxField, FluxKind, GrowthBound};
pub use geometry::{build_circle_mesh, build_torus_mesh, CellField, Mesh, MeshId, Metric1D, Metric2D};
pub use lorentzian_fv::{Foliation1p1, FoliationFamily, TimelikeFlux};
pub use polynomial::Polynomial;
pub use riemannian_fv::{FvConfig, NormSeries, Norms};
pub use scheme::NumericalFlux;
