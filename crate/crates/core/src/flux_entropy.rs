//! Separable flux fields `f(x, u) = v(x) phi(u)` and their entropy pairs.
//!
//! A flux carries two discretisations of the same field: a contravariant
//! vector per cell (used for pointwise evaluation and growth bounds) and a
//! weight per edge, so that the total flux through edge `e` is
//! `edge_weight(e) * phi(u)`. For the compatible builders the edge weights are
//! exact discrete differences of a potential or stream function, which makes
//! the discrete divergence of `f(., u)` vanish identically for every `u`.

use crate::error::{Error, Result};
use crate::geometry::{Mesh, MeshId, Metric1D, Metric2D};
use crate::polynomial::Polynomial;
use crate::quadrature;

const DEFAULT_GROWTH_RANGE: f64 = 10.0;
const QUAD_TOL: f64 = 1e-10;

/// `|f(x, u)|_g <= c0 + c1 |u|` for `|u| <= range`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthBound {
    pub c0: f64,
    pub c1: f64,
    pub range: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxKind {
    Potential1D,
    Stream2D,
    /// `b(x) phi(u)` with no compatibility guarantee.
    General1D,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluxField {
    kind: FluxKind,
    mesh: MeshId,
    profile: Polynomial,
    cell_vectors: Vec<[f64; 2]>,
    edge_weights: Vec<f64>,
    growth: GrowthBound,
}

/// `f(x, u) = phi(u) / sqrt_g(x)`; the edge flux is exactly `phi(u)`.
pub fn flux_from_potential_1d(mesh: &Metric1D, phi: Polynomial) -> FluxField {
    let cell_vectors = mesh.sqrt_g().iter().map(|s| [1.0 / s, 0.0]).collect();
    let edge_weights = vec![1.0; mesh.n_cells()];
    FluxField::assemble(FluxKind::Potential1D, &Mesh::Circle(mesh.clone()), phi, cell_vectors, edge_weights)
}

/// Flat-profile Burgers flux `u^2 / 2` (divided by `sqrt_g` on curved circles).
pub fn burgers_1d(mesh: &Metric1D) -> FluxField {
    flux_from_potential_1d(mesh, Polynomial::burgers())
}

/// `f(x, u) = b(x) phi(u)`, generally not divergence free. The edge weight is
/// `sqrt_g_e b(x_e)` with `sqrt_g_e` the mean of the adjacent cells.
pub fn flux_from_field_1d<B: Fn(f64) -> f64>(mesh: &Metric1D, b: B, phi: Polynomial) -> Result<FluxField> {
    let n = mesh.n_cells();
    let dx = mesh.dx();
    let sg = mesh.sqrt_g();
    let cell_vectors: Vec<[f64; 2]> = (0..n).map(|i| [b(mesh.center(i)), 0.0]).collect();
    let edge_weights: Vec<f64> = (0..n)
        .map(|e| 0.5 * (sg[e] + sg[(e + 1) % n]) * b((e as f64 + 1.0) * dx))
        .collect();
    if cell_vectors.iter().any(|v| !v[0].is_finite()) || edge_weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidFlux("field b(x) is not finite on the mesh".into()));
    }
    Ok(FluxField::assemble(FluxKind::General1D, &Mesh::Circle(mesh.clone()), phi, cell_vectors, edge_weights))
}

/// Stream-function flux `f = (1 / sqrt_g) (d_y psi, -d_x psi)` with
/// `psi(x, y, u) = s(x, y) phi(u)`.
///
/// `corner_stream` holds `s` at the corners `(i dx, j dy)`, index `j * nx + i`,
/// wrapped periodically.
pub fn flux_from_stream_2d(mesh: &Metric2D, corner_stream: &[f64], phi: Polynomial) -> Result<FluxField> {
    let (nx, ny) = mesh.shape();
    let n = nx * ny;
    if corner_stream.len() != n {
        return Err(Error::InvalidFlux(format!(
            "stream function must be sampled at the {n} cell corners, got {} values",
            corner_stream.len()
        )));
    }
    if let Some(v) = corner_stream.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidFlux(format!("non-finite stream value {v}")));
    }
    let (dx, dy) = mesh.spacing();
    let s = |i: usize, j: usize| corner_stream[(j % ny) * nx + (i % nx)];

    let mut edge_weights = vec![0.0; 2 * n];
    let mut cell_vectors = Vec::with_capacity(n);
    for j in 0..ny {
        for i in 0..nx {
            let c = j * nx + i;
            // east face spans corners (i+1, j) .. (i+1, j+1)
            edge_weights[c] = s(i + 1, j + 1) - s(i + 1, j);
            // north face spans corners (i, j+1) .. (i+1, j+1)
            edge_weights[n + c] = -(s(i + 1, j + 1) - s(i, j + 1));
            let dsy = 0.5 * ((s(i, j + 1) - s(i, j)) + (s(i + 1, j + 1) - s(i + 1, j))) / dy;
            let dsx = 0.5 * ((s(i + 1, j) - s(i, j)) + (s(i + 1, j + 1) - s(i, j + 1))) / dx;
            let inv = 1.0 / mesh.sqrt_g()[c];
            cell_vectors.push([inv * dsy, -inv * dsx]);
        }
    }
    Ok(FluxField::assemble(FluxKind::Stream2D, &Mesh::Torus(mesh.clone()), phi, cell_vectors, edge_weights))
}

/// Samples a periodic stream function at the corners expected by
/// [`flux_from_stream_2d`].
pub fn sample_corners<S: Fn(f64, f64) -> f64>(mesh: &Metric2D, s: S) -> Vec<f64> {
    let (nx, ny) = mesh.shape();
    let (dx, dy) = mesh.spacing();
    (0..ny)
        .flat_map(|j| (0..nx).map(move |i| (i, j)))
        .map(|(i, j)| s(i as f64 * dx, j as f64 * dy))
        .collect()
}

impl FluxField {
    fn assemble(
        kind: FluxKind,
        mesh: &Mesh,
        profile: Polynomial,
        cell_vectors: Vec<[f64; 2]>,
        edge_weights: Vec<f64>,
    ) -> Self {
        let mut flux = FluxField {
            kind,
            mesh: mesh.id(),
            profile,
            cell_vectors,
            edge_weights,
            growth: GrowthBound { c0: 0.0, c1: 0.0, range: 0.0 },
        };
        flux.growth = flux.compute_growth(mesh, DEFAULT_GROWTH_RANGE);
        flux
    }

    fn compute_growth(&self, mesh: &Mesh, range: f64) -> GrowthBound {
        let vmax = self
            .cell_vectors
            .iter()
            .enumerate()
            .map(|(i, v)| mesh.vector_norm(i, *v))
            .fold(0.0, f64::max);
        // rounded up so that the bound survives roundoff in `eval`
        let up = 1.0 + 1e-12;
        GrowthBound {
            c0: up * vmax * self.profile.eval(0.0).abs(),
            c1: up * vmax * self.profile.max_abs_deriv(-range, range),
            range,
        }
    }

    /// Re-declares the growth bound on `|u| <= range`.
    pub fn with_growth_range(mut self, mesh: &Mesh, range: f64) -> Result<Self> {
        self.check_mesh(mesh)?;
        if !(range.is_finite() && range > 0.0) {
            return Err(Error::InvalidParameter(format!("growth range must be positive, got {range}")));
        }
        self.growth = self.compute_growth(mesh, range);
        Ok(self)
    }

    pub fn kind(&self) -> FluxKind {
        self.kind
    }

    pub fn is_compatible(&self) -> bool {
        matches!(self.kind, FluxKind::Potential1D | FluxKind::Stream2D)
    }

    pub fn profile(&self) -> &Polynomial {
        &self.profile
    }

    pub fn mesh_id(&self) -> MeshId {
        self.mesh
    }

    pub fn growth_bound(&self) -> GrowthBound {
        self.growth
    }

    pub fn n_cells(&self) -> usize {
        self.cell_vectors.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edge_weights.len()
    }

    pub fn cell_vector(&self, cell: usize) -> [f64; 2] {
        self.cell_vectors[cell]
    }

    pub fn edge_weight(&self, e: usize) -> f64 {
        self.edge_weights[e]
    }

    /// The edge flux as a polynomial in `u`.
    #[inline]
    pub fn edge_profile(&self, e: usize) -> Polynomial {
        self.profile.scaled(self.edge_weights[e])
    }

    pub fn eval(&self, cell: usize, u: f64) -> [f64; 2] {
        let [a, b] = self.cell_vectors[cell];
        let p = self.profile.eval(u);
        [a * p, b * p]
    }

    pub fn deriv(&self, cell: usize, u: f64) -> [f64; 2] {
        let [a, b] = self.cell_vectors[cell];
        let p = self.profile.deriv(u);
        [a * p, b * p]
    }

    /// Total flux through each edge at the uniform state `u`.
    pub fn edge_fluxes(&self, u: f64) -> Vec<f64> {
        let p = self.profile.eval(u);
        self.edge_weights.iter().map(|w| w * p).collect()
    }

    pub(crate) fn check_mesh(&self, mesh: &Mesh) -> Result<()> {
        if mesh.id() != self.mesh {
            return Err(Error::MeshMismatch);
        }
        Ok(())
    }
}

/// Max over cells of `|div f(., u)|` for each sampled `u`.
pub fn verify_geometry_compatible(mesh: &Mesh, flux: &FluxField, samples: &[f64]) -> Result<Vec<f64>> {
    flux.check_mesh(mesh)?;
    samples
        .iter()
        .map(|&u| {
            let div = crate::geometry::discrete_divergence(mesh, &flux.edge_fluxes(u))?;
            Ok(div.iter().map(|d| d.abs()).fold(0.0, f64::max))
        })
        .collect()
}

/// Largest violation `|f|_g - (c0 + c1 |u|)` over the samples; `<= 0` when the
/// declared growth bound holds.
pub fn check_growth(mesh: &Mesh, flux: &FluxField, samples: &[f64]) -> Result<f64> {
    flux.check_mesh(mesh)?;
    let GrowthBound { c0, c1, .. } = flux.growth;
    let mut worst = f64::NEG_INFINITY;
    for &u in samples {
        for cell in 0..flux.n_cells() {
            let lhs = mesh.vector_norm(cell, flux.eval(cell, u));
            worst = worst.max(lhs - (c0 + c1 * u.abs()));
        }
    }
    Ok(worst)
}

/// Convex entropy `U` with its derivative.
#[derive(Debug, Clone, Copy)]
pub enum ConvexEntropy {
    /// `u^2`
    Quadratic,
    /// `|u - k|`
    Kruzkov { k: f64 },
    /// `sqrt((u - k)^2 + eps^2)`
    MollifiedKruzkov { k: f64, eps: f64 },
    Custom { name: &'static str, value: fn(f64) -> f64, deriv: fn(f64) -> f64 },
}

impl ConvexEntropy {
    pub fn value(&self, u: f64) -> f64 {
        match *self {
            ConvexEntropy::Quadratic => u * u,
            ConvexEntropy::Kruzkov { k } => (u - k).abs(),
            ConvexEntropy::MollifiedKruzkov { k, eps } => (u - k).hypot(eps),
            ConvexEntropy::Custom { value, .. } => value(u),
        }
    }

    pub fn deriv(&self, u: f64) -> f64 {
        match *self {
            ConvexEntropy::Quadratic => 2.0 * u,
            ConvexEntropy::Kruzkov { k } => sign(u - k),
            ConvexEntropy::MollifiedKruzkov { k, eps } => (u - k) / (u - k).hypot(eps),
            ConvexEntropy::Custom { deriv, .. } => deriv(u),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            ConvexEntropy::Quadratic => "quadratic".into(),
            ConvexEntropy::Kruzkov { k } => format!("kruzkov_{k}"),
            ConvexEntropy::MollifiedKruzkov { k, eps } => format!("mollified_kruzkov_{k}_{eps}"),
            ConvexEntropy::Custom { name, .. } => name.into(),
        }
    }

    /// Entropy-flux profile `int_0^u U'(s) p'(s) ds` for a scalar profile `p`.
    /// Kruzkov entropies use the closed form `sgn(u - k) (p(u) - p(k))`, which
    /// differs from the integral by a constant independent of `u`.
    pub fn flux_profile(&self, p: &Polynomial, u: f64) -> Result<f64> {
        match *self {
            ConvexEntropy::Kruzkov { k } => Ok(sign(u - k) * (p.eval(u) - p.eval(k))),
            ConvexEntropy::Quadratic => {
                // int_0^u 2 s p'(s) ds, exact for cubic p
                let [_, c1, c2, c3] = p.coeffs();
                Ok(u * u * (c1 + u * (4.0 / 3.0 * c2 + u * 1.5 * c3)))
            }
            _ => quadrature::integrate(|s| self.deriv(s) * p.deriv(s), 0.0, u, QUAD_TOL),
        }
    }
}

#[inline]
pub(crate) fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// An entropy together with the flux field it is paired with.
#[derive(Debug, Clone, Copy)]
pub struct EntropyPair<'a> {
    pub entropy: ConvexEntropy,
    pub flux: &'a FluxField,
}

pub fn kruzkov_pair(flux: &FluxField, k: f64) -> EntropyPair<'_> {
    EntropyPair { entropy: ConvexEntropy::Kruzkov { k }, flux }
}

impl EntropyPair<'_> {
    pub fn u(&self, u: f64) -> f64 {
        self.entropy.value(u)
    }

    pub fn flux_at(&self, cell: usize, u: f64) -> Result<[f64; 2]> {
        let p = self.entropy.flux_profile(self.flux.profile(), u)?;
        let [a, b] = self.flux.cell_vector(cell);
        Ok([a * p, b * p])
    }
}

/// `int_0^u U'(s) d_s f(cell, s) ds` by composite Gauss quadrature.
pub fn quadrature_entropy_flux(flux: &FluxField, entropy: &ConvexEntropy, cell: usize, u: f64) -> Result<[f64; 2]> {
    quadrature::integrate_vec(
        |s| {
            let d = flux.deriv(cell, s);
            let w = entropy.deriv(s);
            [w * d[0], w * d[1]]
        },
        0.0,
        u,
        QUAD_TOL,
    )
}
