//! Periodic, logically Cartesian Riemannian meshes: the circle and the 2-torus.
//!
//! Each mesh uses one global chart with periodic identification. The metric is
//! sampled at cell centers; whenever a value is needed on an edge it is the
//! arithmetic mean of the two adjacent cells.
//!
//! Edge numbering. On the circle, edge `i` is the right edge of cell `i` and
//! points from cell `i` to cell `i + 1`. On the torus with `n = nx * ny`
//! cells, edges `0..n` are the east faces of the cells and edges `n..2n` are
//! the north faces; every edge is oriented from its owning cell towards the
//! neighbor in the positive coordinate direction.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// Content-derived identifier binding fields to the mesh they were built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MeshId(u64);

#[derive(Debug, Clone, PartialEq)]
pub struct Metric1D {
    n_cells: usize,
    sqrt_g: Vec<f64>,
    length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metric2D {
    nx: usize,
    ny: usize,
    sqrt_g: Vec<f64>,
    /// `[g_xx, g_xy, g_yy]` per cell, row-major with `x` fastest.
    g: Vec<[f64; 3]>,
    periods: (f64, f64),
}

/// Samples `sqrt_g_fn` at the `n_cells` cell centers `(i + 1/2) * length / n_cells`.
pub fn build_circle_mesh<F>(n_cells: usize, length: f64, sqrt_g_fn: F) -> Result<Metric1D>
where
    F: Fn(f64) -> f64,
{
    if n_cells < 4 {
        return Err(Error::InvalidMesh(format!("need at least 4 cells, got {n_cells}")));
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::InvalidMesh(format!("length must be positive, got {length}")));
    }
    let dx = length / n_cells as f64;
    let sqrt_g = (0..n_cells)
        .map(|i| {
            let s = sqrt_g_fn((i as f64 + 0.5) * dx);
            if s.is_finite() && s > 0.0 {
                Ok(s)
            } else {
                Err(Error::NonPositiveMetric { cell: i, value: s })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Metric1D { n_cells, sqrt_g, length })
}

/// Samples the metric components `[g_xx, g_xy, g_yy]` at cell centers.
pub fn build_torus_mesh<F>(nx: usize, ny: usize, periods: (f64, f64), g_fn: F) -> Result<Metric2D>
where
    F: Fn(f64, f64) -> [f64; 3],
{
    if nx < 4 || ny < 4 {
        return Err(Error::InvalidMesh(format!("need at least 4x4 cells, got {nx}x{ny}")));
    }
    let (lx, ly) = periods;
    if !(lx.is_finite() && lx > 0.0 && ly.is_finite() && ly > 0.0) {
        return Err(Error::InvalidMesh(format!("periods must be positive, got ({lx}, {ly})")));
    }
    let (dx, dy) = (lx / nx as f64, ly / ny as f64);
    let mut g = Vec::with_capacity(nx * ny);
    let mut sqrt_g = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let cell = j * nx + i;
            let m = g_fn((i as f64 + 0.5) * dx, (j as f64 + 0.5) * dy);
            let det = m[0] * m[2] - m[1] * m[1];
            if !(m.iter().all(|c| c.is_finite()) && m[0] > 0.0 && det > 0.0) {
                return Err(Error::NonPositiveMetric { cell, value: det.min(m[0]) });
            }
            g.push(m);
            sqrt_g.push(det.sqrt());
        }
    }
    Ok(Metric2D { nx, ny, sqrt_g, g, periods })
}

impl Metric1D {
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n_cells as f64
    }

    pub fn sqrt_g(&self) -> &[f64] {
        &self.sqrt_g
    }

    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx()
    }
}

impl Metric2D {
    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn periods(&self) -> (f64, f64) {
        self.periods
    }

    pub fn spacing(&self) -> (f64, f64) {
        (self.periods.0 / self.nx as f64, self.periods.1 / self.ny as f64)
    }

    pub fn sqrt_g(&self) -> &[f64] {
        &self.sqrt_g
    }

    pub fn components(&self) -> &[[f64; 3]] {
        &self.g
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Eigenvalues of the 2x2 metric at `cell`, ascending.
    pub fn eigenvalues(&self, cell: usize) -> [f64; 2] {
        let [a, b, c] = self.g[cell];
        let mean = 0.5 * (a + c);
        let r = (0.25 * (a - c) * (a - c) + b * b).sqrt();
        [mean - r, mean + r]
    }
}

/// A periodic mesh of either dimension.
#[derive(Debug, Clone, PartialEq)]
pub enum Mesh {
    Circle(Metric1D),
    Torus(Metric2D),
}

impl From<Metric1D> for Mesh {
    fn from(m: Metric1D) -> Self {
        Mesh::Circle(m)
    }
}

impl From<Metric2D> for Mesh {
    fn from(m: Metric2D) -> Self {
        Mesh::Torus(m)
    }
}

impl Mesh {
    pub fn id(&self) -> MeshId {
        let mut h = DefaultHasher::new();
        match self {
            Mesh::Circle(m) => {
                1u8.hash(&mut h);
                m.n_cells.hash(&mut h);
                m.length.to_bits().hash(&mut h);
                for s in &m.sqrt_g {
                    s.to_bits().hash(&mut h);
                }
            }
            Mesh::Torus(m) => {
                2u8.hash(&mut h);
                (m.nx, m.ny).hash(&mut h);
                m.periods.0.to_bits().hash(&mut h);
                m.periods.1.to_bits().hash(&mut h);
                for g in &m.g {
                    for c in g {
                        c.to_bits().hash(&mut h);
                    }
                }
            }
        }
        MeshId(h.finish())
    }

    pub fn dim(&self) -> usize {
        match self {
            Mesh::Circle(_) => 1,
            Mesh::Torus(_) => 2,
        }
    }

    pub fn n_cells(&self) -> usize {
        match self {
            Mesh::Circle(m) => m.n_cells,
            Mesh::Torus(m) => m.nx * m.ny,
        }
    }

    pub fn n_edges(&self) -> usize {
        self.dim() * self.n_cells()
    }

    pub fn sqrt_g(&self) -> &[f64] {
        match self {
            Mesh::Circle(m) => &m.sqrt_g,
            Mesh::Torus(m) => &m.sqrt_g,
        }
    }

    /// `sqrt_g * dx` on the circle, `sqrt_g * dx * dy` on the torus.
    pub fn cell_volume(&self, i: usize) -> Result<f64> {
        let n = self.n_cells();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        Ok(self.volume_unchecked(i))
    }

    #[inline]
    pub(crate) fn volume_unchecked(&self, i: usize) -> f64 {
        match self {
            Mesh::Circle(m) => m.sqrt_g[i] * m.dx(),
            Mesh::Torus(m) => {
                let (dx, dy) = m.spacing();
                m.sqrt_g[i] * dx * dy
            }
        }
    }

    pub fn volumes(&self) -> Vec<f64> {
        (0..self.n_cells()).map(|i| self.volume_unchecked(i)).collect()
    }

    pub fn total_volume(&self) -> f64 {
        self.volumes().iter().sum()
    }

    /// Coordinates of the center of cell `i` (`y = 0` on the circle).
    pub fn cell_center(&self, i: usize) -> [f64; 2] {
        match self {
            Mesh::Circle(m) => [m.center(i), 0.0],
            Mesh::Torus(m) => {
                let (dx, dy) = m.spacing();
                [((i % m.nx) as f64 + 0.5) * dx, ((i / m.nx) as f64 + 0.5) * dy]
            }
        }
    }

    /// `(from, to)` cells of edge `e`, following the edge orientation.
    pub fn edge_cells(&self, e: usize) -> (usize, usize) {
        match self {
            Mesh::Circle(m) => (e, (e + 1) % m.n_cells),
            Mesh::Torus(m) => {
                let n = m.nx * m.ny;
                let c = e % n;
                let (i, j) = (c % m.nx, c / m.nx);
                if e < n {
                    (c, m.index((i + 1) % m.nx, j))
                } else {
                    (c, m.index(i, (j + 1) % m.ny))
                }
            }
        }
    }

    /// Outgoing minus incoming edge values of cell `i`, summed in a fixed order
    /// (x direction first, then y).
    #[inline]
    pub(crate) fn net_outflow(&self, i: usize, edge_values: &[f64]) -> f64 {
        match self {
            Mesh::Circle(m) => {
                let n = m.n_cells;
                edge_values[i] - edge_values[(i + n - 1) % n]
            }
            Mesh::Torus(m) => {
                let n = m.nx * m.ny;
                let (ci, cj) = (i % m.nx, i / m.nx);
                let west = m.index((ci + m.nx - 1) % m.nx, cj);
                let south = m.index(ci, (cj + m.ny - 1) % m.ny);
                (edge_values[i] - edge_values[west]) + (edge_values[n + i] - edge_values[n + south])
            }
        }
    }

    /// Sum of `edge_values` over all edges bounding cell `i`.
    #[inline]
    pub(crate) fn edge_total(&self, i: usize, edge_values: &[f64]) -> f64 {
        match self {
            Mesh::Circle(m) => {
                let n = m.n_cells;
                edge_values[i] + edge_values[(i + n - 1) % n]
            }
            Mesh::Torus(m) => {
                let n = m.nx * m.ny;
                let (ci, cj) = (i % m.nx, i / m.nx);
                let west = m.index((ci + m.nx - 1) % m.nx, cj);
                let south = m.index(ci, (cj + m.ny - 1) % m.ny);
                edge_values[i] + edge_values[west] + edge_values[n + i] + edge_values[n + south]
            }
        }
    }

    /// Total flux through every edge for a smooth contravariant vector field,
    /// using the mean of the adjacent `sqrt_g` values on the edge.
    pub fn edge_fluxes_from_field<F>(&self, field: F) -> Vec<f64>
    where
        F: Fn(f64, f64) -> [f64; 2],
    {
        match self {
            Mesh::Circle(m) => (0..m.n_cells)
                .map(|e| {
                    let (l, r) = self.edge_cells(e);
                    let sg = 0.5 * (m.sqrt_g[l] + m.sqrt_g[r]);
                    sg * field((e as f64 + 1.0) * m.dx(), 0.0)[0]
                })
                .collect(),
            Mesh::Torus(m) => {
                let n = m.nx * m.ny;
                let (dx, dy) = m.spacing();
                (0..2 * n)
                    .map(|e| {
                        let (l, r) = self.edge_cells(e);
                        let sg = 0.5 * (m.sqrt_g[l] + m.sqrt_g[r]);
                        let c = e % n;
                        let (i, j) = ((c % m.nx) as f64, (c / m.nx) as f64);
                        if e < n {
                            sg * field((i + 1.0) * dx, (j + 0.5) * dy)[0] * dy
                        } else {
                            sg * field((i + 0.5) * dx, (j + 1.0) * dy)[1] * dx
                        }
                    })
                    .collect()
            }
        }
    }

    /// Norm `|f|_g` of a contravariant vector at cell `i`.
    pub fn vector_norm(&self, i: usize, f: [f64; 2]) -> f64 {
        match self {
            Mesh::Circle(m) => m.sqrt_g[i] * f[0].abs(),
            Mesh::Torus(m) => {
                let [a, b, c] = m.g[i];
                (a * f[0] * f[0] + 2.0 * b * f[0] * f[1] + c * f[1] * f[1]).max(0.0).sqrt()
            }
        }
    }
}

/// Discrete divergence: per cell, (outgoing - incoming edge flux) / volume.
pub fn discrete_divergence(mesh: &Mesh, edge_fluxes: &[f64]) -> Result<Vec<f64>> {
    if edge_fluxes.len() != mesh.n_edges() {
        return Err(Error::LengthMismatch { expected: mesh.n_edges(), got: edge_fluxes.len() });
    }
    Ok((0..mesh.n_cells())
        .map(|i| mesh.net_outflow(i, edge_fluxes) / mesh.volume_unchecked(i))
        .collect())
}

/// Cell-averaged scalar unknown bound to a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct CellField {
    values: Vec<f64>,
    mesh: MeshId,
}

impl CellField {
    pub fn new(mesh: &Mesh, values: Vec<f64>) -> Result<Self> {
        Self::with_id(mesh.id(), mesh.n_cells(), values)
    }

    pub(crate) fn with_id(mesh: MeshId, n_cells: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n_cells {
            return Err(Error::LengthMismatch { expected: n_cells, got: values.len() });
        }
        if let Some((cell, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { cell, value });
        }
        Ok(Self { values, mesh })
    }

    /// Samples `f(x, y)` at cell centers.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(mesh: &Mesh, f: F) -> Result<Self> {
        let values = (0..mesh.n_cells())
            .map(|i| {
                let [x, y] = mesh.cell_center(i);
                f(x, y)
            })
            .collect();
        Self::new(mesh, values)
    }

    pub fn constant(mesh: &Mesh, value: f64) -> Result<Self> {
        Self::new(mesh, vec![value; mesh.n_cells()])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn mesh_id(&self) -> MeshId {
        self.mesh
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }
}
