//! Run configuration: one TOML file describes one run.
//!
//! Every family is an internally tagged table (`family = "..."`), so an unknown
//! name is rejected while parsing with the list of accepted names. Missing
//! fields take their defaults, and the section of the selected solver is always
//! present after [`parse_str`].

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot parse config: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Riemannian,
    Lorentzian,
    Gowdy,
}

impl SolverKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::Riemannian => "riemannian",
            SolverKind::Lorentzian => "lorentzian",
            SolverKind::Gowdy => "gowdy",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub solver: SolverKind,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub riemannian: Option<RiemannianSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lorentzian: Option<LorentzianSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gowdy: Option<GowdySection>,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("curvedflow_out")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FluxScheme {
    #[default]
    Rusanov,
    #[serde(alias = "godunov_scalar")]
    Godunov,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Numerics {
    pub cfl: f64,
    pub t_end: f64,
    /// A series row is written every `record_every` steps and at the end.
    pub record_every: usize,
    /// Field snapshots every `snapshot_every` recorded steps; 0 keeps only the
    /// first and the last.
    pub snapshot_every: usize,
    pub numerical_flux: FluxScheme,
}

impl Default for Numerics {
    fn default() -> Self {
        Self { cfl: 0.45, t_end: 0.5, record_every: 1, snapshot_every: 0, numerical_flux: FluxScheme::Rusanov }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeshSpec {
    Circle {
        #[serde(default = "d_256")]
        n_cells: usize,
        #[serde(default = "d_one")]
        length: f64,
    },
    Torus {
        #[serde(default = "d_64")]
        nx: usize,
        #[serde(default = "d_64")]
        ny: usize,
        #[serde(default = "d_one")]
        length_x: f64,
        #[serde(default = "d_one")]
        length_y: f64,
    },
}

/// Metric families. `sine` uses `sqrt_g = 1 + A sin(2 pi x / L)` on the circle
/// and `g = diag(1 + A sin^2(2 pi x / L_x), 1 + A sin^2(2 pi y / L_y))` on the
/// torus.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum MetricSpec {
    Flat,
    Sine {
        #[serde(default = "d_03")]
        amplitude: f64,
    },
}

/// Flux families; `coeffs` are the cubic profile `phi(u)`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FluxSpec {
    /// `f = (u^2 / 2) / sqrt_g`
    #[serde(rename = "burgers_1d")]
    Burgers1d,
    /// `f = phi(u) / sqrt_g`
    #[serde(rename = "potential_1d")]
    Potential1d {
        #[serde(default = "d_burgers")]
        coeffs: Vec<f64>,
    },
    /// Stream function `psi = A sin(2 pi x / L_x) sin(2 pi y / L_y) phi(u)`.
    #[serde(rename = "stream_2d")]
    Stream2d {
        #[serde(default = "d_burgers")]
        coeffs: Vec<f64>,
        #[serde(default = "d_one")]
        amplitude: f64,
    },
    /// `f = (1 + A sin(2 pi x / L)) phi(u)`, not geometry-compatible.
    #[serde(rename = "field_1d")]
    Field1d {
        #[serde(default = "d_burgers")]
        coeffs: Vec<f64>,
        #[serde(default = "d_05")]
        amplitude: f64,
    },
}

impl FluxSpec {
    pub const NAMES: [&'static str; 4] = ["burgers_1d", "potential_1d", "stream_2d", "field_1d"];
}

/// Scalar initial data; `x` and `y` are relative to the periods.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalarInitial {
    Constant {
        #[serde(default)]
        value: f64,
    },
    /// `inside` on `from <= x < to`, `outside` elsewhere.
    Box {
        #[serde(default = "d_one")]
        inside: f64,
        #[serde(default)]
        outside: f64,
        #[serde(default = "d_01")]
        from: f64,
        #[serde(default = "d_05")]
        to: f64,
    },
    /// `mean + amplitude sin(2 pi mode x) cos(2 pi mode y)`
    Sine {
        #[serde(default = "d_05")]
        mean: f64,
        #[serde(default = "d_04")]
        amplitude: f64,
        #[serde(default = "d_mode")]
        mode: u32,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RiemannianSection {
    pub mesh: MeshSpec,
    pub metric: MetricSpec,
    pub flux: FluxSpec,
    pub initial: ScalarInitial,
}

impl Default for RiemannianSection {
    fn default() -> Self {
        Self {
            mesh: MeshSpec::Circle { n_cells: 256, length: 1.0 },
            metric: MetricSpec::Flat,
            flux: FluxSpec::Burgers1d,
            initial: ScalarInitial::Box { inside: 1.0, outside: 0.0, from: 0.1, to: 0.5 },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FoliationSpec {
    Minkowski,
    LapseWave {
        #[serde(default = "d_03")]
        amplitude: f64,
    },
    Breathing {
        #[serde(default = "d_02")]
        amplitude: f64,
        #[serde(default = "d_two")]
        omega: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum TimelikeSpec {
    /// `P = u`, `Q = speed u`
    Transport {
        #[serde(default = "d_one")]
        speed: f64,
    },
    /// `P = u`, `Q = u^2 / 2`
    Burgers,
    /// Burgers plus a moving stream part `s(t, x) u`.
    StreamedBurgers {
        #[serde(default = "d_02")]
        amplitude: f64,
        #[serde(default = "d_15")]
        omega: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct LorentzianSection {
    pub n_cells: usize,
    pub period: f64,
    pub foliation: FoliationSpec,
    pub flux: TimelikeSpec,
    pub initial: ScalarInitial,
    /// Second state; when present `distance.csv` is written.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub companion: Option<ScalarInitial>,
    /// Kruzkov constants whose trace norms are written next to the quadratic one.
    pub kruzkov_k: Vec<f64>,
}

impl Default for LorentzianSection {
    fn default() -> Self {
        Self {
            n_cells: 256,
            period: 1.0,
            foliation: FoliationSpec::Minkowski,
            flux: TimelikeSpec::Burgers,
            initial: ScalarInitial::Sine { mean: 0.0, amplitude: 0.3, mode: 1 },
            companion: None,
            kruzkov_k: vec![-0.2, -0.1, 0.0, 0.1, 0.2],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GowdyInitial {
    /// `mu = mu0 (1 + epsilon cos(2 pi x / L))` at rest, `c = amp cos(2 pi mode x / L)`,
    /// `c_t = rate cos(2 pi mode x / L)`.
    ConstrainedWave {
        #[serde(default = "d_001")]
        mu0: f64,
        #[serde(default = "d_01")]
        epsilon: f64,
        #[serde(default = "d_001")]
        amp: f64,
        #[serde(default = "d_001")]
        rate: f64,
        #[serde(default = "d_mode")]
        mode: u32,
        #[serde(default = "d_one")]
        bt0: f64,
    },
    Riemann {
        #[serde(default = "d_two")]
        mu_left: f64,
        #[serde(default = "d_one")]
        mu_right: f64,
        #[serde(default = "d_one")]
        bt0: f64,
    },
    Collapse {
        #[serde(default = "d_1em6")]
        mu0: f64,
        #[serde(default = "d_minus_one")]
        bt0: f64,
    },
    Colliding {
        #[serde(default = "d_one")]
        mu0: f64,
        #[serde(default = "d_09")]
        speed: f64,
        #[serde(default = "d_one")]
        bt0: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SplittingSpec {
    #[default]
    Lie,
    Strang,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdSpec {
    pub alpha_b_ceiling: f64,
    pub mu_ceiling: f64,
    pub beta_floor: f64,
}

impl Default for ThresholdSpec {
    fn default() -> Self {
        Self { alpha_b_ceiling: 1e6, mu_ceiling: 1e6, beta_floor: 1e-10 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct GowdySection {
    pub kappa: f64,
    pub c_s: f64,
    pub n_cells: usize,
    pub length: f64,
    /// Base of the van der Corput sampling sequence.
    pub vdc_base: u64,
    pub splitting: SplittingSpec,
    pub a0: f64,
    pub b0: f64,
    pub thresholds: ThresholdSpec,
    pub initial: GowdyInitial,
}

impl Default for GowdySection {
    fn default() -> Self {
        Self {
            kappa: 1.0,
            c_s: 0.5,
            n_cells: 128,
            length: 1.0,
            vdc_base: 2,
            splitting: SplittingSpec::Lie,
            a0: 0.0,
            b0: 0.0,
            thresholds: ThresholdSpec::default(),
            initial: GowdyInitial::ConstrainedWave { mu0: 0.01, epsilon: 0.1, amp: 0.01, rate: 0.01, mode: 1, bt0: 1.0 },
        }
    }
}

fn d_one() -> f64 {
    1.0
}
fn d_two() -> f64 {
    2.0
}
fn d_minus_one() -> f64 {
    -1.0
}
fn d_001() -> f64 {
    0.01
}
fn d_01() -> f64 {
    0.1
}
fn d_02() -> f64 {
    0.2
}
fn d_03() -> f64 {
    0.3
}
fn d_04() -> f64 {
    0.4
}
fn d_05() -> f64 {
    0.5
}
fn d_09() -> f64 {
    0.9
}
fn d_15() -> f64 {
    1.5
}
fn d_1em6() -> f64 {
    1e-6
}
fn d_64() -> usize {
    64
}
fn d_256() -> usize {
    256
}
fn d_mode() -> u32 {
    1
}
fn d_burgers() -> Vec<f64> {
    vec![0.0, 0.0, 0.5, 0.0]
}

pub fn parse_str(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    cfg.materialize();
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
    parse_str(&text)
}

impl RunConfig {
    /// Fills the selected solver's section with defaults if it is absent.
    fn materialize(&mut self) {
        match self.solver {
            SolverKind::Riemannian => {
                self.riemannian.get_or_insert_with(Default::default);
            }
            SolverKind::Lorentzian => {
                self.lorentzian.get_or_insert_with(Default::default);
            }
            SolverKind::Gowdy => {
                self.gowdy.get_or_insert_with(Default::default);
            }
        }
    }

    /// Range checks that do not need the solver objects; the rest is checked
    /// when the problem is built.
    fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        let n = &self.numerics;
        if !(n.t_end.is_finite() && n.t_end >= 0.0) {
            return bad(format!("numerics.t_end must be >= 0, got {}", n.t_end));
        }
        if n.record_every == 0 {
            return bad("numerics.record_every must be >= 1".into());
        }
        let sections = [self.riemannian.is_some(), self.lorentzian.is_some(), self.gowdy.is_some()];
        if sections.iter().filter(|s| **s).count() > 1 {
            return bad(format!("only the [{}] section may be present", self.solver.as_str()));
        }
        if let Some(r) = &self.riemannian {
            let needs_torus = matches!(r.flux, FluxSpec::Stream2d { .. });
            let is_torus = matches!(r.mesh, MeshSpec::Torus { .. });
            if needs_torus != is_torus {
                return bad(format!(
                    "flux family {} needs a {} mesh",
                    flux_name(&r.flux),
                    if needs_torus { "torus" } else { "circle" }
                ));
            }
        }
        Ok(())
    }
}

pub fn flux_name(f: &FluxSpec) -> &'static str {
    match f {
        FluxSpec::Burgers1d => FluxSpec::NAMES[0],
        FluxSpec::Potential1d { .. } => FluxSpec::NAMES[1],
        FluxSpec::Stream2d { .. } => FluxSpec::NAMES[2],
        FluxSpec::Field1d { .. } => FluxSpec::NAMES[3],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_riemannian_gets_defaults() {
        let cfg = parse_str("solver = \"riemannian\"").unwrap();
        assert_eq!(cfg.numerics.cfl, 0.45);
        assert_eq!(cfg.numerics.numerical_flux, FluxScheme::Rusanov);
        assert_eq!(cfg.riemannian, Some(RiemannianSection::default()));
    }

    #[test]
    fn godunov_scalar_is_accepted() {
        let cfg = parse_str("solver = \"riemannian\"\n[numerics]\nnumerical_flux = \"godunov_scalar\"\n").unwrap();
        assert_eq!(cfg.numerics.numerical_flux, FluxScheme::Godunov);
    }

    #[test]
    fn unknown_family_lists_known_names() {
        let err = parse_str("solver = \"riemannian\"\n[riemannian.flux]\nfamily = \"nope\"\n").unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, ConfigError::Parse(_)));
        for name in FluxSpec::NAMES {
            assert!(msg.contains(name), "{msg}");
        }
    }

    #[test]
    fn partial_family_tables_keep_defaults() {
        let text = "solver = \"gowdy\"\n[gowdy.initial]\nfamily = \"colliding\"\nspeed = 0.5\n";
        let cfg = parse_str(text).unwrap();
        assert_eq!(cfg.gowdy.unwrap().initial, GowdyInitial::Colliding { mu0: 1.0, speed: 0.5, bt0: 1.0 });
    }

    #[test]
    fn stream_flux_needs_torus() {
        let text = "solver = \"riemannian\"\n[riemannian.flux]\nfamily = \"stream_2d\"\n";
        assert!(matches!(parse_str(text), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn materialized_config_round_trips() {
        let cfg = parse_str("solver = \"lorentzian\"").unwrap();
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(parse_str(&text).unwrap(), cfg);
    }
}
