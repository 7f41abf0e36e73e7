//! CSV writers. Reals are written with 17 significant digits so that a
//! repeated run reproduces every file byte for byte.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

pub const NORMS: &str = "t,l1,l2,linf,mass";
pub const FIELD_1D: &str = "cell_id,x,u";
pub const FIELD_2D: &str = "cell_id,x,y,u";
pub const TRACES: &str = "t,entropy_name,trace_norm";
pub const DISTANCE: &str = "t,l1_flux_distance";
pub const GOWDY_FLUID: &str = "cell,x,mu,v,tau,S";
pub const GOWDY_GEO: &str = "cell,x,a,b,c,at,ax,bt,bx,ct,cx,alpha,beta";
pub const GOWDY_SERIES: &str = "t,tv_mu,tv_v,tv_w,sup_alpha_b,sup_mu,max_r1,max_r2,verdict";

/// `(file pattern, header, description)` for every CSV the tool writes.
pub const SCHEMAS: [(&str, &str, &str); 8] = [
    ("norms.csv", NORMS, "volume-weighted norms per recorded step; for lorentzian runs mass is the slice integral of f^t(u)"),
    ("field_<step>.csv", FIELD_1D, "cell averages on a circle or a lorentzian slice"),
    ("field_<step>.csv", FIELD_2D, "cell averages on a torus"),
    ("traces.csv", TRACES, "slice L1 norm of the entropy flux trace, one row per entropy and recorded step"),
    ("distance.csv", DISTANCE, "slice L1 distance of f^t between the run and its companion"),
    ("gowdy_fluid_<step>.csv", GOWDY_FLUID, "fluid snapshot"),
    ("gowdy_geo_<step>.csv", GOWDY_GEO, "metric snapshot; alpha = e^{2a}, beta = e^{2b}"),
    ("gowdy_series.csv", GOWDY_SERIES, "total variation, sup norms, constraint residuals and verdict per recorded step"),
];

pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Accumulates one CSV file in memory.
pub struct Csv {
    name: String,
    body: String,
}

impl Csv {
    pub fn new(name: impl Into<String>, header: &str) -> Self {
        Self { name: name.into(), body: format!("{header}\n") }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for f in fields {
            if !first {
                self.body.push(',');
            }
            first = false;
            self.body.push_str(f.as_ref());
        }
        self.body.push('\n');
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn write(&self, dir: &Path) -> io::Result<PathBuf> {
        let path = dir.join(&self.name);
        fs::write(&path, &self.body)?;
        Ok(path)
    }
}
