//! Run configuration read from TOML, overridden by command-line flags.
//!
//! Every key is optional; unknown keys are rejected. Times and rates are in
//! arbitrary units with `g`, `j` as inverse times.
//!
//! ```toml
//! tau1 = 1.0          # module decay times
//! tau2 = 0.5
//! tau = 1.0           # cavity / dephasing time
//! taus = [0.5, 1, 2]  # curve family for the J sweeps
//! g = 1.0             # O(1) coupling before the 1/T or 1/sqrt(T) rescaling
//! j = 0.5
//! j_min = 1.0
//! j_max = 10.0
//! t = 1.0             # fixed evolution time (J sweeps, z-dephasing)
//! t_min = 10.0
//! t_max = 1.0e4
//! points = 61         # samples on the swept axis
//! fit_points = 10
//! n_max = 2
//! seed = 0
//! magnitudes = [0.5, 1.0]  # absolute error magnitudes
//! output = "out"
//! network = "net.toml"     # extra network checked by `verify`, relative to this file
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Option<String>,
    pub tau1: Option<f64>,
    pub tau2: Option<f64>,
    pub tau: Option<f64>,
    pub taus: Option<Vec<f64>>,
    pub g: Option<f64>,
    pub j: Option<f64>,
    pub j_min: Option<f64>,
    pub j_max: Option<f64>,
    pub t: Option<f64>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
    pub fit_points: Option<usize>,
    pub n_max: Option<usize>,
    pub seed: Option<u64>,
    pub magnitudes: Option<Vec<f64>>,
    pub output: Option<PathBuf>,
    pub network: Option<PathBuf>,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config(format!("{name} = {v} must be positive and finite")))
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        if let (Some(net), Some(dir)) = (&cfg.network, path.parent()) {
            if net.is_relative() {
                cfg.network = Some(dir.join(net));
            }
        }
        Ok(cfg)
    }

    /// Range checks that do not depend on the subcommand.
    pub fn validate(&self) -> Result<()> {
        let scalars = [
            ("tau1", self.tau1),
            ("tau2", self.tau2),
            ("tau", self.tau),
            ("g", self.g),
            ("j_max", self.j_max),
            ("t", self.t),
            ("t_min", self.t_min),
            ("t_max", self.t_max),
        ];
        for (name, v) in scalars {
            if let Some(v) = v {
                positive(name, v)?;
            }
        }
        for (name, v) in [("j", self.j), ("j_min", self.j_min)] {
            if let Some(v) = v {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(Error::Config(format!("{name} = {v} must be non-negative")));
                }
            }
        }
        if let (Some(a), Some(b)) = (self.t_min, self.t_max) {
            if a >= b {
                return Err(Error::Config(format!("t_min = {a} must be below t_max = {b}")));
            }
        }
        if let (Some(a), Some(b)) = (self.j_min, self.j_max) {
            if a >= b {
                return Err(Error::Config(format!("j_min = {a} must be below j_max = {b}")));
            }
        }
        if let Some(taus) = &self.taus {
            if taus.is_empty() {
                return Err(Error::Config("taus must not be empty".into()));
            }
            for &t in taus {
                positive("taus entry", t)?;
            }
        }
        if let Some(ms) = &self.magnitudes {
            if ms.is_empty() {
                return Err(Error::Config("magnitudes must not be empty".into()));
            }
            for &m in ms {
                positive("magnitudes entry", m)?;
            }
        }
        if let Some(p) = self.points {
            if p < 5 {
                return Err(Error::Config(format!("points = {p} must be at least 5")));
            }
        }
        if let Some(f) = self.fit_points {
            if f < 2 {
                return Err(Error::Config(format!("fit_points = {f} must be at least 2")));
            }
        }
        if let Some(n) = self.n_max {
            if n < 2 {
                return Err(Error::Config(format!("n_max = {n} must be at least 2")));
            }
        }
        Ok(())
    }

    pub fn tau1_or(&self, d: f64) -> f64 {
        self.tau1.unwrap_or(d)
    }

    pub fn tau2_or(&self, d: f64) -> f64 {
        self.tau2.unwrap_or(d)
    }

    pub fn tau_or(&self, d: f64) -> f64 {
        self.tau.unwrap_or(d)
    }

    pub fn g_or(&self, d: f64) -> f64 {
        self.g.unwrap_or(d)
    }

    pub fn j_or(&self, d: f64) -> f64 {
        self.j.unwrap_or(d)
    }

    pub fn t_or(&self, d: f64) -> f64 {
        self.t.unwrap_or(d)
    }

    pub fn seed_or(&self, d: u64) -> u64 {
        self.seed.unwrap_or(d)
    }

    pub fn n_max_or(&self, d: usize) -> usize {
        self.n_max.unwrap_or(d)
    }

    /// Log-spaced `T` values. Without `points` the grid has 20 per decade.
    pub fn time_grid(&self, t_min: f64, t_max: f64) -> Result<Vec<f64>> {
        let a = self.t_min.unwrap_or(t_min);
        let b = self.t_max.unwrap_or(t_max);
        if a >= b {
            return Err(Error::Config(format!("t_min = {a} must be below t_max = {b}")));
        }
        let grid = match self.points {
            Some(n) => crate::effective::log_points(a, b, n),
            None => crate::effective::log_grid(a, b, 20),
        };
        grid.map_err(|e| Error::Config(e.to_string()))
    }

    /// Evenly spaced `J` values, `points` of them (default `n`).
    pub fn j_grid(&self, j_min: f64, j_max: f64, n: usize) -> Result<Vec<f64>> {
        let a = self.j_min.unwrap_or(j_min);
        let b = self.j_max.unwrap_or(j_max);
        let n = self.points.unwrap_or(n);
        if a >= b || n < 2 {
            return Err(Error::Config(format!("J grid [{a}, {b}] with {n} points is empty")));
        }
        Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
    }
}
