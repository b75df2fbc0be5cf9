//! Run configuration: flat `key = value` files plus `--set` overrides.
//!
//! The format is one assignment per line, `#` starting a comment, and a
//! fixed key set (unknown keys are errors, not warnings, so typos fail
//! fast). Overrides are applied after the file in the order given, so
//! the last assignment of a key wins.

use std::path::PathBuf;

use crate::model::SystemParams;
use crate::{Error, Result};

/// Which oscillator parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Omega1,
    Omega2,
    Omega3,
    J12,
    J13,
    J23,
    Gamma,
}

impl SweepParam {
    pub const ALL: [SweepParam; 7] = [
        SweepParam::Omega1,
        SweepParam::Omega2,
        SweepParam::Omega3,
        SweepParam::J12,
        SweepParam::J13,
        SweepParam::J23,
        SweepParam::Gamma,
    ];

    /// The config-file spelling, also used as the CSV column header.
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Omega1 => "omega1",
            SweepParam::Omega2 => "omega2",
            SweepParam::Omega3 => "omega3",
            SweepParam::J12 => "J12",
            SweepParam::J13 => "J13",
            SweepParam::J23 => "J23",
            SweepParam::Gamma => "gamma",
        }
    }

    fn parse(s: &str) -> Option<SweepParam> {
        Self::ALL.iter().copied().find(|p| p.name() == s)
    }
}

/// Column groups a run can emit. The twenty documented columns are
/// always written; `covariance` appends the 36 covariance-entry columns
/// (21 upper-triangle real parts, 15 strict-upper imaginary parts).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputSet {
    pub excitations: bool,
    pub entanglement: bool,
    pub polygamy: bool,
    pub covariance: bool,
}

impl Default for OutputSet {
    fn default() -> Self {
        OutputSet {
            excitations: true,
            entanglement: true,
            polygamy: true,
            covariance: false,
        }
    }
}

impl OutputSet {
    fn parse(value: &str) -> Result<OutputSet> {
        let mut set = OutputSet {
            excitations: false,
            entanglement: false,
            polygamy: false,
            covariance: false,
        };
        for name in value.split(',') {
            match name.trim() {
                "excitations" => set.excitations = true,
                "entanglement" => set.entanglement = true,
                "polygamy" => set.polygamy = true,
                "covariance" => set.covariance = true,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "config: unknown output \"{other}\" (expected excitations, \
                         entanglement, polygamy, covariance)"
                    )));
                }
            }
        }
        Ok(set)
    }
}

/// A fully resolved run description shared by all three subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub omega: [f64; 3],
    /// Bond order `(J12, J13, J23)`.
    pub coupling: [f64; 3],
    pub gamma: f64,
    pub schrodinger_limit: bool,
    pub t_start: f64,
    pub t_end: f64,
    pub n_points: usize,
    pub sweep_param: Option<SweepParam>,
    pub sweep_min: f64,
    pub sweep_max: f64,
    pub sweep_steps: usize,
    pub outputs: OutputSet,
    pub fock_oracle: bool,
    pub fock_cutoff: usize,
    pub series_oracle: bool,
    pub series_epsilon: f64,
    /// `None` means standard output.
    pub out_path: Option<PathBuf>,
}

impl Default for RunConfig {
    /// The Fig.-1 caption system (open chain, J₁₂ = J₂₃ = 0.1) over one
    /// relaxation's worth of time.
    fn default() -> Self {
        RunConfig {
            omega: [1.0; 3],
            coupling: [0.1, 0.0, 0.1],
            gamma: 50.0,
            schrodinger_limit: false,
            t_start: 0.0,
            t_end: 50.0,
            n_points: 200,
            sweep_param: None,
            sweep_min: 0.0,
            sweep_max: 0.0,
            sweep_steps: 0,
            outputs: OutputSet::default(),
            fock_oracle: false,
            fock_cutoff: 8,
            series_oracle: false,
            series_epsilon: 1e-12,
            out_path: None,
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value.parse::<f64>().map_err(|_| {
        Error::InvalidParameter(format!("config: {key} = \"{value}\" is not a number"))
    })
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value.parse::<usize>().map_err(|_| {
        Error::InvalidParameter(format!("config: {key} = \"{value}\" is not a whole number"))
    })
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::InvalidParameter(format!(
            "config: {key} = \"{value}\" (expected true or false)"
        ))),
    }
}

impl RunConfig {
    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "omega1" => self.omega[0] = parse_f64(key, value)?,
            "omega2" => self.omega[1] = parse_f64(key, value)?,
            "omega3" => self.omega[2] = parse_f64(key, value)?,
            "J12" => self.coupling[0] = parse_f64(key, value)?,
            "J13" => self.coupling[1] = parse_f64(key, value)?,
            "J23" => self.coupling[2] = parse_f64(key, value)?,
            "gamma" => self.gamma = parse_f64(key, value)?,
            "schrodinger_limit" => self.schrodinger_limit = parse_bool(key, value)?,
            "t_start" => self.t_start = parse_f64(key, value)?,
            "t_end" => self.t_end = parse_f64(key, value)?,
            "n_points" => self.n_points = parse_usize(key, value)?,
            "sweep_param" => {
                self.sweep_param = match value {
                    "none" => None,
                    _ => Some(SweepParam::parse(value).ok_or_else(|| {
                        Error::InvalidParameter(format!(
                            "config: sweep_param = \"{value}\" (expected one of omega1, omega2, \
                             omega3, J12, J13, J23, gamma, none)"
                        ))
                    })?),
                }
            }
            "sweep_min" => self.sweep_min = parse_f64(key, value)?,
            "sweep_max" => self.sweep_max = parse_f64(key, value)?,
            "sweep_steps" => self.sweep_steps = parse_usize(key, value)?,
            "outputs" => self.outputs = OutputSet::parse(value)?,
            "fock_oracle" => self.fock_oracle = parse_bool(key, value)?,
            "fock_cutoff" => self.fock_cutoff = parse_usize(key, value)?,
            "series_oracle" => self.series_oracle = parse_bool(key, value)?,
            "series_epsilon" => self.series_epsilon = parse_f64(key, value)?,
            "out_path" => {
                self.out_path = match value {
                    "-" | "" => None,
                    _ => Some(PathBuf::from(value)),
                }
            }
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "config: unknown key \"{key}\""
                )));
            }
        }
        Ok(())
    }

    /// Parses a whole config file body (defaults already in `self`).
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "config: line {} is not a key = value assignment: \"{}\"",
                    lineno + 1,
                    raw.trim()
                ))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Applies a `--set key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment.split_once('=').ok_or_else(|| {
            Error::InvalidParameter(format!(
                "config: --set expects key=value, got \"{assignment}\""
            ))
        })?;
        self.set(key.trim(), value.trim())
    }

    /// Builds the resolved configuration from an optional file body plus
    /// overrides, then validates it.
    pub fn from_sources(file: Option<&str>, overrides: &[String]) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(text) = file {
            cfg.apply_file(text)?;
        }
        for assignment in overrides {
            cfg.apply_override(assignment)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Structural validation; bound-state checks happen where parameters
    /// are actually instantiated (per sweep point for sweeps).
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("t_start", self.t_start), ("t_end", self.t_end)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("config: {name} = {v}")));
            }
        }
        if self.t_start < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "config: t_start = {} must be ≥ 0",
                self.t_start
            )));
        }
        if self.t_end <= self.t_start {
            return Err(Error::InvalidParameter(format!(
                "config: time grid must be increasing (t_start = {}, t_end = {})",
                self.t_start, self.t_end
            )));
        }
        if self.n_points < 2 {
            return Err(Error::InvalidParameter(format!(
                "config: n_points = {} must be ≥ 2",
                self.n_points
            )));
        }
        if self.sweep_param.is_some() {
            if !self.sweep_min.is_finite() || !self.sweep_max.is_finite() {
                return Err(Error::InvalidParameter(
                    "config: sweep_min / sweep_max must be finite".into(),
                ));
            }
            if self.sweep_min > self.sweep_max {
                return Err(Error::InvalidParameter(format!(
                    "config: sweep_min = {} exceeds sweep_max = {}",
                    self.sweep_min, self.sweep_max
                )));
            }
        }
        if self.fock_cutoff < 2 || self.fock_cutoff.pow(3) > crate::fock::MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "config: fock_cutoff = {} out of range (2 ≤ d, d³ ≤ {})",
                self.fock_cutoff,
                crate::fock::MAX_DIM
            )));
        }
        if !(self.series_epsilon > 0.0 && self.series_epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "config: series_epsilon = {} must lie in (0, 1)",
                self.series_epsilon
            )));
        }
        // Surface broken oscillator parameters at config time for the
        // base system; sweeps may still move individual points in and
        // out of the bound manifold.
        self.params()?;
        Ok(())
    }

    /// The base (unswept) system parameters.
    pub fn params(&self) -> Result<SystemParams> {
        if self.schrodinger_limit {
            SystemParams::schrodinger(self.omega, self.coupling)
        } else {
            SystemParams::new(self.omega, self.coupling, self.gamma)
        }
    }

    /// The base parameters with one value replaced by a sweep point.
    pub fn params_at(&self, param: SweepParam, value: f64) -> Result<SystemParams> {
        let mut omega = self.omega;
        let mut coupling = self.coupling;
        let mut gamma = self.gamma;
        match param {
            SweepParam::Omega1 => omega[0] = value,
            SweepParam::Omega2 => omega[1] = value,
            SweepParam::Omega3 => omega[2] = value,
            SweepParam::J12 => coupling[0] = value,
            SweepParam::J13 => coupling[1] = value,
            SweepParam::J23 => coupling[2] = value,
            SweepParam::Gamma => gamma = value,
        }
        if self.schrodinger_limit {
            SystemParams::schrodinger(omega, coupling)
        } else {
            SystemParams::new(omega, coupling, gamma)
        }
    }

    /// Sweep grid values (inclusive endpoints; a single step sits at
    /// `sweep_min`; zero steps means an empty grid).
    pub fn sweep_values(&self) -> Vec<f64> {
        match self.sweep_steps {
            0 => Vec::new(),
            1 => vec![self.sweep_min],
            n => (0..n)
                .map(|i| {
                    self.sweep_min + (self.sweep_max - self.sweep_min) * i as f64 / (n - 1) as f64
                })
                .collect(),
        }
    }

    /// Time grid values (inclusive endpoints).
    pub fn time_values(&self) -> Vec<f64> {
        (0..self.n_points)
            .map(|i| {
                self.t_start + (self.t_end - self.t_start) * i as f64 / (self.n_points - 1) as f64
            })
            .collect()
    }
}
