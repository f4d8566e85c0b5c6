//! Sweep configuration: a flat `key = value` file mirrored 1:1 by CLI
//! flags, flags taking precedence. Every run is fully described by one
//! small text file, which makes experiment records trivially diffable.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::numerics::{OptimizerSpec, QuadratureSpec};

/// Variable swept along the axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisVar {
    GammaBDb,
    Rho,
    SigmaTb2,
    GammaEDb,
}

impl AxisVar {
    pub fn key(&self) -> &'static str {
        match self {
            AxisVar::GammaBDb => "gamma_b_db",
            AxisVar::Rho => "rho",
            AxisVar::SigmaTb2 => "sigma_tb2",
            AxisVar::GammaEDb => "gamma_e_db",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gamma_b_db" => Ok(AxisVar::GammaBDb),
            "rho" => Ok(AxisVar::Rho),
            "sigma_tb2" => Ok(AxisVar::SigmaTb2),
            "gamma_e_db" => Ok(AxisVar::GammaEDb),
            other => Err(Error::Config(format!(
                "unknown axis '{other}' (expected gamma_b_db, rho, sigma_tb2 or gamma_e_db)"
            ))),
        }
    }

    /// Human-readable axis label for plots.
    pub fn label(&self) -> &'static str {
        match self {
            AxisVar::GammaBDb => "average electrical SNR at Bob (dB)",
            AxisVar::Rho => "log-domain correlation coefficient",
            AxisVar::SigmaTb2 => "Rytov variance at Bob",
            AxisVar::GammaEDb => "average electrical SNR at Eve (dB)",
        }
    }
}

/// Average-secrecy estimators selectable in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    LowerBoundQuadrature,
    LowerBoundMc,
    ExactMc,
    AwgnBaseline,
}

impl Estimator {
    pub fn name(&self) -> &'static str {
        match self {
            Estimator::LowerBoundQuadrature => "lower_bound_quadrature",
            Estimator::LowerBoundMc => "lower_bound_mc",
            Estimator::ExactMc => "exact_mc",
            Estimator::AwgnBaseline => "awgn_baseline",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "lower_bound_quadrature" => Ok(Estimator::LowerBoundQuadrature),
            "lower_bound_mc" => Ok(Estimator::LowerBoundMc),
            "exact_mc" => Ok(Estimator::ExactMc),
            "awgn_baseline" => Ok(Estimator::AwgnBaseline),
            other => Err(Error::Config(format!(
                "unknown estimator '{other}' (expected lower_bound_quadrature, \
                 lower_bound_mc, exact_mc or awgn_baseline)"
            ))),
        }
    }

    pub(crate) fn tag(&self) -> u64 {
        match self {
            Estimator::LowerBoundQuadrature => 0,
            Estimator::LowerBoundMc => 1,
            Estimator::ExactMc => 2,
            Estimator::AwgnBaseline => 3,
        }
    }
}

/// Decibel convention for the `γ = S/σ` axis. Affects only axis labeling
/// and spacing, never a bits value at a given `γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DbConvention {
    /// `γ_dB = 10·log₁₀(γ)` (default).
    Power10Log10,
    /// `γ_dB = 20·log₁₀(γ)`.
    Amplitude20Log10,
}

impl DbConvention {
    pub fn name(&self) -> &'static str {
        match self {
            DbConvention::Power10Log10 => "power_10log10",
            DbConvention::Amplitude20Log10 => "amplitude_20log10",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "power_10log10" => Ok(DbConvention::Power10Log10),
            "amplitude_20log10" => Ok(DbConvention::Amplitude20Log10),
            other => Err(Error::Config(format!(
                "unknown db convention '{other}' (expected power_10log10 or amplitude_20log10)"
            ))),
        }
    }

    pub fn db_to_linear(&self, db: f64) -> f64 {
        match self {
            DbConvention::Power10Log10 => 10f64.powf(db / 10.0),
            DbConvention::Amplitude20Log10 => 10f64.powf(db / 20.0),
        }
    }
}

/// Fully-resolved sweep description.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub axis: AxisVar,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    /// Fixed value when `axis != gamma_b_db`.
    pub gamma_b_db: f64,
    pub gamma_e_db: f64,
    /// One curve per value; multiple values allowed only off-axis.
    pub rho: Vec<f64>,
    /// One curve per value; multiple values allowed only off-axis.
    pub sigma_tb2: Vec<f64>,
    pub sigma_te2: f64,
    pub estimators: Vec<Estimator>,
    pub db_convention: DbConvention,
    pub seed: u64,
    /// Samples for the Monte Carlo lower-bound oracle.
    pub mc_samples: usize,
    /// Samples for the exact (nested-optimization) estimator.
    pub exact_samples: usize,
    pub output_path: PathBuf,
    pub quad: QuadratureSpec,
    pub opt: OptimizerSpec,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            axis: AxisVar::GammaBDb,
            start: -10.0,
            stop: 20.0,
            steps: 31,
            gamma_b_db: 10.0,
            gamma_e_db: 0.0,
            rho: vec![0.0],
            sigma_tb2: vec![1.0],
            sigma_te2: 1.0,
            estimators: vec![Estimator::LowerBoundQuadrature],
            db_convention: DbConvention::Power10Log10,
            seed: 42,
            mc_samples: 1_000_000,
            exact_samples: 10_000,
            output_path: PathBuf::from("sweep.csv"),
            quad: QuadratureSpec::default(),
            opt: OptimizerSpec::default(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::Config(format!(
                "steps must be at least 2, got {}",
                self.steps
            )));
        }
        if !(self.start < self.stop) {
            return Err(Error::Config(format!(
                "start must be below stop, got [{}, {}]",
                self.start, self.stop
            )));
        }
        if self.estimators.is_empty() {
            return Err(Error::Config("at least one estimator is required".into()));
        }
        for (i, e) in self.estimators.iter().enumerate() {
            if self.estimators[..i].contains(e) {
                return Err(Error::Config(format!(
                    "estimator '{}' listed twice",
                    e.name()
                )));
            }
        }
        if self.rho.is_empty() || self.sigma_tb2.is_empty() {
            return Err(Error::Config(
                "rho and sigma_tb2 need at least one value".into(),
            ));
        }
        if self.axis == AxisVar::Rho && self.rho.len() > 1 {
            return Err(Error::Config(
                "rho is the axis; a fixed rho list is not allowed".into(),
            ));
        }
        if self.axis == AxisVar::SigmaTb2 && self.sigma_tb2.len() > 1 {
            return Err(Error::Config(
                "sigma_tb2 is the axis; a fixed sigma_tb2 list is not allowed".into(),
            ));
        }
        if self.mc_samples < 1000 || self.exact_samples < 1000 {
            return Err(Error::Config(
                "samples and exact_samples must be at least 1000".into(),
            ));
        }
        Ok(())
    }
}

/// A layered bag of raw `key = value` settings. Later layers win; the set
/// of explicitly-given keys is kept for the axis-overlap check.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

const KNOWN_KEYS: &[&str] = &[
    "axis",
    "start",
    "stop",
    "steps",
    "gamma_b_db",
    "gamma_e_db",
    "rho",
    "sigma_tb2",
    "sigma_te2",
    "estimators",
    "db_convention",
    "seed",
    "samples",
    "exact_samples",
    "out",
];

impl RawConfig {
    /// Parses a flat config file: one `key = value` per line, `#` comments,
    /// blank lines ignored.
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = RawConfig::default();
        for (idx, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "{}:{}: expected 'key = value', got '{line}'",
                    path.display(),
                    idx + 1
                )));
            };
            cfg.set(key.trim(), value.trim().to_string())?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: String) -> Result<()> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::Config(format!(
                "unknown config key '{key}' (known keys: {})",
                KNOWN_KEYS.join(", ")
            )));
        }
        self.entries.insert(key.to_string(), value);
        Ok(())
    }

    pub fn set_if(&mut self, key: &str, value: Option<String>) -> Result<()> {
        if let Some(v) = value {
            self.set(key, v)?;
        }
        Ok(())
    }

    /// Applies `over` on top of `self`.
    pub fn merged_with(mut self, over: &RawConfig) -> Self {
        for (k, v) in &over.entries {
            self.entries.insert(k.clone(), v.clone());
        }
        self
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn parse_with<T>(&self, key: &str, f: impl Fn(&str) -> Result<T>) -> Result<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(raw) => f(raw).map(Some),
        }
    }

    fn parse_f64(&self, key: &str) -> Result<Option<f64>> {
        self.parse_with(key, |raw| {
            raw.parse::<f64>()
                .map_err(|_| Error::Config(format!("key '{key}': '{raw}' is not a number")))
        })
    }

    fn parse_f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.parse_with(key, |raw| {
            raw.split(',')
                .map(|tok| {
                    let tok = tok.trim();
                    tok.parse::<f64>()
                        .map_err(|_| Error::Config(format!("key '{key}': '{tok}' is not a number")))
                })
                .collect()
        })
    }

    fn parse_usize(&self, key: &str) -> Result<Option<usize>> {
        self.parse_with(key, |raw| {
            raw.parse::<usize>()
                .map_err(|_| Error::Config(format!("key '{key}': '{raw}' is not a count")))
        })
    }

    fn parse_u64(&self, key: &str) -> Result<Option<u64>> {
        self.parse_with(key, |raw| {
            raw.parse::<u64>()
                .map_err(|_| Error::Config(format!("key '{key}': '{raw}' is not a seed")))
        })
    }

    /// Resolves the layered settings into a validated [`SweepConfig`].
    pub fn build_sweep(&self) -> Result<SweepConfig> {
        let cfg = self.resolve()?;
        if self.contains(cfg.axis.key()) {
            return Err(Error::Config(format!(
                "'{}' is the sweep axis and cannot also be fixed",
                cfg.axis.key()
            )));
        }
        Ok(cfg)
    }

    /// Like [`RawConfig::build_sweep`] but for single-scenario evaluation,
    /// where there is no axis and every variable may be fixed.
    pub fn build_point(&self) -> Result<SweepConfig> {
        self.resolve()
    }

    fn resolve(&self) -> Result<SweepConfig> {
        let mut cfg = SweepConfig::default();
        if let Some(axis) = self.parse_with("axis", AxisVar::parse)? {
            cfg.axis = axis;
        }
        if let Some(v) = self.parse_f64("start")? {
            cfg.start = v;
        }
        if let Some(v) = self.parse_f64("stop")? {
            cfg.stop = v;
        }
        if let Some(v) = self.parse_usize("steps")? {
            cfg.steps = v;
        }
        if let Some(v) = self.parse_f64("gamma_b_db")? {
            cfg.gamma_b_db = v;
        }
        if let Some(v) = self.parse_f64("gamma_e_db")? {
            cfg.gamma_e_db = v;
        }
        if let Some(v) = self.parse_f64_list("rho")? {
            cfg.rho = v;
        }
        if let Some(v) = self.parse_f64_list("sigma_tb2")? {
            cfg.sigma_tb2 = v;
        }
        if let Some(v) = self.parse_f64("sigma_te2")? {
            cfg.sigma_te2 = v;
        }
        if let Some(list) = self.parse_with("estimators", |raw| {
            raw.split(',')
                .map(|tok| Estimator::parse(tok.trim()))
                .collect::<Result<Vec<_>>>()
        })? {
            cfg.estimators = list;
        }
        if let Some(v) = self.parse_with("db_convention", DbConvention::parse)? {
            cfg.db_convention = v;
        }
        if let Some(v) = self.parse_u64("seed")? {
            cfg.seed = v;
        }
        if let Some(v) = self.parse_usize("samples")? {
            cfg.mc_samples = v;
        }
        if let Some(v) = self.parse_usize("exact_samples")? {
            cfg.exact_samples = v;
        }
        if let Some(v) = self.parse_with("out", |raw| Ok(PathBuf::from(raw)))? {
            cfg.output_path = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
