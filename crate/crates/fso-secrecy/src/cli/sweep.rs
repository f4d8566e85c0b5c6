//! Sweep evaluation and CSV emission.
//!
//! Axis points are evaluated in parallel; rows are written in axis order
//! and every estimator draws from a seed derived from its (axis, curve,
//! estimator) coordinates, so the CSV is bit-identical across runs and
//! thread counts.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::average::{
    average_secrecy_capacity_exact, average_secrecy_lower_bound, monte_carlo_lower_bound,
    ScenarioConfig,
};
use crate::channel::LinkParams;
use crate::cli::config::{AxisVar, Estimator, SweepConfig};
use crate::error::{Error, Result};
use crate::fading::{CorrelatedFadingPair, LogNormalFading};
use crate::rng::mix_seed;
use crate::secrecy::awgn_secrecy_lower_bound;

/// Largest correlation a sweep will evaluate; requests at or above 1 are
/// capped here (the joint density is singular at 1).
const RHO_CAP: f64 = 0.999;

/// One curve of the sweep: the off-axis parameters it is evaluated at.
#[derive(Debug, Clone)]
struct Curve {
    rho: f64,
    sigma_tb2: f64,
    suffix: String,
}

/// A computed sweep: axis column plus `(value, error)` column pairs.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    /// CSV with a header row, LF line endings and full-precision cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for cell in row {
                if !first {
                    out.push(',');
                }
                let _ = write!(out, "{cell:.16e}");
                first = false;
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// Column values by header name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

fn capped_rho(rho: f64) -> f64 {
    if rho >= 1.0 {
        eprintln!(
            "warning: rho = {rho} is capped to {RHO_CAP}; the joint density is singular at 1"
        );
        RHO_CAP
    } else {
        rho
    }
}

fn curves_for(cfg: &SweepConfig) -> Vec<Curve> {
    let mut curves = Vec::new();
    for &sigma_tb2 in &cfg.sigma_tb2 {
        for &rho in &cfg.rho {
            let mut suffix = String::new();
            if cfg.sigma_tb2.len() > 1 {
                let _ = write!(suffix, "_stb2{sigma_tb2}");
            }
            if cfg.rho.len() > 1 {
                let _ = write!(suffix, "_rho{rho}");
            }
            curves.push(Curve {
                rho: capped_rho(rho),
                sigma_tb2,
                suffix,
            });
        }
    }
    curves
}

fn scenario_for(cfg: &SweepConfig, curve: &Curve, axis_value: f64) -> Result<ScenarioConfig> {
    let axis = cfg.axis;
    let gamma_b_db = if axis == AxisVar::GammaBDb {
        axis_value
    } else {
        cfg.gamma_b_db
    };
    let gamma_e_db = if axis == AxisVar::GammaEDb {
        axis_value
    } else {
        cfg.gamma_e_db
    };
    // Axis values arrive pre-capped from run_sweep.
    let rho = if axis == AxisVar::Rho { axis_value } else { curve.rho };
    let sigma_tb2 = if axis == AxisVar::SigmaTb2 {
        axis_value
    } else {
        curve.sigma_tb2
    };

    Ok(ScenarioConfig {
        link_b: LinkParams::from_snr(cfg.db_convention.db_to_linear(gamma_b_db))?,
        link_e: LinkParams::from_snr(cfg.db_convention.db_to_linear(gamma_e_db))?,
        fading: CorrelatedFadingPair::new(
            LogNormalFading::mean_normalized(sigma_tb2)?,
            LogNormalFading::mean_normalized(cfg.sigma_te2)?,
            rho,
        )?,
        quad: cfg.quad,
        opt: cfg.opt,
    })
}

/// Evaluates every requested estimator at every axis point.
///
/// The table holds one row per axis point: the axis value first, then a
/// `(value, error)` column pair per estimator and curve.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepTable> {
    cfg.validate()?;

    let axis_values: Vec<f64> = (0..cfg.steps)
        .map(|i| {
            let v = cfg.start + (cfg.stop - cfg.start) * i as f64 / (cfg.steps - 1) as f64;
            if cfg.axis == AxisVar::Rho {
                capped_rho(v)
            } else {
                v
            }
        })
        .collect();
    let curves = curves_for(cfg);

    // Column layout: estimators in the order requested; per-curve columns
    // for fading estimators, a single pair for the fading-free baseline.
    struct Job {
        estimator: Estimator,
        curve_idx: usize,
        name: String,
    }
    let mut jobs = Vec::new();
    for &est in &cfg.estimators {
        match est {
            Estimator::AwgnBaseline => {
                jobs.push(Job {
                    estimator: est,
                    curve_idx: 0,
                    name: est.name().to_string(),
                });
            }
            _ => {
                for (curve_idx, curve) in curves.iter().enumerate() {
                    jobs.push(Job {
                        estimator: est,
                        curve_idx,
                        name: format!("{}{}", est.name(), curve.suffix),
                    });
                }
            }
        }
    }

    let mut header = vec![cfg.axis.key().to_string()];
    for job in &jobs {
        header.push(format!("{}_bits", job.name));
        header.push(format!("{}_err_bits", job.name));
    }

    // All (axis point × job) evaluations run in parallel; cells land at
    // fixed coordinates so the assembled table is order-independent.
    let tasks: Vec<(usize, usize)> = (0..axis_values.len())
        .flat_map(|ai| (0..jobs.len()).map(move |ji| (ai, ji)))
        .collect();

    let cells: Vec<Result<(f64, f64)>> = tasks
        .par_iter()
        .map(|&(ai, ji)| {
            let job = &jobs[ji];
            let axis_value = axis_values[ai];
            let annotate = |e: Error| Error::AtAxisPoint {
                axis: cfg.axis.key().to_string(),
                value: axis_value,
                source: Box::new(e),
            };
            let sc = scenario_for(cfg, &curves[job.curve_idx], axis_value).map_err(annotate)?;
            let seed = mix_seed(
                cfg.seed,
                ai as u64,
                (job.curve_idx as u64) << 8 | job.estimator.tag(),
            );
            let out = match job.estimator {
                Estimator::LowerBoundQuadrature => {
                    average_secrecy_lower_bound(&sc).map(|e| (e.value, e.err_est))
                }
                Estimator::LowerBoundMc => {
                    monte_carlo_lower_bound(&sc, cfg.mc_samples, seed).map(|e| (e.value, e.err_est))
                }
                Estimator::ExactMc => average_secrecy_capacity_exact(&sc, cfg.exact_samples, seed)
                    .map(|e| (e.value, e.err_est)),
                Estimator::AwgnBaseline => {
                    Ok((awgn_secrecy_lower_bound(&sc.link_b, &sc.link_e), 0.0))
                }
            };
            out.map_err(annotate)
        })
        .collect();

    let mut rows: Vec<Vec<f64>> = axis_values
        .iter()
        .map(|&v| {
            let mut row = vec![0.0; 1 + 2 * jobs.len()];
            row[0] = v;
            row
        })
        .collect();
    for (task_idx, cell) in cells.into_iter().enumerate() {
        let (ai, ji) = tasks[task_idx];
        let (value, err) = cell?;
        rows[ai][1 + 2 * ji] = value;
        rows[ai][2 + 2 * ji] = err;
    }

    Ok(SweepTable { header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::RawConfig;

    fn smoke_config() -> SweepConfig {
        let mut raw = RawConfig::default();
        raw.set("steps", "2".into()).unwrap();
        raw.set("start", "0".into()).unwrap();
        raw.set("stop", "10".into()).unwrap();
        raw.set("estimators", "lower_bound_quadrature,awgn_baseline".into())
            .unwrap();
        raw.build_sweep().unwrap()
    }

    #[test]
    fn smoke_sweep_has_expected_shape() {
        let cfg = smoke_config();
        let table = run_sweep(&cfg).unwrap();
        assert_eq!(table.rows.len(), 2);
        assert_eq!(table.header.len(), 5);
        assert_eq!(table.header[0], "gamma_b_db");
        assert_eq!(table.header[1], "lower_bound_quadrature_bits");
        let csv = table.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn multi_curve_sweep_names_columns_by_parameter() {
        let mut raw = RawConfig::default();
        raw.set("steps", "2".into()).unwrap();
        raw.set("rho", "0,0.9".into()).unwrap();
        let cfg = raw.build_sweep().unwrap();
        let table = run_sweep(&cfg).unwrap();
        assert!(table.column("lower_bound_quadrature_rho0_bits").is_some());
        assert!(table.column("lower_bound_quadrature_rho0.9_bits").is_some());
    }

    #[test]
    fn csv_cells_carry_full_precision() {
        let cfg = smoke_config();
        let table = run_sweep(&cfg).unwrap();
        let csv = table.to_csv();
        let first_cell = csv.lines().nth(1).unwrap().split(',').nth(1).unwrap();
        let mantissa = first_cell.split('e').next().unwrap();
        let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
        assert!(digits >= 12, "cell '{first_cell}' has too few digits");
        let reparsed: f64 = first_cell.parse().unwrap();
        assert_eq!(reparsed, table.rows[0][1], "cells must round-trip");
    }

    #[test]
    fn alternative_axes_sweep() {
        // Correlation axis: a request up to full correlation is capped.
        let mut raw = RawConfig::default();
        raw.set("axis", "rho".into()).unwrap();
        raw.set("start", "0".into()).unwrap();
        raw.set("stop", "1".into()).unwrap();
        raw.set("steps", "3".into()).unwrap();
        raw.set("gamma_b_db", "10".into()).unwrap();
        let cfg = raw.build_sweep().unwrap();
        let table = run_sweep(&cfg).unwrap();
        assert_eq!(table.rows.len(), 3);
        let values = table.column("lower_bound_quadrature_bits").unwrap();
        // Correlation hurts: strictly decreasing along the axis.
        assert!(values[0] > values[1] && values[1] > values[2], "{values:?}");

        // Eve-SNR axis: more SNR for Eve means less secrecy.
        let mut raw = RawConfig::default();
        raw.set("axis", "gamma_e_db".into()).unwrap();
        raw.set("start", "-5".into()).unwrap();
        raw.set("stop", "5".into()).unwrap();
        raw.set("steps", "2".into()).unwrap();
        raw.set("gamma_b_db", "10".into()).unwrap();
        let cfg = raw.build_sweep().unwrap();
        let table = run_sweep(&cfg).unwrap();
        let values = table.column("lower_bound_quadrature_bits").unwrap();
        assert!(values[0] > values[1], "{values:?}");

        // Bob-turbulence axis: at 10 dB weaker turbulence is better.
        let mut raw = RawConfig::default();
        raw.set("axis", "sigma_tb2".into()).unwrap();
        raw.set("start", "0.1".into()).unwrap();
        raw.set("stop", "1".into()).unwrap();
        raw.set("steps", "2".into()).unwrap();
        raw.set("gamma_b_db", "10".into()).unwrap();
        let cfg = raw.build_sweep().unwrap();
        let table = run_sweep(&cfg).unwrap();
        let values = table.column("lower_bound_quadrature_bits").unwrap();
        assert!(values[0] > values[1], "{values:?}");
    }

    #[test]
    fn identical_seeds_reproduce_identical_csv() {
        let mut cfg = smoke_config();
        cfg.estimators = vec![Estimator::LowerBoundMc];
        cfg.mc_samples = 10_000;
        let a = run_sweep(&cfg).unwrap().to_csv();
        let b = run_sweep(&cfg).unwrap().to_csv();
        assert_eq!(a, b);
    }
}
