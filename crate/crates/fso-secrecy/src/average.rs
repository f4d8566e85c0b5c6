//! Ergodic (average) secrecy quantities over the fading law.
//!
//! The average of the closed-form lower bound is a smooth 2-D integral and
//! is evaluated by adaptive quadrature over a quantile-truncated box, with
//! Monte Carlo as an independent oracle. The exact average secrecy
//! capacity is evaluated by Monte Carlo only: every integrand evaluation
//! is itself a nested optimization, which makes quadrature impractical.

use rayon::prelude::*;

use crate::channel::LinkParams;
use crate::error::{Error, Result};
use crate::fading::{CorrelatedFadingPair, SAMPLE_CHUNK};
use crate::numerics::{integrate_2d, OptimizerSpec, QuadratureSpec, Rect};
use crate::secrecy::{instantaneous_secrecy_capacity, lower_bound_raw, FadingPairRealization};

/// Everything needed to evaluate one average-secrecy scenario.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioConfig {
    pub link_b: LinkParams,
    pub link_e: LinkParams,
    pub fading: CorrelatedFadingPair,
    pub quad: QuadratureSpec,
    pub opt: OptimizerSpec,
}

/// How an [`EstimateWithError`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMethod {
    Quadrature,
    MonteCarlo,
}

/// An average secrecy rate with its accuracy estimate.
#[derive(Debug, Clone, Copy)]
pub struct EstimateWithError {
    /// Bits per channel use.
    pub value: f64,
    /// Quadrature error bound or Monte Carlo standard error, in bits.
    pub err_est: f64,
    pub method: EstimateMethod,
    /// Monte Carlo samples or quadrature subdivisions.
    pub samples_or_subdivisions: usize,
    /// Samples whose inner optimization failed (excluded from the mean).
    pub failed_samples: usize,
}

/// Average of the halfway-threshold secrecy bound over the joint fading
/// law, by adaptive quadrature on the quantile-truncated box.
///
/// The probability mass excluded by the truncation (at most `2q` per axis)
/// multiplies an integrand bounded by one bit, and is added to the error
/// estimate.
pub fn average_secrecy_lower_bound(cfg: &ScenarioConfig) -> Result<EstimateWithError> {
    cfg.quad.validate()?;
    let q = cfg.quad.truncation_quantile;
    let bob = cfg.fading.bob();
    let eve = cfg.fading.eve();
    let rect = Rect::new(
        bob.quantile(q)?,
        bob.quantile(1.0 - q)?,
        eve.quantile(q)?,
        eve.quantile(1.0 - q)?,
    )?;

    let out = integrate_2d(
        |h_b, h_e| {
            lower_bound_raw(&cfg.link_b, &cfg.link_e, h_b, h_e) * cfg.fading.joint_pdf_raw(h_b, h_e)
        },
        rect,
        &cfg.quad,
    )?;

    Ok(EstimateWithError {
        value: out.value.clamp(0.0, 1.0),
        err_est: out.err_est + 4.0 * q,
        method: EstimateMethod::Quadrature,
        samples_or_subdivisions: out.subdivisions,
        failed_samples: 0,
    })
}

/// Monte Carlo oracle for [`average_secrecy_lower_bound`]: the sample mean
/// of the closed-form bound over correlated fading draws, with its
/// standard error.
pub fn monte_carlo_lower_bound(
    cfg: &ScenarioConfig,
    mc_samples: usize,
    rng_seed: u64,
) -> Result<EstimateWithError> {
    check_sample_count(mc_samples)?;

    let chunks = mc_samples.div_ceil(SAMPLE_CHUNK);
    let partials: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = SAMPLE_CHUNK.min(mc_samples - c * SAMPLE_CHUNK);
            let mut buf = vec![(0.0, 0.0); len];
            cfg.fading.fill_chunk(rng_seed, c, &mut buf);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for &(h_b, h_e) in &buf {
                let v = lower_bound_raw(&cfg.link_b, &cfg.link_e, h_b, h_e);
                sum += v;
                sum_sq += v * v;
            }
            (sum, sum_sq)
        })
        .collect();

    // Fixed-order reduction keeps the result independent of thread count.
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for &(s, s2) in &partials {
        sum += s;
        sum_sq += s2;
    }
    let (mean, stderr) = mean_and_stderr(sum, sum_sq, mc_samples);

    Ok(EstimateWithError {
        value: mean,
        err_est: stderr,
        method: EstimateMethod::MonteCarlo,
        samples_or_subdivisions: mc_samples,
        failed_samples: 0,
    })
}

/// Monte Carlo estimate of the exact average secrecy capacity: the sample
/// mean of the nested-optimization instantaneous value over correlated
/// fading draws.
///
/// Draws whose inner optimization fails are counted and excluded; more
/// than 0.1% failures aborts the estimate.
pub fn average_secrecy_capacity_exact(
    cfg: &ScenarioConfig,
    mc_samples: usize,
    rng_seed: u64,
) -> Result<EstimateWithError> {
    check_sample_count(mc_samples)?;
    cfg.opt.validate()?;

    let draws = cfg.fading.sample_pairs(rng_seed, mc_samples)?;
    let values: Vec<Option<f64>> = draws
        .par_iter()
        .map(|&(h_b, h_e)| {
            let pair = FadingPairRealization::new(h_b, h_e).ok()?;
            instantaneous_secrecy_capacity(&cfg.link_b, &cfg.link_e, &pair, &cfg.opt)
                .ok()
                .map(|r| r.value)
        })
        .collect();

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut failures = 0usize;
    for v in &values {
        match v {
            Some(x) => {
                sum += x;
                sum_sq += x * x;
            }
            None => failures += 1,
        }
    }
    if failures * 1000 > mc_samples {
        return Err(Error::Estimation {
            failures,
            samples: mc_samples,
        });
    }

    let good = mc_samples - failures;
    let (mean, stderr) = mean_and_stderr(sum, sum_sq, good);

    Ok(EstimateWithError {
        value: mean,
        err_est: stderr,
        method: EstimateMethod::MonteCarlo,
        samples_or_subdivisions: good,
        failed_samples: failures,
    })
}

fn check_sample_count(mc_samples: usize) -> Result<()> {
    if mc_samples < 1000 {
        return Err(Error::Domain(format!(
            "Monte Carlo estimators need at least 1000 samples, got {mc_samples}"
        )));
    }
    Ok(())
}

fn mean_and_stderr(sum: f64, sum_sq: f64, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let mean = sum / nf;
    let var = ((sum_sq - sum * sum / nf) / (nf - 1.0)).max(0.0);
    (mean, (var / nf).sqrt())
}
