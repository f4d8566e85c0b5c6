//! Instantaneous secrecy quantities for a fixed fading pair.
//!
//! The secrecy capacity under fading states `(h_b, h_e)` is
//! `max over (q, τ_b) of { I(X;Y_b) − max over τ_e of I(X;Y_e) }`: Eve
//! best-responds with her own threshold at whatever input distribution
//! Alice picks. Halfway thresholds make both links binary symmetric
//! channels, where the maximum secrecy rate collapses to the closed form
//! `[H(ε_e) − H(ε_b)]⁺`, the lower bound used throughout.

use std::f64::consts::{LN_2, PI, SQRT_2};

use crate::channel::{
    best_threshold_mi, crossover_raw, halfway_eps_raw, mi_raw, refine_q_scan, LinkParams,
};
use crate::error::{Error, Result};
use crate::numerics::{
    entropy_bits, erfc_raw, ln_half_erfc, maximize_scalar, positive_part, OptimizerSpec,
};

/// Densities below this make a threshold-derivative term negligible.
const NEGLIGIBLE_DENSITY: f64 = 1e-300;

/// One draw of the pair of mean-normalized irradiances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingPairRealization {
    h_b: f64,
    h_e: f64,
}

impl FadingPairRealization {
    pub fn new(h_b: f64, h_e: f64) -> Result<Self> {
        for (name, h) in [("h_b", h_b), ("h_e", h_e)] {
            if !(h >= 0.0) || !h.is_finite() {
                return Err(Error::Domain(format!(
                    "{name} must be finite and >= 0, got {h}"
                )));
            }
        }
        Ok(Self { h_b, h_e })
    }

    /// No-fading realization `h_b = h_e = 1`.
    pub fn unfaded() -> Self {
        Self { h_b: 1.0, h_e: 1.0 }
    }

    pub fn h_b(&self) -> f64 {
        self.h_b
    }

    pub fn h_e(&self) -> f64 {
        self.h_e
    }
}

/// How a [`SecrecyResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecrecyMethod {
    /// Nested optimization over the input distribution and both thresholds.
    Exact,
    /// Closed-form halfway-threshold bound.
    LowerBound,
    /// Input-distribution optimization at caller-supplied thresholds.
    FixedThresholds,
}

/// A secrecy rate together with the argument that achieves it.
#[derive(Debug, Clone, Copy)]
pub struct SecrecyResult {
    /// Secrecy rate in bits per channel use, clamped at zero.
    pub value: f64,
    /// Maximizing input probability.
    pub q_star: f64,
    /// Bob's threshold at the optimum.
    pub tau_b_star: f64,
    /// Eve's best-response threshold at the optimum.
    pub tau_e_star: f64,
    pub method: SecrecyMethod,
}

/// Instantaneous secrecy capacity for a fixed fading pair.
///
/// For each candidate input probability the inner optimization finds
/// Eve's best-response threshold; Bob's threshold is then optimized
/// against the residual difference. The value is clamped at zero.
pub fn instantaneous_secrecy_capacity(
    link_b: &LinkParams,
    link_e: &LinkParams,
    pair: &FadingPairRealization,
    opt: &OptimizerSpec,
) -> Result<SecrecyResult> {
    opt.validate()?;
    let mean_b = link_b.signal_amplitude() * pair.h_b;
    let mean_e = link_e.signal_amplitude() * pair.h_e;
    let (sigma_b, sigma_e) = (link_b.noise_sigma(), link_e.noise_sigma());

    if mean_b == 0.0 {
        // Bob's channel is useless; no positive difference exists.
        let (tau_e, _) = best_threshold_mi(mean_e, sigma_e, 0.5, opt)?;
        return Ok(SecrecyResult {
            value: 0.0,
            q_star: 0.5,
            tau_b_star: 0.0,
            tau_e_star: tau_e,
            method: SecrecyMethod::Exact,
        });
    }

    let (mut value, mut q_star, (mut tau_b_star, mut tau_e_star)) = refine_q_scan(|q| {
        let (tau_e, i_eve) = best_threshold_mi(mean_e, sigma_e, q, opt)?;
        let (tau_b, i_bob) = best_threshold_mi(mean_b, sigma_b, q, opt)?;
        Ok((i_bob - i_eve, (tau_b, tau_e)))
    })?;

    // Uniform-input/halfway-threshold candidate keeps the result at or
    // above the closed-form bound.
    let eps_b = halfway_eps_raw(mean_b, sigma_b);
    let (tau_e_half, i_eve_half) = best_threshold_mi(mean_e, sigma_e, 0.5, opt)?;
    let halfway_value = mi_raw(0.5, eps_b, eps_b) - i_eve_half;
    if halfway_value > value {
        value = halfway_value;
        q_star = 0.5;
        tau_b_star = 0.5 * mean_b;
        tau_e_star = tau_e_half;
    }

    Ok(SecrecyResult {
        value: positive_part(value),
        q_star,
        tau_b_star,
        tau_e_star,
        method: SecrecyMethod::Exact,
    })
}

/// Maximum secrecy rate at caller-fixed detection thresholds: a 1-D
/// maximization of the mutual-information difference over the input
/// probability, clamped at zero.
pub fn secrecy_rate_fixed_thresholds(
    link_b: &LinkParams,
    link_e: &LinkParams,
    pair: &FadingPairRealization,
    tau_b: f64,
    tau_e: f64,
    opt: &OptimizerSpec,
) -> Result<SecrecyResult> {
    if !tau_b.is_finite() || !tau_e.is_finite() {
        return Err(Error::Domain(format!(
            "thresholds must be finite, got ({tau_b}, {tau_e})"
        )));
    }
    let (p10_b, p01_b) = crossover_raw(
        link_b.signal_amplitude() * pair.h_b,
        link_b.noise_sigma(),
        tau_b,
    );
    let (p10_e, p01_e) = crossover_raw(
        link_e.signal_amplitude() * pair.h_e,
        link_e.noise_sigma(),
        tau_e,
    );

    let (q_star, value) = maximize_scalar(
        |q| mi_raw(q, p10_b, p01_b) - mi_raw(q, p10_e, p01_e),
        0.0,
        1.0,
        opt,
    )?;

    Ok(SecrecyResult {
        value: positive_part(value),
        q_star,
        tau_b_star: tau_b,
        tau_e_star: tau_e,
        method: SecrecyMethod::FixedThresholds,
    })
}

/// Closed-form lower bound on the instantaneous secrecy capacity:
/// `[H(ε_e) − H(ε_b)]⁺` with both links at their halfway thresholds.
pub fn instantaneous_lower_bound(
    link_b: &LinkParams,
    link_e: &LinkParams,
    pair: &FadingPairRealization,
) -> f64 {
    lower_bound_raw(link_b, link_e, pair.h_b, pair.h_e)
}

pub(crate) fn lower_bound_raw(link_b: &LinkParams, link_e: &LinkParams, h_b: f64, h_e: f64) -> f64 {
    let eps_b = halfway_eps_raw(link_b.signal_amplitude() * h_b, link_b.noise_sigma());
    let eps_e = halfway_eps_raw(link_e.signal_amplitude() * h_e, link_e.noise_sigma());
    positive_part(entropy_bits(eps_e) - entropy_bits(eps_b))
}

/// [`instantaneous_lower_bound`] packaged with the halfway thresholds and
/// the uniform input that achieve it.
pub fn instantaneous_lower_bound_result(
    link_b: &LinkParams,
    link_e: &LinkParams,
    pair: &FadingPairRealization,
) -> SecrecyResult {
    SecrecyResult {
        value: instantaneous_lower_bound(link_b, link_e, pair),
        q_star: 0.5,
        tau_b_star: 0.5 * link_b.signal_amplitude() * pair.h_b,
        tau_e_star: 0.5 * link_e.signal_amplitude() * pair.h_e,
        method: SecrecyMethod::LowerBound,
    }
}

/// The no-fading baseline: the halfway-threshold secrecy bound with
/// `h_b = h_e = 1`. Zero whenever `γ_b ≤ γ_e`.
pub fn awgn_secrecy_lower_bound(link_b: &LinkParams, link_e: &LinkParams) -> f64 {
    instantaneous_lower_bound(link_b, link_e, &FadingPairRealization::unfaded())
}

/// Outcome of [`verify_halfway_threshold`].
#[derive(Debug, Clone, Copy)]
pub struct ThresholdOptimality {
    /// Numeric argmax of the uniform-input mutual information over the
    /// threshold.
    pub tau_star: f64,
    /// Relative distance `|τ − ȳ/2| / ȳ` from the halfway point to the set
    /// of thresholds attaining the numerical maximum: zero whenever the
    /// halfway point itself reaches the maximum within evaluation noise.
    ///
    /// At high SNR the mutual information saturates to 1.0 bitwise over a
    /// wide threshold plateau, so argmax uniqueness is not representable;
    /// what remains checkable is that halfway attains the maximum.
    pub rel_deviation: f64,
    /// `f(τ*) − f(ȳ/2)`, how much the search beat the halfway point by.
    pub value_gap: f64,
    /// Analytic derivative of the uniform-input mutual information,
    /// evaluated at the halfway threshold.
    pub derivative_at_halfway: f64,
}

/// Checks that the eavesdropper's optimal threshold at uniform input is
/// the halfway setting: maximizes `I(X;Y_e | q = ½)` over the threshold
/// numerically and evaluates the analytic derivative at `ȳ_e/2`.
pub fn verify_halfway_threshold(
    link_e: &LinkParams,
    h_e: f64,
    opt: &OptimizerSpec,
) -> Result<ThresholdOptimality> {
    if !(h_e >= 0.0) || !h_e.is_finite() {
        return Err(Error::Domain(format!(
            "fading state must be finite and >= 0, got {h_e}"
        )));
    }
    let mean_on = link_e.signal_amplitude() * h_e;
    if mean_on == 0.0 {
        return Err(Error::Domain(
            "threshold optimality is undefined for a zero-SNR channel".into(),
        ));
    }
    let sigma = link_e.noise_sigma();
    let (tau_star, f_star) = best_threshold_mi(mean_on, sigma, 0.5, opt)?;
    let eps = halfway_eps_raw(mean_on, sigma);
    let f_half = mi_raw(0.5, eps, eps);
    let value_gap = f_star - f_half;
    let noise = 64.0 * f64::EPSILON * f_star.abs().max(1.0);
    let rel_deviation = if value_gap <= noise {
        0.0
    } else {
        (tau_star - 0.5 * mean_on).abs() / mean_on
    };
    Ok(ThresholdOptimality {
        tau_star,
        rel_deviation,
        value_gap,
        derivative_at_halfway: mi_derivative_wrt_threshold(link_e, h_e, 0.5 * mean_on),
    })
}

/// Analytic derivative of the uniform-input mutual information with
/// respect to the detection threshold, in bits per unit threshold:
///
/// ```text
/// ∂I/∂τ = [ln((1−δ)/(1+δ) · ε₀/(1−ε₀))·∂ε₀/∂τ
///        − ln((1−δ)/(1+δ) · (1−ε₁)/ε₁)·∂ε₁/∂τ] / (2·ln 2),   δ = ε₀ − ε₁
/// ```
///
/// Vanishes exactly at the halfway threshold, where `ε₀ = ε₁` and the
/// Gaussian factors are equal and opposite.
pub fn mi_derivative_wrt_threshold(link: &LinkParams, h: f64, tau: f64) -> f64 {
    let sigma = link.noise_sigma();
    let mean_on = link.signal_amplitude() * h;
    let x0 = tau / (SQRT_2 * sigma);
    let x1 = (mean_on - tau) / (SQRT_2 * sigma);

    let norm = 1.0 / ((2.0 * PI).sqrt() * sigma);
    let g0 = -norm * (-x0 * x0).exp();
    let g1 = norm * (-x1 * x1).exp();

    // ln((1−δ)/(1+δ)) from cancellation-free erfc sums:
    // 1−δ = (1−ε₀)+ε₁, 1+δ = ε₀+(1−ε₁).
    let one_minus_d = 0.5 * erfc_raw(-x0) + 0.5 * erfc_raw(x1);
    let one_plus_d = 0.5 * erfc_raw(x0) + 0.5 * erfc_raw(-x1);
    let ln_ratio = one_minus_d.ln() - one_plus_d.ln();

    let mut deriv = 0.0;
    if g0.abs() > NEGLIGIBLE_DENSITY {
        deriv += (ln_ratio + ln_half_erfc(x0) - ln_half_erfc(-x0)) * g0;
    }
    if g1.abs() > NEGLIGIBLE_DENSITY {
        deriv -= (ln_ratio + ln_half_erfc(-x1) - ln_half_erfc(x1)) * g1;
    }
    deriv / (2.0 * LN_2)
}
