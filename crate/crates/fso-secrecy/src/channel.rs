//! Threshold-detected OOK channel for a single receiver.
//!
//! The detector output for input `X ∈ {0, 1}` under fading state `h` is
//! `Y = S·h·X + Z` with `Z ~ N(0, σ²)`. Declaring `1` when `Y > τ` turns
//! the link into a binary asymmetric channel whose crossover probabilities
//! follow from the Gaussian tail; everything else here (mutual information,
//! capacity for a fixed fading state) is built on that pair.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::numerics::{entropy_bits, erfc_raw, maximize_scalar, OptimizerSpec};

/// Number of points in the input-probability scan for capacity.
const Q_GRID: usize = 129;

/// One receiver's deterministic link budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    signal_amplitude: f64,
    noise_sigma: f64,
}

impl LinkParams {
    /// Direct construction from the on-state signal amplitude `S ≥ 0` and
    /// the noise standard deviation `σ > 0` (same units).
    pub fn new(signal_amplitude: f64, noise_sigma: f64) -> Result<Self> {
        if !(signal_amplitude >= 0.0) || !signal_amplitude.is_finite() {
            return Err(Error::Domain(format!(
                "signal amplitude must be finite and >= 0, got {signal_amplitude}"
            )));
        }
        if !(noise_sigma > 0.0) || !noise_sigma.is_finite() {
            return Err(Error::Domain(format!(
                "noise sigma must be finite and > 0, got {noise_sigma}"
            )));
        }
        Ok(Self {
            signal_amplitude,
            noise_sigma,
        })
    }

    /// Link budget: `S = η·I_tx·e^(−δ·d)` for responsivity `η`, radiant
    /// emittance `I_tx`, attenuation coefficient `δ` and path length `d`.
    pub fn from_budget(eta: f64, i_tx: f64, delta: f64, distance: f64, sigma: f64) -> Result<Self> {
        for (name, v) in [
            ("eta", eta),
            ("i_tx", i_tx),
            ("delta", delta),
            ("distance", distance),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Self::new(eta * i_tx * (-delta * distance).exp(), sigma)
    }

    /// Unit-noise link with the given average electrical SNR `γ = S/σ`.
    pub fn from_snr(gamma: f64) -> Result<Self> {
        Self::new(gamma, 1.0)
    }

    pub fn signal_amplitude(&self) -> f64 {
        self.signal_amplitude
    }

    pub fn noise_sigma(&self) -> f64 {
        self.noise_sigma
    }

    /// Average electrical SNR `γ = S/σ`.
    pub fn snr(&self) -> f64 {
        self.signal_amplitude / self.noise_sigma
    }
}

/// Crossover probabilities of the induced binary asymmetric channel:
/// `p10 = P(decide 1 | sent 0)`, `p01 = P(decide 0 | sent 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverPair {
    p10: f64,
    p01: f64,
}

impl CrossoverPair {
    pub fn new(p10: f64, p01: f64) -> Result<Self> {
        for (name, p) in [("p10", p10), ("p01", p01)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Domain(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        Ok(Self { p10, p01 })
    }

    pub fn p10(&self) -> f64 {
        self.p10
    }

    pub fn p01(&self) -> f64 {
        self.p01
    }

    /// Swapped pair, the channel with relabeled outputs.
    pub fn swapped(&self) -> Self {
        Self {
            p10: self.p01,
            p01: self.p10,
        }
    }
}

/// Input distribution: probability `q` of transmitting symbol `1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputDistribution(f64);

impl InputDistribution {
    pub fn new(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::Domain(format!("q must lie in [0, 1], got {q}")));
        }
        Ok(Self(q))
    }

    pub fn q(&self) -> f64 {
        self.0
    }

    pub fn uniform() -> Self {
        Self(0.5)
    }
}

/// Result of the capacity search for a fixed fading state.
#[derive(Debug, Clone, Copy)]
pub struct CapacityPoint {
    /// Capacity in bits per channel use.
    pub capacity: f64,
    /// Maximizing input probability.
    pub q_star: f64,
    /// Maximizing detection threshold.
    pub tau_star: f64,
}

pub(crate) fn crossover_raw(mean_on: f64, sigma: f64, tau: f64) -> (f64, f64) {
    let p10 = 0.5 * erfc_raw(tau / (SQRT_2 * sigma));
    let p01 = 0.5 * erfc_raw((mean_on - tau) / (SQRT_2 * sigma));
    (p10, p01)
}

pub(crate) fn halfway_eps_raw(mean_on: f64, sigma: f64) -> f64 {
    0.5 * erfc_raw((0.5 * mean_on) / (SQRT_2 * sigma))
}

/// Crossover probabilities for detection threshold `tau` under fading
/// state `h`; `p10 = ½·erfc(τ/(√2σ))`, `p01 = ½·erfc((S·h − τ)/(√2σ))`.
///
/// Negative thresholds are permitted; the capacity optimizer probes them.
pub fn crossover_given_threshold(link: &LinkParams, h: f64, tau: f64) -> Result<CrossoverPair> {
    if !(h >= 0.0) || !h.is_finite() {
        return Err(Error::Domain(format!(
            "fading state must be finite and >= 0, got {h}"
        )));
    }
    if !tau.is_finite() {
        return Err(Error::Domain(format!(
            "threshold must be finite, got {tau}"
        )));
    }
    let (p10, p01) = crossover_raw(link.signal_amplitude * h, link.noise_sigma, tau);
    Ok(CrossoverPair { p10, p01 })
}

/// Crossover probability of the symmetric channel obtained by placing the
/// threshold halfway between the expected `0` and `1` outputs:
/// `ε = ½·erfc(γ·h/(2√2))`.
pub fn halfway_crossover(link: &LinkParams, h: f64) -> Result<f64> {
    if !(h >= 0.0) || !h.is_finite() {
        return Err(Error::Domain(format!(
            "fading state must be finite and >= 0, got {h}"
        )));
    }
    Ok(halfway_eps_raw(link.signal_amplitude * h, link.noise_sigma))
}

/// Mutual information of the binary asymmetric channel in bits:
/// `I = H(q(1−p01) + (1−q)·p10) − (1−q)·H(p10) − q·H(p01)`.
pub fn mutual_information(q: InputDistribution, xo: &CrossoverPair) -> f64 {
    mi_raw(q.0, xo.p10, xo.p01)
}

pub(crate) fn mi_raw(q: f64, p10: f64, p01: f64) -> f64 {
    let a = (q * (1.0 - p01) + (1.0 - q) * p10).clamp(0.0, 1.0);
    let i = entropy_bits(a) - (1.0 - q) * entropy_bits(p10) - q * entropy_bits(p01);
    i.clamp(0.0, 1.0)
}

/// Best mutual information over the threshold for a fixed input
/// probability `q`. Returns `(tau_star, value)`.
pub(crate) fn best_threshold_mi(
    mean_on: f64,
    sigma: f64,
    q: f64,
    opt: &OptimizerSpec,
) -> Result<(f64, f64)> {
    if mean_on == 0.0 {
        // Output independent of input: I = 0 for every threshold.
        return Ok((0.0, 0.0));
    }
    maximize_scalar(
        |tau| {
            let (p10, p01) = crossover_raw(mean_on, sigma, tau);
            mi_raw(q, p10, p01)
        },
        -mean_on,
        2.0 * mean_on,
        opt,
    )
}

/// Two-stage scan over the input probability: a uniform grid on [0, 1]
/// refined once around the best point. `eval` returns the objective value
/// and an arbitrary payload (typically the maximizing thresholds); the
/// overall best `(value, q, payload)` triple is returned.
pub(crate) fn refine_q_scan<T, F>(mut eval: F) -> Result<(f64, f64, T)>
where
    T: Copy,
    F: FnMut(f64) -> Result<(f64, T)>,
{
    fn stage<T: Copy, F: FnMut(f64) -> Result<(f64, T)>>(
        eval: &mut F,
        lo: f64,
        hi: f64,
        best: &mut Option<(f64, f64, T)>,
    ) -> Result<f64> {
        let mut grid_best_q = lo;
        let mut grid_best_val = f64::NEG_INFINITY;
        for i in 0..Q_GRID {
            let q = lo + (hi - lo) * i as f64 / (Q_GRID - 1) as f64;
            let (val, payload) = eval(q)?;
            if val > grid_best_val {
                grid_best_val = val;
                grid_best_q = q;
            }
            if best.as_ref().is_none_or(|(bv, _, _)| val > *bv) {
                *best = Some((val, q, payload));
            }
        }
        Ok(grid_best_q)
    }

    let mut best = None;
    let coarse_q = stage(&mut eval, 0.0, 1.0, &mut best)?;
    let step = 1.0 / (Q_GRID - 1) as f64;
    stage(
        &mut eval,
        (coarse_q - step).max(0.0),
        (coarse_q + step).min(1.0),
        &mut best,
    )?;
    Ok(best.expect("scan evaluated at least one point"))
}

/// Channel capacity for a fixed fading state: joint maximization of the
/// mutual information over the input probability and the threshold.
///
/// The input probability is scanned on a uniform grid which is refined once
/// around the best point; each scan point runs a bracketed threshold
/// search on `τ ∈ [−S·h, 2·S·h]`. The uniform-input/halfway-threshold
/// point is always included, so the result is never below that rate.
pub fn channel_capacity_fixed_fading(
    link: &LinkParams,
    h: f64,
    opt: &OptimizerSpec,
) -> Result<CapacityPoint> {
    if !(h >= 0.0) || !h.is_finite() {
        return Err(Error::Domain(format!(
            "fading state must be finite and >= 0, got {h}"
        )));
    }
    opt.validate()?;

    let mean_on = link.signal_amplitude * h;
    if mean_on == 0.0 {
        return Ok(CapacityPoint {
            capacity: 0.0,
            q_star: 0.5,
            tau_star: 0.0,
        });
    }

    let sigma = link.noise_sigma;
    let (value, q_star, tau_star) =
        refine_q_scan(|q| best_threshold_mi(mean_on, sigma, q, opt).map(|(tau, v)| (v, tau)))?;

    let eps = halfway_eps_raw(mean_on, sigma);
    let floor = mi_raw(0.5, eps, eps);
    if floor > value {
        Ok(CapacityPoint {
            capacity: floor,
            q_star: 0.5,
            tau_star: 0.5 * mean_on,
        })
    } else {
        Ok(CapacityPoint {
            capacity: value,
            q_star,
            tau_star,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn budget_lossless_path() {
        let l = LinkParams::from_budget(1.0, 1.0, 0.0, 123.0, 1.0).unwrap();
        assert_eq!(l.signal_amplitude(), 1.0);
        assert_eq!(l.snr(), 1.0);
    }

    #[test]
    fn budget_product_identity() {
        let l = LinkParams::from_budget(0.5, 2.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(l.signal_amplitude(), 1.0);
    }

    #[test]
    fn budget_attenuated_kilometer() {
        // mpmath: e^-1, e^-1/0.5
        let l = LinkParams::from_budget(1.0, 1.0, 1e-3, 1000.0, 0.5).unwrap();
        assert!(close(l.signal_amplitude(), 0.36787944117144233, 1e-16));
        assert!(close(l.snr(), 0.7357588823428847, 1e-15));
    }

    #[test]
    fn budget_rejects_bad_sigma() {
        assert!(LinkParams::from_budget(1.0, 1.0, 0.0, 1.0, 0.0).is_err());
        assert!(LinkParams::from_budget(1.0, 1.0, 0.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn crossover_zero_threshold() {
        let l = LinkParams::new(2.0, 1.0).unwrap();
        let xo = crossover_given_threshold(&l, 1.0, 0.0).unwrap();
        assert_eq!(xo.p10(), 0.5);
    }

    #[test]
    fn crossover_halfway_is_symmetric() {
        // ½·erfc(1/√2) = Q(1); mpmath, 50 digits.
        let l = LinkParams::new(2.0, 1.0).unwrap();
        let xo = crossover_given_threshold(&l, 1.0, 1.0).unwrap();
        assert_eq!(xo.p10(), xo.p01());
        assert!(close(xo.p10(), 0.15865525393145707, 1e-16));
        let eps = halfway_crossover(&l, 1.0).unwrap();
        assert_eq!(eps, xo.p10());
    }

    #[test]
    fn crossover_monotone_in_threshold() {
        let l = LinkParams::new(1.5, 0.7).unwrap();
        let mut prev = crossover_given_threshold(&l, 0.8, -2.0).unwrap();
        for i in 1..200 {
            let tau = -2.0 + 5.0 * i as f64 / 199.0;
            let xo = crossover_given_threshold(&l, 0.8, tau).unwrap();
            assert!(xo.p10() <= prev.p10(), "p10 must decrease in tau");
            assert!(xo.p01() >= prev.p01(), "p01 must increase in tau");
            prev = xo;
        }
    }

    #[test]
    fn halfway_zero_signal_is_coin_flip() {
        let l = LinkParams::new(3.0, 1.0).unwrap();
        assert_eq!(halfway_crossover(&l, 0.0).unwrap(), 0.5);
    }

    #[test]
    fn halfway_noiseless_limit() {
        let l = LinkParams::new(1e6, 1.0).unwrap();
        assert_eq!(halfway_crossover(&l, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn halfway_at_zero_db() {
        // Q(0.5); mpmath, 50 digits.
        let l = LinkParams::new(1.0, 1.0).unwrap();
        assert!(close(
            halfway_crossover(&l, 1.0).unwrap(),
            0.3085375387259869,
            1e-16
        ));
    }

    #[test]
    fn halfway_strictly_decreasing_in_snr() {
        let mut prev = 0.5;
        for i in 1..500 {
            let gamma = 10.0 * i as f64 / 499.0;
            let l = LinkParams::from_snr(gamma).unwrap();
            let eps = halfway_crossover(&l, 1.0).unwrap();
            assert!(eps < prev, "eps must strictly decrease, gamma={gamma}");
            prev = eps;
        }
    }

    #[test]
    fn mi_useless_channel_is_zero() {
        let xo = CrossoverPair::new(0.5, 0.5).unwrap();
        for i in 0..=10 {
            let q = InputDistribution::new(i as f64 / 10.0).unwrap();
            assert!(mutual_information(q, &xo) < 1e-15);
        }
    }

    #[test]
    fn mi_noiseless_channel_gives_input_entropy() {
        // H(0.3); mpmath, 50 digits.
        let xo = CrossoverPair::new(0.0, 0.0).unwrap();
        let q = InputDistribution::new(0.3).unwrap();
        assert!(close(mutual_information(q, &xo), 0.8812908992306926, 1e-15));
    }

    #[test]
    fn mi_symmetric_channel_uniform_input() {
        for eps in [0.01, 0.1, 0.3, 0.45] {
            let xo = CrossoverPair::new(eps, eps).unwrap();
            let i = mutual_information(InputDistribution::uniform(), &xo);
            let expect = 1.0 - entropy_bits(eps);
            assert!(close(i, expect, 1e-15), "eps={eps}: {i} vs {expect}");
        }
    }

    #[test]
    fn mi_uniform_input_matches_entropy_difference_form() {
        // At q = ½ the generic expression must reduce to
        // H(½ + ½(p10−p01)) − ½[H(p10) + H(p01)].
        let mut rng_state = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            (rng_state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..10_000 {
            let p10 = next();
            let p01 = next();
            let lhs = mi_raw(0.5, p10, p01);
            let rhs = (entropy_bits((0.5 + 0.5 * (p10 - p01)).clamp(0.0, 1.0))
                - 0.5 * (entropy_bits(p10) + entropy_bits(p01)))
            .clamp(0.0, 1.0);
            assert!(
                close(lhs, rhs, 2e-15),
                "p10={p10} p01={p01}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn capacity_zero_fading() {
        let l = LinkParams::new(2.0, 1.0).unwrap();
        let c = channel_capacity_fixed_fading(&l, 0.0, &OptimizerSpec::default()).unwrap();
        assert_eq!(c.capacity, 0.0);
    }

    #[test]
    fn capacity_matches_brute_force_at_moderate_snr() {
        let l = LinkParams::new(2.0, 1.0).unwrap();
        let c = channel_capacity_fixed_fading(&l, 1.0, &OptimizerSpec::default()).unwrap();

        // Halfway/uniform floor; mpmath: 1 − H(Q(1)).
        assert!(
            c.capacity >= 0.3689172325944581 - 1e-12,
            "capacity = {}",
            c.capacity
        );

        // 512×512 brute force over (q, τ).
        let mut brute = f64::NEG_INFINITY;
        for i in 0..512 {
            let q = i as f64 / 511.0;
            for j in 0..512 {
                let tau = -2.0 + 6.0 * j as f64 / 511.0;
                let (p10, p01) = crossover_raw(2.0, 1.0, tau);
                brute = brute.max(mi_raw(q, p10, p01));
            }
        }
        assert!(c.capacity >= brute - 1e-9, "optimizer below brute force");
        assert!(
            close(c.capacity, brute, 1e-4),
            "capacity {} vs brute {brute}",
            c.capacity
        );
    }

    #[test]
    fn capacity_noiseless_limit() {
        // 40 dB: γ·h = 100.
        let l = LinkParams::from_snr(100.0).unwrap();
        let c = channel_capacity_fixed_fading(&l, 1.0, &OptimizerSpec::default()).unwrap();
        assert!(
            c.capacity > 1.0 - 1e-6 && c.capacity <= 1.0,
            "capacity = {}",
            c.capacity
        );
    }

    #[test]
    fn capacity_nondecreasing_in_fading() {
        let l = LinkParams::new(1.0, 1.0).unwrap();
        let opt = OptimizerSpec::default();
        let mut prev = 0.0;
        for h in [0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let c = channel_capacity_fixed_fading(&l, h, &opt).unwrap();
            assert!(c.capacity >= prev - 1e-7, "capacity dropped at h={h}");
            prev = c.capacity;
        }
    }

    #[test]
    fn rejects_invalid_probabilities() {
        assert!(CrossoverPair::new(-0.1, 0.5).is_err());
        assert!(CrossoverPair::new(0.1, 1.5).is_err());
        assert!(InputDistribution::new(1.0 + 1e-9).is_err());
    }

    proptest! {
        #[test]
        fn mi_relabeling_symmetry(q in 0.0f64..=1.0, p10 in 0.0f64..=1.0, p01 in 0.0f64..=1.0) {
            let xo = CrossoverPair::new(p10, p01).unwrap();
            let a = mutual_information(InputDistribution::new(q).unwrap(), &xo);
            let b = mutual_information(InputDistribution::new(1.0 - q).unwrap(), &xo.swapped());
            prop_assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }

        #[test]
        fn mi_in_unit_range(q in 0.0f64..=1.0, p10 in 0.0f64..=1.0, p01 in 0.0f64..=1.0) {
            let i = mi_raw(q, p10, p01);
            prop_assert!((0.0..=1.0).contains(&i));
        }
    }
}
