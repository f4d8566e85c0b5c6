//! Log-normal turbulence statistics.
//!
//! Irradiance fading is modelled as `H = exp(T)` with `T ~ N(μ_T, σ_T²)`;
//! the mean-normalized construction `μ_T = -σ_T²/2` gives `E[H] = 1`. A
//! pair of receivers shares a bivariate normal `(T_b, T_e)` with log-domain
//! correlation `ρ`, sampled by the exact triangular factorization of the
//! 2×2 covariance.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::rng::mix_seed;

/// Samples per generator chunk; fixed so parallel sampling is reproducible
/// at any thread count.
pub(crate) const SAMPLE_CHUNK: usize = 8192;

/// Single-link log-normal turbulence model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogNormalFading {
    sigma_t2: f64,
    mu_t: f64,
}

impl LogNormalFading {
    /// Mean-normalized model with Rytov variance `σ_T² > 0`; the log-domain
    /// mean is pinned to `μ_T = -σ_T²/2` so that `E[H] = 1`.
    pub fn mean_normalized(sigma_t2: f64) -> Result<Self> {
        if !(sigma_t2 > 0.0) || !sigma_t2.is_finite() {
            return Err(Error::Domain(format!(
                "Rytov variance must be finite and > 0, got {sigma_t2}"
            )));
        }
        Ok(Self {
            sigma_t2,
            mu_t: -sigma_t2 / 2.0,
        })
    }

    pub fn sigma_t2(&self) -> f64 {
        self.sigma_t2
    }

    pub fn sigma_t(&self) -> f64 {
        self.sigma_t2.sqrt()
    }

    pub fn mu_t(&self) -> f64 {
        self.mu_t
    }

    /// Marginal density
    /// `f(h) = exp(-(ln h - μ_T)²/(2σ_T²)) / (√(2π σ_T²)·h)` for `h > 0`.
    pub fn pdf(&self, h: f64) -> Result<f64> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Domain(format!(
                "irradiance must be finite and > 0, got {h}"
            )));
        }
        Ok(self.pdf_raw(h))
    }

    pub(crate) fn pdf_raw(&self, h: f64) -> f64 {
        debug_assert!(h > 0.0);
        let z = (h.ln() - self.mu_t) / self.sigma_t();
        (-0.5 * z * z).exp() / ((2.0 * PI * self.sigma_t2).sqrt() * h)
    }

    /// Irradiance below which probability mass `p` lies.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!(
                "quantile requires p in (0, 1), got {p}"
            )));
        }
        let z = Normal::standard().inverse_cdf(p);
        Ok((self.mu_t + self.sigma_t() * z).exp())
    }
}

/// Joint Bob/Eve turbulence model with log-domain correlation `ρ ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatedFadingPair {
    bob: LogNormalFading,
    eve: LogNormalFading,
    rho: f64,
}

impl CorrelatedFadingPair {
    pub fn new(bob: LogNormalFading, eve: LogNormalFading, rho: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::Domain(format!(
                "log-domain correlation must lie in [0, 1); got {rho} \
                 (rho = 1 makes the joint density singular)"
            )));
        }
        Ok(Self { bob, eve, rho })
    }

    /// Construction from the irradiance-domain correlation `ρ_H`.
    pub fn from_irradiance_correlation(
        bob: LogNormalFading,
        eve: LogNormalFading,
        rho_h: f64,
    ) -> Result<Self> {
        let rho = rho_from_rho_h(rho_h, bob.sigma_t2, eve.sigma_t2)?;
        Self::new(bob, eve, rho)
    }

    pub fn bob(&self) -> &LogNormalFading {
        &self.bob
    }

    pub fn eve(&self) -> &LogNormalFading {
        &self.eve
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Irradiance-domain correlation implied by `ρ`.
    pub fn rho_h(&self) -> Result<f64> {
        rho_h_from_rho(self.rho, self.bob.sigma_t2, self.eve.sigma_t2)
    }

    /// Bivariate density of `(H_b, H_e)`; at `ρ = 0` it factorizes into the
    /// product of the marginals.
    pub fn joint_pdf(&self, h_b: f64, h_e: f64) -> Result<f64> {
        if !(h_b > 0.0) || !h_b.is_finite() || !(h_e > 0.0) || !h_e.is_finite() {
            return Err(Error::Domain(format!(
                "irradiances must be finite and > 0, got ({h_b}, {h_e})"
            )));
        }
        Ok(self.joint_pdf_raw(h_b, h_e))
    }

    pub(crate) fn joint_pdf_raw(&self, h_b: f64, h_e: f64) -> f64 {
        debug_assert!(h_b > 0.0 && h_e > 0.0);
        let sb = self.bob.sigma_t();
        let se = self.eve.sigma_t();
        let a = (h_b.ln() - self.bob.mu_t) / sb;
        let b = (h_e.ln() - self.eve.mu_t) / se;
        let one_m_r2 = 1.0 - self.rho * self.rho;
        let quad = (a * a - 2.0 * self.rho * a * b + b * b) / (2.0 * one_m_r2);
        (-quad).exp() / (2.0 * PI * sb * se * one_m_r2.sqrt() * h_b * h_e)
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> (f64, f64) {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let t_b = self.bob.mu_t + self.bob.sigma_t() * z1;
        let t_e = self.eve.mu_t
            + self.eve.sigma_t() * (self.rho * z1 + (1.0 - self.rho * self.rho).sqrt() * z2);
        (t_b.exp(), t_e.exp())
    }

    pub(crate) fn fill_chunk(&self, seed: u64, chunk_idx: usize, out: &mut [(f64, f64)]) {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, chunk_idx as u64, 0xFAD));
        for slot in out.iter_mut() {
            *slot = self.draw(&mut rng);
        }
    }

    /// Draws `n` correlated irradiance pairs. Deterministic in the seed; the
    /// returned sequence does not depend on the number of worker threads.
    pub fn sample_pairs(&self, rng_seed: u64, n: usize) -> Result<Vec<(f64, f64)>> {
        if n < 1 {
            return Err(Error::Domain("sample count must be at least 1".into()));
        }
        let mut out = vec![(0.0, 0.0); n];
        out.par_chunks_mut(SAMPLE_CHUNK)
            .enumerate()
            .for_each(|(c, slice)| self.fill_chunk(rng_seed, c, slice));
        Ok(out)
    }
}

/// Horizontal-path turbulence budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurbulenceBudget {
    /// Refractive-index structure constant, m^(-2/3).
    cn2: f64,
    /// Optical wavelength, m.
    wavelength: f64,
    /// Path length, m.
    path_length: f64,
}

impl TurbulenceBudget {
    pub fn new(cn2: f64, wavelength: f64, path_length: f64) -> Result<Self> {
        for (name, v) in [
            ("cn2", cn2),
            ("wavelength", wavelength),
            ("path_length", path_length),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        Ok(Self {
            cn2,
            wavelength,
            path_length,
        })
    }

    /// Rytov variance `σ_T² = 1.23·C_n²·k^(7/6)·L^(11/6)` with `k = 2π/λ`.
    pub fn rytov_variance(&self) -> f64 {
        let k = 2.0 * PI / self.wavelength;
        1.23 * self.cn2 * k.powf(7.0 / 6.0) * self.path_length.powf(11.0 / 6.0)
    }

    /// Path length that produces the given Rytov variance at this `C_n²`
    /// and wavelength.
    pub fn path_length_for_rytov(&self, sigma_t2: f64) -> f64 {
        let k = 2.0 * PI / self.wavelength;
        (sigma_t2 / (1.23 * self.cn2 * k.powf(7.0 / 6.0))).powf(6.0 / 11.0)
    }
}

/// Log-domain correlation from the irradiance-domain correlation:
/// `ρ = ln(ρ_H·√((e^(σ_Tb²)−1)(e^(σ_Te²)−1)) + 1) / (σ_Tb·σ_Te)`.
///
/// The result must land in `[0, 1)`; `ρ_H = 1` with equal unit variances
/// maps to exactly 1 and is rejected.
pub fn rho_from_rho_h(rho_h: f64, sigma_tb2: f64, sigma_te2: f64) -> Result<f64> {
    let (sb, se) = correlation_sigmas(sigma_tb2, sigma_te2)?;
    let arg = rho_h * ((sigma_tb2.exp() - 1.0) * (sigma_te2.exp() - 1.0)).sqrt() + 1.0;
    if !(arg > 0.0) {
        return Err(Error::Domain(format!(
            "irradiance correlation {rho_h} drives the log argument to {arg} <= 0"
        )));
    }
    let rho = arg.ln() / (sb * se);
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::Domain(format!(
            "converted correlation rho = {rho} falls outside [0, 1); \
             the joint log-normal model requires 0 <= rho < 1"
        )));
    }
    Ok(rho)
}

/// Inverse of [`rho_from_rho_h`]:
/// `ρ_H = (e^(ρ·σ_Tb·σ_Te) − 1) / √((e^(σ_Tb²)−1)(e^(σ_Te²)−1))`.
pub fn rho_h_from_rho(rho: f64, sigma_tb2: f64, sigma_te2: f64) -> Result<f64> {
    let (sb, se) = correlation_sigmas(sigma_tb2, sigma_te2)?;
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::Domain(format!("rho must lie in [0, 1), got {rho}")));
    }
    Ok(((rho * sb * se).exp() - 1.0) / ((sigma_tb2.exp() - 1.0) * (sigma_te2.exp() - 1.0)).sqrt())
}

fn correlation_sigmas(sigma_tb2: f64, sigma_te2: f64) -> Result<(f64, f64)> {
    for (name, v) in [("sigma_tb2", sigma_tb2), ("sigma_te2", sigma_te2)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Domain(format!(
                "{name} must be finite and > 0, got {v}"
            )));
        }
    }
    Ok((sigma_tb2.sqrt(), sigma_te2.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_2d, QuadratureSpec, Rect};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Composite Simpson in log-irradiance coordinates.
    fn simpson_log_space<F: Fn(f64) -> f64>(f: F, u_lo: f64, u_hi: f64, n: usize) -> f64 {
        let n = n + n % 2;
        let h = (u_hi - u_lo) / n as f64;
        let g = |u: f64| f(u.exp()) * u.exp();
        let mut s = g(u_lo) + g(u_hi);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * g(u_lo + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn pdf_at_log_mean_point() {
        // e^0.5/√(2π); mpmath, 50 digits.
        let m = LogNormalFading::mean_normalized(1.0).unwrap();
        let h = (-0.5f64).exp();
        assert!(close(m.pdf(h).unwrap(), 0.6577446234794569, 1e-15));
    }

    #[test]
    fn pdf_normalizes_and_has_unit_mean() {
        for sigma_t2 in [0.1, 0.5, 1.0, 2.0] {
            let m = LogNormalFading::mean_normalized(sigma_t2).unwrap();
            let mass = simpson_log_space(|h| m.pdf_raw(h), -20.0, 12.0, 20_000);
            assert!(close(mass, 1.0, 1e-8), "sigma_t2={sigma_t2}: mass={mass}");
            let mean = simpson_log_space(|h| h * m.pdf_raw(h), -20.0, 12.0, 20_000);
            assert!(close(mean, 1.0, 1e-8), "sigma_t2={sigma_t2}: mean={mean}");
        }
    }

    #[test]
    fn pdf_rejects_nonpositive_irradiance() {
        let m = LogNormalFading::mean_normalized(1.0).unwrap();
        assert!(m.pdf(0.0).is_err());
        assert!(m.pdf(-1.0).is_err());
        assert!(LogNormalFading::mean_normalized(0.0).is_err());
    }

    #[test]
    fn joint_pdf_uncorrelated_point() {
        // (pdf(1))²; mpmath, 50 digits.
        let m = LogNormalFading::mean_normalized(1.0).unwrap();
        let pair = CorrelatedFadingPair::new(m, m, 0.0).unwrap();
        assert!(close(
            pair.joint_pdf(1.0, 1.0).unwrap(),
            0.12394999430965297,
            1e-15
        ));
    }

    #[test]
    fn joint_pdf_factorizes_at_zero_correlation() {
        let b = LogNormalFading::mean_normalized(0.7).unwrap();
        let e = LogNormalFading::mean_normalized(1.3).unwrap();
        let pair = CorrelatedFadingPair::new(b, e, 0.0).unwrap();
        let mut state = 12345u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..10_000 {
            let h_b = (next() * 6.0 - 4.0f64).exp();
            let h_e = (next() * 6.0 - 4.0f64).exp();
            let joint = pair.joint_pdf_raw(h_b, h_e);
            let product = b.pdf_raw(h_b) * e.pdf_raw(h_e);
            let rel = ((joint - product) / product).abs();
            assert!(rel < 1e-12, "h=({h_b},{h_e}): rel={rel}");
        }
    }

    #[test]
    fn joint_pdf_normalizes_over_truncated_box() {
        let m = LogNormalFading::mean_normalized(1.0).unwrap();
        let pair = CorrelatedFadingPair::new(m, m, 0.5).unwrap();
        let spec = QuadratureSpec::default();
        let q = spec.truncation_quantile;
        let rect = Rect::new(
            m.quantile(q).unwrap(),
            m.quantile(1.0 - q).unwrap(),
            m.quantile(q).unwrap(),
            m.quantile(1.0 - q).unwrap(),
        )
        .unwrap();
        let out = integrate_2d(|h_b, h_e| pair.joint_pdf_raw(h_b, h_e), rect, &spec).unwrap();
        assert!(close(out.value, 1.0, 1e-6), "mass = {}", out.value);
    }

    #[test]
    fn joint_pdf_marginalizes_to_the_marginal() {
        let b = LogNormalFading::mean_normalized(1.0).unwrap();
        let e = LogNormalFading::mean_normalized(0.5).unwrap();
        let pair = CorrelatedFadingPair::new(b, e, 0.6).unwrap();
        for i in 0..50 {
            // log-spaced h_b across the bulk of the marginal
            let h_b = (-3.0 + 5.0 * i as f64 / 49.0).exp();
            let marginalized =
                simpson_log_space(|h_e| pair.joint_pdf_raw(h_b, h_e), -16.0, 10.0, 8_000);
            let expect = b.pdf_raw(h_b);
            assert!(
                (marginalized - expect).abs() < 1e-6,
                "h_b={h_b}: {marginalized} vs {expect}"
            );
        }
    }

    #[test]
    fn correlation_conversion_fixed_points() {
        assert_eq!(rho_from_rho_h(0.0, 1.0, 1.0).unwrap(), 0.0);
        // ln(0.5(e−1)+1); mpmath, 50 digits.
        assert!(close(
            rho_from_rho_h(0.5, 1.0, 1.0).unwrap(),
            0.6201145069582775,
            1e-14
        ));
        // rho_H = 1 with unit variances maps to exactly 1 and is rejected.
        let err = rho_from_rho_h(1.0, 1.0, 1.0);
        assert!(err.is_err(), "rho = 1 must be rejected: {err:?}");
    }

    #[test]
    fn correlation_conversion_round_trips() {
        for i in 0..=95 {
            let rho_h = i as f64 / 100.0;
            for (s2b, s2e) in [(1.0, 1.0), (0.3, 0.8)] {
                let rho = rho_from_rho_h(rho_h, s2b, s2e).unwrap();
                let back = rho_h_from_rho(rho, s2b, s2e).unwrap();
                assert!(close(back, rho_h, 1e-12), "rho_h={rho_h}: back={back}");
            }
        }
    }

    #[test]
    fn correlation_conversion_rejects_unattainable_irradiance_correlation() {
        // With strongly unequal variances the comonotonic bound on rho_H is
        // below 1; values past it imply rho > 1 and must be rejected.
        assert!(rho_from_rho_h(0.85, 1.5, 0.4).is_ok());
        assert!(rho_from_rho_h(0.95, 1.5, 0.4).is_err());
    }

    #[test]
    fn correlation_conversion_rejects_log_domain_violations() {
        // Strongly negative rho_H drives the log argument nonpositive.
        assert!(rho_from_rho_h(-1.0, 2.0, 2.0).is_err());
        // Mildly negative rho_H yields rho < 0, outside the supported range.
        assert!(rho_from_rho_h(-0.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn rytov_variance_reference_lengths() {
        // mpmath at λ = 1.5 μm, C_n² = 1e-15 m^(-2/3).
        let cases = [
            (2400.0, 0.10297435936630940),
            (5700.0, 0.50285841755308436),
            (8300.0, 1.0015016250334154),
        ];
        for (length, expect) in cases {
            let b = TurbulenceBudget::new(1e-15, 1.5e-6, length).unwrap();
            let got = b.rytov_variance();
            assert!(
                ((got - expect) / expect).abs() < 1e-12,
                "L={length}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn rytov_length_power_law() {
        let b1 = TurbulenceBudget::new(1e-15, 1.5e-6, 4000.0).unwrap();
        let b2 = TurbulenceBudget::new(1e-15, 1.5e-6, 8000.0).unwrap();
        let ratio = b2.rytov_variance() / b1.rytov_variance();
        // 2^(11/6); mpmath, 50 digits.
        assert!(close(ratio, 3.5635948725613572, 1e-12));
    }

    #[test]
    fn rytov_recovers_rounded_table_lengths() {
        // Inverting each target variance lands within 2% of the printed
        // 2-significant-figure path length.
        let b = TurbulenceBudget::new(1e-15, 1.5e-6, 1.0).unwrap();
        for (sigma_t2, printed) in [(0.1, 2400.0), (0.5, 5700.0), (1.0, 8300.0)] {
            let implied = b.path_length_for_rytov(sigma_t2);
            let rel = (implied - printed).abs() / printed;
            assert!(
                rel < 0.02,
                "sigma_t2={sigma_t2}: implied L={implied}, rel={rel}"
            );
        }
    }

    #[test]
    fn sampler_matches_first_and_second_moments() {
        let m = LogNormalFading::mean_normalized(1.0).unwrap();
        let rho = rho_from_rho_h(0.5, 1.0, 1.0).unwrap();
        let pair = CorrelatedFadingPair::new(m, m, rho).unwrap();
        let n = 10_000_000usize;
        let samples = pair.sample_pairs(7, n).unwrap();

        let mean_b = samples.iter().map(|s| s.0).sum::<f64>() / n as f64;
        let mean_e = samples.iter().map(|s| s.1).sum::<f64>() / n as f64;
        // sd of H is √(e−1)·… = 1.3108; 4 standard errors at n = 1e7.
        let four_se = 4.0 * 1.3108 / (n as f64).sqrt();
        assert!(close(mean_b, 1.0, four_se), "mean_b = {mean_b}");
        assert!(close(mean_e, 1.0, four_se), "mean_e = {mean_e}");

        // Pearson correlation of (T_b, T_e) returns rho.
        let (mut sb, mut se, mut sbb, mut see, mut sbe) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (h_b, h_e) in &samples {
            let (t_b, t_e) = (h_b.ln(), h_e.ln());
            sb += t_b;
            se += t_e;
            sbb += t_b * t_b;
            see += t_e * t_e;
            sbe += t_b * t_e;
        }
        let nf = n as f64;
        let cov = sbe / nf - (sb / nf) * (se / nf);
        let var_b = sbb / nf - (sb / nf) * (sb / nf);
        let var_e = see / nf - (se / nf) * (se / nf);
        let r_t = cov / (var_b * var_e).sqrt();
        let four_se_r = 4.0 * (1.0 - rho * rho) / (nf).sqrt();
        assert!(close(r_t, rho, four_se_r), "r_T = {r_t} vs rho = {rho}");

        // Pearson correlation of (H_b, H_e) closes the loop with the
        // irradiance-domain conversion: expect 0.5.
        let (mut shb, mut she, mut shh, mut shb2, mut she2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (h_b, h_e) in &samples {
            shb += h_b;
            she += h_e;
            shh += h_b * h_e;
            shb2 += h_b * h_b;
            she2 += h_e * h_e;
        }
        let cov_h = shh / nf - (shb / nf) * (she / nf);
        let r_h = cov_h
            / ((shb2 / nf - (shb / nf) * (shb / nf)) * (she2 / nf - (she / nf) * (she / nf)))
                .sqrt();
        // Heavy-tailed; allow a generous band (chunked SE is checked in the
        // verification suite).
        assert!(close(r_h, 0.5, 0.02), "r_H = {r_h}");
    }

    #[test]
    fn sampler_is_deterministic_and_thread_invariant() {
        let m = LogNormalFading::mean_normalized(0.8).unwrap();
        let pair = CorrelatedFadingPair::new(m, m, 0.3).unwrap();

        let a = pair.sample_pairs(99, 50_000).unwrap();
        let b = pair.sample_pairs(99, 50_000).unwrap();
        assert_eq!(a, b);

        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let c = single.install(|| pair.sample_pairs(99, 50_000).unwrap());
        assert_eq!(a, c, "sample sequence must not depend on thread count");

        let quad = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let d = quad.install(|| pair.sample_pairs(99, 50_000).unwrap());
        assert_eq!(a, d);
    }

    #[test]
    fn sampler_rejects_empty_request() {
        let m = LogNormalFading::mean_normalized(1.0).unwrap();
        let pair = CorrelatedFadingPair::new(m, m, 0.0).unwrap();
        assert!(pair.sample_pairs(1, 0).is_err());
    }

    #[test]
    fn pair_rejects_unit_correlation() {
        let m = LogNormalFading::mean_normalized(1.0).unwrap();
        assert!(CorrelatedFadingPair::new(m, m, 1.0).is_err());
        assert!(CorrelatedFadingPair::new(m, m, -0.2).is_err());
        assert!(CorrelatedFadingPair::new(m, m, 0.999).is_ok());
    }
}
