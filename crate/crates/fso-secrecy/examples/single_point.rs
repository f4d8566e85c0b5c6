//! Every estimator evaluated for one scenario, including the exact
//! (nested-optimization) Monte Carlo average.
//!
//! ```bash
//! cargo run --release --example single_point
//! ```

use fso_secrecy::average::{
    average_secrecy_capacity_exact, average_secrecy_lower_bound, monte_carlo_lower_bound,
    ScenarioConfig,
};
use fso_secrecy::channel::LinkParams;
use fso_secrecy::fading::{CorrelatedFadingPair, LogNormalFading};
use fso_secrecy::numerics::{OptimizerSpec, QuadratureSpec};
use fso_secrecy::secrecy::awgn_secrecy_lower_bound;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // gamma_b = 10 dB, gamma_e = 0 dB, unit Rytov variances, uncorrelated.
    let unit = LogNormalFading::mean_normalized(1.0)?;
    let cfg = ScenarioConfig {
        link_b: LinkParams::from_snr(10.0)?,
        link_e: LinkParams::from_snr(1.0)?,
        fading: CorrelatedFadingPair::new(unit, unit, 0.0)?,
        quad: QuadratureSpec::default(),
        opt: OptimizerSpec::default(),
    };

    println!("gamma_b = 10 dB, gamma_e = 0 dB, sigma_T2 = 1, rho = 0\n");

    let quad = average_secrecy_lower_bound(&cfg)?;
    println!(
        "lower bound, quadrature   {:.9} bits  (err <= {:.2e}, {} subdivisions)",
        quad.value, quad.err_est, quad.samples_or_subdivisions
    );

    let mc = monte_carlo_lower_bound(&cfg, 1_000_000, 42)?;
    println!(
        "lower bound, Monte Carlo  {:.9} bits  (stderr {:.2e}, {} samples)",
        mc.value, mc.err_est, mc.samples_or_subdivisions
    );

    let exact = average_secrecy_capacity_exact(&cfg, 4_000, 42)?;
    println!(
        "exact, Monte Carlo        {:.9} bits  (stderr {:.2e}, {} samples, {} failed)",
        exact.value, exact.err_est, exact.samples_or_subdivisions, exact.failed_samples
    );

    let awgn = awgn_secrecy_lower_bound(&cfg.link_b, &cfg.link_e);
    println!("no-fading baseline        {awgn:.9} bits");

    println!(
        "\nexact - bound gap: {:.4e} bits ({:.1} combined standard errors)",
        exact.value - quad.value,
        (exact.value - quad.value) / (exact.err_est + quad.err_est)
    );
    Ok(())
}
