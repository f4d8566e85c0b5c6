//! Correlated log-normal fading model: Rytov-variance budgeting, the
//! log-domain vs irradiance-domain correlation conversion, and sampler
//! moments against their analytic targets.
//!
//! ```bash
//! cargo run --release --example fading_statistics
//! ```

use fso_secrecy::fading::{
    rho_from_rho_h, rho_h_from_rho, CorrelatedFadingPair, LogNormalFading, TurbulenceBudget,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Rytov variance along a horizontal path at 1.5 um.
    println!("Rytov variance, lambda = 1.5 um, Cn2 = 1e-15 m^(-2/3):");
    for km in [2.4, 5.7, 8.3] {
        let budget = TurbulenceBudget::new(1e-15, 1.5e-6, km * 1e3)?;
        println!(
            "  L = {km:>4} km  ->  sigma_T2 = {:.4}",
            budget.rytov_variance()
        );
    }

    // Correlation conversion and its inverse.
    let rho = rho_from_rho_h(0.5, 1.0, 1.0)?;
    println!("\nrho_H = 0.5 at unit variances  ->  rho = {rho:.6}");
    println!(
        "round trip                     ->  rho_H = {:.6}",
        rho_h_from_rho(rho, 1.0, 1.0)?
    );

    // Sampler moments. The model is mean-normalized: E[H] = 1.
    let unit = LogNormalFading::mean_normalized(1.0)?;
    let pair = CorrelatedFadingPair::new(unit, unit, rho)?;
    let n = 2_000_000;
    let samples = pair.sample_pairs(42, n)?;
    let nf = n as f64;

    let mean_b = samples.iter().map(|s| s.0).sum::<f64>() / nf;
    let mean_e = samples.iter().map(|s| s.1).sum::<f64>() / nf;
    println!("\n{n} draws (seed 42):");
    println!("  E[H_b] = {mean_b:.5}   E[H_e] = {mean_e:.5}   (target 1)");

    let (mut sa, mut sb, mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(h_b, h_e) in &samples {
        sa += h_b;
        sb += h_e;
        saa += h_b * h_b;
        sbb += h_e * h_e;
        sab += h_b * h_e;
    }
    let cov = sab / nf - (sa / nf) * (sb / nf);
    let r_h =
        cov / ((saa / nf - (sa / nf) * (sa / nf)) * (sbb / nf - (sb / nf) * (sb / nf))).sqrt();
    println!("  sampled rho_H = {r_h:.5}   (target 0.5)");

    let p = pair.joint_pdf(1.0, 1.0)?;
    println!("\njoint density at (1, 1): {p:.6}");
    Ok(())
}
