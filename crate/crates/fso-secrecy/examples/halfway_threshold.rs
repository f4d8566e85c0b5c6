//! The eavesdropper's best detection threshold at uniform input is the
//! halfway point between the expected `0` and `1` outputs: numeric search
//! against the halfway value, plus the analytic derivative there, across
//! five decades of SNR.
//!
//! ```bash
//! cargo run --release --example halfway_threshold
//! ```

use fso_secrecy::channel::LinkParams;
use fso_secrecy::numerics::OptimizerSpec;
use fso_secrecy::secrecy::verify_halfway_threshold;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opt = OptimizerSpec::default();
    println!(
        "{:>10} {:>12} {:>16} {:>14} {:>14}",
        "gamma*h", "tau*/ybar", "f(tau*)-f(mid)", "rel deviation", "dI/dtau at mid"
    );
    for k in 0..11 {
        let gamma_h = 0.01 * 10f64.powf(k as f64 * 0.4);
        let link = LinkParams::from_snr(gamma_h)?;
        let chk = verify_halfway_threshold(&link, 1.0, &opt)?;
        println!(
            "{gamma_h:>10.4} {:>12.6} {:>16.3e} {:>14.3e} {:>14.3e}",
            chk.tau_star / gamma_h,
            chk.value_gap,
            chk.rel_deviation,
            chk.derivative_at_halfway
        );
    }
    println!();
    println!("no threshold beats the halfway point (the value gap never exceeds");
    println!("evaluation noise), and the analytic derivative vanishes there.");
    println!("Above gamma*h of roughly 17 the mutual information saturates to");
    println!("1.0 bitwise over a wide plateau, so the reported tau* is an");
    println!("arbitrary plateau point while the halfway value still attains");
    println!("the maximum.");
    Ok(())
}
