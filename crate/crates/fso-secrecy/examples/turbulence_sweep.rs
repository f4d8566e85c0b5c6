//! Average secrecy-capacity lower bound vs Bob's SNR for three turbulence
//! strengths at Bob, Eve's strength held fixed.
//!
//! Turbulence on Bob's link hurts when his SNR is already far above Eve's,
//! but helps in the low-SNR regime where only fading can give Bob an
//! instantaneous advantage.
//!
//! ```bash
//! cargo run --release --example turbulence_sweep
//! ```

use std::path::Path;

use fso_secrecy::cli::{emit_plot_script, run_sweep, PlotStyle, RawConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut raw = RawConfig::default();
    raw.set("axis", "gamma_b_db".into())?;
    raw.set("start", "-10".into())?;
    raw.set("stop", "20".into())?;
    raw.set("steps", "31".into())?;
    raw.set("gamma_e_db", "0".into())?;
    raw.set("rho", "0".into())?;
    raw.set("sigma_tb2", "0.1,0.5,1".into())?;
    raw.set("sigma_te2", "1".into())?;
    raw.set("estimators", "lower_bound_quadrature".into())?;
    let cfg = raw.build_sweep()?;

    let table = run_sweep(&cfg)?;
    let csv = Path::new("turbulence_sweep.csv");
    table.write_csv(csv)?;
    emit_plot_script(csv, PlotStyle::Gnuplot, Path::new("turbulence_sweep.gp"))?;
    emit_plot_script(csv, PlotStyle::Svg, Path::new("turbulence_sweep.svg"))?;
    println!("wrote {} rows to {}", table.rows.len(), csv.display());

    let weak = table.column("lower_bound_quadrature_stb20.1_bits").unwrap();
    let strong = table.column("lower_bound_quadrature_stb21_bits").unwrap();
    println!(
        "at gamma_b = 10 dB: sigma_Tb2=0.1 gives {:.4} bits, sigma_Tb2=1 gives {:.4} bits",
        weak[20], strong[20]
    );
    println!(
        "at gamma_b = -10 dB: sigma_Tb2=0.1 gives {:.4} bits, sigma_Tb2=1 gives {:.4} bits",
        weak[0], strong[0]
    );
    Ok(())
}
