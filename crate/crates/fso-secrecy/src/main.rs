//! Command-line front end. All logic lives in the library; this binary
//! parses flags, dispatches, and maps failures to exit codes:
//! 0 success, 1 verification failure, 2 config error, 3 numeric error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fso_secrecy::average::{
    average_secrecy_capacity_exact, average_secrecy_lower_bound, monte_carlo_lower_bound,
    ScenarioConfig,
};
use fso_secrecy::channel::LinkParams;
use fso_secrecy::cli::{
    emit_plot_script, run_suite, run_sweep, Estimator, PlotStyle, RawConfig, Suite, SweepConfig,
    VerifyOptions,
};
use fso_secrecy::fading::{CorrelatedFadingPair, LogNormalFading};
use fso_secrecy::numerics::{OptimizerSpec, QuadratureSpec};
use fso_secrecy::secrecy::{
    instantaneous_lower_bound, instantaneous_secrecy_capacity, FadingPairRealization,
};
use fso_secrecy::{Error, Result};

#[derive(Parser)]
#[command(
    name = "fso-secrecy",
    version,
    about = "Secrecy capacity of OOK free-space optical links under correlated log-normal turbulence"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a parameter sweep and write a CSV table
    Sweep(SweepArgs),
    /// Generate a gnuplot script or SVG chart from a sweep CSV
    Plot(PlotArgs),
    /// Run verification suites and print one JSON record per check
    Verify(VerifyArgs),
    /// Evaluate every estimator for a single scenario
    Point(PointArgs),
}

/// Flags mirror the config-file keys 1:1; flags override the file.
#[derive(Args)]
struct SweepArgs {
    /// Flat `key = value` config file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Swept variable: gamma_b_db, rho, sigma_tb2 or gamma_e_db
    #[arg(long)]
    axis: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    stop: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    gamma_b_db: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma_e_db: Option<f64>,
    /// Fixed correlation(s); a comma list draws one curve per value
    #[arg(long)]
    rho: Option<String>,
    /// Fixed Bob Rytov variance(s); a comma list draws one curve per value
    #[arg(long)]
    sigma_tb2: Option<String>,
    #[arg(long)]
    sigma_te2: Option<f64>,
    /// Comma list from: lower_bound_quadrature, lower_bound_mc, exact_mc,
    /// awgn_baseline
    #[arg(long)]
    estimators: Option<String>,
    /// power_10log10 (default) or amplitude_20log10
    #[arg(long)]
    db_convention: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo samples for the lower-bound oracle
    #[arg(long)]
    samples: Option<usize>,
    /// Monte Carlo samples for the exact estimator
    #[arg(long)]
    exact_samples: Option<usize>,
    /// Output CSV path
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// Sweep CSV to plot
    #[arg(long)]
    csv: PathBuf,
    /// gnuplot (default) or svg
    #[arg(long, default_value = "gnuplot")]
    style: String,
    /// Output path; defaults to the CSV path with .gp or .svg extension
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// threshold, halfway-rate, dominance, rytov, oracle, fading or all
    #[arg(default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Monte Carlo samples for the oracle suite
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    /// Also write the JSON-lines report to this path
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct PointArgs {
    /// Flat `key = value` config file
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    gamma_b_db: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma_e_db: Option<f64>,
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    sigma_tb2: Option<String>,
    #[arg(long)]
    sigma_te2: Option<f64>,
    #[arg(long)]
    estimators: Option<String>,
    #[arg(long)]
    db_convention: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    exact_samples: Option<usize>,
    /// Additionally evaluate the instantaneous quantities at this Bob
    /// fading state (with --h-e)
    #[arg(long)]
    h_b: Option<f64>,
    /// Additionally evaluate the instantaneous quantities at this Eve
    /// fading state (with --h-b)
    #[arg(long)]
    h_e: Option<f64>,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run() -> Result<ExitCode> {
    match Cli::parse().cmd {
        Cmd::Sweep(args) => {
            let cfg = sweep_config(&args)?;
            let table = run_sweep(&cfg)?;
            table.write_csv(&cfg.output_path)?;
            println!(
                "wrote {} rows x {} columns to {}",
                table.rows.len(),
                table.header.len(),
                cfg.output_path.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Plot(args) => {
            let style = PlotStyle::parse(&args.style)?;
            let out = args.out.unwrap_or_else(|| {
                args.csv.with_extension(match style {
                    PlotStyle::Gnuplot => "gp",
                    PlotStyle::Svg => "svg",
                })
            });
            emit_plot_script(&args.csv, style, &out)?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify(args) => {
            let suite = Suite::parse(&args.suite)?;
            if args.samples < 1000 {
                return Err(Error::Config(format!(
                    "--samples must be at least 1000, got {}",
                    args.samples
                )));
            }
            let opts = VerifyOptions {
                seed: args.seed,
                mc_samples: args.samples,
            };
            let records = run_suite(suite, &opts)?;
            let mut json_file = match &args.json {
                Some(path) => Some(std::fs::File::create(path)?),
                None => None,
            };
            let mut failures = 0usize;
            for r in &records {
                let line = serde_json::to_string(r)
                    .map_err(|e| Error::Config(format!("report serialization failed: {e}")))?;
                println!("{line}");
                if let Some(f) = json_file.as_mut() {
                    writeln!(f, "{line}")?;
                }
                if !r.pass {
                    failures += 1;
                }
            }
            if failures > 0 {
                eprintln!("{failures} of {} checks failed", records.len());
                Ok(ExitCode::from(1))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Cmd::Point(args) => point(&args),
    }
}

fn sweep_config(args: &SweepArgs) -> Result<SweepConfig> {
    raw_from_args(args)?.build_sweep()
}

fn point_config(args: &SweepArgs) -> Result<SweepConfig> {
    raw_from_args(args)?.build_point()
}

fn raw_from_args(args: &SweepArgs) -> Result<RawConfig> {
    let file = match &args.config {
        Some(path) => RawConfig::from_file(path)?,
        None => RawConfig::default(),
    };
    let mut flags = RawConfig::default();
    flags.set_if("axis", args.axis.clone())?;
    flags.set_if("start", args.start.map(|v| v.to_string()))?;
    flags.set_if("stop", args.stop.map(|v| v.to_string()))?;
    flags.set_if("steps", args.steps.map(|v| v.to_string()))?;
    flags.set_if("gamma_b_db", args.gamma_b_db.map(|v| v.to_string()))?;
    flags.set_if("gamma_e_db", args.gamma_e_db.map(|v| v.to_string()))?;
    flags.set_if("rho", args.rho.clone())?;
    flags.set_if("sigma_tb2", args.sigma_tb2.clone())?;
    flags.set_if("sigma_te2", args.sigma_te2.map(|v| v.to_string()))?;
    flags.set_if("estimators", args.estimators.clone())?;
    flags.set_if("db_convention", args.db_convention.clone())?;
    flags.set_if("seed", args.seed.map(|v| v.to_string()))?;
    flags.set_if("samples", args.samples.map(|v| v.to_string()))?;
    flags.set_if("exact_samples", args.exact_samples.map(|v| v.to_string()))?;
    flags.set_if("out", args.out.as_ref().map(|v| v.display().to_string()))?;
    Ok(file.merged_with(&flags))
}

fn point(args: &PointArgs) -> Result<ExitCode> {
    // Reuse the sweep layering for the scenario parameters.
    let sweep_args = SweepArgs {
        config: args.config.clone(),
        axis: None,
        start: None,
        stop: None,
        steps: None,
        gamma_b_db: args.gamma_b_db,
        gamma_e_db: args.gamma_e_db,
        rho: args.rho.clone(),
        sigma_tb2: args.sigma_tb2.clone(),
        sigma_te2: args.sigma_te2,
        estimators: args.estimators.clone().or_else(|| {
            Some("lower_bound_quadrature,lower_bound_mc,exact_mc,awgn_baseline".to_string())
        }),
        db_convention: args.db_convention.clone(),
        seed: args.seed,
        samples: args.samples,
        exact_samples: args.exact_samples,
        out: None,
    };
    let cfg = point_config(&sweep_args)?;
    if cfg.rho.len() != 1 || cfg.sigma_tb2.len() != 1 {
        return Err(Error::Config(
            "point evaluation takes a single rho and sigma_tb2".into(),
        ));
    }
    let (rho, sigma_tb2) = (cfg.rho[0], cfg.sigma_tb2[0]);
    let gamma_b = cfg.db_convention.db_to_linear(cfg.gamma_b_db);
    let gamma_e = cfg.db_convention.db_to_linear(cfg.gamma_e_db);
    let scenario = ScenarioConfig {
        link_b: LinkParams::from_snr(gamma_b)?,
        link_e: LinkParams::from_snr(gamma_e)?,
        fading: CorrelatedFadingPair::new(
            LogNormalFading::mean_normalized(sigma_tb2)?,
            LogNormalFading::mean_normalized(cfg.sigma_te2)?,
            rho,
        )?,
        quad: QuadratureSpec::default(),
        opt: OptimizerSpec::default(),
    };

    println!(
        "scenario: gamma_b = {} dB, gamma_e = {} dB, sigma_tb2 = {sigma_tb2}, \
         sigma_te2 = {}, rho = {rho}, seed = {}",
        cfg.gamma_b_db, cfg.gamma_e_db, cfg.sigma_te2, cfg.seed
    );
    for est in &cfg.estimators {
        match est {
            Estimator::LowerBoundQuadrature => {
                let e = average_secrecy_lower_bound(&scenario)?;
                println!(
                    "lower_bound_quadrature  {:.12} bits (err <= {:.3e}, {} subdivisions)",
                    e.value, e.err_est, e.samples_or_subdivisions
                );
            }
            Estimator::LowerBoundMc => {
                let e = monte_carlo_lower_bound(&scenario, cfg.mc_samples, cfg.seed)?;
                println!(
                    "lower_bound_mc          {:.12} bits (stderr {:.3e}, {} samples)",
                    e.value, e.err_est, e.samples_or_subdivisions
                );
            }
            Estimator::ExactMc => {
                let e = average_secrecy_capacity_exact(&scenario, cfg.exact_samples, cfg.seed)?;
                println!(
                    "exact_mc                {:.12} bits (stderr {:.3e}, {} samples, {} failed)",
                    e.value, e.err_est, e.samples_or_subdivisions, e.failed_samples
                );
            }
            Estimator::AwgnBaseline => {
                let v = fso_secrecy::secrecy::awgn_secrecy_lower_bound(
                    &scenario.link_b,
                    &scenario.link_e,
                );
                println!("awgn_baseline           {v:.12} bits");
            }
        }
    }

    match (args.h_b, args.h_e) {
        (Some(h_b), Some(h_e)) => {
            let pair = FadingPairRealization::new(h_b, h_e)?;
            let exact = instantaneous_secrecy_capacity(
                &scenario.link_b,
                &scenario.link_e,
                &pair,
                &scenario.opt,
            )?;
            let bound = instantaneous_lower_bound(&scenario.link_b, &scenario.link_e, &pair);
            println!("instantaneous at (h_b, h_e) = ({h_b}, {h_e}):");
            println!(
                "  capacity     {:.12} bits (q* = {:.6}, tau_b* = {:.6}, tau_e* = {:.6})",
                exact.value, exact.q_star, exact.tau_b_star, exact.tau_e_star
            );
            println!("  lower bound  {bound:.12} bits");
            if gamma_b * h_b < gamma_e * h_e {
                println!(
                    "  note: gamma_b*h_b < gamma_e*h_e at this realization; the clamped \
                     value is reported without a more-capable channel ordering"
                );
            }
        }
        (None, None) => {}
        _ => {
            return Err(Error::Config(
                "--h-b and --h-e must be given together".into(),
            ));
        }
    }

    Ok(ExitCode::SUCCESS)
}
