//! Sweep engine, CSV/plot emission and verification suites.

mod config;
mod plot;
mod sweep;
mod verify;

pub use config::{AxisVar, DbConvention, Estimator, RawConfig, SweepConfig};
pub use plot::{emit_plot_script, PlotStyle};
pub use sweep::{run_sweep, SweepTable};
pub use verify::{run_suite, CheckRecord, Suite, VerifyOptions};
