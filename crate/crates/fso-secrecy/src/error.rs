use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature exhausted its subdivision budget. The partial
    /// value and its error estimate are preserved.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions: \
         value={value:.6e}, err_est={err_est:.6e}, tolerance={tolerance:.6e}"
    )]
    QuadratureConvergence {
        value: f64,
        err_est: f64,
        tolerance: f64,
        subdivisions: usize,
    },

    /// The objective handed to an optimizer returned NaN or infinity.
    #[error("non-finite function evaluation at x = {x}")]
    NonFinite { x: f64 },

    /// Too many Monte Carlo samples could not be evaluated.
    #[error("estimation failed: {failures} of {samples} samples could not be evaluated")]
    Estimation { failures: usize, samples: usize },

    /// Invalid configuration (CLI flags or config file).
    #[error("config error: {0}")]
    Config(String),

    /// A CSV file handed to the plotter could not be parsed.
    #[error("csv parse error at line {line}: {message}")]
    CsvParse { line: usize, message: String },

    /// A numeric failure during a sweep, annotated with the axis point.
    #[error("failure at {axis} = {value}: {source}")]
    AtAxisPoint {
        axis: String,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 for configuration and I/O problems,
    /// 3 for numeric/convergence failures. Verification failures map to 1
    /// at the call site; they are reports, not errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::CsvParse { .. } | Error::Io(_) => 2,
            Error::Domain(_)
            | Error::QuadratureConvergence { .. }
            | Error::NonFinite { .. }
            | Error::Estimation { .. }
            | Error::AtAxisPoint { .. } => 3,
        }
    }
}
