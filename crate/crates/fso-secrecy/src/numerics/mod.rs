//! Foundational numerics shared by every other module: special functions,
//! binary entropy, positive part, bracketed scalar maximization, and
//! adaptive 2-D quadrature over a rectangle.

mod erf;
mod optimize;
mod quad;

pub use erf::erfc;
pub(crate) use erf::{erfc_raw, ln_half_erfc};
pub use optimize::{maximize_scalar, OptimizerSpec};
pub use quad::{integrate_2d, Integral2d, QuadratureSpec, Rect};

use crate::error::{Error, Result};

/// Binary entropy in bits: `H(p) = -p·log₂(p) - (1-p)·log₂(1-p)`,
/// with `0·log 0 := 0`.
///
/// Symmetric about `p = ½`, where it attains its maximum of one bit.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "binary_entropy requires a probability in [0, 1], got {p}"
        )));
    }
    Ok(entropy_bits(p))
}

/// Unchecked binary entropy for internal hot paths; `p` must lie in [0, 1].
pub(crate) fn entropy_bits(p: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p));
    if p == 0.0 || p == 1.0 {
        return 0.0;
    }
    let q = 1.0 - p;
    -(p * p.log2() + q * q.log2())
}

/// Positive part `[x]⁺ = max(0, x)`.
pub fn positive_part(x: f64) -> f64 {
    x.max(0.0)
}
