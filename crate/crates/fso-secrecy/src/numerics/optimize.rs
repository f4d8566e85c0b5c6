//! Bracketed scalar maximization: a coarse grid scan selects the best
//! bracket, then Brent-style refinement (golden section with parabolic
//! interpolation) polishes the maximizer.

use crate::error::{Error, Result};

/// Minimum number of points in the coarse scan.
const GRID_POINTS: usize = 65;

/// Golden-section step factor.
const CGOLD: f64 = 0.381_966_011_250_105_1;

/// Controls for [`maximize_scalar`].
#[derive(Debug, Clone, Copy)]
pub struct OptimizerSpec {
    /// Absolute tolerance on the argument.
    pub x_tol: f64,
    /// Maximum refinement iterations.
    pub max_iters: usize,
    /// Half-width of the refinement bracket, in units of the grid step.
    pub bracket_expansion: f64,
}

impl Default for OptimizerSpec {
    fn default() -> Self {
        Self {
            x_tol: 1e-9,
            max_iters: 200,
            bracket_expansion: 1.0,
        }
    }
}

impl OptimizerSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.x_tol > 0.0) {
            return Err(Error::Domain(format!(
                "x_tol must be > 0, got {}",
                self.x_tol
            )));
        }
        if self.max_iters < 1 {
            return Err(Error::Domain("max_iters must be at least 1".into()));
        }
        if !(self.bracket_expansion >= 1.0) {
            return Err(Error::Domain(format!(
                "bracket_expansion must be >= 1, got {}",
                self.bracket_expansion
            )));
        }
        Ok(())
    }
}

/// Maximizes `f` on `[lo, hi]`.
///
/// A scan over `GRID_POINTS` uniformly spaced points picks the most
/// promising bracket; Brent refinement then locates the maximizer to
/// within `spec.x_tol`. Returns `(x_star, f(x_star))`, never worse than
/// the best scanned grid point.
pub fn maximize_scalar<F>(f: F, lo: f64, hi: f64, spec: &OptimizerSpec) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
        return Err(Error::Domain(format!("invalid bracket [{lo}, {hi}]")));
    }

    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let mut best_i = 0usize;
    let mut best_x = lo;
    let mut best_f = f64::NEG_INFINITY;
    for i in 0..GRID_POINTS {
        let x = if i + 1 == GRID_POINTS {
            hi
        } else {
            lo + step * i as f64
        };
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { x });
        }
        if v > best_f {
            best_i = i;
            best_x = x;
            best_f = v;
        }
    }

    let half = spec.bracket_expansion * step;
    let a = (best_x - half).max(lo);
    let b = (best_x + half).min(hi);
    debug_assert!(best_i < GRID_POINTS);

    let (xr, fr) = brent_max(&f, a, b, spec.x_tol, spec.max_iters)?;
    // The refined point replaces the scanned one only when it wins by more
    // than evaluation noise; sub-ulp "improvements" on flat objectives are
    // not improvements.
    let noise = 32.0 * f64::EPSILON * best_f.abs().max(1.0);
    if fr > best_f + noise {
        Ok((xr, fr))
    } else {
        Ok((best_x, best_f))
    }
}

/// Brent maximization on `[a, b]` (no derivative).
fn brent_max<F>(f: &F, a: f64, b: f64, x_tol: f64, max_iters: usize) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let eval = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { x })
        }
    };

    let (mut lo, mut hi) = (a, b);
    let mut x = lo + CGOLD * (hi - lo);
    let mut w = x;
    let mut v = x;
    let mut fx = eval(x)?;
    let mut fw = fx;
    let mut fv = fx;

    let mut d = 0.0_f64;
    let mut e = 0.0_f64;

    for _ in 0..max_iters {
        let m = 0.5 * (lo + hi);
        let tol1 = x_tol + f64::EPSILON * x.abs();
        let tol2 = 2.0 * tol1;

        if (x - m).abs() <= tol2 - 0.5 * (hi - lo) {
            break;
        }

        let mut use_golden = true;
        if e.abs() > tol1 {
            // Parabolic fit through (v, w, x).
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            let e_prev = e;
            e = d;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (lo - x) && p < q * (hi - x) {
                d = p / q;
                let u = x + d;
                if u - lo < tol2 || hi - u < tol2 {
                    d = if x < m { tol1 } else { -tol1 };
                }
                use_golden = false;
            }
        }
        if use_golden {
            e = if x < m { hi - x } else { lo - x };
            d = CGOLD * e;
        }

        let u = if d.abs() >= tol1 {
            x + d
        } else if d >= 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = eval(u)?;

        if fu >= fx {
            if u >= x {
                lo = x;
            } else {
                hi = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u >= x {
                hi = u;
            } else {
                lo = u;
            }
            if fu >= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu >= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }

    Ok((x, fx))
}
