//! Adaptive 2-D quadrature over a rectangle.
//!
//! Each cell is integrated with a tensor-product 15-point Gauss-Kronrod
//! rule; the embedded 7-point Gauss rule provides the per-cell error
//! estimate. The cell with the largest estimate is split in four until the
//! global estimate meets the tolerance or the subdivision budget runs out.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Abscissae of the 15-point Kronrod rule on [-1, 1], ascending.
const NODE: [f64; 15] = [
    -0.991455371120813,
    -0.949107912342759,
    -0.864864423359769,
    -0.741531185599394,
    -0.586087235467691,
    -0.405845151377397,
    -0.207784955007898,
    0.0,
    0.207784955007898,
    0.405845151377397,
    0.586087235467691,
    0.741531185599394,
    0.864864423359769,
    0.949107912342759,
    0.991455371120813,
];

/// Kronrod weights matching `NODE`.
const W_KRONROD: [f64; 15] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
    0.204432940075298,
    0.190350578064785,
    0.169004726639267,
    0.140653259715525,
    0.104790010322250,
    0.063092092629979,
    0.022935322010529,
];

/// Weights of the embedded 7-point Gauss rule (zero on Kronrod-only nodes).
const W_GAUSS: [f64; 15] = [
    0.0,
    0.129484966168870,
    0.0,
    0.279705391489277,
    0.0,
    0.381830050505119,
    0.0,
    0.417959183673469,
    0.0,
    0.381830050505119,
    0.0,
    0.279705391489277,
    0.0,
    0.129484966168870,
    0.0,
];

/// Controls for [`integrate_2d`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    /// Relative tolerance on the integral value.
    pub rel_tol: f64,
    /// Absolute tolerance on the integral value.
    pub abs_tol: f64,
    /// Subdivision budget (each subdivision splits one cell in four).
    pub max_subdivisions: usize,
    /// Probability mass allowed outside the integration box per axis when a
    /// box is derived from distribution quantiles.
    pub truncation_quantile: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        // The positive-part clamp in the secrecy integrands puts a kink
        // across the box; chasing it to the absolute tolerance can take
        // tens of thousands of cells.
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_subdivisions: 100_000,
            truncation_quantile: 1e-8,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::Domain(format!(
                "tolerances must be > 0, got rel_tol={}, abs_tol={}",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::Domain("max_subdivisions must be at least 1".into()));
        }
        if !(self.truncation_quantile > 0.0 && self.truncation_quantile < 0.5) {
            return Err(Error::Domain(format!(
                "truncation_quantile must lie in (0, 0.5), got {}",
                self.truncation_quantile
            )));
        }
        Ok(())
    }
}

/// Axis-aligned integration rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        let r = Rect { x0, x1, y0, y1 };
        if ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) || !(x0 < x1) || !(y0 < y1) {
            return Err(Error::Domain(format!("degenerate rectangle {r:?}")));
        }
        Ok(r)
    }
}

/// Outcome of [`integrate_2d`].
#[derive(Debug, Clone, Copy)]
pub struct Integral2d {
    pub value: f64,
    pub err_est: f64,
    pub subdivisions: usize,
    pub evaluations: usize,
}

struct Cell {
    rect: Rect,
    value: f64,
    err: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn eval_cell<F>(f: &F, rect: Rect) -> Result<Cell>
where
    F: Fn(f64, f64) -> f64,
{
    let cx = 0.5 * (rect.x0 + rect.x1);
    let cy = 0.5 * (rect.y0 + rect.y1);
    let hx = 0.5 * (rect.x1 - rect.x0);
    let hy = 0.5 * (rect.y1 - rect.y0);

    let mut kron = 0.0;
    let mut gauss = 0.0;
    for (i, &ni) in NODE.iter().enumerate() {
        let x = cx + hx * ni;
        let mut row_k = 0.0;
        let mut row_g = 0.0;
        for (j, &nj) in NODE.iter().enumerate() {
            let v = f(x, cy + hy * nj);
            if !v.is_finite() {
                return Err(Error::NonFinite { x });
            }
            row_k += W_KRONROD[j] * v;
            row_g += W_GAUSS[j] * v;
        }
        kron += W_KRONROD[i] * row_k;
        gauss += W_GAUSS[i] * row_g;
    }

    let area_scale = hx * hy;
    Ok(Cell {
        rect,
        value: kron * area_scale,
        err: (kron - gauss).abs() * area_scale,
    })
}

/// Adaptive integration of `f` over `rect`.
///
/// Converged when the summed error estimate drops below
/// `max(abs_tol, rel_tol·|value|)`. Exhausting the subdivision budget
/// yields [`Error::QuadratureConvergence`], which carries the partial
/// value and its estimate.
pub fn integrate_2d<F>(f: F, rect: Rect, spec: &QuadratureSpec) -> Result<Integral2d>
where
    F: Fn(f64, f64) -> f64,
{
    spec.validate()?;
    Rect::new(rect.x0, rect.x1, rect.y0, rect.y1)?;

    let mut heap = BinaryHeap::new();
    let root = eval_cell(&f, rect)?;
    let mut total_value = root.value;
    let mut total_err = root.err;
    let mut evaluations = 225usize;
    heap.push(root);

    let mut subdivisions = 0usize;
    loop {
        let tolerance = spec.abs_tol.max(spec.rel_tol * total_value.abs());
        if total_err <= tolerance {
            return Ok(Integral2d {
                value: total_value,
                err_est: total_err,
                subdivisions,
                evaluations,
            });
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::QuadratureConvergence {
                value: total_value,
                err_est: total_err,
                tolerance,
                subdivisions,
            });
        }

        let worst = heap.pop().expect("heap holds at least one cell");
        total_value -= worst.value;
        total_err -= worst.err;

        let r = worst.rect;
        let mx = 0.5 * (r.x0 + r.x1);
        let my = 0.5 * (r.y0 + r.y1);
        for child in [
            Rect {
                x0: r.x0,
                x1: mx,
                y0: r.y0,
                y1: my,
            },
            Rect {
                x0: mx,
                x1: r.x1,
                y0: r.y0,
                y1: my,
            },
            Rect {
                x0: r.x0,
                x1: mx,
                y0: my,
                y1: r.y1,
            },
            Rect {
                x0: mx,
                x1: r.x1,
                y0: my,
                y1: r.y1,
            },
        ] {
            let cell = eval_cell(&f, child)?;
            evaluations += 225;
            total_value += cell.value;
            total_err += cell.err;
            heap.push(cell);
        }
        subdivisions += 1;
        // Guard against drift in the incremental error sum.
        if total_err < 0.0 {
            total_err = heap.iter().map(|c| c.err).sum();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn constant_on_unit_box() {
        let r = Rect::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let out = integrate_2d(|_, _| 1.0, r, &unit_spec()).unwrap();
        assert!((out.value - 1.0).abs() < 1e-14, "value = {}", out.value);
        assert!(out.err_est < 1e-14);
    }

    #[test]
    fn separable_gaussian_normalizes() {
        let r = Rect::new(-8.0, 8.0, -8.0, 8.0).unwrap();
        let c = 1.0 / (2.0 * std::f64::consts::PI);
        let out = integrate_2d(|x, y| c * (-0.5 * (x * x + y * y)).exp(), r, &unit_spec()).unwrap();
        assert!((out.value - 1.0).abs() < 1e-10, "value = {}", out.value);
    }

    #[test]
    fn polynomial_closed_forms_with_error_bound() {
        // ∫∫ x^a y^b over [0,1]^2 = 1/((a+1)(b+1)); the estimate must bound
        // the true error.
        let r = Rect::new(0.0, 1.0, 0.0, 1.0).unwrap();
        for (a, b) in [(1, 1), (3, 2), (6, 5), (9, 9)] {
            let out = integrate_2d(|x, y| x.powi(a) * y.powi(b), r, &unit_spec()).unwrap();
            let exact = 1.0 / ((a as f64 + 1.0) * (b as f64 + 1.0));
            let true_err = (out.value - exact).abs();
            assert!(
                true_err <= out.err_est + 1e-15,
                "x^{a} y^{b}: true err {true_err:e} > estimate {:e}",
                out.err_est
            );
            assert!(true_err < 1e-12);
        }
    }

    #[test]
    fn gaussian_error_bound_holds() {
        let r = Rect::new(-6.0, 6.0, -6.0, 6.0).unwrap();
        let c = 1.0 / (2.0 * std::f64::consts::PI);
        let out = integrate_2d(|x, y| c * (-0.5 * (x * x + y * y)).exp(), r, &unit_spec()).unwrap();
        let exact = {
            // (1 - erfc(6/√2))² mass inside ±6σ per axis
            let tail = crate::numerics::erfc_raw(6.0 / std::f64::consts::SQRT_2);
            (1.0 - tail) * (1.0 - tail)
        };
        let true_err = (out.value - exact).abs();
        assert!(true_err <= out.err_est + 1e-15);
    }

    #[test]
    fn budget_exhaustion_carries_partial_value() {
        let tight = QuadratureSpec {
            max_subdivisions: 2,
            rel_tol: 1e-15,
            abs_tol: 1e-300,
            ..Default::default()
        };
        let r = Rect::new(0.0, 1.0, 0.0, 1.0).unwrap();
        // Sharp ridge defeats a 2-subdivision budget at this tolerance.
        let res = integrate_2d(|x, y| 1.0 / (1e-4 + (x - y) * (x - y)), r, &tight);
        match res {
            Err(Error::QuadratureConvergence { value, err_est, .. }) => {
                assert!(value.is_finite() && value > 0.0);
                assert!(err_est > 0.0);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_rectangles_and_specs() {
        assert!(Rect::new(1.0, 0.0, 0.0, 1.0).is_err());
        assert!(Rect::new(0.0, 1.0, 2.0, 2.0).is_err());
        assert!(Rect::new(f64::NAN, 1.0, 0.0, 1.0).is_err());
        let bad = QuadratureSpec {
            truncation_quantile: 0.5,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = QuadratureSpec {
            rel_tol: -1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn non_finite_integrand_detected() {
        let r = Rect::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let res = integrate_2d(|x, y| ((x - 0.3) * (y - 0.7)).ln(), r, &unit_spec());
        assert!(matches!(res, Err(Error::NonFinite { .. })));
    }

    proptest::proptest! {
        // Random bivariate polynomials have closed-form integrals; the
        // reported estimate must bound the true error.
        #[test]
        fn error_estimate_bounds_true_error_on_polynomials(
            coefficients in proptest::collection::vec(-3.0f64..3.0, 9),
            x1 in 0.5f64..4.0,
            y1 in 0.5f64..4.0,
        ) {
            let f = |x: f64, y: f64| -> f64 {
                let mut acc = 0.0;
                for (k, c) in coefficients.iter().enumerate() {
                    acc += c * x.powi((k % 3) as i32 * 2) * y.powi((k / 3) as i32 * 2);
                }
                acc
            };
            let exact: f64 = coefficients
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let (i, j) = ((k % 3) as i32 * 2, (k / 3) as i32 * 2);
                    c * x1.powi(i + 1) / f64::from(i + 1) * y1.powi(j + 1) / f64::from(j + 1)
                })
                .sum();
            let r = Rect::new(0.0, x1, 0.0, y1).unwrap();
            let out = integrate_2d(f, r, &unit_spec()).unwrap();
            let true_err = (out.value - exact).abs();
            let slack = 1e-12 * exact.abs().max(1.0);
            proptest::prop_assert!(
                true_err <= out.err_est + slack,
                "true err {true_err:e} above estimate {:e}", out.err_est
            );
        }
    }
}
