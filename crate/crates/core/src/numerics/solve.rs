//! Bracketed root finding, scalar minimization and finite differences.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::SolverConfig;

/// Outcome of a bracketed root search (also reused for extremum
/// reports, where `residual` holds the final interval width instead of
/// |f(root)|).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingReport {
    /// Location of the root (or extremum).
    pub t_root: f64,
    /// Function value at `t_root`.
    pub value_at_root: f64,
    /// The bracket the search ran on.
    pub bracket: (f64, f64),
    /// Iterations consumed.
    pub iterations: usize,
    /// |f(t_root)| for roots; final interval width for extrema.
    pub residual: f64,
}

/// Result of a golden-section minimization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimizeReport {
    /// Abscissa of the located minimum.
    pub t: f64,
    /// Function value at `t`.
    pub value: f64,
    /// Iterations consumed.
    pub iterations: usize,
    /// True when the search collapsed onto a bracket endpoint, i.e. the
    /// function is monotone on the bracket and the "minimum" is a
    /// boundary value.
    pub at_boundary: bool,
}

/// Root of `f` on `[a, b]`, requiring a sign change over the bracket.
///
/// Bisection safeguarded with inverse-quadratic/secant steps (Brent),
/// converging to `cfg.abs_tol` in the abscissa.
pub fn bracketed_root<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &SolverConfig,
) -> Result<CrossingReport> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!(
            "root bracket must satisfy a < b with finite ends, got [{a}, {b}]"
        )));
    }
    let original = (a, b);
    let fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(CrossingReport { t_root: a, value_at_root: fa, bracket: original, iterations: 0, residual: 0.0 });
    }
    if fb == 0.0 {
        return Ok(CrossingReport { t_root: b, value_at_root: fb, bracket: original, iterations: 0, residual: 0.0 });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket { lo: a, hi: b, f_lo: fa, f_hi: fb });
    }

    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (fa, fb);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=cfg.max_iter {
        if fb.abs() > fc.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * cfg.abs_tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(CrossingReport {
                t_root: b,
                value_at_root: fb,
                bracket: original,
                iterations: iter,
                residual: fb.abs(),
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Attempt inverse quadratic (or secant) interpolation.
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q0 * (q0 - r) - (b - a) * (r - 1.0)),
                    (q0 - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                // Interpolation step accepted.
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    Err(Error::Convergence { context: "bracketed root search", budget: cfg.max_iter })
}

const INV_PHI: f64 = 0.618_033_988_749_894_8; // (sqrt(5) - 1) / 2

/// Golden-section minimization of a unimodal `f` on `[a, b]`.
///
/// Shrinks the interval below `cfg.abs_tol` and returns its midpoint.
/// On a monotone function the search collapses onto the cheaper
/// endpoint and the report carries `at_boundary = true`.
pub fn minimize_scalar<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &SolverConfig,
) -> Result<MinimizeReport> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!(
            "minimization bracket must satisfy a < b with finite ends, got [{a}, {b}]"
        )));
    }
    let (a0, b0) = (a, b);
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);

    let mut iterations = 0;
    while hi - lo > cfg.abs_tol {
        iterations += 1;
        if iterations > cfg.max_iter {
            return Err(Error::Convergence { context: "golden-section minimization", budget: cfg.max_iter });
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let t = 0.5 * (lo + hi);
    let margin = 4.0 * cfg.abs_tol;
    Ok(MinimizeReport {
        t,
        value: f(t),
        iterations,
        at_boundary: t - a0 <= margin || b0 - t <= margin,
    })
}

/// Second-order central difference (f(t+h) - f(t-h)) / (2h).
pub fn central_derivative<F: Fn(f64) -> f64>(f: F, t: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() || !t.is_finite() {
        return Err(Error::domain(format!(
            "central difference needs finite t and step h > 0, got t={t}, h={h}"
        )));
    }
    Ok((f(t + h) - f(t - h)) / (2.0 * h))
}

/// Step size for central differences, scaled with t to balance
/// truncation against rounding: max(1e-6, 1e-6 * t).
pub fn fd_step(t: f64) -> f64 {
    (1e-6_f64).max(1e-6 * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_of_x_squared_minus_two() {
        let r = bracketed_root(|x| x * x - 2.0, 1.0, 2.0, &SolverConfig::root()).unwrap();
        assert!((r.t_root - std::f64::consts::SQRT_2).abs() < 1e-10, "{}", r.t_root);
        assert!(r.iterations <= 200);
    }

    #[test]
    fn root_of_sine_is_pi() {
        let r = bracketed_root(f64::sin, 3.0, 4.0, &SolverConfig::root()).unwrap();
        assert!((r.t_root - std::f64::consts::PI).abs() < 1e-10, "{}", r.t_root);
    }

    #[test]
    fn root_rejects_same_sign_bracket() {
        let err = bracketed_root(|x| x * x + 1.0, -1.0, 1.0, &SolverConfig::root()).unwrap_err();
        assert!(matches!(err, Error::Bracket { .. }));
    }

    #[test]
    fn root_at_endpoint_is_returned() {
        let r = bracketed_root(|x| x, 0.0, 1.0, &SolverConfig::root()).unwrap();
        assert_eq!(r.t_root, 0.0);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn minimize_parabola() {
        let r = minimize_scalar(|x| (x - 1.0) * (x - 1.0), 0.0, 3.0, &SolverConfig::extremum()).unwrap();
        assert!((r.t - 1.0).abs() < 1e-7, "{}", r.t);
        assert!(r.value < 1e-14);
        assert!(!r.at_boundary);
    }

    #[test]
    fn minimize_monotone_flags_boundary() {
        let r = minimize_scalar(|x| x, 0.0, 1.0, &SolverConfig::extremum()).unwrap();
        assert!(r.at_boundary);
        assert!(r.t < 1e-6, "{}", r.t);
    }

    #[test]
    fn central_difference_of_exp_at_zero() {
        let d = central_derivative(f64::exp, 0.0, 1e-6).unwrap();
        assert!((d - 1.0).abs() < 1e-10, "{d}");
    }

    #[test]
    fn central_difference_of_square() {
        let d = central_derivative(|x| x * x, 3.0, fd_step(3.0)).unwrap();
        assert!((d - 6.0).abs() < 1e-8, "{d}");
    }

    #[test]
    fn central_difference_rejects_bad_step() {
        assert!(central_derivative(f64::exp, 0.0, 0.0).is_err());
        assert!(central_derivative(f64::exp, 0.0, -1e-6).is_err());
    }
}
