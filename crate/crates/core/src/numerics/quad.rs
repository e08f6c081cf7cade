//! Adaptive quadrature on semi-infinite intervals.
//!
//! Gauss-Kronrod 7-15 panels with recursive bisection, applied to a
//! sequence of finite segments [a, a+1], [a+1, a+3], [a+3, a+7], ...
//! whose lengths double until the latest segment contributes less than
//! 1e-16 of the accumulated sum.

use crate::error::{Error, Result};
use crate::numerics::SolverConfig;

// 15-point Kronrod abscissae on [-1, 1] (positive half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_7,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_47,
    0.0,
];

// Kronrod weights matching XGK.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// 7-point Gauss weights for the embedded rule (odd-index abscissae).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_65,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod 7-15 panel. Returns the Kronrod estimate and
/// |kronrod - gauss| as the error indicator.
fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;

    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }

    (kronrod * half, (kronrod - gauss).abs() * half)
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    tol: f64,
    depth: usize,
    panels: &mut usize,
    budget: usize,
) -> Result<f64> {
    *panels += 1;
    if *panels > budget {
        return Err(Error::Convergence {
            context: "adaptive quadrature (panel budget)",
            budget,
        });
    }
    let (value, err) = gk15(f, lo, hi);
    if err <= tol || hi - lo <= f64::EPSILON * (1.0 + lo.abs()) {
        return Ok(value);
    }
    if depth >= 60 {
        return Err(Error::Convergence {
            context: "adaptive quadrature (recursion depth)",
            budget: 60,
        });
    }
    let mid = 0.5 * (lo + hi);
    let left = adapt(f, lo, mid, 0.5 * tol, depth + 1, panels, budget)?;
    let right = adapt(f, mid, hi, 0.5 * tol, depth + 1, panels, budget)?;
    Ok(left + right)
}

/// Integrate f over a finite segment to the configured relative tolerance.
fn segment<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    cfg: &SolverConfig,
    panels: &mut usize,
) -> Result<f64> {
    let (rough, _) = gk15(f, lo, hi);
    let tol = (cfg.rel_tol * rough.abs()).max(f64::MIN_POSITIVE);
    adapt(f, lo, hi, tol, 0, panels, cfg.max_iter)
}

/// Integral of `f` over `[a, infinity)`.
///
/// Intended for continuous nonnegative integrands with (eventually)
/// exponential decay, which covers every survival function in this
/// crate. The truncation point grows by doubling segment lengths until
/// the newest segment falls below 1e-16 of the running sum.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, a: f64, cfg: &SolverConfig) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::domain(format!(
            "lower integration limit must be finite, got {a}"
        )));
    }
    let mut panels = 0usize;
    let mut total = segment(&f, a, a + 1.0, cfg, &mut panels)?;
    let mut lo = a + 1.0;
    let mut len = 2.0;
    for _ in 0..64 {
        let part = segment(&f, lo, lo + len, cfg, &mut panels)?;
        total += part;
        if part.abs() <= 1e-16 * total.abs() {
            return Ok(total);
        }
        lo += len;
        len *= 2.0;
    }
    Err(Error::Convergence {
        context: "semi-infinite tail truncation",
        budget: 64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad_cfg() -> SolverConfig {
        SolverConfig::quadrature()
    }

    #[test]
    fn unit_exponential() {
        let v = integrate_semi_infinite(|x| (-x).exp(), 0.0, &quad_cfg()).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn shifted_exponential() {
        // int_1^inf e^{-3x} dx = e^{-3}/3
        let v = integrate_semi_infinite(|x| (-3.0 * x).exp(), 1.0, &quad_cfg()).unwrap();
        let expected = 0.016_595_689_455_954_647;
        assert!((v - expected).abs() / expected < 1e-10, "{v}");
    }

    #[test]
    fn exponential_family_matches_closed_form() {
        for &lambda in &[0.1, 1.0, 10.0] {
            for &t in &[0.0, 1.0, 5.0] {
                let v = integrate_semi_infinite(|x| (-lambda * x).exp(), t, &quad_cfg()).unwrap();
                let expected = (-lambda * t).exp() / lambda;
                assert!(
                    (v - expected).abs() / expected < 1e-10,
                    "lambda={lambda} t={t}: {v} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn gaussian_tail_product() {
        // int_0^inf e^{-2x - x^2} dx = (sqrt(pi)/2) * erfcx(1)
        let v = integrate_semi_infinite(|x| (-2.0 * x - x * x).exp(), 0.0, &quad_cfg()).unwrap();
        let expected = 0.378_936_078_070_656_05;
        assert!((v - expected).abs() / expected < 1e-10, "{v}");
    }

    #[test]
    fn zero_integrand() {
        let v = integrate_semi_infinite(|_| 0.0, 0.0, &quad_cfg()).unwrap();
        assert_eq!(v, 0.0);
    }
}
