//! Independent cross-checks of the closed forms: quadrature for the
//! mean residual life, central differences for the hazard and reversed
//! hazard rates, and the diagonal identity tying the series survival
//! curve to the joint surface.
//!
//! Oracle tolerances are looser than closed-form arithmetic to absorb
//! finite-difference truncation: 1e-6 relative for the rate oracles,
//! 1e-8 for the quadrature one, 1e-12 for the diagonal identity.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{series_hazard, series_mrl, series_rhr, series_survival, MeasureKind};
use crate::models::{ModelFamily, ModelParams};
use crate::numerics::{central_derivative, fd_step, integrate_semi_infinite, SolverConfig};

/// Worst relative deviation between a closed form and its oracle over a
/// grid. `kind` is the measure being cross-checked; the diagonal
/// identity reports under `Reliability` since it validates the survival
/// curve itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub model: ModelParams,
    pub kind: MeasureKind,
    pub grid: Vec<f64>,
    pub max_rel_dev: f64,
    pub worst_t: f64,
}

/// Default acceptance thresholds for [`verify_model`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleTolerances {
    pub diagonal: f64,
    pub hazard: f64,
    pub mrl: f64,
    pub rhr: f64,
}

impl Default for OracleTolerances {
    fn default() -> Self {
        OracleTolerances { diagonal: 1e-12, hazard: 1e-6, mrl: 1e-8, rhr: 1e-6 }
    }
}

impl OracleTolerances {
    pub fn for_kind(&self, kind: MeasureKind) -> f64 {
        match kind {
            MeasureKind::Reliability => self.diagonal,
            MeasureKind::Hazard => self.hazard,
            MeasureKind::Mrl => self.mrl,
            MeasureKind::Rhr => self.rhr,
        }
    }
}

fn rel_dev(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Mean residual life by quadrature of the survival curve:
/// e(t) = int_t^inf S(x) dx / S(t).
pub fn mrl_oracle(params: &ModelParams, t: f64) -> Result<f64> {
    let p = *params;
    let sf = series_survival(&p, t)?;
    let integral = integrate_semi_infinite(
        move |x| series_survival(&p, x).unwrap_or(0.0),
        t,
        &SolverConfig::quadrature(),
    )?;
    Ok(integral / sf)
}

/// Density at t by a central difference of the distribution function
/// 1 - S. Differencing -S gives the identical stencil without the
/// catastrophic cancellation of 1 - S when S is tiny.
fn density_fd(params: &ModelParams, t: f64) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::domain(format!(
            "finite-difference density needs t > 0, got {t}"
        )));
    }
    let p = *params;
    let h = fd_step(t).min(0.5 * t);
    central_derivative(move |x| -series_survival(&p, x).expect("x stays nonnegative"), t, h)
}

/// Hazard rate by finite differences: f(t)/S(t).
pub fn hazard_oracle(params: &ModelParams, t: f64) -> Result<f64> {
    Ok(density_fd(params, t)? / series_survival(params, t)?)
}

/// Reversed hazard rate by finite differences: f(t)/F(t), guarded
/// against a vanishing distribution function near t = 0.
pub fn rhr_oracle(params: &ModelParams, t: f64) -> Result<f64> {
    let cdf = 1.0 - series_survival(params, t)?;
    if cdf < 1e-14 {
        return Err(Error::domain(format!(
            "reversed hazard rate oracle needs F(t) >= 1e-14, got {cdf:e} at t = {t}"
        )));
    }
    Ok(density_fd(params, t)? / cdf)
}

/// Max relative deviation of joint_survival(t, t) from the closed-form
/// series survival over the grid.
pub fn diagonal_consistency(params: &ModelParams, grid: &[f64]) -> Result<OracleReport> {
    if grid.is_empty() {
        return Err(Error::domain("diagonal consistency needs a nonempty grid"));
    }
    let mut max_rel_dev: f64 = 0.0;
    let mut worst_t = grid[0];
    for &t in grid {
        let joint = params.joint_survival(t, t)?;
        let series = series_survival(params, t)?;
        let dev = rel_dev(joint, series);
        if dev > max_rel_dev {
            max_rel_dev = dev;
            worst_t = t;
        }
    }
    Ok(OracleReport {
        model: *params,
        kind: MeasureKind::Reliability,
        grid: grid.to_vec(),
        max_rel_dev,
        worst_t,
    })
}

/// One oracle comparison (closed form vs independent route) over a grid.
pub fn measure_consistency(
    params: &ModelParams,
    kind: MeasureKind,
    grid: &[f64],
) -> Result<OracleReport> {
    if grid.is_empty() {
        return Err(Error::domain("oracle comparison needs a nonempty grid"));
    }
    if kind == MeasureKind::Reliability {
        return diagonal_consistency(params, grid);
    }
    let mut max_rel_dev: f64 = 0.0;
    let mut worst_t = grid[0];
    for &t in grid {
        let (closed, independent) = match kind {
            MeasureKind::Hazard => (series_hazard(params, t)?, hazard_oracle(params, t)?),
            MeasureKind::Mrl => (series_mrl(params, t)?, mrl_oracle(params, t)?),
            MeasureKind::Rhr => (series_rhr(params, t)?, rhr_oracle(params, t)?),
            MeasureKind::Reliability => unreachable!(),
        };
        let dev = rel_dev(closed, independent);
        if dev > max_rel_dev {
            max_rel_dev = dev;
            worst_t = t;
        }
    }
    Ok(OracleReport { model: *params, kind, grid: grid.to_vec(), max_rel_dev, worst_t })
}

/// All four oracle reports for one model, in measure order.
pub fn verify_model(params: &ModelParams, grid: &[f64]) -> Result<Vec<OracleReport>> {
    MeasureKind::ALL
        .iter()
        .map(|&kind| measure_consistency(params, kind, grid))
        .collect()
}

/// Evenly spaced grid of `steps` points over `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    assert!(steps >= 2, "linspace needs at least two points");
    let h = (hi - lo) / (steps - 1) as f64;
    (0..steps)
        .map(|i| if i == steps - 1 { hi } else { lo + h * i as f64 })
        .collect()
}

/// Random valid parameters for a family, kept away from the degenerate
/// boundaries (|alpha| in [0.05, 0.95], lambda12 <= 0.95 lambda1 lambda2,
/// Freund thetas at least 0.1 away from lambda, and so on).
pub fn sample_params<R: Rng + ?Sized>(family: ModelFamily, rng: &mut R) -> ModelParams {
    let rate = |rng: &mut R| rng.gen_range(0.25..2.5);
    let params = match family {
        ModelFamily::Independent => ModelParams::Independent {
            lambda1: rate(rng),
            lambda2: rate(rng),
        },
        ModelFamily::GumbelI => {
            let lambda1 = rate(rng);
            let lambda2 = rate(rng);
            let lambda12 = rng.gen_range(0.05..0.95) * lambda1 * lambda2;
            ModelParams::GumbelI { lambda1, lambda2, lambda12 }
        }
        ModelFamily::GumbelII => {
            let magnitude = rng.gen_range(0.05..0.95);
            let alpha = if rng.gen_bool(0.5) { magnitude } else { -magnitude };
            ModelParams::GumbelII { lambda1: rate(rng), lambda2: rate(rng), alpha }
        }
        ModelFamily::GumbelIII => ModelParams::GumbelIII {
            lambda1: rate(rng),
            lambda2: rate(rng),
            m: rng.gen_range(1.05..4.0),
        },
        ModelFamily::Freund => {
            let lambda1 = rate(rng);
            let lambda2 = rate(rng);
            let lambda = lambda1 + lambda2;
            let theta = |rng: &mut R| loop {
                let v = rng.gen_range(0.25..2.5);
                if (v - lambda).abs() >= 0.1 {
                    return v;
                }
            };
            ModelParams::Freund { lambda1, lambda2, theta1: theta(rng), theta2: theta(rng) }
        }
        ModelFamily::MarshallOlkin => ModelParams::MarshallOlkin {
            lambda1: rate(rng),
            lambda2: rate(rng),
            lambda12: rng.gen_range(0.05..2.0),
        },
        ModelFamily::BlockBasu => ModelParams::BlockBasu {
            lambda1: rate(rng),
            lambda2: rate(rng),
            lambda12: rng.gen_range(0.05..2.0),
        },
        ModelFamily::Cowan => ModelParams::Cowan {
            lambda1: rate(rng),
            lambda2: rate(rng),
            theta: rng.gen_range(0.15..3.0),
        },
        ModelFamily::Sarkar => ModelParams::Sarkar {
            lambda1: rate(rng),
            lambda2: rate(rng),
            lambda12: rng.gen_range(0.05..2.0),
        },
    };
    params.validate().expect("sampled parameters are valid by construction")
}
