//! Relative errors of the four reliability measures when component
//! independence is wrongly assumed, their sign structure, asymptotes,
//! zero crossings and extrema.
//!
//! The comparator is always the independent model with the same
//! marginal rates; this is fixed, not configurable. The relative error
//! of a measure M is (M_dependent - M_independent) / M_independent, so
//! a negative error means the independence assumption over-assesses the
//! measure (OA) and a positive one means it under-assesses (UA).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{series_mrl, Gumbel2Aux, MeasureKind, RHR_T_MIN};
use crate::models::ModelParams;
use crate::numerics::{bracketed_root, minimize_scalar, CrossingReport, SolverConfig};

/// Sign structure of one relative-error curve over t in (0, inf).
///
/// `SwitchUAtoOA { threshold }` means the independent model
/// under-assesses before `threshold` and over-assesses after it.
/// `ParamDependent` is reserved for the Gumbel II reliability error,
/// whose sign is the sign of alpha: positive alpha makes it UA
/// everywhere, negative alpha OA everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignVerdict {
    Zero,
    AlwaysOA,
    AlwaysUA,
    SwitchUAtoOA { threshold: f64 },
    SwitchOAtoUA { threshold: f64 },
    ParamDependent,
}

impl std::fmt::Display for SignVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SignVerdict::Zero => write!(f, "0"),
            SignVerdict::AlwaysOA => write!(f, "OA"),
            SignVerdict::AlwaysUA => write!(f, "UA"),
            SignVerdict::SwitchUAtoOA { threshold } => {
                write!(f, "UA if t<{threshold:.6} else OA")
            }
            SignVerdict::SwitchOAtoUA { threshold } => {
                write!(f, "OA if t<{threshold:.6} else UA")
            }
            SignVerdict::ParamDependent => write!(f, "param-dependent"),
        }
    }
}

/// A sampled relative-error curve for one model/measure pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelativeErrorCurve {
    pub model: ModelParams,
    pub kind: MeasureKind,
    /// (t, error) pairs, strictly increasing in t, every error finite.
    pub samples: Vec<(f64, f64)>,
    /// Limit of the error as t -> infinity, when finite.
    pub asymptote: Option<f64>,
}

fn check_time(kind: MeasureKind, t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("time must be finite and >= 0, got {t}")));
    }
    if kind == MeasureKind::Rhr && t < RHR_T_MIN {
        return Err(Error::domain(format!(
            "reversed hazard rate error requires t >= {RHR_T_MIN:e}, got {t}"
        )));
    }
    Ok(())
}

/// (b/lambda) (e^{lambda t} - 1)/(e^{b t} - 1) - 1, the reversed hazard
/// rate error shared by all constant-hazard families with series rate b.
/// Written to stay finite for any t: the exponential ratio is folded
/// into exp((lambda - b) t) and two expm1 factors in (0, 1].
fn rhr_rate_ratio_error(lambda: f64, b: f64, t: f64) -> f64 {
    (b / lambda) * ((lambda - b) * t).exp() * ((-lambda * t).exp_m1() / (-b * t).exp_m1()) - 1.0
}

/// Relative error of `kind` at time `t` (t > 0 for the reversed hazard
/// rate). Zero-error families (Independent, Freund, and the degenerate
/// boundaries of the others) return exactly 0.
pub fn relative_error(params: &ModelParams, kind: MeasureKind, t: f64) -> Result<f64> {
    check_time(kind, t)?;
    let lambda = params.lambda();
    let v = match *params {
        ModelParams::Independent { .. } | ModelParams::Freund { .. } => 0.0,
        ModelParams::GumbelI { lambda12, .. } => {
            if lambda12 == 0.0 {
                return Ok(0.0);
            }
            match kind {
                MeasureKind::Reliability => (-lambda12 * t * t).exp_m1(),
                MeasureKind::Hazard => 2.0 * lambda12 * t / lambda,
                MeasureKind::Mrl => lambda * series_mrl(params, t)? - 1.0,
                MeasureKind::Rhr => {
                    let s = lambda * t + lambda12 * t * t;
                    (lambda + 2.0 * lambda12 * t) / lambda
                        * (-lambda12 * t * t).exp()
                        * ((-lambda * t).exp_m1() / (-s).exp_m1())
                        - 1.0
                }
            }
        }
        ModelParams::GumbelII { lambda1, lambda2, alpha } => {
            if alpha == 0.0 {
                return Ok(0.0);
            }
            let aux = Gumbel2Aux::new(alpha, lambda1, lambda2, t);
            match kind {
                MeasureKind::Reliability => aux.h - 1.0,
                MeasureKind::Hazard => -aux.h_prime / (lambda * aux.h),
                MeasureKind::Mrl => ((1.0 + alpha) - alpha * lambda * aux.g) / aux.h - 1.0,
                MeasureKind::Rhr => {
                    let e = (-lambda * t).exp();
                    let p1 = -(-lambda1 * t).exp_m1();
                    let p2 = -(-lambda2 * t).exp_m1();
                    let cdf = -(-lambda * t).exp_m1() - alpha * p1 * p2 * e;
                    (lambda * aux.h - aux.h_prime) / lambda * (-(-lambda * t).exp_m1()) / cdf - 1.0
                }
            }
        }
        ModelParams::GumbelIII { .. } => {
            let lambda3 = params.derived().lambda3.expect("gumbel3 rate");
            if lambda3 == lambda {
                return Ok(0.0);
            }
            match kind {
                MeasureKind::Reliability => ((lambda - lambda3) * t).exp_m1(),
                MeasureKind::Hazard => (lambda3 - lambda) / lambda,
                MeasureKind::Mrl => (lambda - lambda3) / lambda3,
                MeasureKind::Rhr => rhr_rate_ratio_error(lambda, lambda3, t),
            }
        }
        ModelParams::Cowan { .. } => {
            let rate = 0.5 * params.derived().alpha_star.expect("cowan rate");
            if rate == lambda {
                return Ok(0.0);
            }
            match kind {
                MeasureKind::Reliability => ((lambda - rate) * t).exp_m1(),
                MeasureKind::Hazard => rate / lambda - 1.0,
                MeasureKind::Mrl => lambda / rate - 1.0,
                MeasureKind::Rhr => rhr_rate_ratio_error(lambda, rate, t),
            }
        }
        ModelParams::MarshallOlkin { lambda12, .. }
        | ModelParams::BlockBasu { lambda12, .. }
        | ModelParams::Sarkar { lambda12, .. } => {
            if lambda12 == 0.0 {
                return Ok(0.0);
            }
            let lambda_star = lambda + lambda12;
            match kind {
                MeasureKind::Reliability => (-lambda12 * t).exp_m1(),
                MeasureKind::Hazard => lambda12 / lambda,
                MeasureKind::Mrl => -lambda12 / lambda_star,
                MeasureKind::Rhr => rhr_rate_ratio_error(lambda, lambda_star, t),
            }
        }
    };
    Ok(v)
}

/// The t -> infinity limit of the relative error, when finite.
///
/// Divergent curves (the Gumbel III and Cowan reliability and reversed
/// hazard rate errors, and the Gumbel I hazard error) return `None`.
pub fn asymptote(params: &ModelParams, kind: MeasureKind) -> Option<f64> {
    let lambda = params.lambda();
    match *params {
        ModelParams::Independent { .. } | ModelParams::Freund { .. } => Some(0.0),
        ModelParams::GumbelI { lambda12, .. } => {
            if lambda12 == 0.0 {
                return Some(0.0);
            }
            match kind {
                MeasureKind::Reliability | MeasureKind::Mrl | MeasureKind::Rhr => Some(-1.0),
                MeasureKind::Hazard => None,
            }
        }
        ModelParams::GumbelII { alpha, .. } => match kind {
            MeasureKind::Reliability | MeasureKind::Rhr => Some(alpha),
            MeasureKind::Hazard | MeasureKind::Mrl => Some(0.0),
        },
        ModelParams::GumbelIII { .. } => {
            let lambda3 = params.derived().lambda3.expect("gumbel3 rate");
            if lambda3 == lambda {
                return Some(0.0);
            }
            match kind {
                MeasureKind::Reliability | MeasureKind::Rhr => None,
                MeasureKind::Hazard => Some((lambda3 - lambda) / lambda),
                MeasureKind::Mrl => Some((lambda - lambda3) / lambda3),
            }
        }
        ModelParams::Cowan { .. } => {
            let rate = 0.5 * params.derived().alpha_star.expect("cowan rate");
            if rate == lambda {
                return Some(0.0);
            }
            match kind {
                MeasureKind::Reliability | MeasureKind::Rhr => None,
                MeasureKind::Hazard => Some(rate / lambda - 1.0),
                MeasureKind::Mrl => Some(lambda / rate - 1.0),
            }
        }
        ModelParams::MarshallOlkin { lambda12, .. }
        | ModelParams::BlockBasu { lambda12, .. }
        | ModelParams::Sarkar { lambda12, .. } => {
            if lambda12 == 0.0 {
                return Some(0.0);
            }
            match kind {
                MeasureKind::Reliability | MeasureKind::Rhr => Some(-1.0),
                MeasureKind::Hazard => Some(lambda12 / lambda),
                MeasureKind::Mrl => Some(-lambda12 / (lambda + lambda12)),
            }
        }
    }
}

/// Default search bracket (1e-6, 10/lambda), expanded geometrically by
/// the auto variants of the solvers.
pub fn default_bracket(params: &ModelParams) -> (f64, f64) {
    (1e-6, 10.0 / params.lambda())
}

const MAX_EXPANSIONS: usize = 60;

/// Sign structure of the error curve, with switch thresholds located by
/// the root finder on the default bracket.
///
/// Two facts decide cells the summary table of the source material got
/// wrong or left parameter-dependent:
///
/// * The Gumbel I MRL error lambda e_T(t) - 1 is negative already at
///   t = 0 (sqrt(pi) z erfcx(z) < 1 for every z > 0) and decreasing, so
///   it is OA everywhere; there is no sign switch.
/// * For Gumbel II the hazard, MRL and RHR verdicts flip with the sign
///   of alpha; the classification resolves them from the concrete alpha.
pub fn classify_sign(params: &ModelParams, kind: MeasureKind) -> SignVerdict {
    let lambda = params.lambda();
    match *params {
        ModelParams::Independent { .. } | ModelParams::Freund { .. } => SignVerdict::Zero,
        ModelParams::GumbelI { lambda12, .. } => {
            if lambda12 == 0.0 {
                return SignVerdict::Zero;
            }
            match kind {
                MeasureKind::Reliability => SignVerdict::AlwaysOA,
                MeasureKind::Hazard => SignVerdict::AlwaysUA,
                MeasureKind::Mrl => SignVerdict::AlwaysOA,
                MeasureKind::Rhr => SignVerdict::SwitchUAtoOA {
                    threshold: rhr_switch_threshold(params),
                },
            }
        }
        ModelParams::GumbelII { alpha, .. } => {
            if alpha == 0.0 {
                return SignVerdict::Zero;
            }
            match kind {
                MeasureKind::Reliability => SignVerdict::ParamDependent,
                MeasureKind::Hazard => {
                    if alpha > 0.0 {
                        SignVerdict::AlwaysOA
                    } else {
                        SignVerdict::AlwaysUA
                    }
                }
                MeasureKind::Mrl => {
                    if alpha > 0.0 {
                        SignVerdict::AlwaysUA
                    } else {
                        SignVerdict::AlwaysOA
                    }
                }
                MeasureKind::Rhr => {
                    let threshold = rhr_switch_threshold(params);
                    if alpha > 0.0 {
                        SignVerdict::SwitchOAtoUA { threshold }
                    } else {
                        SignVerdict::SwitchUAtoOA { threshold }
                    }
                }
            }
        }
        ModelParams::GumbelIII { .. } => {
            let lambda3 = params.derived().lambda3.expect("gumbel3 rate");
            if lambda3 == lambda {
                return SignVerdict::Zero;
            }
            match kind {
                MeasureKind::Hazard => SignVerdict::AlwaysOA,
                _ => SignVerdict::AlwaysUA,
            }
        }
        ModelParams::Cowan { .. } => {
            let rate = 0.5 * params.derived().alpha_star.expect("cowan rate");
            if rate >= lambda {
                return SignVerdict::Zero;
            }
            match kind {
                MeasureKind::Hazard => SignVerdict::AlwaysOA,
                _ => SignVerdict::AlwaysUA,
            }
        }
        ModelParams::MarshallOlkin { lambda12, .. }
        | ModelParams::BlockBasu { lambda12, .. }
        | ModelParams::Sarkar { lambda12, .. } => {
            if lambda12 == 0.0 {
                return SignVerdict::Zero;
            }
            match kind {
                MeasureKind::Hazard => SignVerdict::AlwaysUA,
                _ => SignVerdict::AlwaysOA,
            }
        }
    }
}

/// Zero crossing of the Gumbel I / Gumbel II reversed hazard rate error.
/// A crossing provably exists (the error starts out with the sign
/// opposite to its t -> infinity limit), so bracket expansion cannot
/// run off to infinity for valid parameters.
fn rhr_switch_threshold(params: &ModelParams) -> f64 {
    find_crossing_auto(params, MeasureKind::Rhr)
        .expect("RHR error of this family always has one sign change")
        .t_root
}

/// Root of the error curve inside an explicit bracket.
pub fn find_crossing(
    params: &ModelParams,
    kind: MeasureKind,
    bracket: (f64, f64),
) -> Result<CrossingReport> {
    let (lo, hi) = bracket;
    let floor = if kind == MeasureKind::Rhr { RHR_T_MIN } else { 0.0 };
    if !(lo < hi) || lo < floor {
        return Err(Error::domain(format!(
            "crossing bracket must satisfy {floor:e} <= lo < hi, got [{lo}, {hi}]"
        )));
    }
    let p = *params;
    bracketed_root(
        move |t| relative_error(&p, kind, t).expect("bracket keeps t in domain"),
        lo,
        hi,
        &SolverConfig::root(),
    )
}

/// Root of the error curve on the default bracket, expanding the upper
/// end geometrically until the ends differ in sign.
pub fn find_crossing_auto(params: &ModelParams, kind: MeasureKind) -> Result<CrossingReport> {
    let (lo, mut hi) = default_bracket(params);
    let f_lo = relative_error(params, kind, lo)?;
    let mut f_hi = relative_error(params, kind, hi)?;
    if f_lo == 0.0 && f_hi == 0.0 {
        // Identically zero curve; every point is a root and none is a
        // crossing.
        return Err(Error::Flat { lo, hi });
    }
    let mut expansions = 0;
    while f_lo.signum() == f_hi.signum() && f_lo != 0.0 && f_hi != 0.0 {
        expansions += 1;
        if expansions > MAX_EXPANSIONS {
            return Err(Error::Bracket { lo, hi, f_lo, f_hi });
        }
        hi *= 2.0;
        f_hi = relative_error(params, kind, hi)?;
    }
    find_crossing(params, kind, (lo, hi))
}

/// Scan of the error curve on an even grid over `[lo, hi]`: sampled
/// values plus the indices of the extreme samples.
struct CurveScan {
    values: Vec<f64>,
    step: f64,
    argmax: usize,
    argmin: usize,
}

fn scan_curve(params: &ModelParams, kind: MeasureKind, lo: f64, hi: f64, n: usize) -> Result<CurveScan> {
    let step = (hi - lo) / n as f64;
    let mut values = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let t = if i == n { hi } else { lo + step * i as f64 };
        values.push(relative_error(params, kind, t)?);
    }
    let mut argmax = 0;
    let mut argmin = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[argmax] {
            argmax = i;
        }
        if v < values[argmin] {
            argmin = i;
        }
    }
    Ok(CurveScan { values, step, argmax, argmin })
}

impl CurveScan {
    fn is_flat(&self) -> bool {
        let hi = self.values[self.argmax];
        let lo = self.values[self.argmin];
        hi - lo <= 1e-14 * hi.abs().max(lo.abs()).max(1.0)
    }

    /// Index of the sample with the larger prominence over both bracket
    /// ends, and whether it is a maximum. Interior extrema have index
    /// strictly inside (0, n).
    fn best_candidate(&self) -> (usize, bool) {
        let first = *self.values.first().expect("nonempty scan");
        let last = *self.values.last().expect("nonempty scan");
        let max_prom = (self.values[self.argmax] - first).min(self.values[self.argmax] - last);
        let min_prom = (first - self.values[self.argmin]).min(last - self.values[self.argmin]);
        if max_prom >= min_prom {
            (self.argmax, true)
        } else {
            (self.argmin, false)
        }
    }
}

fn refine_extremum(
    params: &ModelParams,
    kind: MeasureKind,
    bracket: (f64, f64),
    window: (f64, f64),
    maximize: bool,
) -> Result<CrossingReport> {
    let p = *params;
    let cfg = SolverConfig::extremum();
    let r = if maximize {
        let r = minimize_scalar(
            move |t| -relative_error(&p, kind, t).expect("window keeps t in domain"),
            window.0,
            window.1,
            &cfg,
        )?;
        CrossingReport {
            t_root: r.t,
            value_at_root: -r.value,
            bracket,
            iterations: r.iterations,
            residual: cfg.abs_tol,
        }
    } else {
        let r = minimize_scalar(
            move |t| relative_error(&p, kind, t).expect("window keeps t in domain"),
            window.0,
            window.1,
            &cfg,
        )?;
        CrossingReport {
            t_root: r.t,
            value_at_root: r.value,
            bracket,
            iterations: r.iterations,
            residual: cfg.abs_tol,
        }
    };
    Ok(r)
}

/// Interior extremum of the error curve inside an explicit bracket.
///
/// A grid scan decides whether the prominent feature is a minimum or a
/// maximum, then golden section refines the surrounding window. The
/// returned report carries the extremum location in `t_root`, the error
/// there in `value_at_root` and the final interval width in `residual`.
/// A constant curve yields `Error::Flat`; on a monotone curve the
/// search degenerates to the better bracket endpoint.
pub fn find_extremum(
    params: &ModelParams,
    kind: MeasureKind,
    bracket: (f64, f64),
) -> Result<CrossingReport> {
    let (lo, hi) = bracket;
    let floor = if kind == MeasureKind::Rhr { RHR_T_MIN } else { 0.0 };
    if !(lo < hi) || lo < floor {
        return Err(Error::domain(format!(
            "extremum bracket must satisfy {floor:e} <= lo < hi, got [{lo}, {hi}]"
        )));
    }
    let scan = scan_curve(params, kind, lo, hi, 128)?;
    if scan.is_flat() {
        return Err(Error::Flat { lo, hi });
    }
    let (idx, maximize) = scan.best_candidate();
    let window = if idx > 0 && idx < scan.values.len() - 1 {
        (lo + scan.step * (idx - 1) as f64, lo + scan.step * (idx + 1) as f64)
    } else {
        // No interior extremum: the curve is monotone on the bracket.
        (lo, hi)
    };
    refine_extremum(params, kind, bracket, window, maximize)
}

/// Interior extremum on the default bracket, expanding the upper end
/// geometrically while the prominent sample sits on the boundary.
pub fn find_extremum_auto(params: &ModelParams, kind: MeasureKind) -> Result<CrossingReport> {
    let (lo, mut hi) = default_bracket(params);
    for _ in 0..=MAX_EXPANSIONS {
        let scan = scan_curve(params, kind, lo, hi, 256)?;
        if scan.is_flat() {
            return Err(Error::Flat { lo, hi });
        }
        let (idx, maximize) = scan.best_candidate();
        if idx > 0 && idx < scan.values.len() - 1 {
            let window = (lo + scan.step * (idx - 1) as f64, lo + scan.step * (idx + 1) as f64);
            return refine_extremum(params, kind, (lo, hi), window, maximize);
        }
        hi *= 2.0;
    }
    Err(Error::Convergence { context: "extremum bracket expansion", budget: MAX_EXPANSIONS })
}

/// Samples the error curve on a strictly increasing grid.
///
/// The reversed hazard rate error is reported as its limit 0 at t = 0,
/// so full grids starting at zero stay usable.
pub fn sample_curve(
    params: &ModelParams,
    kind: MeasureKind,
    grid: &[f64],
) -> Result<RelativeErrorCurve> {
    let mut samples = Vec::with_capacity(grid.len());
    let mut prev = f64::NEG_INFINITY;
    for &t in grid {
        if !(t > prev) {
            return Err(Error::domain(format!(
                "curve grid must be strictly increasing, got {t} after {prev}"
            )));
        }
        prev = t;
        let err = if kind == MeasureKind::Rhr && t < RHR_T_MIN {
            0.0
        } else {
            relative_error(params, kind, t)?
        };
        if !err.is_finite() {
            return Err(Error::domain(format!(
                "relative error overflows at t = {t}; shrink the grid"
            )));
        }
        samples.push((t, err));
    }
    Ok(RelativeErrorCurve {
        model: *params,
        kind,
        samples,
        asymptote: asymptote(params, kind),
    })
}
