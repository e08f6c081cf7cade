//! Closed-form reliability measures of the two-component series system:
//! survival, hazard rate, mean residual life and reversed hazard rate.
//!
//! The system lifetime is T = min(X1, X2), so its survival curve is the
//! joint survival evaluated on the diagonal. For every family this
//! collapses to a closed form:
//!
//! | family                          | survival            | hazard          |
//! |---------------------------------|---------------------|-----------------|
//! | Independent, Freund             | e^{-lambda t}       | lambda          |
//! | Gumbel I                        | e^{-lambda t - l12 t^2} | lambda + 2 l12 t |
//! | Gumbel II                       | h(t) e^{-lambda t}  | lambda - h'/h   |
//! | Gumbel III                      | e^{-lambda3 t}      | lambda3         |
//! | Marshall-Olkin, Block-Basu, Sarkar | e^{-lambda* t}   | lambda*         |
//! | Cowan                           | e^{-(alpha*/2) t}   | alpha*/2        |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::ModelParams;
use crate::numerics::erfcx;

/// Reversed hazard rate evaluations are rejected below this time; the
/// function diverges like 1/t as t -> 0+.
pub const RHR_T_MIN: f64 = 1e-12;

/// The four reliability measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    Reliability,
    Hazard,
    Mrl,
    Rhr,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 4] = [
        MeasureKind::Reliability,
        MeasureKind::Hazard,
        MeasureKind::Mrl,
        MeasureKind::Rhr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Reliability => "reliability",
            MeasureKind::Hazard => "hazard",
            MeasureKind::Mrl => "mrl",
            MeasureKind::Rhr => "rhr",
        }
    }
}

impl std::fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reliability" => Ok(MeasureKind::Reliability),
            "hazard" => Ok(MeasureKind::Hazard),
            "mrl" => Ok(MeasureKind::Mrl),
            "rhr" => Ok(MeasureKind::Rhr),
            other => Err(Error::domain(format!(
                "unknown measure `{other}` (expected reliability, hazard, mrl or rhr)"
            ))),
        }
    }
}

/// Gumbel I auxiliary: delta(t) = lambda12 (t + lambda/(2 lambda12))^2.
///
/// Strictly increasing in t with minimum lambda^2/(4 lambda12) at t = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gumbel1Aux {
    pub delta: f64,
}

impl Gumbel1Aux {
    /// Requires lambda12 > 0.
    pub fn new(lambda: f64, lambda12: f64, t: f64) -> Self {
        let s = t + lambda / (2.0 * lambda12);
        Gumbel1Aux { delta: lambda12 * s * s }
    }
}

/// Gumbel II auxiliaries:
/// h(t)  = 1 + alpha (1 - e^{-l1 t})(1 - e^{-l2 t})
/// h'(t) = alpha [l1 e^{-l1 t}(1 - e^{-l2 t}) + l2 e^{-l2 t}(1 - e^{-l1 t})]
/// g(t)  = e^{-l1 t}/(lambda+l1) + e^{-l2 t}/(lambda+l2) - e^{-lambda t}/(2 lambda)
///
/// h' is analytic rather than numeric so the error module's root
/// finding sees exact values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gumbel2Aux {
    pub h: f64,
    pub h_prime: f64,
    pub g: f64,
}

impl Gumbel2Aux {
    pub fn new(alpha: f64, lambda1: f64, lambda2: f64, t: f64) -> Self {
        let lambda = lambda1 + lambda2;
        let e1 = (-lambda1 * t).exp();
        let e2 = (-lambda2 * t).exp();
        let p1 = -(-lambda1 * t).exp_m1();
        let p2 = -(-lambda2 * t).exp_m1();
        Gumbel2Aux {
            h: 1.0 + alpha * p1 * p2,
            h_prime: alpha * (lambda1 * e1 * p2 + lambda2 * e2 * p1),
            g: e1 / (lambda + lambda1) + e2 / (lambda + lambda2)
                - (-lambda * t).exp() / (2.0 * lambda),
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("time must be finite and >= 0, got {t}")));
    }
    Ok(())
}

fn check_rhr_time(t: f64) -> Result<()> {
    check_time(t)?;
    if t < RHR_T_MIN {
        return Err(Error::domain(format!(
            "reversed hazard rate requires t >= {RHR_T_MIN:e} (it behaves like 1/t as t -> 0+), got {t}"
        )));
    }
    Ok(())
}

/// Series-system survival P(T > t) = F(t, t).
pub fn series_survival(params: &ModelParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let lambda = params.lambda();
    let v = match *params {
        ModelParams::GumbelI { lambda12, .. } => (-lambda * t - lambda12 * t * t).exp(),
        ModelParams::GumbelII { lambda1, lambda2, alpha } => {
            Gumbel2Aux::new(alpha, lambda1, lambda2, t).h * (-lambda * t).exp()
        }
        _ => {
            let rate = params.series_rate().expect("constant-hazard family");
            (-rate * t).exp()
        }
    };
    Ok(v)
}

/// Series-system hazard rate r_T(t).
pub fn series_hazard(params: &ModelParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let lambda = params.lambda();
    let v = match *params {
        ModelParams::GumbelI { lambda12, .. } => lambda + 2.0 * lambda12 * t,
        ModelParams::GumbelII { lambda1, lambda2, alpha } => {
            let aux = Gumbel2Aux::new(alpha, lambda1, lambda2, t);
            lambda - aux.h_prime / aux.h
        }
        _ => params.series_rate().expect("constant-hazard family"),
    };
    Ok(v)
}

/// Series-system mean residual life e_T(t).
///
/// Gumbel I uses the scaled complementary error function:
/// e_T(t) = (1/2) sqrt(pi/lambda12) erfcx(sqrt(delta(t))), which equals
/// sqrt(pi/lambda12) e^{delta}(1 - Phi(sqrt(2 delta))) but stays finite
/// where e^{delta} would overflow.
pub fn series_mrl(params: &ModelParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let lambda = params.lambda();
    let v = match *params {
        ModelParams::GumbelI { lambda12, .. } => {
            if lambda12 == 0.0 {
                1.0 / lambda
            } else {
                let delta = Gumbel1Aux::new(lambda, lambda12, t).delta;
                0.5 * (std::f64::consts::PI / lambda12).sqrt() * erfcx(delta.sqrt())?
            }
        }
        ModelParams::GumbelII { lambda1, lambda2, alpha } => {
            let aux = Gumbel2Aux::new(alpha, lambda1, lambda2, t);
            ((1.0 + alpha) / lambda - alpha * aux.g) / aux.h
        }
        _ => 1.0 / params.series_rate().expect("constant-hazard family"),
    };
    Ok(v)
}

/// Series-system reversed hazard rate mu_T(t) = f_T(t) / F_T(t), t > 0.
///
/// Every branch evaluates r_T(t) * S(t) / (1 - S(t)) with 1 - S written
/// through expm1, which neither overflows at large t nor cancels at
/// small t.
pub fn series_rhr(params: &ModelParams, t: f64) -> Result<f64> {
    check_rhr_time(t)?;
    let lambda = params.lambda();
    let v = match *params {
        ModelParams::GumbelI { lambda12, .. } => {
            let s = lambda * t + lambda12 * t * t;
            (lambda + 2.0 * lambda12 * t) * (-s).exp() / -(-s).exp_m1()
        }
        ModelParams::GumbelII { lambda1, lambda2, alpha } => {
            let aux = Gumbel2Aux::new(alpha, lambda1, lambda2, t);
            let e = (-lambda * t).exp();
            let p1 = -(-lambda1 * t).exp_m1();
            let p2 = -(-lambda2 * t).exp_m1();
            // F_T(t) = 1 - h e^{-lambda t}
            let cdf = -(-lambda * t).exp_m1() - alpha * p1 * p2 * e;
            (lambda * aux.h - aux.h_prime) * e / cdf
        }
        _ => {
            let rate = params.series_rate().expect("constant-hazard family");
            rate * (-rate * t).exp() / -(-rate * t).exp_m1()
        }
    };
    Ok(v)
}

/// Dispatch by measure kind.
pub fn measure(params: &ModelParams, kind: MeasureKind, t: f64) -> Result<f64> {
    match kind {
        MeasureKind::Reliability => series_survival(params, t),
        MeasureKind::Hazard => series_hazard(params, t),
        MeasureKind::Mrl => series_mrl(params, t),
        MeasureKind::Rhr => series_rhr(params, t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ModelParams;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
    }

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn survival_is_one_at_zero() {
        for p in crate::models::tests::representative() {
            assert_eq!(series_survival(&p, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn gumbel1_survival_direct() {
        let p = ModelParams::gumbel_i(1.0, 1.0, 1.0).unwrap();
        let v = series_survival(&p, 1.0).unwrap();
        assert!(rel_close(v, (-3.0_f64).exp(), 1e-15), "{v}");
    }

    #[test]
    fn freund_thetas_drop_out() {
        let p = ModelParams::freund(1.0, 1.0, 0.5, 0.5).unwrap();
        let v = series_survival(&p, 1.0).unwrap();
        assert!(rel_close(v, (-2.0_f64).exp(), 1e-15), "{v}");
        let q = ModelParams::freund(1.0, 1.0, 1.7, 0.2).unwrap();
        assert_eq!(series_survival(&q, 1.0).unwrap(), v);
    }

    #[test]
    fn gumbel1_hazard_is_affine() {
        let p = ModelParams::gumbel_i(1.0, 1.0, 1.0).unwrap();
        assert_eq!(series_hazard(&p, 2.0).unwrap(), 6.0);
    }

    #[test]
    fn cowan_at_pi_has_lambda_hazard() {
        let p = ModelParams::cowan(1.0, 1.0, std::f64::consts::PI).unwrap();
        for &t in &[0.0, 1.0, 7.3] {
            assert_eq!(series_hazard(&p, t).unwrap(), 2.0);
        }
    }

    #[test]
    fn gumbel2_hazard_at_ln2_is_16_over_9() {
        // h = 1.125, h' = 0.25 at t = ln 2 for alpha = 0.5, l1 = l2 = 1.
        let p = ModelParams::gumbel_ii(1.0, 1.0, 0.5).unwrap();
        let v = series_hazard(&p, LN2).unwrap();
        assert!(rel_close(v, 16.0 / 9.0, 1e-14), "{v}");
    }

    #[test]
    fn constant_hazard_mrl() {
        let p = ModelParams::marshall_olkin(1.0, 1.0, 1.0).unwrap();
        for &t in &[0.0, 0.7, 4.0] {
            assert!(rel_close(series_mrl(&p, t).unwrap(), 1.0 / 3.0, 1e-15));
        }
        let p = ModelParams::cowan(1.0, 1.0, std::f64::consts::FRAC_PI_2).unwrap();
        let expected = 2.0 / (2.0 + std::f64::consts::SQRT_2);
        assert!(rel_close(series_mrl(&p, 1.0).unwrap(), expected, 1e-14));
    }

    #[test]
    fn gumbel1_mrl_matches_quadrature_value() {
        // int_0^inf e^{-2x - x^2} dx, frozen from a 40-digit evaluation.
        let p = ModelParams::gumbel_i(1.0, 1.0, 1.0).unwrap();
        let v = series_mrl(&p, 0.0).unwrap();
        assert!(rel_close(v, 0.378_936_078_070_656_05, 1e-13), "{v}");
        let v1 = series_mrl(&p, 1.0).unwrap();
        assert!(rel_close(v1, 0.226_338_524_990_587_29, 1e-13), "{v1}");
        let v25 = series_mrl(&p, 2.5).unwrap();
        assert!(rel_close(v25, 0.137_625_418_952_589_84, 1e-13), "{v25}");
    }

    #[test]
    fn gumbel1_mrl_survives_huge_t() {
        // delta(100) is 10404; the naive e^{delta} form overflows.
        let p = ModelParams::gumbel_i(1.0, 1.0, 1.0).unwrap();
        let v = series_mrl(&p, 100.0).unwrap();
        assert!(v.is_finite() && v > 0.0);
        // MRL ~ 1/r(t) = 1/202 for large t.
        assert!(rel_close(v, 1.0 / 202.0, 1e-3), "{v}");
    }

    #[test]
    fn gumbel1_zero_coupling_mrl_is_exponential() {
        let p = ModelParams::gumbel_i(1.0, 1.0, 0.0).unwrap();
        assert_eq!(series_mrl(&p, 2.0).unwrap(), 0.5);
    }

    #[test]
    fn gumbel1_mrl_stable_form_equals_gaussian_tail_form() {
        // sqrt(pi/l12) e^{delta} (1 - Phi(sqrt(2 delta))) is computable
        // up to delta ~ 700; the erfcx form must agree there.
        use crate::numerics::std_normal_cdf;
        for &(lambda1, lambda2, lambda12) in &[(1.0, 1.0, 1.0), (0.4, 1.7, 0.3), (2.0, 2.0, 3.5)] {
            let p = ModelParams::gumbel_i(lambda1, lambda2, lambda12).unwrap();
            let lambda = lambda1 + lambda2;
            for &t in &[0.0, 0.5, 2.0, 10.0] {
                let delta = Gumbel1Aux::new(lambda, lambda12, t).delta;
                assert!(delta <= 700.0);
                // 1 - Phi(z) written as Phi(-z) to keep the reference
                // itself cancellation-free.
                let naive = (std::f64::consts::PI / lambda12).sqrt()
                    * delta.exp()
                    * std_normal_cdf(-(2.0 * delta).sqrt()).unwrap();
                let stable = series_mrl(&p, t).unwrap();
                assert!(
                    rel_close(stable, naive, 1e-12),
                    "l12={lambda12} t={t}: {stable:e} vs {naive:e}"
                );
            }
        }
    }

    #[test]
    fn gumbel2_measures_at_ln2_exact_rationals() {
        let p = ModelParams::gumbel_ii(1.0, 1.0, 0.5).unwrap();
        assert!(rel_close(series_survival(&p, LN2).unwrap(), 0.28125, 1e-15));
        assert!(rel_close(series_mrl(&p, LN2).unwrap(), 59.0 / 108.0, 1e-14));
        assert!(rel_close(series_rhr(&p, LN2).unwrap(), 16.0 / 23.0, 1e-14));
    }

    #[test]
    fn gumbel2_half_rates_mrl_value() {
        // Frozen from the closed form checked against quadrature.
        let p = ModelParams::gumbel_ii(0.5, 0.5, 0.5).unwrap();
        let v = series_mrl(&p, 1.0).unwrap();
        assert!(rel_close(v, 1.102_288_935_818_592_4, 1e-13), "{v}");
    }

    #[test]
    fn independent_rhr_direct() {
        let p = ModelParams::independent(1.0, 1.0).unwrap();
        let v = series_rhr(&p, LN2).unwrap();
        assert!(rel_close(v, 2.0 / 3.0, 1e-14), "{v}");
    }

    #[test]
    fn gumbel1_and_sarkar_rhr_direct() {
        let p = ModelParams::gumbel_i(1.0, 1.0, 1.0).unwrap();
        let v = series_rhr(&p, 1.0).unwrap();
        assert!(rel_close(v, 0.209_582_785_965_023_81, 1e-13), "{v}");
        let p = ModelParams::sarkar(1.0, 1.0, 1.0).unwrap();
        let v = series_rhr(&p, 1.0).unwrap();
        assert!(rel_close(v, 0.157_187_089_473_767_86, 1e-13), "{v}");
    }

    #[test]
    fn rhr_rejects_nonpositive_time() {
        let p = ModelParams::independent(1.0, 1.0).unwrap();
        assert!(series_rhr(&p, 0.0).is_err());
        assert!(series_rhr(&p, -1.0).is_err());
        assert!(series_rhr(&p, 1e-13).is_err());
    }

    #[test]
    fn rhr_is_stable_at_extremes() {
        let p = ModelParams::independent(1.0, 1.0).unwrap();
        // near the lower domain edge mu ~ 1/t
        let v = series_rhr(&p, 1e-12).unwrap();
        assert!(rel_close(v, 1e12, 1e-6), "{v}");
        // far tail: decays like lambda e^{-lambda t}, no overflow
        let v = series_rhr(&p, 360.0).unwrap();
        assert!(v > 0.0 && v < 1e-300, "{v}");
    }

    #[test]
    fn measures_reject_negative_time() {
        let p = ModelParams::independent(1.0, 1.0).unwrap();
        assert!(series_survival(&p, -0.5).is_err());
        assert!(series_hazard(&p, f64::NAN).is_err());
        assert!(series_mrl(&p, -1e-9).is_err());
    }

    #[test]
    fn gumbel2_aux_invariants() {
        let alpha = 0.5;
        let aux0 = Gumbel2Aux::new(alpha, 1.0, 1.0, 0.0);
        assert_eq!(aux0.h, 1.0);
        let mut prev = aux0.h;
        for i in 1..=60 {
            let t = 0.2 * i as f64;
            let aux = Gumbel2Aux::new(alpha, 1.0, 1.0, t);
            assert!(aux.h > 0.0 && aux.h < 2.0);
            assert!(aux.h >= prev, "h not increasing for alpha > 0 at t={t}");
            assert!(aux.h_prime >= 0.0, "h' sign must follow alpha");
            prev = aux.h;
        }
        let aux_inf = Gumbel2Aux::new(alpha, 1.0, 1.0, 700.0);
        assert!((aux_inf.h - 1.5).abs() < 1e-12);

        let aux_neg = Gumbel2Aux::new(-0.5, 1.0, 1.0, 1.0);
        assert!(aux_neg.h_prime < 0.0);
    }

    #[test]
    fn gumbel1_aux_invariants() {
        let lambda = 2.0;
        let lambda12 = 1.0;
        let floor = lambda * lambda / (4.0 * lambda12);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=50 {
            let t = 0.1 * i as f64;
            let delta = Gumbel1Aux::new(lambda, lambda12, t).delta;
            assert!(delta >= floor - 1e-15);
            assert!(delta > prev);
            prev = delta;
        }
    }
}
