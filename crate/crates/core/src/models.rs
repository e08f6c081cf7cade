//! The nine joint lifetime models, their parameter domains and the
//! joint survival surface.
//!
//! Validation is strict at construction: every operation downstream of
//! [`ModelParams::validate`] may assume the invariants hold, which keeps
//! the numerical kernels branch-free. All types are immutable `Copy`
//! data; evaluation is pure and thread-safe.

use serde::Serialize;

use crate::error::{Error, Result};

/// Validated parameters of one bivariate exponential lifetime model.
///
/// Serializes to a flat JSON document tagged by `model`, e.g.
/// `{"model":"gumbel2","lambda1":1.0,"lambda2":1.0,"alpha":0.5}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model")]
pub enum ModelParams {
    #[serde(rename = "independent")]
    Independent { lambda1: f64, lambda2: f64 },
    #[serde(rename = "gumbel1")]
    GumbelI { lambda1: f64, lambda2: f64, lambda12: f64 },
    #[serde(rename = "gumbel2")]
    GumbelII { lambda1: f64, lambda2: f64, alpha: f64 },
    #[serde(rename = "gumbel3")]
    GumbelIII { lambda1: f64, lambda2: f64, m: f64 },
    #[serde(rename = "freund")]
    Freund { lambda1: f64, lambda2: f64, theta1: f64, theta2: f64 },
    #[serde(rename = "marshall-olkin")]
    MarshallOlkin { lambda1: f64, lambda2: f64, lambda12: f64 },
    #[serde(rename = "block-basu")]
    BlockBasu { lambda1: f64, lambda2: f64, lambda12: f64 },
    #[serde(rename = "cowan")]
    Cowan { lambda1: f64, lambda2: f64, theta: f64 },
    #[serde(rename = "sarkar")]
    Sarkar { lambda1: f64, lambda2: f64, lambda12: f64 },
}

/// The model families, used for CLI parsing and parameter sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelFamily {
    Independent,
    GumbelI,
    GumbelII,
    GumbelIII,
    Freund,
    MarshallOlkin,
    BlockBasu,
    Cowan,
    Sarkar,
}

impl ModelFamily {
    pub const ALL: [ModelFamily; 9] = [
        ModelFamily::Independent,
        ModelFamily::GumbelI,
        ModelFamily::GumbelII,
        ModelFamily::GumbelIII,
        ModelFamily::Freund,
        ModelFamily::MarshallOlkin,
        ModelFamily::BlockBasu,
        ModelFamily::Cowan,
        ModelFamily::Sarkar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelFamily::Independent => "independent",
            ModelFamily::GumbelI => "gumbel1",
            ModelFamily::GumbelII => "gumbel2",
            ModelFamily::GumbelIII => "gumbel3",
            ModelFamily::Freund => "freund",
            ModelFamily::MarshallOlkin => "marshall-olkin",
            ModelFamily::BlockBasu => "block-basu",
            ModelFamily::Cowan => "cowan",
            ModelFamily::Sarkar => "sarkar",
        }
    }
}

impl std::fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ModelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "independent" => Ok(ModelFamily::Independent),
            "gumbel1" => Ok(ModelFamily::GumbelI),
            "gumbel2" => Ok(ModelFamily::GumbelII),
            "gumbel3" => Ok(ModelFamily::GumbelIII),
            "freund" => Ok(ModelFamily::Freund),
            "marshall-olkin" => Ok(ModelFamily::MarshallOlkin),
            "block-basu" => Ok(ModelFamily::BlockBasu),
            "cowan" => Ok(ModelFamily::Cowan),
            "sarkar" => Ok(ModelFamily::Sarkar),
            other => Err(Error::domain(format!(
                "unknown model `{other}` (expected one of: independent, gumbel1, gumbel2, gumbel3, freund, marshall-olkin, block-basu, cowan, sarkar)"
            ))),
        }
    }
}

/// Rates derived from the raw parameters.
///
/// `lambda` is always `lambda1 + lambda2`; the other fields are present
/// only for the families that define them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedRates {
    /// lambda1 + lambda2.
    pub lambda: f64,
    /// lambda + lambda12 (Marshall-Olkin, Block-Basu, Sarkar).
    pub lambda_star: Option<f64>,
    /// (lambda1^m + lambda2^m)^(1/m) (Gumbel III).
    pub lambda3: Option<f64>,
    /// lambda + sqrt(lambda1^2 + lambda2^2 - 2 lambda1 lambda2 cos theta) (Cowan).
    pub alpha_star: Option<f64>,
}

fn require_finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::domain(format!("{name} must be finite, got {v}")));
    }
    Ok(())
}

fn require_rate(model: &str, name: &str, v: f64) -> Result<()> {
    require_finite(name, v)?;
    if v <= 0.0 {
        return Err(Error::domain(format!("{model} {name} must be > 0, got {v}")));
    }
    Ok(())
}

impl ModelParams {
    /// Checks every parameter constraint of the variant and returns the
    /// params unchanged. The error message names the violated constraint.
    pub fn validate(self) -> Result<Self> {
        match self {
            ModelParams::Independent { lambda1, lambda2 } => {
                require_rate("Independent", "lambda1", lambda1)?;
                require_rate("Independent", "lambda2", lambda2)?;
            }
            ModelParams::GumbelI { lambda1, lambda2, lambda12 } => {
                require_rate("GumbelI", "lambda1", lambda1)?;
                require_rate("GumbelI", "lambda2", lambda2)?;
                require_finite("lambda12", lambda12)?;
                if !(0.0..=lambda1 * lambda2).contains(&lambda12) {
                    return Err(Error::domain(format!(
                        "GumbelI lambda12 out of [0, lambda1*lambda2] = [0, {}], got {lambda12}",
                        lambda1 * lambda2
                    )));
                }
            }
            ModelParams::GumbelII { lambda1, lambda2, alpha } => {
                require_rate("GumbelII", "lambda1", lambda1)?;
                require_rate("GumbelII", "lambda2", lambda2)?;
                require_finite("alpha", alpha)?;
                if alpha.abs() >= 1.0 {
                    return Err(Error::domain(format!(
                        "GumbelII alpha out of (-1,1), got {alpha}"
                    )));
                }
            }
            ModelParams::GumbelIII { lambda1, lambda2, m } => {
                require_rate("GumbelIII", "lambda1", lambda1)?;
                require_rate("GumbelIII", "lambda2", lambda2)?;
                require_finite("m", m)?;
                if m < 1.0 {
                    return Err(Error::domain(format!("GumbelIII m must be >= 1, got {m}")));
                }
            }
            ModelParams::Freund { lambda1, lambda2, theta1, theta2 } => {
                require_rate("Freund", "lambda1", lambda1)?;
                require_rate("Freund", "lambda2", lambda2)?;
                require_rate("Freund", "theta1", theta1)?;
                require_rate("Freund", "theta2", theta2)?;
                let lambda = lambda1 + lambda2;
                // The joint survival has lambda - theta_i denominators;
                // no limiting form is defined for theta_i == lambda.
                if theta1 == lambda {
                    return Err(Error::domain(format!(
                        "Freund theta1 must differ from lambda1+lambda2 = {lambda}"
                    )));
                }
                if theta2 == lambda {
                    return Err(Error::domain(format!(
                        "Freund theta2 must differ from lambda1+lambda2 = {lambda}"
                    )));
                }
            }
            ModelParams::MarshallOlkin { lambda1, lambda2, lambda12 } => {
                require_rate("MarshallOlkin", "lambda1", lambda1)?;
                require_rate("MarshallOlkin", "lambda2", lambda2)?;
                require_rate("MarshallOlkin", "lambda12", lambda12)?;
            }
            ModelParams::BlockBasu { lambda1, lambda2, lambda12 } => {
                require_rate("BlockBasu", "lambda1", lambda1)?;
                require_rate("BlockBasu", "lambda2", lambda2)?;
                require_finite("lambda12", lambda12)?;
                if lambda12 < 0.0 {
                    return Err(Error::domain(format!(
                        "BlockBasu lambda12 must be >= 0, got {lambda12}"
                    )));
                }
            }
            ModelParams::Cowan { lambda1, lambda2, theta } => {
                require_rate("Cowan", "lambda1", lambda1)?;
                require_rate("Cowan", "lambda2", lambda2)?;
                require_finite("theta", theta)?;
                if !(theta > 0.0 && theta <= std::f64::consts::PI) {
                    return Err(Error::domain(format!(
                        "Cowan theta out of (0, pi], got {theta}"
                    )));
                }
            }
            ModelParams::Sarkar { lambda1, lambda2, lambda12 } => {
                require_rate("Sarkar", "lambda1", lambda1)?;
                require_rate("Sarkar", "lambda2", lambda2)?;
                // nu = lambda12 / (lambda1 + lambda2) must be > 0.
                require_rate("Sarkar", "lambda12", lambda12)?;
            }
        }
        Ok(self)
    }

    pub fn family(&self) -> ModelFamily {
        match self {
            ModelParams::Independent { .. } => ModelFamily::Independent,
            ModelParams::GumbelI { .. } => ModelFamily::GumbelI,
            ModelParams::GumbelII { .. } => ModelFamily::GumbelII,
            ModelParams::GumbelIII { .. } => ModelFamily::GumbelIII,
            ModelParams::Freund { .. } => ModelFamily::Freund,
            ModelParams::MarshallOlkin { .. } => ModelFamily::MarshallOlkin,
            ModelParams::BlockBasu { .. } => ModelFamily::BlockBasu,
            ModelParams::Cowan { .. } => ModelFamily::Cowan,
            ModelParams::Sarkar { .. } => ModelFamily::Sarkar,
        }
    }

    /// Marginal rates (lambda1, lambda2).
    pub fn marginal_rates(&self) -> (f64, f64) {
        match *self {
            ModelParams::Independent { lambda1, lambda2 }
            | ModelParams::GumbelI { lambda1, lambda2, .. }
            | ModelParams::GumbelII { lambda1, lambda2, .. }
            | ModelParams::GumbelIII { lambda1, lambda2, .. }
            | ModelParams::Freund { lambda1, lambda2, .. }
            | ModelParams::MarshallOlkin { lambda1, lambda2, .. }
            | ModelParams::BlockBasu { lambda1, lambda2, .. }
            | ModelParams::Cowan { lambda1, lambda2, .. }
            | ModelParams::Sarkar { lambda1, lambda2, .. } => (lambda1, lambda2),
        }
    }

    /// The independent model with the same marginal rates; this is the
    /// comparator every relative error is taken against.
    pub fn independent_counterpart(&self) -> ModelParams {
        let (lambda1, lambda2) = self.marginal_rates();
        ModelParams::Independent { lambda1, lambda2 }
    }

    /// lambda1 + lambda2.
    pub fn lambda(&self) -> f64 {
        let (l1, l2) = self.marginal_rates();
        l1 + l2
    }

    /// Derived rates for the variant.
    pub fn derived(&self) -> DerivedRates {
        let lambda = self.lambda();
        let mut rates = DerivedRates { lambda, lambda_star: None, lambda3: None, alpha_star: None };
        match *self {
            ModelParams::MarshallOlkin { lambda12, .. }
            | ModelParams::BlockBasu { lambda12, .. }
            | ModelParams::Sarkar { lambda12, .. } => {
                rates.lambda_star = Some(lambda + lambda12);
            }
            ModelParams::GumbelIII { lambda1, lambda2, m } => {
                let lambda3 = if m == 1.0 {
                    lambda
                } else {
                    (lambda1.powf(m) + lambda2.powf(m)).powf(1.0 / m)
                };
                rates.lambda3 = Some(lambda3);
            }
            ModelParams::Cowan { lambda1, lambda2, theta } => {
                rates.alpha_star = Some(lambda + cowan_radical(lambda1, lambda2, theta));
            }
            _ => {}
        }
        rates
    }

    /// Constant series hazard rate for the families that have one
    /// (everything except Gumbel I and Gumbel II).
    pub fn series_rate(&self) -> Option<f64> {
        let d = self.derived();
        match self {
            ModelParams::Independent { .. } | ModelParams::Freund { .. } => Some(d.lambda),
            ModelParams::GumbelIII { .. } => d.lambda3,
            ModelParams::MarshallOlkin { .. } | ModelParams::BlockBasu { .. } | ModelParams::Sarkar { .. } => {
                d.lambda_star
            }
            ModelParams::Cowan { .. } => d.alpha_star.map(|a| 0.5 * a),
            ModelParams::GumbelI { .. } | ModelParams::GumbelII { .. } => None,
        }
    }

    /// Joint survival P(X1 > x1, X2 > x2).
    pub fn joint_survival(&self, x1: f64, x2: f64) -> Result<f64> {
        if !(x1 >= 0.0) || !(x2 >= 0.0) || !x1.is_finite() || !x2.is_finite() {
            return Err(Error::domain(format!(
                "joint_survival requires finite x1, x2 >= 0, got ({x1}, {x2})"
            )));
        }
        let v = match *self {
            ModelParams::Independent { lambda1, lambda2 } => {
                (-lambda1 * x1 - lambda2 * x2).exp()
            }
            ModelParams::GumbelI { lambda1, lambda2, lambda12 } => {
                (-lambda1 * x1 - lambda2 * x2 - lambda12 * x1 * x2).exp()
            }
            ModelParams::GumbelII { lambda1, lambda2, alpha } => {
                let p1 = -(-lambda1 * x1).exp_m1();
                let p2 = -(-lambda2 * x2).exp_m1();
                (1.0 + alpha * p1 * p2) * (-lambda1 * x1 - lambda2 * x2).exp()
            }
            ModelParams::GumbelIII { lambda1, lambda2, m } => {
                if m == 1.0 {
                    (-(lambda1 * x1 + lambda2 * x2)).exp()
                } else {
                    (-((lambda1 * x1).powf(m) + (lambda2 * x2).powf(m)).powf(1.0 / m)).exp()
                }
            }
            ModelParams::Freund { lambda1, lambda2, theta1, theta2 } => {
                let lambda = lambda1 + lambda2;
                // Diagonal points take the x1 <= x2 branch; both branches
                // agree there (the thetas cancel).
                if x1 <= x2 {
                    lambda1 / (lambda - theta2) * (-(lambda - theta2) * x1 - theta2 * x2).exp()
                        + (lambda2 - theta2) / (lambda - theta2) * (-lambda * x2).exp()
                } else {
                    lambda2 / (lambda - theta1) * (-(lambda - theta1) * x2 - theta1 * x1).exp()
                        + (lambda1 - theta1) / (lambda - theta1) * (-lambda * x1).exp()
                }
            }
            ModelParams::MarshallOlkin { lambda1, lambda2, lambda12 } => {
                (-lambda1 * x1 - lambda2 * x2 - lambda12 * x1.max(x2)).exp()
            }
            ModelParams::BlockBasu { lambda1, lambda2, lambda12 } => {
                let lambda = lambda1 + lambda2;
                let lambda_star = lambda + lambda12;
                lambda_star / lambda
                    * (-lambda1 * x1 - lambda2 * x2 - lambda12 * x1.max(x2)).exp()
                    - lambda12 / lambda * (-lambda_star * x1.max(x2)).exp()
            }
            ModelParams::Cowan { lambda1, lambda2, theta } => {
                let radical = (sq(lambda1 * x1 - lambda2 * x2)
                    + 2.0 * lambda1 * lambda2 * x1 * x2 * (1.0 - theta.cos()))
                .max(0.0)
                .sqrt();
                (-0.5 * (lambda1 * x1 + lambda2 * x2 + radical)).exp()
            }
            ModelParams::Sarkar { lambda1, lambda2, lambda12 } => {
                let nu = lambda12 / (lambda1 + lambda2);
                if x1 < x2 {
                    // p < q, q > 0 since x2 > x1 >= 0
                    let p = -(-lambda1 * x1).exp_m1();
                    let q = -(-lambda1 * x2).exp_m1();
                    (-(lambda2 + lambda12) * x2).exp() * (1.0 - p * (p / q).powf(nu))
                } else if x1 == 0.0 {
                    // x1 == x2 == 0
                    1.0
                } else {
                    // 0 <= x2 <= x1, diagonal included
                    let p = -(-lambda2 * x2).exp_m1();
                    let term = if x1 == x2 {
                        p
                    } else {
                        let q = -(-lambda2 * x1).exp_m1();
                        p * (p / q).powf(nu)
                    };
                    (-(lambda1 + lambda12) * x1).exp() * (1.0 - term)
                }
            }
        };
        Ok(v)
    }

    pub fn independent(lambda1: f64, lambda2: f64) -> Result<Self> {
        ModelParams::Independent { lambda1, lambda2 }.validate()
    }
    pub fn gumbel_i(lambda1: f64, lambda2: f64, lambda12: f64) -> Result<Self> {
        ModelParams::GumbelI { lambda1, lambda2, lambda12 }.validate()
    }
    pub fn gumbel_ii(lambda1: f64, lambda2: f64, alpha: f64) -> Result<Self> {
        ModelParams::GumbelII { lambda1, lambda2, alpha }.validate()
    }
    pub fn gumbel_iii(lambda1: f64, lambda2: f64, m: f64) -> Result<Self> {
        ModelParams::GumbelIII { lambda1, lambda2, m }.validate()
    }
    pub fn freund(lambda1: f64, lambda2: f64, theta1: f64, theta2: f64) -> Result<Self> {
        ModelParams::Freund { lambda1, lambda2, theta1, theta2 }.validate()
    }
    pub fn marshall_olkin(lambda1: f64, lambda2: f64, lambda12: f64) -> Result<Self> {
        ModelParams::MarshallOlkin { lambda1, lambda2, lambda12 }.validate()
    }
    pub fn block_basu(lambda1: f64, lambda2: f64, lambda12: f64) -> Result<Self> {
        ModelParams::BlockBasu { lambda1, lambda2, lambda12 }.validate()
    }
    pub fn cowan(lambda1: f64, lambda2: f64, theta: f64) -> Result<Self> {
        ModelParams::Cowan { lambda1, lambda2, theta }.validate()
    }
    pub fn sarkar(lambda1: f64, lambda2: f64, lambda12: f64) -> Result<Self> {
        ModelParams::Sarkar { lambda1, lambda2, lambda12 }.validate()
    }

    /// Parses the flat JSON document. Unknown fields are an error, as
    /// are missing ones; the result is validated.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::domain(format!("invalid JSON model spec: {e}")))?;
        Self::from_json_value(&value)
    }

    /// Same as [`ModelParams::from_json`] but over an already parsed value.
    pub fn from_json_value(value: &serde_json::Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::domain("model spec must be a JSON object"))?;
        let model = obj
            .get("model")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::domain("model spec needs a string `model` field"))?;
        let family: ModelFamily = model.parse()?;

        let fields: &[&str] = match family {
            ModelFamily::Independent => &["lambda1", "lambda2"],
            ModelFamily::GumbelI | ModelFamily::MarshallOlkin | ModelFamily::BlockBasu | ModelFamily::Sarkar => {
                &["lambda1", "lambda2", "lambda12"]
            }
            ModelFamily::GumbelII => &["lambda1", "lambda2", "alpha"],
            ModelFamily::GumbelIII => &["lambda1", "lambda2", "m"],
            ModelFamily::Freund => &["lambda1", "lambda2", "theta1", "theta2"],
            ModelFamily::Cowan => &["lambda1", "lambda2", "theta"],
        };

        for key in obj.keys() {
            if key != "model" && !fields.contains(&key.as_str()) {
                return Err(Error::domain(format!(
                    "unknown field `{key}` for model `{model}`"
                )));
            }
        }
        let get = |name: &str| -> Result<f64> {
            obj.get(name)
                .and_then(|v| v.as_f64())
                .ok_or_else(|| Error::domain(format!("model `{model}` needs numeric field `{name}`")))
        };

        let params = match family {
            ModelFamily::Independent => ModelParams::Independent {
                lambda1: get("lambda1")?,
                lambda2: get("lambda2")?,
            },
            ModelFamily::GumbelI => ModelParams::GumbelI {
                lambda1: get("lambda1")?,
                lambda2: get("lambda2")?,
                lambda12: get("lambda12")?,
            },
            ModelFamily::GumbelII => ModelParams::GumbelII {
                lambda1: get("lambda1")?,
                lambda2: get("lambda2")?,
                alpha: get("alpha")?,
            },
            ModelFamily::GumbelIII => ModelParams::GumbelIII {
                lambda1: get("lambda1")?,
                lambda2: get("lambda2")?,
                m: get("m")?,
            },
            ModelFamily::Freund => ModelParams::Freund {
                lambda1: get("lambda1")?,
                lambda2: get("lambda2")?,
                theta1: get("theta1")?,
                theta2: get("theta2")?,
            },
            ModelFamily::MarshallOlkin => ModelParams::MarshallOlkin {
                lambda1: get("lambda1")?,
                lambda2: get("lambda2")?,
                lambda12: get("lambda12")?,
            },
            ModelFamily::BlockBasu => ModelParams::BlockBasu {
                lambda1: get("lambda1")?,
                lambda2: get("lambda2")?,
                lambda12: get("lambda12")?,
            },
            ModelFamily::Cowan => ModelParams::Cowan {
                lambda1: get("lambda1")?,
                lambda2: get("lambda2")?,
                theta: get("theta")?,
            },
            ModelFamily::Sarkar => ModelParams::Sarkar {
                lambda1: get("lambda1")?,
                lambda2: get("lambda2")?,
                lambda12: get("lambda12")?,
            },
        };
        params.validate()
    }

    /// JSON document form of the parameters.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("ModelParams serialization cannot fail")
    }
}

#[inline]
fn sq(x: f64) -> f64 {
    x * x
}

/// sqrt(lambda1^2 + lambda2^2 - 2 lambda1 lambda2 cos(theta)), computed
/// as sqrt((l1-l2)^2 + 2 l1 l2 (1-cos theta)) so the argument cannot go
/// negative through rounding.
pub(crate) fn cowan_radical(lambda1: f64, lambda2: f64, theta: f64) -> f64 {
    (sq(lambda1 - lambda2) + 2.0 * lambda1 * lambda2 * (1.0 - theta.cos())).sqrt()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn validation_accepts_paper_example() {
        assert!(ModelParams::gumbel_ii(1.0, 1.0, 0.5).is_ok());
    }

    #[test]
    fn validation_rejects_alpha_out_of_range() {
        let err = ModelParams::gumbel_ii(1.0, 1.0, 1.5).unwrap_err();
        assert!(err.to_string().contains("alpha out of (-1,1)"), "{err}");
    }

    #[test]
    fn validation_rejects_gumbel1_lambda12_above_product() {
        let err = ModelParams::gumbel_i(1.0, 1.0, 2.0).unwrap_err();
        assert!(err.to_string().contains("lambda12"), "{err}");
    }

    #[test]
    fn validation_edge_cases() {
        // Boundary values that are legal:
        assert!(ModelParams::gumbel_i(1.0, 2.0, 0.0).is_ok());
        assert!(ModelParams::gumbel_i(1.0, 2.0, 2.0).is_ok());
        assert!(ModelParams::gumbel_iii(1.0, 1.0, 1.0).is_ok());
        assert!(ModelParams::block_basu(1.0, 1.0, 0.0).is_ok());
        assert!(ModelParams::cowan(1.0, 1.0, std::f64::consts::PI).is_ok());
        // ... and illegal ones:
        assert!(ModelParams::independent(0.0, 1.0).is_err());
        assert!(ModelParams::gumbel_iii(1.0, 1.0, 0.99).is_err());
        assert!(ModelParams::marshall_olkin(1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::sarkar(1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::cowan(1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::cowan(1.0, 1.0, 3.2).is_err());
        assert!(ModelParams::freund(1.0, 1.0, 2.0, 0.5).is_err());
        assert!(ModelParams::freund(1.0, 1.0, 0.5, 2.0).is_err());
        assert!(ModelParams::independent(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn survival_is_one_at_origin() {
        for p in representative() {
            assert_eq!(p.joint_survival(0.0, 0.0).unwrap(), 1.0, "{:?}", p.family());
        }
    }

    #[test]
    fn marshall_olkin_direct_substitution() {
        let p = ModelParams::marshall_olkin(1.0, 1.0, 1.0).unwrap();
        let v = p.joint_survival(1.0, 1.0).unwrap();
        assert!(rel_close(v, (-3.0_f64).exp(), 1e-15), "{v}");
    }

    #[test]
    fn sarkar_diagonal_collapses() {
        let p = ModelParams::sarkar(1.0, 1.0, 1.0).unwrap();
        for &t in &[0.1, 0.5, 1.0, 2.0, 5.0] {
            let v = p.joint_survival(t, t).unwrap();
            assert!(rel_close(v, (-3.0 * t).exp(), 1e-14), "t={t}: {v}");
        }
    }

    #[test]
    fn sarkar_axes_reduce_to_marginals() {
        let p = ModelParams::sarkar(0.8, 1.3, 0.6).unwrap();
        // P(X1 > x) = e^{-(l1+l12) x}, P(X2 > y) = e^{-(l2+l12) y}
        let v1 = p.joint_survival(2.0, 0.0).unwrap();
        assert!(rel_close(v1, (-(0.8 + 0.6) * 2.0_f64).exp(), 1e-14), "{v1}");
        let v2 = p.joint_survival(0.0, 2.0).unwrap();
        assert!(rel_close(v2, (-(1.3 + 0.6) * 2.0_f64).exp(), 1e-14), "{v2}");
    }

    #[test]
    fn freund_branches_agree_on_diagonal() {
        let lambda1: f64 = 0.9;
        let lambda2: f64 = 1.4;
        let theta1: f64 = 0.7;
        let theta2: f64 = 1.9;
        let lambda = lambda1 + lambda2;
        for &t in &[0.2, 1.0, 3.0] {
            // lower branch (selected at x1 == x2)
            let lower = lambda1 / (lambda - theta2) * (-(lambda - theta2) * t - theta2 * t).exp()
                + (lambda2 - theta2) / (lambda - theta2) * (-lambda * t).exp();
            // upper branch evaluated at the same point
            let upper = lambda2 / (lambda - theta1) * (-(lambda - theta1) * t - theta1 * t).exp()
                + (lambda1 - theta1) / (lambda - theta1) * (-lambda * t).exp();
            assert!(rel_close(lower, upper, 1e-13), "t={t}: {lower} vs {upper}");
            let p = ModelParams::freund(lambda1, lambda2, theta1, theta2).unwrap();
            assert!(rel_close(p.joint_survival(t, t).unwrap(), (-lambda * t).exp(), 1e-13));
        }
    }

    #[test]
    fn sarkar_branches_agree_on_diagonal() {
        let p = ModelParams::sarkar(0.7, 1.1, 0.4).unwrap();
        let nu: f64 = 0.4 / 1.8;
        for &t in &[0.3, 1.0, 2.5] {
            let via_branch2 = p.joint_survival(t, t).unwrap();
            // branch-1 formula extended to x1 == x2
            let p1 = -(-0.7_f64 * t).exp_m1();
            let branch1 = (-(1.1 + 0.4) * t).exp() * (1.0 - p1 * (p1 / p1).powf(nu));
            assert!(rel_close(via_branch2, branch1, 1e-14), "t={t}");
        }
    }

    #[test]
    fn gumbel3_m_one_is_independent() {
        let g = ModelParams::gumbel_iii(0.8, 1.7, 1.0).unwrap();
        let ind = g.independent_counterpart();
        for &(x1, x2) in &[(0.0, 0.0), (0.5, 1.5), (2.0, 0.3), (4.0, 4.0)] {
            assert_eq!(g.joint_survival(x1, x2).unwrap(), ind.joint_survival(x1, x2).unwrap());
        }
    }

    #[test]
    fn gumbel1_zero_coupling_is_independent() {
        let g = ModelParams::gumbel_i(0.8, 1.7, 0.0).unwrap();
        let ind = g.independent_counterpart();
        for &(x1, x2) in &[(0.5, 1.5), (2.0, 0.3)] {
            assert_eq!(g.joint_survival(x1, x2).unwrap(), ind.joint_survival(x1, x2).unwrap());
        }
    }

    #[test]
    fn block_basu_zero_coupling_is_independent() {
        let g = ModelParams::block_basu(0.8, 1.7, 0.0).unwrap();
        let ind = g.independent_counterpart();
        for &(x1, x2) in &[(0.5, 1.5), (2.0, 0.3)] {
            let a = g.joint_survival(x1, x2).unwrap();
            let b = ind.joint_survival(x1, x2).unwrap();
            assert!(rel_close(a, b, 1e-15), "({x1},{x2}): {a} vs {b}");
        }
    }

    #[test]
    fn survival_rejects_negative_coordinates() {
        let p = ModelParams::independent(1.0, 1.0).unwrap();
        assert!(p.joint_survival(-0.1, 0.5).is_err());
        assert!(p.joint_survival(0.5, -0.1).is_err());
        assert!(p.joint_survival(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn survival_monotone_on_grid() {
        let grid: Vec<f64> = (0..=20).map(|i| 0.25 * i as f64).collect();
        for p in representative() {
            for &x1 in &grid {
                for w in grid.windows(2) {
                    let hi = p.joint_survival(x1, w[0]).unwrap();
                    let lo = p.joint_survival(x1, w[1]).unwrap();
                    assert!(lo <= hi + 1e-15, "{:?} not monotone in x2 at ({x1}, {:?})", p.family(), w);
                    let hi = p.joint_survival(w[0], x1).unwrap();
                    let lo = p.joint_survival(w[1], x1).unwrap();
                    assert!(lo <= hi + 1e-15, "{:?} not monotone in x1 at ({:?}, {x1})", p.family(), w);
                }
            }
        }
    }

    #[test]
    fn derived_rate_invariants() {
        let d = ModelParams::gumbel_iii(1.0, 1.0, 2.0).unwrap().derived();
        let lambda3 = d.lambda3.unwrap();
        assert!(lambda3 <= d.lambda);
        assert!((lambda3 - std::f64::consts::SQRT_2).abs() < 1e-15);

        let d = ModelParams::gumbel_iii(1.3, 0.6, 1.0).unwrap().derived();
        assert_eq!(d.lambda3.unwrap(), d.lambda);

        let d = ModelParams::cowan(1.0, 1.0, std::f64::consts::PI).unwrap().derived();
        assert_eq!(d.alpha_star.unwrap(), 2.0 * d.lambda);
        let d = ModelParams::cowan(1.0, 1.0, 1.0).unwrap().derived();
        assert!(0.5 * d.alpha_star.unwrap() < d.lambda);

        let d = ModelParams::marshall_olkin(1.0, 1.0, 0.5).unwrap().derived();
        assert!(d.lambda_star.unwrap() > d.lambda);
    }

    #[test]
    fn json_round_trip() {
        for p in representative() {
            let text = p.to_json();
            let back = ModelParams::from_json(&text).unwrap();
            assert_eq!(p, back, "{text}");
        }
    }

    #[test]
    fn json_field_names_are_exact() {
        let p = ModelParams::from_json(
            r#"{"model":"gumbel2","lambda1":1.0,"lambda2":1.0,"alpha":0.5}"#,
        )
        .unwrap();
        assert_eq!(p, ModelParams::GumbelII { lambda1: 1.0, lambda2: 1.0, alpha: 0.5 });
    }

    #[test]
    fn json_rejects_unknown_fields() {
        let err = ModelParams::from_json(
            r#"{"model":"independent","lambda1":1.0,"lambda2":1.0,"rho":0.3}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("unknown field `rho`"), "{err}");
    }

    #[test]
    fn json_rejects_missing_and_invalid() {
        assert!(ModelParams::from_json(r#"{"model":"independent","lambda1":1.0}"#).is_err());
        assert!(ModelParams::from_json(r#"{"model":"nope","lambda1":1.0,"lambda2":1.0}"#).is_err());
        assert!(ModelParams::from_json(r#"{"model":"gumbel2","lambda1":1.0,"lambda2":1.0,"alpha":2.0}"#).is_err());
        assert!(ModelParams::from_json("[1,2]").is_err());
    }

    pub(crate) fn representative() -> Vec<ModelParams> {
        vec![
            ModelParams::independent(1.0, 1.0).unwrap(),
            ModelParams::gumbel_i(1.0, 1.0, 1.0).unwrap(),
            ModelParams::gumbel_ii(1.0, 1.0, 0.5).unwrap(),
            ModelParams::gumbel_ii(1.0, 1.0, -0.5).unwrap(),
            ModelParams::gumbel_iii(1.0, 1.0, 2.0).unwrap(),
            ModelParams::freund(1.0, 1.0, 0.5, 1.5).unwrap(),
            ModelParams::marshall_olkin(1.0, 1.0, 1.0).unwrap(),
            ModelParams::block_basu(1.0, 1.0, 1.0).unwrap(),
            ModelParams::cowan(1.0, 1.0, std::f64::consts::FRAC_PI_2).unwrap(),
            ModelParams::sarkar(1.0, 1.0, 1.0).unwrap(),
        ]
    }
}
