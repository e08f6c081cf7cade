//! Reliability measures of a two-component series system whose
//! component lifetimes follow one of nine bivariate exponential models,
//! and the relative errors a false independence assumption incurs in
//! them.
//!
//! The system lifetime is T = min(X1, X2). For each joint model the
//! crate evaluates the series survival curve, hazard rate, mean
//! residual life and reversed hazard rate in closed form, compares them
//! against the independent model with the same marginal rates, and
//! analyzes the resulting relative-error curves: sign structure
//! (over/under-assessment), horizontal asymptotes, zero crossings and
//! extrema.
//!
//! ```
//! use bivexp::models::ModelParams;
//! use bivexp::measures::{series_hazard, MeasureKind};
//! use bivexp::errors::{relative_error, classify_sign};
//!
//! let model = ModelParams::marshall_olkin(1.0, 1.0, 1.0).unwrap();
//! // constant series hazard lambda1 + lambda2 + lambda12
//! assert_eq!(series_hazard(&model, 0.7).unwrap(), 3.0);
//! // assuming independence under-assesses the hazard by lambda12/lambda
//! assert_eq!(relative_error(&model, MeasureKind::Hazard, 0.7).unwrap(), 0.5);
//! assert_eq!(classify_sign(&model, MeasureKind::Hazard).to_string(), "UA");
//! ```
//!
//! Modules follow the pipeline: [`models`] holds the joint
//! distributions and their parameter domains, [`measures`] the
//! closed-form series-system measures, [`errors`] the relative-error
//! analysis, [`numerics`] the self-contained numerical kernel,
//! [`oracle`] independent cross-checks of every closed form, and
//! [`cli`] the command-line front end.

pub mod cli;
pub mod error;
pub mod errors;
pub mod measures;
pub mod models;
pub mod numerics;
pub mod oracle;

pub use error::{Error, Result};
pub use errors::{RelativeErrorCurve, SignVerdict};
pub use measures::MeasureKind;
pub use models::{DerivedRates, ModelFamily, ModelParams};
pub use numerics::{CrossingReport, SolverConfig};
pub use oracle::OracleReport;
