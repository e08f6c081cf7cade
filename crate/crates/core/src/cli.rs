//! Command-line front end: measure tables, error tables, verdict
//! matrices, crossing/extremum reports and the oracle verification run.
//!
//! Exit-code contract (scriptable): 0 ok, 2 domain/validation error,
//! 3 solver failure, 4 verification failure.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::errors::{
    asymptote, find_crossing, find_crossing_auto, find_extremum, find_extremum_auto,
    relative_error, classify_sign, SignVerdict,
};
use crate::measures::{measure, MeasureKind, RHR_T_MIN};
use crate::models::{ModelFamily, ModelParams};
use crate::numerics::CrossingReport;
use crate::oracle::{sample_params, verify_model, OracleTolerances};

#[derive(Parser, Debug)]
#[command(
    name = "bivexp",
    version,
    about = "Series-system reliability under bivariate exponential models, and the cost of wrongly assuming independence"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate reliability, hazard, MRL and RHR for one model.
    Measures(MeasuresArgs),
    /// Tabulate the four relative-error curves (with asymptote footer).
    Errors(ErrorsArgs),
    /// Print the over/under-assessment verdict matrix.
    Signs(SignsArgs),
    /// Locate zero crossings and extrema of an error curve.
    Crossings(CrossingsArgs),
    /// Cross-check closed forms against quadrature/finite-difference oracles.
    Verify(VerifyArgs),
}

/// Model selection, shared by all subcommands. A JSON config given via
/// --config overrides the flags field by field.
#[derive(Args, Debug, Default, Clone)]
pub struct ModelArgs {
    /// Model family: independent, gumbel1, gumbel2, gumbel3, freund,
    /// marshall-olkin, block-basu, cowan, sarkar.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub lambda1: Option<f64>,
    #[arg(long)]
    pub lambda2: Option<f64>,
    #[arg(long)]
    pub lambda12: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub theta1: Option<f64>,
    #[arg(long)]
    pub theta2: Option<f64>,
    /// JSON config file; its fields override the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MeasuresArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Evaluation grid MIN:MAX:STEPS (STEPS points, ends included).
    #[arg(long, default_value = "0:5:101")]
    pub t: String,
    #[arg(long, default_value = "csv")]
    pub format: String,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ErrorsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value = "0:5:101")]
    pub t: String,
    /// Restrict the table to one measure.
    #[arg(long)]
    pub kind: Option<String>,
    /// Abscissa column: t, or x = e^{-t} (the substitution used for the
    /// reversed-hazard-rate figures).
    #[arg(long, default_value = "t")]
    pub abscissa: String,
    #[arg(long, default_value = "csv")]
    pub format: String,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SignsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Classify the representative parameter set of all nine models.
    #[arg(long)]
    pub all: bool,
    #[arg(long, default_value = "csv")]
    pub format: String,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CrossingsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Measure whose error curve is searched.
    #[arg(long)]
    pub kind: String,
    /// Explicit bracket LO:HI; default expands (1e-6, 10/lambda).
    #[arg(long)]
    pub bracket: Option<String>,
    #[arg(long, default_value = "csv")]
    pub format: String,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Verify the representative parameter set of all nine models.
    #[arg(long)]
    pub all: bool,
    /// Oracle grid MIN:MAX:STEPS.
    #[arg(long, default_value = "0.05:5:200")]
    pub grid: String,
    /// Additional randomized parameter draws per family.
    #[arg(long, default_value_t = 0)]
    pub draws: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value = "csv")]
    pub format: String,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Output format of the tabulating commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::domain(format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}

/// Abscissa of the error table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Abscissa {
    T,
    X,
}

impl std::str::FromStr for Abscissa {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "t" => Ok(Abscissa::T),
            "x" => Ok(Abscissa::X),
            other => Err(Error::domain(format!("unknown abscissa `{other}` (expected t or x)"))),
        }
    }
}

/// Parsed MIN:MAX:STEPS grid specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        crate::oracle::linspace(self.min, self.max, self.steps)
    }

    fn validate(self) -> Result<Self> {
        if !self.min.is_finite() || !self.max.is_finite() || self.min >= self.max {
            return Err(Error::domain(format!(
                "grid needs min < max, got {}:{}",
                self.min, self.max
            )));
        }
        if self.min < 0.0 {
            return Err(Error::domain("grid minimum must be >= 0"));
        }
        if self.steps < 2 {
            return Err(Error::domain("grid needs at least 2 steps"));
        }
        Ok(self)
    }
}

impl std::str::FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::domain(format!("grid must be MIN:MAX:STEPS, got `{s}`")));
        }
        let min = parts[0]
            .parse::<f64>()
            .map_err(|_| Error::domain(format!("bad grid minimum `{}`", parts[0])))?;
        let max = parts[1]
            .parse::<f64>()
            .map_err(|_| Error::domain(format!("bad grid maximum `{}`", parts[1])))?;
        let steps = parts[2]
            .parse::<usize>()
            .map_err(|_| Error::domain(format!("bad grid steps `{}`", parts[2])))?;
        GridSpec { min, max, steps }.validate()
    }
}

/// Fully resolved run configuration for the tabulating commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelParams,
    pub grid: GridSpec,
    pub kind: Option<MeasureKind>,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    pub abscissa: Abscissa,
}

/// Overrides read from a --config JSON document. The document is flat:
/// the model spec fields plus any of t_min, t_max, steps, kind, format,
/// output, abscissa. Unknown fields are an error.
#[derive(Debug, Default, Clone)]
pub struct ConfigOverrides {
    pub model: Option<ModelParams>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
    pub kind: Option<MeasureKind>,
    pub format: Option<OutputFormat>,
    pub output: Option<PathBuf>,
    pub abscissa: Option<Abscissa>,
}

impl ConfigOverrides {
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::domain(format!("invalid JSON config: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::domain("config must be a JSON object"))?;

        let mut overrides = ConfigOverrides::default();
        let mut model_doc = serde_json::Map::new();
        for (key, val) in obj {
            match key.as_str() {
                "t_min" => {
                    overrides.t_min = Some(val.as_f64().ok_or_else(|| bad_key(key))?);
                }
                "t_max" => {
                    overrides.t_max = Some(val.as_f64().ok_or_else(|| bad_key(key))?);
                }
                "steps" => {
                    let n = val.as_u64().ok_or_else(|| bad_key(key))?;
                    overrides.steps = Some(n as usize);
                }
                "kind" => {
                    overrides.kind = Some(val.as_str().ok_or_else(|| bad_key(key))?.parse()?);
                }
                "format" => {
                    overrides.format = Some(val.as_str().ok_or_else(|| bad_key(key))?.parse()?);
                }
                "output" => {
                    overrides.output =
                        Some(PathBuf::from(val.as_str().ok_or_else(|| bad_key(key))?));
                }
                "abscissa" => {
                    overrides.abscissa = Some(val.as_str().ok_or_else(|| bad_key(key))?.parse()?);
                }
                _ => {
                    // Everything else belongs to the model spec, whose
                    // parser rejects fields it does not know.
                    model_doc.insert(key.clone(), val.clone());
                }
            }
        }
        if !model_doc.is_empty() {
            overrides.model = Some(ModelParams::from_json_value(&serde_json::Value::Object(model_doc))?);
        }
        Ok(overrides)
    }
}

fn bad_key(key: &str) -> Error {
    Error::domain(format!("config field `{key}` has the wrong type"))
}

impl ModelArgs {
    fn flag_entries(&self) -> Vec<(&'static str, Option<f64>)> {
        vec![
            ("lambda1", self.lambda1),
            ("lambda2", self.lambda2),
            ("lambda12", self.lambda12),
            ("alpha", self.alpha),
            ("m", self.m),
            ("theta", self.theta),
            ("theta1", self.theta1),
            ("theta2", self.theta2),
        ]
    }

    /// Builds the model from flags alone (config handled separately).
    /// Flags that the chosen family does not use are rejected.
    pub fn resolve_flags(&self) -> Result<Option<ModelParams>> {
        let Some(name) = &self.model else {
            if self.flag_entries().iter().any(|(_, v)| v.is_some()) {
                return Err(Error::domain("model parameters given without --model"));
            }
            return Ok(None);
        };
        let _family: ModelFamily = name.parse()?;
        let mut doc = serde_json::Map::new();
        doc.insert("model".into(), serde_json::Value::String(name.clone()));
        for (key, value) in self.flag_entries() {
            if let Some(v) = value {
                doc.insert(
                    key.into(),
                    serde_json::Value::Number(
                        serde_json::Number::from_f64(v)
                            .ok_or_else(|| Error::domain(format!("flag --{key} must be finite")))?,
                    ),
                );
            }
        }
        ModelParams::from_json_value(&serde_json::Value::Object(doc)).map(Some)
    }

    pub fn overrides(&self) -> Result<Option<ConfigOverrides>> {
        match &self.config {
            None => Ok(None),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::domain(format!("cannot read config {}: {e}", path.display()))
                })?;
                ConfigOverrides::from_json(&text).map(Some)
            }
        }
    }

    /// The model after applying config overrides.
    pub fn resolve_model(&self) -> Result<ModelParams> {
        let flags = self.resolve_flags()?;
        let overrides = self.overrides()?;
        overrides
            .and_then(|o| o.model)
            .or(flags)
            .ok_or_else(|| Error::domain("no model given: pass --model plus parameters, or --config"))
    }
}

fn resolve_run_config(
    model_args: &ModelArgs,
    grid: &str,
    kind: Option<&str>,
    format: &str,
    output: Option<&PathBuf>,
    abscissa: Option<&str>,
) -> Result<RunConfig> {
    let mut spec: GridSpec = grid.parse()?;
    let mut cfg = RunConfig {
        model: model_args.resolve_flags()?.unwrap_or(ModelParams::Independent {
            lambda1: f64::NAN,
            lambda2: f64::NAN,
        }),
        grid: spec,
        kind: kind.map(|k| k.parse()).transpose()?,
        format: format.parse()?,
        output: output.cloned(),
        abscissa: abscissa.map(|a| a.parse()).transpose()?.unwrap_or(Abscissa::T),
    };
    let have_model = model_args.resolve_flags()?.is_some();
    if let Some(o) = model_args.overrides()? {
        if let Some(m) = o.model {
            cfg.model = m;
        } else if !have_model {
            return Err(Error::domain("config carries no model and no --model given"));
        }
        if let Some(v) = o.t_min {
            spec.min = v;
        }
        if let Some(v) = o.t_max {
            spec.max = v;
        }
        if let Some(v) = o.steps {
            spec.steps = v;
        }
        cfg.grid = spec.validate()?;
        if let Some(k) = o.kind {
            cfg.kind = Some(k);
        }
        if let Some(f) = o.format {
            cfg.format = f;
        }
        if let Some(p) = o.output {
            cfg.output = Some(p);
        }
        if let Some(a) = o.abscissa {
            cfg.abscissa = a;
        }
    } else if !have_model {
        return Err(Error::domain("no model given: pass --model plus parameters, or --config"));
    }
    Ok(cfg)
}

/// 17-significant-digit decimal rendering; every f64 round-trips.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Reversed hazard rate has a pole at t = 0; tables report the true
/// limits there: +inf for the measure, 0 for its relative error.
fn rhr_table_value(model: &ModelParams, t: f64) -> Result<f64> {
    if t < RHR_T_MIN {
        Ok(f64::INFINITY)
    } else {
        measure(model, MeasureKind::Rhr, t)
    }
}

fn rhr_error_table_value(model: &ModelParams, t: f64) -> Result<f64> {
    if t < RHR_T_MIN {
        Ok(0.0)
    } else {
        relative_error(model, MeasureKind::Rhr, t)
    }
}

#[derive(Serialize)]
struct MeasureRow {
    t: f64,
    reliability: f64,
    hazard: f64,
    mrl: f64,
    rhr: f64,
}

/// `measures`: t, reliability, hazard, mrl, rhr over the grid.
pub fn cmd_measures(cfg: &RunConfig, w: &mut dyn Write) -> Result<()> {
    let model = cfg.model;
    let mut rows = Vec::with_capacity(cfg.grid.steps);
    for t in cfg.grid.points() {
        rows.push(MeasureRow {
            t,
            reliability: measure(&model, MeasureKind::Reliability, t)?,
            hazard: measure(&model, MeasureKind::Hazard, t)?,
            mrl: measure(&model, MeasureKind::Mrl, t)?,
            rhr: rhr_table_value(&model, t)?,
        });
    }
    match cfg.format {
        OutputFormat::Csv => {
            io(writeln!(w, "t,reliability,hazard,mrl,rhr"))?;
            for r in rows {
                io(writeln!(
                    w,
                    "{},{},{},{},{}",
                    fmt17(r.t),
                    fmt17(r.reliability),
                    fmt17(r.hazard),
                    fmt17(r.mrl),
                    fmt17(r.rhr)
                ))?;
            }
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Doc {
                model: ModelParams,
                rows: Vec<MeasureRow>,
            }
            let doc = Doc { model, rows };
            io(writeln!(w, "{}", serde_json::to_string_pretty(&doc).expect("serializable")))?;
        }
    }
    Ok(())
}

fn error_kinds(cfg: &RunConfig) -> Vec<MeasureKind> {
    match cfg.kind {
        Some(k) => vec![k],
        None => MeasureKind::ALL.to_vec(),
    }
}

/// `errors`: abscissa plus relative-error columns, asymptote footer.
pub fn cmd_errors(cfg: &RunConfig, w: &mut dyn Write) -> Result<()> {
    let model = cfg.model;
    let kinds = error_kinds(cfg);
    let points = cfg.grid.points();
    let mut rows: Vec<(f64, Vec<f64>)> = Vec::with_capacity(points.len());
    for &t in &points {
        let mut vals = Vec::with_capacity(kinds.len());
        for &kind in &kinds {
            let v = if kind == MeasureKind::Rhr {
                rhr_error_table_value(&model, t)?
            } else {
                relative_error(&model, kind, t)?
            };
            vals.push(v);
        }
        let abscissa = match cfg.abscissa {
            Abscissa::T => t,
            Abscissa::X => (-t).exp(),
        };
        rows.push((abscissa, vals));
    }
    let asymptotes: Vec<Option<f64>> = kinds.iter().map(|&k| asymptote(&model, k)).collect();

    match cfg.format {
        OutputFormat::Csv => {
            let head = match cfg.abscissa {
                Abscissa::T => "t",
                Abscissa::X => "x",
            };
            let names: Vec<&str> = kinds.iter().map(|k| k.name()).collect();
            io(writeln!(w, "{head},{}", names.join(",")))?;
            for (a, vals) in &rows {
                let cells: Vec<String> = vals.iter().map(|&v| fmt17(v)).collect();
                io(writeln!(w, "{},{}", fmt17(*a), cells.join(",")))?;
            }
            // Divergent limits print as inf.
            let cells: Vec<String> = asymptotes
                .iter()
                .map(|a| fmt17(a.unwrap_or(f64::INFINITY)))
                .collect();
            io(writeln!(w, "asymptote,{}", cells.join(",")))?;
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                model: ModelParams,
                abscissa: &'a str,
                kinds: Vec<&'a str>,
                rows: Vec<(f64, Vec<f64>)>,
                asymptotes: Vec<Option<f64>>,
            }
            let doc = Doc {
                model,
                abscissa: match cfg.abscissa {
                    Abscissa::T => "t",
                    Abscissa::X => "x",
                },
                kinds: kinds.iter().map(|k| k.name()).collect(),
                rows,
                asymptotes,
            };
            io(writeln!(w, "{}", serde_json::to_string_pretty(&doc).expect("serializable")))?;
        }
    }
    Ok(())
}

/// Representative parameters for --all runs: the values the error
/// analysis in the source tables is quoted at.
pub fn representative_models() -> Vec<ModelParams> {
    vec![
        ModelParams::Independent { lambda1: 1.0, lambda2: 1.0 },
        ModelParams::GumbelI { lambda1: 1.0, lambda2: 1.0, lambda12: 1.0 },
        ModelParams::GumbelII { lambda1: 1.0, lambda2: 1.0, alpha: 0.5 },
        ModelParams::GumbelIII { lambda1: 1.0, lambda2: 1.0, m: 2.0 },
        ModelParams::Freund { lambda1: 1.0, lambda2: 1.0, theta1: 0.5, theta2: 1.5 },
        ModelParams::MarshallOlkin { lambda1: 1.0, lambda2: 1.0, lambda12: 1.0 },
        ModelParams::BlockBasu { lambda1: 1.0, lambda2: 1.0, lambda12: 1.0 },
        ModelParams::Cowan { lambda1: 1.0, lambda2: 1.0, theta: std::f64::consts::FRAC_PI_2 },
        ModelParams::Sarkar { lambda1: 1.0, lambda2: 1.0, lambda12: 1.0 },
    ]
}

#[derive(Serialize)]
struct SignRow {
    model: ModelParams,
    reliability: SignVerdict,
    hazard: SignVerdict,
    mrl: SignVerdict,
    rhr: SignVerdict,
}

/// `signs`: OA/UA verdicts per measure, one row per model.
pub fn cmd_signs(models: &[ModelParams], format: OutputFormat, w: &mut dyn Write) -> Result<()> {
    let rows: Vec<SignRow> = models
        .iter()
        .map(|m| SignRow {
            model: *m,
            reliability: classify_sign(m, MeasureKind::Reliability),
            hazard: classify_sign(m, MeasureKind::Hazard),
            mrl: classify_sign(m, MeasureKind::Mrl),
            rhr: classify_sign(m, MeasureKind::Rhr),
        })
        .collect();
    match format {
        OutputFormat::Csv => {
            io(writeln!(w, "model,reliability,hazard,mrl,rhr"))?;
            for r in rows {
                io(writeln!(
                    w,
                    "{},{},{},{},{}",
                    r.model.family(),
                    r.reliability,
                    r.hazard,
                    r.mrl,
                    r.rhr
                ))?;
            }
        }
        OutputFormat::Json => {
            io(writeln!(w, "{}", serde_json::to_string_pretty(&rows).expect("serializable")))?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CrossingsDoc {
    model: ModelParams,
    kind: MeasureKind,
    crossing: Option<CrossingReport>,
    extremum: Option<CrossingReport>,
}

/// `crossings`: zero crossing and interior extremum of one error curve.
///
/// With an explicit bracket a failed search is a hard error (exit 3);
/// in auto mode a curve may legitimately have no crossing or extremum
/// and the report simply omits it.
pub fn cmd_crossings(
    model: &ModelParams,
    kind: MeasureKind,
    bracket: Option<(f64, f64)>,
    format: OutputFormat,
    w: &mut dyn Write,
) -> Result<()> {
    let (crossing, extremum) = match bracket {
        Some(b) => {
            let crossing = match find_crossing(model, kind, b) {
                Ok(r) => Some(r),
                Err(e @ (Error::Convergence { .. } | Error::Domain(_))) => return Err(e),
                Err(Error::Bracket { .. }) => None,
                Err(e) => return Err(e),
            };
            let extremum = match find_extremum(model, kind, b) {
                Ok(r) => Some(r),
                Err(Error::Flat { .. }) => None,
                Err(e) => return Err(e),
            };
            if crossing.is_none() && extremum.is_none() {
                return Err(Error::Bracket {
                    lo: b.0,
                    hi: b.1,
                    f_lo: relative_error(model, kind, b.0)?,
                    f_hi: relative_error(model, kind, b.1)?,
                });
            }
            (crossing, extremum)
        }
        None => {
            let crossing = match find_crossing_auto(model, kind) {
                Ok(r) => Some(r),
                Err(Error::Bracket { .. } | Error::Flat { .. }) => None,
                Err(e) => return Err(e),
            };
            let extremum = match find_extremum_auto(model, kind) {
                Ok(r) => Some(r),
                Err(Error::Flat { .. } | Error::Convergence { .. } | Error::Bracket { .. }) => None,
                Err(e) => return Err(e),
            };
            (crossing, extremum)
        }
    };

    match format {
        OutputFormat::Csv => {
            io(writeln!(w, "feature,t,value,bracket_lo,bracket_hi,iterations,residual"))?;
            if let Some(r) = crossing {
                io(writeln!(
                    w,
                    "crossing,{},{},{},{},{},{}",
                    fmt17(r.t_root),
                    fmt17(r.value_at_root),
                    fmt17(r.bracket.0),
                    fmt17(r.bracket.1),
                    r.iterations,
                    fmt17(r.residual)
                ))?;
            }
            if let Some(r) = extremum {
                io(writeln!(
                    w,
                    "extremum,{},{},{},{},{},{}",
                    fmt17(r.t_root),
                    fmt17(r.value_at_root),
                    fmt17(r.bracket.0),
                    fmt17(r.bracket.1),
                    r.iterations,
                    fmt17(r.residual)
                ))?;
            }
        }
        OutputFormat::Json => {
            let doc = CrossingsDoc { model: *model, kind, crossing, extremum };
            io(writeln!(w, "{}", serde_json::to_string_pretty(&doc).expect("serializable")))?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyRow {
    model: ModelParams,
    kind: MeasureKind,
    grid_points: usize,
    max_rel_dev: f64,
    worst_t: f64,
    tolerance: f64,
    pass: bool,
}

/// `verify`: oracle cross-checks; returns whether everything passed.
pub fn cmd_verify(
    models: &[ModelParams],
    grid: &GridSpec,
    draws: usize,
    seed: u64,
    format: OutputFormat,
    w: &mut dyn Write,
) -> Result<bool> {
    let points = grid.points();
    let tol = OracleTolerances::default();
    let mut targets: Vec<ModelParams> = models.to_vec();
    if draws > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for family in ModelFamily::ALL {
            if models.iter().any(|m| m.family() == family) {
                for _ in 0..draws {
                    targets.push(sample_params(family, &mut rng));
                }
            }
        }
    }

    let mut rows = Vec::new();
    let mut all_pass = true;
    for model in &targets {
        for report in verify_model(model, &points)? {
            let tolerance = tol.for_kind(report.kind);
            let pass = report.max_rel_dev <= tolerance;
            all_pass &= pass;
            rows.push(VerifyRow {
                model: *model,
                kind: report.kind,
                grid_points: report.grid.len(),
                max_rel_dev: report.max_rel_dev,
                worst_t: report.worst_t,
                tolerance,
                pass,
            });
        }
    }

    match format {
        OutputFormat::Csv => {
            io(writeln!(w, "model,kind,grid_points,max_rel_dev,worst_t,tolerance,pass"))?;
            for r in &rows {
                io(writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    r.model.family(),
                    r.kind,
                    r.grid_points,
                    fmt17(r.max_rel_dev),
                    fmt17(r.worst_t),
                    fmt17(r.tolerance),
                    r.pass
                ))?;
            }
        }
        OutputFormat::Json => {
            io(writeln!(w, "{}", serde_json::to_string_pretty(&rows).expect("serializable")))?;
        }
    }
    Ok(all_pass)
}

fn io(result: std::io::Result<()>) -> Result<()> {
    result.map_err(|e| Error::domain(format!("write failed: {e}")))
}

fn parse_bracket(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(Error::domain(format!("bracket must be LO:HI, got `{s}`")));
    }
    let lo = parts[0]
        .parse::<f64>()
        .map_err(|_| Error::domain(format!("bad bracket low `{}`", parts[0])))?;
    let hi = parts[1]
        .parse::<f64>()
        .map_err(|_| Error::domain(format!("bad bracket high `{}`", parts[1])))?;
    Ok((lo, hi))
}

/// Process exit codes of the CLI contract.
pub mod exit_code {
    pub const OK: i32 = 0;
    pub const DOMAIN: i32 = 2;
    pub const SOLVER: i32 = 3;
    pub const VERIFY: i32 = 4;
}

fn open_sink(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    match path {
        None => Ok(Box::new(std::io::stdout().lock())),
        Some(p) => {
            let file = std::fs::File::create(p)
                .map_err(|e| Error::domain(format!("cannot create {}: {e}", p.display())))?;
            Ok(Box::new(std::io::BufWriter::new(file)))
        }
    }
}

fn models_for(all: bool, args: &ModelArgs) -> Result<Vec<ModelParams>> {
    if all {
        Ok(representative_models())
    } else {
        Ok(vec![args.resolve_model()?])
    }
}

/// Dispatches a parsed command line; the return value is the process
/// exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Measures(args) => resolve_run_config(
            &args.model,
            &args.t,
            None,
            &args.format,
            args.output.as_ref(),
            None,
        )
        .and_then(|cfg| {
            let mut sink = open_sink(cfg.output.as_ref())?;
            cmd_measures(&cfg, sink.as_mut())
        })
        .map(|()| exit_code::OK),

        Command::Errors(args) => resolve_run_config(
            &args.model,
            &args.t,
            args.kind.as_deref(),
            &args.format,
            args.output.as_ref(),
            Some(&args.abscissa),
        )
        .and_then(|cfg| {
            let mut sink = open_sink(cfg.output.as_ref())?;
            cmd_errors(&cfg, sink.as_mut())
        })
        .map(|()| exit_code::OK),

        Command::Signs(args) => (|| {
            let models = models_for(args.all, &args.model)?;
            let format: OutputFormat = args.format.parse()?;
            let mut sink = open_sink(args.output.as_ref())?;
            cmd_signs(&models, format, sink.as_mut())?;
            Ok(exit_code::OK)
        })(),

        Command::Crossings(args) => (|| {
            let model = args.model.resolve_model()?;
            let kind: MeasureKind = args.kind.parse()?;
            let bracket = args.bracket.as_deref().map(parse_bracket).transpose()?;
            let format: OutputFormat = args.format.parse()?;
            let mut sink = open_sink(args.output.as_ref())?;
            cmd_crossings(&model, kind, bracket, format, sink.as_mut())?;
            Ok(exit_code::OK)
        })(),

        Command::Verify(args) => (|| {
            let models = models_for(args.all, &args.model)?;
            let grid: GridSpec = args.grid.parse()?;
            let format: OutputFormat = args.format.parse()?;
            let mut sink = open_sink(args.output.as_ref())?;
            let ok = cmd_verify(&models, &grid, args.draws, args.seed, format, sink.as_mut())?;
            Ok(if ok { exit_code::OK } else { exit_code::VERIFY })
        })(),
    };

    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Domain(_) => exit_code::DOMAIN,
                Error::Bracket { .. } | Error::Convergence { .. } | Error::Flat { .. } => {
                    exit_code::SOLVER
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn measures_csv(args: &[(&str, &str)], model: &str) -> String {
        let mut model_args = ModelArgs { model: Some(model.into()), ..Default::default() };
        for (k, v) in args {
            let v: f64 = v.parse().unwrap();
            match *k {
                "lambda1" => model_args.lambda1 = Some(v),
                "lambda2" => model_args.lambda2 = Some(v),
                "lambda12" => model_args.lambda12 = Some(v),
                "alpha" => model_args.alpha = Some(v),
                _ => panic!("unexpected {k}"),
            }
        }
        let cfg = resolve_run_config(&model_args, "0:5:100", None, "csv", None, None).unwrap();
        let mut out = Vec::new();
        cmd_measures(&cfg, &mut out).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn measures_table_shape_and_reliability_column() {
        let text = measures_csv(&[("lambda1", "1"), ("lambda2", "1")], "independent");
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,reliability,hazard,mrl,rhr");
        assert_eq!(lines.len(), 1 + 100);
        // reliability column is e^{-2t}
        for line in &lines[1..] {
            let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
            let expected = (-2.0 * cells[0]).exp();
            assert!((cells[1] - expected).abs() <= 1e-15 * expected.max(1e-300));
        }
        // t = 0 row reports the RHR pole as inf
        assert!(lines[1].ends_with(",inf"));
    }

    #[test]
    fn measures_gumbel1_hazard_column_affine() {
        let text = measures_csv(&[("lambda1", "1"), ("lambda2", "1"), ("lambda12", "1")], "gumbel1");
        for line in text.lines().skip(1) {
            let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
            assert_eq!(cells[2], 2.0 + 2.0 * cells[0]);
        }
    }

    #[test]
    fn errors_table_footer_and_kind_restriction() {
        let model_args = ModelArgs {
            model: Some("gumbel2".into()),
            lambda1: Some(1.0),
            lambda2: Some(1.0),
            alpha: Some(0.5),
            ..Default::default()
        };
        let cfg = resolve_run_config(&model_args, "0:5:11", None, "csv", None, None).unwrap();
        let mut out = Vec::new();
        cmd_errors(&cfg, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,reliability,hazard,mrl,rhr");
        let footer = lines.last().unwrap();
        assert!(footer.starts_with("asymptote,"));
        let cells: Vec<&str> = footer.split(',').collect();
        assert_eq!(cells[1].parse::<f64>().unwrap(), 0.5);
        assert_eq!(cells[4].parse::<f64>().unwrap(), 0.5);

        // single-kind variant with the x abscissa
        let cfg = resolve_run_config(&model_args, "0:5:11", Some("rhr"), "csv", None, Some("x"))
            .unwrap();
        let mut out = Vec::new();
        cmd_errors(&cfg, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("x,rhr\n"));
        let first_row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(first_row[0].parse::<f64>().unwrap(), 1.0); // x = e^0
    }

    #[test]
    fn errors_table_freund_all_zero() {
        let model_args = ModelArgs {
            model: Some("freund".into()),
            lambda1: Some(1.0),
            lambda2: Some(1.0),
            theta1: Some(0.3),
            theta2: Some(0.7),
            ..Default::default()
        };
        let cfg = resolve_run_config(&model_args, "0:5:21", None, "csv", None, None).unwrap();
        let mut out = Vec::new();
        cmd_errors(&cfg, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        for line in text.lines().skip(1) {
            let cells: Vec<&str> = line.split(',').collect();
            for cell in &cells[1..] {
                assert_eq!(cell.parse::<f64>().unwrap(), 0.0, "{line}");
            }
        }
    }

    #[test]
    fn gumbel3_hazard_error_constant_in_errors_table() {
        let model_args = ModelArgs {
            model: Some("gumbel3".into()),
            lambda1: Some(1.0),
            lambda2: Some(1.0),
            m: Some(2.0),
            ..Default::default()
        };
        let cfg = resolve_run_config(&model_args, "0:5:21", Some("hazard"), "csv", None, None)
            .unwrap();
        let mut out = Vec::new();
        cmd_errors(&cfg, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let expected = (std::f64::consts::SQRT_2 - 2.0) / 2.0;
        for line in text.lines().skip(1) {
            let cells: Vec<&str> = line.split(',').collect();
            let v = cells[1].parse::<f64>().unwrap();
            assert!((v - expected).abs() < 1e-15, "{line}");
        }
    }

    #[test]
    fn flags_and_config_produce_identical_bytes() {
        let dir = std::env::temp_dir().join(format!("bivexp-cli-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let config_path = dir.join("run.json");
        std::fs::write(
            &config_path,
            r#"{"model":"gumbel1","lambda1":1.0,"lambda2":1.0,"lambda12":1.0,"t_min":0.0,"t_max":5.0,"steps":50}"#,
        )
        .unwrap();

        let flag_args = ModelArgs {
            model: Some("gumbel1".into()),
            lambda1: Some(1.0),
            lambda2: Some(1.0),
            lambda12: Some(1.0),
            ..Default::default()
        };
        let cfg_flags = resolve_run_config(&flag_args, "0:5:50", None, "csv", None, None).unwrap();
        let mut via_flags = Vec::new();
        cmd_measures(&cfg_flags, &mut via_flags).unwrap();

        let config_args = ModelArgs { config: Some(config_path), ..Default::default() };
        let cfg_json =
            resolve_run_config(&config_args, "0:5:101", None, "csv", None, None).unwrap();
        let mut via_config = Vec::new();
        cmd_measures(&cfg_json, &mut via_config).unwrap();

        assert_eq!(via_flags, via_config);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn config_overrides_flags() {
        let dir = std::env::temp_dir().join(format!("bivexp-cli-ovr-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let config_path = dir.join("override.json");
        std::fs::write(&config_path, r#"{"model":"independent","lambda1":2.0,"lambda2":1.0,"steps":7}"#)
            .unwrap();
        let args = ModelArgs {
            model: Some("gumbel1".into()),
            lambda1: Some(1.0),
            lambda2: Some(1.0),
            lambda12: Some(1.0),
            config: Some(config_path),
            ..Default::default()
        };
        let cfg = resolve_run_config(&args, "0:5:101", None, "csv", None, None).unwrap();
        assert_eq!(cfg.model, ModelParams::Independent { lambda1: 2.0, lambda2: 1.0 });
        assert_eq!(cfg.grid.steps, 7);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(ConfigOverrides::from_json(r#"{"model":"independent","lambda1":1,"lambda2":1,"bogus":3}"#).is_err());
        assert!(ConfigOverrides::from_json(r#"{"steps":"ten"}"#).is_err());
    }

    #[test]
    fn signs_table_marshall_olkin_row() {
        let mut out = Vec::new();
        let model = ModelParams::marshall_olkin(1.0, 1.0, 1.0).unwrap();
        cmd_signs(&[model], OutputFormat::Csv, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "model,reliability,hazard,mrl,rhr\nmarshall-olkin,OA,UA,OA,OA\n");
    }

    #[test]
    fn crossings_report_gumbel1_rhr() {
        let model = ModelParams::gumbel_i(1.0, 1.0, 1.0).unwrap();
        let mut out = Vec::new();
        cmd_crossings(&model, MeasureKind::Rhr, None, OutputFormat::Csv, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let crossing_line = text.lines().find(|l| l.starts_with("crossing,")).unwrap();
        let t: f64 = crossing_line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((t - 0.576_967_35).abs() < 1e-6, "{t}");
        let extremum_line = text.lines().find(|l| l.starts_with("extremum,")).unwrap();
        let t: f64 = extremum_line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((t - 0.291_670_36).abs() < 1e-5, "{t}");
    }

    #[test]
    fn crossings_flat_curve_yields_empty_report() {
        let model = ModelParams::freund(1.0, 1.0, 0.4, 0.8).unwrap();
        let mut out = Vec::new();
        cmd_crossings(&model, MeasureKind::Hazard, None, OutputFormat::Csv, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 1, "{text}");
    }

    #[test]
    fn verify_representative_models_pass() {
        let grid = GridSpec { min: 0.05, max: 5.0, steps: 60 };
        let mut out = Vec::new();
        let ok = cmd_verify(
            &representative_models(),
            &grid,
            0,
            42,
            OutputFormat::Csv,
            &mut out,
        )
        .unwrap();
        assert!(ok, "{}", String::from_utf8(out).unwrap());
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 1 + 9 * 4);
    }

    #[test]
    fn grid_spec_parsing() {
        let g: GridSpec = "0:5:100".parse().unwrap();
        assert_eq!(g, GridSpec { min: 0.0, max: 5.0, steps: 100 });
        assert_eq!(g.points().len(), 100);
        assert!("5:0:100".parse::<GridSpec>().is_err());
        assert!("0:5:1".parse::<GridSpec>().is_err());
        assert!("0:5".parse::<GridSpec>().is_err());
        assert!("-1:5:10".parse::<GridSpec>().is_err());
    }

    #[test]
    fn model_args_reject_foreign_flags() {
        let args = ModelArgs {
            model: Some("independent".into()),
            lambda1: Some(1.0),
            lambda2: Some(1.0),
            alpha: Some(0.5),
            ..Default::default()
        };
        let err = args.resolve_flags().unwrap_err();
        assert!(err.to_string().contains("unknown field `alpha`"), "{err}");
    }
}
