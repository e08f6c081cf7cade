//! C ABI for the bivexp library: opaque model handles, status codes and
//! plain-old-data reports. Every entry point is panic-free for valid
//! handles; failures come back as a `BivexpStatus` with a thread-local
//! message retrievable via `bivexp_last_error_message`.
//!
//! Ownership rules: handles returned through `out` parameters are owned
//! by the caller and released with `bivexp_model_free`; strings from
//! `bivexp_model_to_json` are released with `bivexp_string_free`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};

use libc::c_char;

use bivexp::errors::{self, SignVerdict};
use bivexp::measures::{self, MeasureKind};
use bivexp::models::ModelParams;
use bivexp::numerics::CrossingReport;
use bivexp::Error;

/// Opaque handle around validated model parameters.
pub struct BivexpModel {
    inner: ModelParams,
}

/// Status code of every C entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BivexpStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Parameter or argument outside its documented domain.
    Domain = 3,
    /// Root bracket without a sign change.
    Bracket = 4,
    /// Iteration budget exhausted.
    Convergence = 5,
    /// Curve is constant on the bracket; no extremum exists.
    Flat = 6,
    /// The requested limit diverges (no finite asymptote).
    Divergent = 7,
}

/// Measure selector matching the library's four reliability measures.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BivexpMeasure {
    Reliability = 0,
    Hazard = 1,
    Mrl = 2,
    Rhr = 3,
}

impl From<BivexpMeasure> for MeasureKind {
    fn from(m: BivexpMeasure) -> Self {
        match m {
            BivexpMeasure::Reliability => MeasureKind::Reliability,
            BivexpMeasure::Hazard => MeasureKind::Hazard,
            BivexpMeasure::Mrl => MeasureKind::Mrl,
            BivexpMeasure::Rhr => MeasureKind::Rhr,
        }
    }
}

/// Sign-verdict discriminant; threshold-carrying variants store the
/// switch time in `BivexpVerdict::threshold`.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BivexpVerdictKind {
    /// The relative error is identically zero.
    Zero = 0,
    /// Independence over-assesses the measure for all t.
    AlwaysOverAssess = 1,
    /// Independence under-assesses the measure for all t.
    AlwaysUnderAssess = 2,
    /// Under-assessment before the threshold, over-assessment after.
    SwitchUnderToOver = 3,
    /// Over-assessment before the threshold, under-assessment after.
    SwitchOverToUnder = 4,
    /// Verdict depends on the sign of a parameter (Gumbel II
    /// reliability: the sign of alpha).
    ParamDependent = 5,
}

/// Sign classification of one relative-error curve.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct BivexpVerdict {
    pub kind: BivexpVerdictKind,
    /// Switch time for the two switch kinds, NaN otherwise.
    pub threshold: f64,
}

/// Root or extremum report. For roots `residual` is |f(root)|, for
/// extrema it is the final bracketing-interval width.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct BivexpRootReport {
    pub t: f64,
    pub value: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub iterations: u64,
    pub residual: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> BivexpStatus {
    match err {
        Error::Domain(_) => BivexpStatus::Domain,
        Error::Bracket { .. } => BivexpStatus::Bracket,
        Error::Convergence { .. } => BivexpStatus::Convergence,
        Error::Flat { .. } => BivexpStatus::Flat,
    }
}

fn fail(err: &Error) -> BivexpStatus {
    set_error(&err.to_string());
    status_of(err)
}

fn null_pointer(what: &str) -> BivexpStatus {
    set_error(&format!("{what} must not be null"));
    BivexpStatus::NullPointer
}

/// Message of the last failure on this thread. The pointer stays valid
/// until the next failing call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn bivexp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

unsafe fn deliver_model(params: Result<ModelParams, Error>, out: *mut *mut BivexpModel) -> BivexpStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    match params {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(BivexpModel { inner })) };
            BivexpStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Parses a flat JSON model document, e.g.
/// `{"model":"gumbel2","lambda1":1.0,"lambda2":1.0,"alpha":0.5}`.
/// Unknown fields are an error.
#[no_mangle]
pub unsafe extern "C" fn bivexp_model_parse_json(
    json: *const c_char,
    out: *mut *mut BivexpModel,
) -> BivexpStatus {
    if json.is_null() {
        return null_pointer("json");
    }
    let text = match unsafe { CStr::from_ptr(json) }.to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("model JSON is not valid UTF-8");
            return BivexpStatus::InvalidUtf8;
        }
    };
    unsafe { deliver_model(ModelParams::from_json(text), out) }
}

/// Serializes the model back to its flat JSON document. The returned
/// string is owned by the caller; free it with `bivexp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn bivexp_model_to_json(
    model: *const BivexpModel,
    out: *mut *mut c_char,
) -> BivexpStatus {
    if model.is_null() {
        return null_pointer("model");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    let json = unsafe { &*model }.inner.to_json();
    match CString::new(json) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            BivexpStatus::Ok
        }
        Err(_) => {
            set_error("model JSON contained an interior NUL");
            BivexpStatus::Domain
        }
    }
}

/// Frees a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn bivexp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Releases a model handle.
#[no_mangle]
pub unsafe extern "C" fn bivexp_model_free(model: *mut BivexpModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

#[no_mangle]
pub unsafe extern "C" fn bivexp_model_independent(
    lambda1: f64,
    lambda2: f64,
    out: *mut *mut BivexpModel,
) -> BivexpStatus {
    unsafe { deliver_model(ModelParams::independent(lambda1, lambda2), out) }
}

#[no_mangle]
pub unsafe extern "C" fn bivexp_model_gumbel1(
    lambda1: f64,
    lambda2: f64,
    lambda12: f64,
    out: *mut *mut BivexpModel,
) -> BivexpStatus {
    unsafe { deliver_model(ModelParams::gumbel_i(lambda1, lambda2, lambda12), out) }
}

#[no_mangle]
pub unsafe extern "C" fn bivexp_model_gumbel2(
    lambda1: f64,
    lambda2: f64,
    alpha: f64,
    out: *mut *mut BivexpModel,
) -> BivexpStatus {
    unsafe { deliver_model(ModelParams::gumbel_ii(lambda1, lambda2, alpha), out) }
}

#[no_mangle]
pub unsafe extern "C" fn bivexp_model_gumbel3(
    lambda1: f64,
    lambda2: f64,
    m: f64,
    out: *mut *mut BivexpModel,
) -> BivexpStatus {
    unsafe { deliver_model(ModelParams::gumbel_iii(lambda1, lambda2, m), out) }
}

#[no_mangle]
pub unsafe extern "C" fn bivexp_model_freund(
    lambda1: f64,
    lambda2: f64,
    theta1: f64,
    theta2: f64,
    out: *mut *mut BivexpModel,
) -> BivexpStatus {
    unsafe { deliver_model(ModelParams::freund(lambda1, lambda2, theta1, theta2), out) }
}

#[no_mangle]
pub unsafe extern "C" fn bivexp_model_marshall_olkin(
    lambda1: f64,
    lambda2: f64,
    lambda12: f64,
    out: *mut *mut BivexpModel,
) -> BivexpStatus {
    unsafe { deliver_model(ModelParams::marshall_olkin(lambda1, lambda2, lambda12), out) }
}

#[no_mangle]
pub unsafe extern "C" fn bivexp_model_block_basu(
    lambda1: f64,
    lambda2: f64,
    lambda12: f64,
    out: *mut *mut BivexpModel,
) -> BivexpStatus {
    unsafe { deliver_model(ModelParams::block_basu(lambda1, lambda2, lambda12), out) }
}

#[no_mangle]
pub unsafe extern "C" fn bivexp_model_cowan(
    lambda1: f64,
    lambda2: f64,
    theta: f64,
    out: *mut *mut BivexpModel,
) -> BivexpStatus {
    unsafe { deliver_model(ModelParams::cowan(lambda1, lambda2, theta), out) }
}

#[no_mangle]
pub unsafe extern "C" fn bivexp_model_sarkar(
    lambda1: f64,
    lambda2: f64,
    lambda12: f64,
    out: *mut *mut BivexpModel,
) -> BivexpStatus {
    unsafe { deliver_model(ModelParams::sarkar(lambda1, lambda2, lambda12), out) }
}

/// Joint survival P(X1 > x1, X2 > x2).
#[no_mangle]
pub unsafe extern "C" fn bivexp_joint_survival(
    model: *const BivexpModel,
    x1: f64,
    x2: f64,
    out: *mut f64,
) -> BivexpStatus {
    if model.is_null() {
        return null_pointer("model");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    match unsafe { &*model }.inner.joint_survival(x1, x2) {
        Ok(v) => {
            unsafe { *out = v };
            BivexpStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Series-system measure at time t (t > 0 for the reversed hazard rate).
#[no_mangle]
pub unsafe extern "C" fn bivexp_measure(
    model: *const BivexpModel,
    kind: BivexpMeasure,
    t: f64,
    out: *mut f64,
) -> BivexpStatus {
    if model.is_null() {
        return null_pointer("model");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    match measures::measure(&unsafe { &*model }.inner, kind.into(), t) {
        Ok(v) => {
            unsafe { *out = v };
            BivexpStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Relative error of the measure under a false independence assumption.
#[no_mangle]
pub unsafe extern "C" fn bivexp_relative_error(
    model: *const BivexpModel,
    kind: BivexpMeasure,
    t: f64,
    out: *mut f64,
) -> BivexpStatus {
    if model.is_null() {
        return null_pointer("model");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    match errors::relative_error(&unsafe { &*model }.inner, kind.into(), t) {
        Ok(v) => {
            unsafe { *out = v };
            BivexpStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Finite t -> infinity limit of the relative error; `Divergent` when
/// the error grows without bound.
#[no_mangle]
pub unsafe extern "C" fn bivexp_error_asymptote(
    model: *const BivexpModel,
    kind: BivexpMeasure,
    out: *mut f64,
) -> BivexpStatus {
    if model.is_null() {
        return null_pointer("model");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    match errors::asymptote(&unsafe { &*model }.inner, kind.into()) {
        Some(v) => {
            unsafe { *out = v };
            BivexpStatus::Ok
        }
        None => {
            set_error("relative error diverges; no finite asymptote");
            BivexpStatus::Divergent
        }
    }
}

/// Sign classification (over/under-assessment) of the error curve.
#[no_mangle]
pub unsafe extern "C" fn bivexp_classify_sign(
    model: *const BivexpModel,
    kind: BivexpMeasure,
    out: *mut BivexpVerdict,
) -> BivexpStatus {
    if model.is_null() {
        return null_pointer("model");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    let verdict = match errors::classify_sign(&unsafe { &*model }.inner, kind.into()) {
        SignVerdict::Zero => {
            BivexpVerdict { kind: BivexpVerdictKind::Zero, threshold: f64::NAN }
        }
        SignVerdict::AlwaysOA => {
            BivexpVerdict { kind: BivexpVerdictKind::AlwaysOverAssess, threshold: f64::NAN }
        }
        SignVerdict::AlwaysUA => {
            BivexpVerdict { kind: BivexpVerdictKind::AlwaysUnderAssess, threshold: f64::NAN }
        }
        SignVerdict::SwitchUAtoOA { threshold } => {
            BivexpVerdict { kind: BivexpVerdictKind::SwitchUnderToOver, threshold }
        }
        SignVerdict::SwitchOAtoUA { threshold } => {
            BivexpVerdict { kind: BivexpVerdictKind::SwitchOverToUnder, threshold }
        }
        SignVerdict::ParamDependent => {
            BivexpVerdict { kind: BivexpVerdictKind::ParamDependent, threshold: f64::NAN }
        }
    };
    unsafe { *out = verdict };
    BivexpStatus::Ok
}

fn root_report(r: CrossingReport) -> BivexpRootReport {
    BivexpRootReport {
        t: r.t_root,
        value: r.value_at_root,
        bracket_lo: r.bracket.0,
        bracket_hi: r.bracket.1,
        iterations: r.iterations as u64,
        residual: r.residual,
    }
}

/// Zero crossing of the error curve inside [lo, hi]; the bracket ends
/// must differ in sign.
#[no_mangle]
pub unsafe extern "C" fn bivexp_find_crossing(
    model: *const BivexpModel,
    kind: BivexpMeasure,
    lo: f64,
    hi: f64,
    out: *mut BivexpRootReport,
) -> BivexpStatus {
    if model.is_null() {
        return null_pointer("model");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    match errors::find_crossing(&unsafe { &*model }.inner, kind.into(), (lo, hi)) {
        Ok(r) => {
            unsafe { *out = root_report(r) };
            BivexpStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Interior extremum of the error curve inside [lo, hi].
#[no_mangle]
pub unsafe extern "C" fn bivexp_find_extremum(
    model: *const BivexpModel,
    kind: BivexpMeasure,
    lo: f64,
    hi: f64,
    out: *mut BivexpRootReport,
) -> BivexpStatus {
    if model.is_null() {
        return null_pointer("model");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    match errors::find_extremum(&unsafe { &*model }.inner, kind.into(), (lo, hi)) {
        Ok(r) => {
            unsafe { *out = root_report(r) };
            BivexpStatus::Ok
        }
        Err(e) => fail(&e),
    }
}
