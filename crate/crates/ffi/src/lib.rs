//! C interface to `floquet-core`.
//!
//! Graphs and potentials are opaque handles created by the `*_parse` and
//! `*_builtin` functions and released with the matching `*_free`. Every
//! fallible call returns a [`FloquetStatus`]; on failure a message is
//! available from [`floquet_last_error`] on the same thread. Strings
//! returned through out-parameters are owned by the caller and must be
//! released with [`floquet_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use floquet_core::floquet::{verify_trace_formula, VerifyOptions};
use floquet_core::graph::parse_graph_with_potential;
use floquet_core::invariants::{invariant_table, Limits};
use floquet_core::isospectral::{isospectral_floquet, isospectral_periodic};
use floquet_core::potential::rational;
use floquet_core::{Builtin, Error, FundamentalGraph, Potential, DEFAULT_LENGTH_CAP};

/// Result codes shared by every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FloquetStatus {
    Ok = 0,
    /// A decision returned "no" (not isospectral).
    False = 1,
    InvalidArgument = 2,
    Parse = 3,
    InvalidGraph = 4,
    CapExceeded = 5,
    PotentialSize = 6,
    VerificationFailed = 7,
    Panic = 8,
}

/// Which spectra `floquet_isospectral` compares.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FloquetMode {
    Floquet = 0,
    Periodic = 1,
}

/// Opaque fundamental graph.
pub struct FloquetGraph {
    graph: FundamentalGraph,
    potential: Option<Potential>,
}

/// Opaque potential with exact rational values.
pub struct FloquetPotential {
    values: Potential,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn status_of(err: &Error) -> FloquetStatus {
    match err {
        Error::Syntax { .. } | Error::Duplicate { .. } | Error::IndexArity { .. } => {
            FloquetStatus::Parse
        }
        Error::ZeroIndexLoop { .. }
        | Error::Disconnected(_)
        | Error::VertexOutOfRange { .. }
        | Error::InvalidGraph(_) => FloquetStatus::InvalidGraph,
        Error::CapExceeded { .. } => FloquetStatus::CapExceeded,
        Error::PotentialSize { .. } => FloquetStatus::PotentialSize,
        _ => FloquetStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<FloquetStatus, (FloquetStatus, String)>) -> FloquetStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FloquetStatus::Panic
        }
    }
}

fn fail(err: Error) -> (FloquetStatus, String) {
    (status_of(&err), err.to_string())
}

fn invalid(message: &str) -> (FloquetStatus, String) {
    (FloquetStatus::InvalidArgument, message.to_string())
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, (FloquetStatus, String)> {
    if text.is_null() {
        return Err(invalid("null string"));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| invalid("string is not UTF-8"))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, (FloquetStatus, String)> {
    p.as_ref().ok_or_else(|| invalid("null handle"))
}

fn limits(cap: usize) -> Limits {
    Limits::new(if cap == 0 { DEFAULT_LENGTH_CAP } else { cap })
}

unsafe fn give_string(out: *mut *mut c_char, text: String) -> Result<(), (FloquetStatus, String)> {
    if out.is_null() {
        return Err(invalid("null output pointer"));
    }
    *out = CString::new(text)
        .map_err(|_| invalid("nul byte in output"))?
        .into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn floquet_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a graph file. An embedded potential, if present, is kept and can
/// be retrieved with `floquet_graph_potential`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn floquet_graph_parse(
    text: *const c_char,
    out: *mut *mut FloquetGraph,
) -> FloquetStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        let (graph, potential) = parse_graph_with_potential(read_str(text)?).map_err(fail)?;
        *out = Box::into_raw(Box::new(FloquetGraph { graph, potential }));
        Ok(FloquetStatus::Ok)
    })
}

/// Builds `cycle N`, `pendant`, `kagome` or `zd P1,...,Pd`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn floquet_graph_builtin(
    name: *const c_char,
    out: *mut *mut FloquetGraph,
) -> FloquetStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        let b: Builtin = read_str(name)?.parse().map_err(fail)?;
        let graph = b.build().map_err(fail)?;
        *out = Box::into_raw(Box::new(FloquetGraph {
            graph,
            potential: None,
        }));
        Ok(FloquetStatus::Ok)
    })
}

/// # Safety
/// `graph` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn floquet_graph_free(graph: *mut FloquetGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of vertices `ν`, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn floquet_graph_vertex_count(graph: *const FloquetGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.vertex_count())
}

/// Lattice dimension `d`, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn floquet_graph_dim(graph: *const FloquetGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.dim())
}

/// Copies the potential embedded in the graph file. Fails with
/// `FLOQUET_STATUS_INVALID_ARGUMENT` if the file had none.
///
/// # Safety
/// `graph` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn floquet_graph_potential(
    graph: *const FloquetGraph,
    out: *mut *mut FloquetPotential,
) -> FloquetStatus {
    guard(|| {
        let g = deref(graph)?;
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        let values = g
            .potential
            .clone()
            .ok_or_else(|| invalid("graph has no embedded potential"))?;
        *out = Box::into_raw(Box::new(FloquetPotential { values }));
        Ok(FloquetStatus::Ok)
    })
}

/// Parses a potential file (`vertices N` plus `potential` lines).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn floquet_potential_parse(
    text: *const c_char,
    out: *mut *mut FloquetPotential,
) -> FloquetStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        let values = Potential::parse(read_str(text)?).map_err(fail)?;
        *out = Box::into_raw(Box::new(FloquetPotential { values }));
        Ok(FloquetStatus::Ok)
    })
}

/// Real potential with values `numer[i] / denom[i]`.
///
/// # Safety
/// `numer` and `denom` must point to `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn floquet_potential_from_fractions(
    numer: *const i64,
    denom: *const i64,
    len: usize,
    out: *mut *mut FloquetPotential,
) -> FloquetStatus {
    guard(|| {
        if out.is_null() || (len > 0 && (numer.is_null() || denom.is_null())) {
            return Err(invalid("null pointer"));
        }
        let (numer, denom) = if len == 0 {
            (&[][..], &[][..])
        } else {
            (
                std::slice::from_raw_parts(numer, len),
                std::slice::from_raw_parts(denom, len),
            )
        };
        if denom.contains(&0) {
            return Err(invalid("zero denominator"));
        }
        let values = Potential::from_real(numer.iter().zip(denom).map(|(&a, &b)| rational(a, b)));
        *out = Box::into_raw(Box::new(FloquetPotential { values }));
        Ok(FloquetStatus::Ok)
    })
}

/// # Safety
/// `potential` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn floquet_potential_free(potential: *mut FloquetPotential) {
    if !potential.is_null() {
        drop(Box::from_raw(potential));
    }
}

/// Invariant table for `n <= max_n` as JSON. `max_n = 0` means `ν`,
/// `cap = 0` the default length cap.
///
/// # Safety
/// `graph` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn floquet_invariants_json(
    graph: *const FloquetGraph,
    max_n: usize,
    cap: usize,
    out_json: *mut *mut c_char,
) -> FloquetStatus {
    guard(|| {
        let g = deref(graph)?;
        let max_n = (max_n != 0).then_some(max_n);
        let table = invariant_table(&g.graph, max_n, limits(cap)).map_err(fail)?;
        give_string(out_json, table.to_json().to_string())?;
        Ok(FloquetStatus::Ok)
    })
}

/// Returns `FLOQUET_STATUS_OK` if isospectral and `FLOQUET_STATUS_FALSE`
/// otherwise. If `out_json` is not NULL it receives the verdict with its
/// witness as JSON.
///
/// # Safety
/// Handles must be live; `out_json` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn floquet_isospectral(
    graph: *const FloquetGraph,
    q1: *const FloquetPotential,
    q2: *const FloquetPotential,
    mode: FloquetMode,
    cap: usize,
    out_json: *mut *mut c_char,
) -> FloquetStatus {
    guard(|| {
        let g = deref(graph)?;
        let (q1, q2) = (&deref(q1)?.values, &deref(q2)?.values);
        let verdict = match mode {
            FloquetMode::Floquet => isospectral_floquet(&g.graph, q1, q2, limits(cap)),
            FloquetMode::Periodic => isospectral_periodic(&g.graph, q1, q2, limits(cap)),
        }
        .map_err(fail)?;
        if !out_json.is_null() {
            give_string(out_json, verdict.to_json().to_string())?;
        }
        Ok(if verdict.isospectral {
            FloquetStatus::Ok
        } else {
            FloquetStatus::False
        })
    })
}

/// Checks the trace formula for `n <= max_n` (0 means `ν`) on a `grid^d`
/// grid plus `samples` random quasimomenta. Returns
/// `FLOQUET_STATUS_VERIFICATION_FAILED` if the relative residual exceeds
/// `tol`. `max_residual` may be NULL.
///
/// # Safety
/// Handles must be live; `max_residual` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn floquet_verify_trace(
    graph: *const FloquetGraph,
    potential: *const FloquetPotential,
    max_n: usize,
    grid: usize,
    samples: usize,
    seed: u64,
    tol: f64,
    max_residual: *mut f64,
) -> FloquetStatus {
    guard(|| {
        let g = deref(graph)?;
        let q = &deref(potential)?.values;
        if tol.is_nan() || tol < 0.0 {
            return Err(invalid("tolerance must be nonnegative"));
        }
        let options = VerifyOptions {
            max_n: (max_n != 0).then_some(max_n),
            grid,
            samples,
            seed,
            tol,
            limits: Limits::default(),
        };
        let report = verify_trace_formula(&g.graph, q, &options).map_err(fail)?;
        if let Some(out) = max_residual.as_mut() {
            *out = report.max_residual;
        }
        Ok(if report.pass {
            FloquetStatus::Ok
        } else {
            FloquetStatus::VerificationFailed
        })
    })
}

/// # Safety
/// `text` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn floquet_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}
