//! C interface to `spinecycles`.
//!
//! Objects are opaque handles released with their `*_free` function. Fallible
//! calls return an [`ScStatus`]; the message for the most recent failure on the
//! calling thread is available from [`sc_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spinecycles::cycles::{self, CycleError};
use spinecycles::predictor::{self, DiscriminantSet, PredictError};
use spinecycles::ssgraph::{self, GraphError, IsogenyGraph};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BoundViolation = 3,
    OutOfRange = 4,
    GraphFailure = 5,
    Panic = 6,
}

/// Supersingular isogeny graph.
pub struct ScGraph(IsogenyGraph);

/// Sorted list of discriminants.
pub struct ScDiscSet(DiscriminantSet);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScPrediction {
    pub n_s: u64,
    pub n_t: u64,
    /// Nonzero when `p` exceeds the Kaneko bound.
    pub valid: u8,
    /// Nonzero when `r` is a power of two.
    pub experimental: u8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScCycleCounts {
    pub n_s: u64,
    pub n_t: u64,
    /// Largest number of spine vertices on one cycle.
    pub max_spine_count: u64,
    pub tainted: u8,
}

/// Bounds as fractions; `strong_den` is 0 for odd `r`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScBound {
    pub m_num: u64,
    pub m_den: u64,
    pub strong_num: u64,
    pub strong_den: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: ScStatus, msg: impl ToString) -> ScStatus {
    set_error(msg.to_string());
    status
}

fn predict_status(e: PredictError) -> ScStatus {
    let status = match e {
        PredictError::BoundViolation { .. } => ScStatus::BoundViolation,
        _ => ScStatus::InvalidArgument,
    };
    fail(status, e)
}

fn graph_status(e: GraphError) -> ScStatus {
    let status = match e {
        GraphError::VertexCountMismatch { .. } | GraphError::Arith(_) => ScStatus::GraphFailure,
        _ => ScStatus::InvalidArgument,
    };
    fail(status, e)
}

fn cycle_status(e: CycleError) -> ScStatus {
    fail(ScStatus::InvalidArgument, e)
}

fn guard(f: impl FnOnce() -> ScStatus) -> ScStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(ScStatus::Panic, "internal panic"),
    }
}

/// Message for the last failed call on this thread; empty if none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_graph_build(
    p: u64,
    ell: u64,
    seed: u64,
    out: *mut *mut ScGraph,
) -> ScStatus {
    if out.is_null() {
        return fail(ScStatus::NullPointer, "out is null");
    }
    guard(|| match ssgraph::build_graph(p, ell, seed) {
        Ok(g) => {
            *out = Box::into_raw(Box::new(ScGraph(g)));
            ScStatus::Ok
        }
        Err(e) => {
            *out = ptr::null_mut();
            graph_status(e)
        }
    })
}

/// # Safety
/// `graph` must come from [`sc_graph_build`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sc_graph_free(graph: *mut ScGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_graph_vertex_count(graph: *const ScGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.vertex_count())
}

/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_graph_spine_size(graph: *const ScGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.spine_size())
}

/// j-invariant of vertex `index` as `a + b·√s`.
///
/// # Safety
/// `graph` must be a live handle; `a` and `b` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_graph_vertex(
    graph: *const ScGraph,
    index: usize,
    a: *mut u64,
    b: *mut u64,
) -> ScStatus {
    let Some(g) = graph.as_ref() else {
        return fail(ScStatus::NullPointer, "graph is null");
    };
    if a.is_null() || b.is_null() {
        return fail(ScStatus::NullPointer, "output is null");
    }
    if index >= g.0.vertex_count() {
        return fail(ScStatus::OutOfRange, format!("vertex {index} out of range"));
    }
    let j = g.0.j(index);
    *a = j.a;
    *b = j.b;
    ScStatus::Ok
}

/// # Safety
/// `graph` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_graph_cycle_census(
    graph: *const ScGraph,
    r: u32,
    out: *mut ScCycleCounts,
) -> ScStatus {
    let Some(g) = graph.as_ref() else {
        return fail(ScStatus::NullPointer, "graph is null");
    };
    if out.is_null() {
        return fail(ScStatus::NullPointer, "out is null");
    }
    guard(|| match cycles::census(&g.0, r) {
        Ok(c) => {
            *out = ScCycleCounts {
                n_s: c.n_s_graph,
                n_t: c.n_t_graph,
                max_spine_count: c.spine_count_histogram.keys().max().copied().unwrap_or(0) as u64,
                tainted: c.tainted_present as u8,
            };
            ScStatus::Ok
        }
        Err(e) => cycle_status(e),
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_predict(ell: u64, r: u32, p: u64, out: *mut ScPrediction) -> ScStatus {
    if out.is_null() {
        return fail(ScStatus::NullPointer, "out is null");
    }
    guard(|| match predictor::predict(ell, r, p) {
        Ok(pred) => {
            *out = ScPrediction {
                n_s: pred.n_s,
                n_t: pred.n_t,
                valid: pred.valid as u8,
                experimental: pred.experimental as u8,
            };
            ScStatus::Ok
        }
        Err(e) => predict_status(e),
    })
}

/// Average spine count as `num / den`.
///
/// # Safety
/// `num`, `den` and `conjectural` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_average_limit(
    ell: u64,
    r: u32,
    num: *mut i64,
    den: *mut i64,
    conjectural: *mut u8,
) -> ScStatus {
    if num.is_null() || den.is_null() || conjectural.is_null() {
        return fail(ScStatus::NullPointer, "output is null");
    }
    guard(|| match predictor::average_limit(ell, r) {
        Ok(limit) => {
            *num = *limit.value.numer();
            *den = *limit.value.denom();
            *conjectural = limit.conjectural as u8;
            ScStatus::Ok
        }
        Err(e) => predict_status(e),
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_kaneko_bound(ell: u64, r: u32, out: *mut ScBound) -> ScStatus {
    if out.is_null() {
        return fail(ScStatus::NullPointer, "out is null");
    }
    guard(|| match predictor::kaneko_bound(ell, r) {
        Ok(b) => {
            let (strong_num, strong_den) = b.m_strong.map_or((0, 0), |s| (*s.numer(), *s.denom()));
            *out = ScBound {
                m_num: *b.m.numer(),
                m_den: *b.m.denom(),
                strong_num,
                strong_den,
            };
            ScStatus::Ok
        }
        Err(e) => predict_status(e),
    })
}

/// Discriminants whose prime above `ell` has order dividing `r`, or exactly
/// `r` when `exact` is nonzero.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_disc_set_new(
    ell: u64,
    r: u32,
    exact: u8,
    out: *mut *mut ScDiscSet,
) -> ScStatus {
    if out.is_null() {
        return fail(ScStatus::NullPointer, "out is null");
    }
    guard(|| {
        let set = if exact != 0 {
            predictor::disc_set_exact(ell, r)
        } else {
            predictor::disc_set_dividing(ell, r)
        };
        match set {
            Ok(s) => {
                *out = Box::into_raw(Box::new(ScDiscSet(s)));
                ScStatus::Ok
            }
            Err(e) => {
                *out = ptr::null_mut();
                predict_status(e)
            }
        }
    })
}

/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_disc_set_len(set: *const ScDiscSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `set` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_disc_set_get(
    set: *const ScDiscSet,
    index: usize,
    out: *mut i64,
) -> ScStatus {
    let Some(s) = set.as_ref() else {
        return fail(ScStatus::NullPointer, "set is null");
    };
    if out.is_null() {
        return fail(ScStatus::NullPointer, "out is null");
    }
    match s.0.discs.get(index) {
        Some(d) => {
            *out = d.value();
            ScStatus::Ok
        }
        None => fail(ScStatus::OutOfRange, format!("index {index} out of range")),
    }
}

/// # Safety
/// `set` must come from [`sc_disc_set_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sc_disc_set_free(set: *mut ScDiscSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}
