//! C ABI over `ffdg`.
//!
//! Every fallible function returns an [`FfdgStatus`] and writes results
//! through out-pointers. Handles are opaque and must be released with the
//! matching `*_free` function. After a non-OK status,
//! [`ffdg_last_error`] describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::{Arc, OnceLock};

use ffdg::char_sums::{gauss_sum, kloosterman, salie, CharSumRecord};
use ffdg::harness::experiment::count_embeddings;
use ffdg::harness::random_set;
use ffdg::{
    DistanceGraph, Error, FieldElement, FieldSpec, FiniteField, GraphKind, Lengths, PointSet,
    Space, SphereIndex,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[allow(non_camel_case_types)]
pub enum FfdgStatus {
    FFDG_OK = 0,
    FFDG_NULL_POINTER = 1,
    FFDG_INVALID_ARGUMENT = 2,
    FFDG_PARSE = 3,
    FFDG_BUDGET = 4,
    FFDG_OVERFLOW = 5,
    FFDG_IO = 6,
    FFDG_PANIC = 7,
}

use FfdgStatus::*;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[allow(non_camel_case_types)]
pub enum FfdgGraphKind {
    FFDG_GRAPH_PATH = 0,
    FFDG_GRAPH_CYCLE = 1,
    FFDG_GRAPH_COMPLETE = 2,
    FFDG_GRAPH_STAR = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FfdgComplex {
    pub re: f64,
    pub im: f64,
}

/// A character sum; `bound` is meaningful only when `has_bound` is set.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FfdgSum {
    pub value: FfdgComplex,
    pub magnitude: f64,
    pub bound: f64,
    pub has_bound: bool,
    pub passes: bool,
}

/// Embedding counts with floating normalizations.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FfdgCount {
    pub c: u64,
    pub c_star: u64,
    pub n: f64,
    pub n_star: f64,
}

pub struct FfdgField {
    field: Arc<FiniteField>,
}

pub struct FfdgPointSet {
    set: PointSet,
    spheres: OnceLock<SphereIndex>,
}

pub struct FfdgGraph {
    graph: DistanceGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(FfdgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } => FFDG_PARSE,
            Error::BudgetExceeded { .. } => FFDG_BUDGET,
            Error::Io(_) => FFDG_IO,
            _ => FFDG_INVALID_ARGUMENT,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FFDG_NULL_POINTER, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FfdgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            FFDG_OK
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FFDG_PANIC
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null("string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(FFDG_INVALID_ARGUMENT, format!("string is not UTF-8: {e}")))
}

fn element(field: &FiniteField, a: u32) -> Result<FieldElement, Failure> {
    Ok(field.element(a as u64)?)
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ffdg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds F_{p^k} with the default modulus.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn ffdg_field_new(p: u32, k: u32, out: *mut *mut FfdgField) -> FfdgStatus {
    guard(|| {
        let field = Arc::new(FiniteField::new(p, k, None)?);
        put(out, Box::into_raw(Box::new(FfdgField { field })))
    })
}

/// Builds a field from a spec string such as `"9"`, `"3^2"` or `"3^2/2,2,1"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ffdg_field_parse(
    spec: *const c_char,
    out: *mut *mut FfdgField,
) -> FfdgStatus {
    guard(|| {
        let spec: FieldSpec = text(spec)?.parse()?;
        let field = Arc::new(spec.build()?);
        put(out, Box::into_raw(Box::new(FfdgField { field })))
    })
}

/// # Safety
/// `field` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ffdg_field_free(field: *mut FfdgField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// The field order q, or 0 for a NULL handle.
///
/// # Safety
/// `field` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ffdg_field_order(field: *const FfdgField) -> u32 {
    field.as_ref().map_or(0, |f| f.field.order())
}

/// # Safety
/// `field` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffdg_field_trace(
    field: *const FfdgField,
    a: u32,
    out: *mut u32,
) -> FfdgStatus {
    guard(|| {
        let f = &get(field, "field")?.field;
        put(out, f.trace(element(f, a)?).0)
    })
}

/// # Safety
/// `field` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffdg_field_additive_char(
    field: *const FfdgField,
    a: u32,
    out: *mut FfdgComplex,
) -> FfdgStatus {
    guard(|| {
        let f = &get(field, "field")?.field;
        let z = f.additive_char(element(f, a)?);
        put(out, FfdgComplex { re: z.re, im: z.im })
    })
}

/// Writes +1 or -1; a = 0 is an invalid argument.
///
/// # Safety
/// `field` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffdg_field_quadratic_char(
    field: *const FfdgField,
    a: u32,
    out: *mut i8,
) -> FfdgStatus {
    guard(|| {
        let f = &get(field, "field")?.field;
        put(out, f.quadratic_char(element(f, a)?)?)
    })
}

fn sum_out(r: &CharSumRecord) -> FfdgSum {
    FfdgSum {
        value: FfdgComplex {
            re: r.value_re,
            im: r.value_im,
        },
        magnitude: r.magnitude,
        bound: r.bound.unwrap_or(0.0),
        has_bound: r.bound.is_some(),
        passes: r.passes(),
    }
}

/// # Safety
/// `field` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffdg_gauss_sum(field: *const FfdgField, out: *mut FfdgSum) -> FfdgStatus {
    guard(|| {
        let f = &get(field, "field")?.field;
        put(out, sum_out(&gauss_sum(f)))
    })
}

/// # Safety
/// `field` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffdg_kloosterman(
    field: *const FfdgField,
    a: u32,
    b: u32,
    out: *mut FfdgSum,
) -> FfdgStatus {
    guard(|| {
        let f = &get(field, "field")?.field;
        put(
            out,
            sum_out(&kloosterman(f, element(f, a)?, element(f, b)?)),
        )
    })
}

/// # Safety
/// `field` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffdg_salie(
    field: *const FfdgField,
    a: u32,
    b: u32,
    out: *mut FfdgSum,
) -> FfdgStatus {
    guard(|| {
        let f = &get(field, "field")?.field;
        put(out, sum_out(&salie(f, element(f, a)?, element(f, b)?)))
    })
}

/// E sigma_lambda = q^(1-d) |S_lambda| over F_q^d.
///
/// # Safety
/// `field` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffdg_sigma_mean(
    field: *const FfdgField,
    d: usize,
    lambda: u32,
    out: *mut f64,
) -> FfdgStatus {
    guard(|| {
        let f = &get(field, "field")?.field;
        let space = Space::new(f.clone(), d)?;
        let l = element(f, lambda)?;
        put(out, SphereIndex::build(&space)?.sigma_mean(l)?)
    })
}

fn wrap_set(set: PointSet) -> *mut FfdgPointSet {
    Box::into_raw(Box::new(FfdgPointSet {
        set,
        spheres: OnceLock::new(),
    }))
}

/// Seeded Bernoulli(density) subset of F_q^d.
///
/// # Safety
/// `field` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffdg_set_random(
    field: *const FfdgField,
    d: usize,
    density: f64,
    seed: u64,
    out: *mut *mut FfdgPointSet,
) -> FfdgStatus {
    guard(|| {
        let f = &get(field, "field")?.field;
        let set = random_set(&Space::new(f.clone(), d)?, density, seed)?;
        put(out, wrap_set(set))
    })
}

/// Set of the given vector indices; `indices` may be NULL when `len` is 0.
///
/// # Safety
/// `indices` must point to `len` readable values; `field` must be live and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffdg_set_from_indices(
    field: *const FfdgField,
    d: usize,
    indices: *const u32,
    len: usize,
    out: *mut *mut FfdgPointSet,
) -> FfdgStatus {
    guard(|| {
        let f = &get(field, "field")?.field;
        let idx: &[u32] = if len == 0 {
            &[]
        } else if indices.is_null() {
            return Err(null("indices"));
        } else {
            std::slice::from_raw_parts(indices, len)
        };
        let set =
            PointSet::from_indices(Space::new(f.clone(), d)?, idx.iter().map(|&i| i as usize))?;
        put(out, wrap_set(set))
    })
}

/// Parses the point-set text format.
///
/// # Safety
/// `text` must be NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffdg_set_parse(
    source: *const c_char,
    out: *mut *mut FfdgPointSet,
) -> FfdgStatus {
    guard(|| put(out, wrap_set(PointSet::parse(text(source)?)?)))
}

/// Number of points, or 0 for a NULL handle.
///
/// # Safety
/// `set` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ffdg_set_len(set: *const FfdgPointSet) -> usize {
    set.as_ref().map_or(0, |s| s.set.len())
}

/// |A| / q^d, or 0 for a NULL handle.
///
/// # Safety
/// `set` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ffdg_set_density(set: *const FfdgPointSet) -> f64 {
    set.as_ref().map_or(0.0, |s| s.set.density())
}

/// # Safety
/// `set` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ffdg_set_free(set: *mut FfdgPointSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Parses the graph text format (`n N` then `e i j lambda` lines).
///
/// # Safety
/// `text` must be NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffdg_graph_parse(
    source: *const c_char,
    out: *mut *mut FfdgGraph,
) -> FfdgStatus {
    guard(|| {
        let graph = DistanceGraph::parse(text(source)?)?;
        put(out, Box::into_raw(Box::new(FfdgGraph { graph })))
    })
}

/// A generated graph with every edge of length `lambda`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ffdg_graph_generate(
    kind: FfdgGraphKind,
    n: usize,
    lambda: u32,
    out: *mut *mut FfdgGraph,
) -> FfdgStatus {
    guard(|| {
        let kind = match kind {
            FfdgGraphKind::FFDG_GRAPH_PATH => GraphKind::Path,
            FfdgGraphKind::FFDG_GRAPH_CYCLE => GraphKind::Cycle,
            FfdgGraphKind::FFDG_GRAPH_COMPLETE => GraphKind::Complete,
            FfdgGraphKind::FFDG_GRAPH_STAR => GraphKind::Star,
        };
        let graph = ffdg::graph::generate(kind, n, Lengths::Uniform(lambda))?;
        put(out, Box::into_raw(Box::new(FfdgGraph { graph })))
    })
}

/// Number of edges, or 0 for a NULL handle.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ffdg_graph_edge_count(graph: *const FfdgGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.edge_count())
}

/// # Safety
/// `graph` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ffdg_graph_free(graph: *mut FfdgGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Counts embeddings of `graph` in `set`. With `oracle` set, enumerates all
/// tuples subject to `budget` tuple-edge checks. Counts above 2^64 - 1
/// report FFDG_OVERFLOW.
///
/// # Safety
/// `set` and `graph` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffdg_count(
    set: *const FfdgPointSet,
    graph: *const FfdgGraph,
    oracle: bool,
    budget: u64,
    out: *mut FfdgCount,
) -> FfdgStatus {
    guard(|| {
        let s = get(set, "set")?;
        let g = &get(graph, "graph")?.graph;
        let counts = if oracle {
            ffdg::count_bruteforce(&s.set, g, budget as u128)?
        } else {
            let spheres = match s.spheres.get() {
                Some(sp) => sp,
                None => {
                    let built = SphereIndex::build(s.set.space())?;
                    s.spheres.get_or_init(|| built)
                }
            };
            count_embeddings(&s.set, g, spheres, None)?
        };
        let narrow = |v: u128| {
            u64::try_from(v)
                .map_err(|_| Failure(FFDG_OVERFLOW, format!("count {v} does not fit in 64 bits")))
        };
        put(
            out,
            FfdgCount {
                c: narrow(counts.c)?,
                c_star: narrow(counts.c_star)?,
                n: counts.normalized_f64(),
                n_star: counts.normalized_star_f64(),
            },
        )
    })
}
