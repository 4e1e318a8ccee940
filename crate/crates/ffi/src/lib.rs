//! C ABI for the workbench core.
//!
//! Conventions:
//! - every function returns a `WbStatus`; results go through out-pointers;
//! - strings passed in are NUL-terminated UTF-8 and are only borrowed;
//! - strings handed out are owned by the caller and released with
//!   `wb_string_free`;
//! - handles are opaque and released with their `*_free` function;
//! - after a non-`WB_STATUS_OK` return, `wb_last_error` describes the
//!   failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, c_int, size_t};

use workbench_core::ainfinity::{check_ainf, measure_discrepancies, FilteredAInfCategory};
use workbench_core::budget::{
    eps_delta_budget, vertex_curvature_budget, virtual_dimension, BudgetParams, Convention,
    DimensionCase, IndexInput,
};
use workbench_core::exact::{format_rational, parse_rational};
use workbench_core::strata::{enumerate_cluster_strata, f_vector, intrinsic_width, GluingExpr};
use workbench_core::trees::{reduce_tuple, LagTuple, TupleClass};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WbStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An input string was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An input could not be parsed.
    ParseError = 3,
    /// Inputs parsed but are outside the operation's domain.
    InvalidArgument = 4,
    /// A caller-provided buffer is too small; the needed length was written.
    BufferTooSmall = 5,
    /// An internal error was caught at the boundary.
    Panic = 6,
}

/// Opaque handle to a parsed category.
pub struct WbCategory {
    inner: FilteredAInfCategory,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("NUL removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Outcome = Result<(), (WbStatus, String)>;

fn guard(f: impl FnOnce() -> Outcome) -> WbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WbStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            WbStatus::Panic
        }
    }
}

fn null(what: &str) -> (WbStatus, String) {
    (WbStatus::NullArgument, format!("`{what}` is null"))
}

unsafe fn input<'a>(p: *const c_char, what: &str) -> Result<&'a str, (WbStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (WbStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Outcome {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| (WbStatus::InvalidArgument, "result contains NUL".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

fn parse_err(e: impl ToString) -> (WbStatus, String) {
    (WbStatus::ParseError, e.to_string())
}

fn invalid(e: impl ToString) -> (WbStatus, String) {
    (WbStatus::InvalidArgument, e.to_string())
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn wb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn wb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn wb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Reduced and fundamental tuples of a label tuple such as `(L0,L0,L1)`.
///
/// # Safety
/// `tuple` must be a NUL-terminated string; the out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wb_reduce_tuple(
    tuple: *const c_char,
    out_reduced: *mut *mut c_char,
    out_fundamental: *mut *mut c_char,
) -> WbStatus {
    guard(|| {
        let t: LagTuple = input(tuple, "tuple")?.parse().map_err(parse_err)?;
        if out_reduced.is_null() || out_fundamental.is_null() {
            return Err(null("out"));
        }
        let red = reduce_tuple(&t);
        put_string(out_reduced, red.to_string())?;
        put_string(out_fundamental, red.fundamental_string())
    })
}

/// Parses a category file into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wb_category_parse(text: *const c_char, out: *mut *mut WbCategory) -> WbStatus {
    guard(|| {
        let text = input(text, "text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = FilteredAInfCategory::parse(text).map_err(parse_err)?;
        *out = Box::into_raw(Box::new(WbCategory { inner }));
        Ok(())
    })
}

/// Releases a category handle. Null is ignored.
///
/// # Safety
/// `cat` must come from `wb_category_parse` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn wb_category_free(cat: *mut WbCategory) {
    if !cat.is_null() {
        drop(Box::from_raw(cat));
    }
}

/// Canonical text of a category.
///
/// # Safety
/// `cat` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wb_category_serialize(cat: *const WbCategory, out: *mut *mut c_char) -> WbStatus {
    guard(|| {
        let cat = cat.as_ref().ok_or_else(|| null("cat"))?;
        put_string(out, cat.inner.serialize())
    })
}

/// Number of hom generators.
///
/// # Safety
/// `cat` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wb_category_generator_count(cat: *const WbCategory, out: *mut size_t) -> WbStatus {
    guard(|| {
        let cat = cat.as_ref().ok_or_else(|| null("cat"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = cat.inner.generators().len();
        Ok(())
    })
}

/// Number of composable tuples of length `1..=max_d` on which the A∞
/// relation fails.
///
/// # Safety
/// `cat` must be a live handle and `out_failures` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wb_category_check_ainf(
    cat: *const WbCategory,
    max_d: size_t,
    out_failures: *mut size_t,
) -> WbStatus {
    guard(|| {
        let cat = cat.as_ref().ok_or_else(|| null("cat"))?;
        let out = out_failures.as_mut().ok_or_else(|| null("out_failures"))?;
        *out = check_ainf(&cat.inner, max_d, false).failures.len();
        Ok(())
    })
}

/// Writes 1 to `out` when every discrepancy vanishes and declared unit
/// levels are non-positive, 0 otherwise.
///
/// # Safety
/// `cat` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wb_category_is_filtered(cat: *const WbCategory, out: *mut c_int) -> WbStatus {
    guard(|| {
        let cat = cat.as_ref().ok_or_else(|| null("cat"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = measure_discrepancies(&cat.inner, cat.inner.units()).is_filtered as c_int;
        Ok(())
    })
}

/// f-vector of the cluster strata for `d` inputs and distinct labels,
/// indexed by dimension. Writes the length to `out_len`; when `cap` is too
/// small nothing else is written and `WB_STATUS_BUFFER_TOO_SMALL` is
/// returned.
///
/// # Safety
/// `buf` must hold `cap` elements (may be null when `cap` is 0) and
/// `out_len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wb_cluster_f_vector(
    d: size_t,
    buf: *mut size_t,
    cap: size_t,
    out_len: *mut size_t,
) -> WbStatus {
    guard(|| {
        let out_len = out_len.as_mut().ok_or_else(|| null("out_len"))?;
        if !(2..=9).contains(&d) {
            return Err(invalid("d must lie in 2..=9"));
        }
        let f = f_vector(&enumerate_cluster_strata(&LagTuple::distinct(d)));
        *out_len = f.len();
        if cap < f.len() {
            return Err((WbStatus::BufferTooSmall, format!("need {} entries", f.len())));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(f.as_ptr(), buf, f.len());
        Ok(())
    })
}

/// Worst-case vertex curvature as an exact rational string. `closed`
/// selects `L_0 = L_d`; `draft` selects the alternative closed count.
///
/// # Safety
/// `epsilon` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wb_vertex_curvature_budget(
    epsilon: *const c_char,
    d: size_t,
    closed: c_int,
    draft: c_int,
    out: *mut *mut c_char,
) -> WbStatus {
    guard(|| {
        let eps = parse_rational(input(epsilon, "epsilon")?).map_err(parse_err)?;
        let class = if closed != 0 {
            TupleClass::AlmostCyclicallyDifferent
        } else {
            TupleClass::CyclicallyDifferent
        };
        let convention = if draft != 0 { Convention::Draft } else { Convention::Main };
        let b = vertex_curvature_budget(&BudgetParams::new(eps, d, class), convention).map_err(invalid)?;
        put_string(out, format_rational(&b))
    })
}

/// Worst case and interior cap of the (ε, δ) budget as rational strings.
///
/// # Safety
/// Inputs must be NUL-terminated strings; the out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wb_eps_delta_budget(
    epsilon: *const c_char,
    delta: *const c_char,
    out_worst: *mut *mut c_char,
    out_cap: *mut *mut c_char,
) -> WbStatus {
    guard(|| {
        let eps = parse_rational(input(epsilon, "epsilon")?).map_err(parse_err)?;
        let delta = parse_rational(input(delta, "delta")?).map_err(parse_err)?;
        if out_worst.is_null() || out_cap.is_null() {
            return Err(null("out"));
        }
        let b = eps_delta_budget(&eps, &delta).map_err(invalid)?;
        put_string(out_worst, format_rational(&b.worst_case))?;
        put_string(out_cap, format_rational(&b.cap))
    })
}

/// Dimension for the size-only cases (`strip_moduli`, `stacked`,
/// `sphere_cluster`) from `d`, or `marked_disc` with `l = d` and `k`.
///
/// # Safety
/// `case_name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wb_moduli_dimension(
    case_name: *const c_char,
    d: i64,
    k: i64,
    out: *mut i64,
) -> WbStatus {
    guard(|| {
        let name = input(case_name, "case_name")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let case = DimensionCase::from_name(name).ok_or_else(|| invalid(format!("unknown case `{name}`")))?;
        let inp = match case {
            DimensionCase::MarkedDisc => IndexInput { l: Some(d), k: Some(k), ..Default::default() },
            DimensionCase::StripModuli | DimensionCase::Stacked | DimensionCase::SphereCluster => {
                IndexInput { d: Some(d), ..Default::default() }
            }
            _ => return Err(invalid(format!("`{name}` needs index data; use the CLI"))),
        };
        *out = virtual_dimension(&inp, case).map_err(invalid)?;
        Ok(())
    })
}

/// Intrinsic widths of a gluing expression, printed as `(w1,...,wd)`.
///
/// # Safety
/// `expr` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wb_intrinsic_width(expr: *const c_char, out: *mut *mut c_char) -> WbStatus {
    guard(|| {
        let e = GluingExpr::parse(input(expr, "expr")?).map_err(parse_err)?;
        let w = intrinsic_width(&e).map_err(invalid)?;
        put_string(out, w.to_string())
    })
}
