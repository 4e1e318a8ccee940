use std::ffi::{CStr, CString};
use std::ptr;

use workbench_ffi::*;

const EXTERIOR: &str = include_str!("../../core/fixtures/exterior.cat");

fn take(s: *mut libc::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { wb_string_free(s) };
    out
}

fn last_error() -> String {
    let p = wb_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn reduce_through_the_abi() {
    let t = CString::new("(L0,L0,L2,L3,L2,L1,L0)").unwrap();
    let (mut red, mut fund) = (ptr::null_mut(), ptr::null_mut());
    let st = unsafe { wb_reduce_tuple(t.as_ptr(), &mut red, &mut fund) };
    assert_eq!(st, WbStatus::Ok);
    assert_eq!(take(red), "((L0,2+1),L2,L3,L2,L1)");
    assert_eq!(take(fund), "(L0,L2,L3,L1)");
}

#[test]
fn parse_errors_set_last_error() {
    let t = CString::new("(L0,").unwrap();
    let (mut red, mut fund) = (ptr::null_mut(), ptr::null_mut());
    let st = unsafe { wb_reduce_tuple(t.as_ptr(), &mut red, &mut fund) };
    assert_eq!(st, WbStatus::ParseError);
    assert!(red.is_null() && fund.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn null_arguments_are_rejected() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { wb_reduce_tuple(ptr::null(), &mut out, &mut out) }, WbStatus::NullArgument);
    assert_eq!(unsafe { wb_category_parse(ptr::null(), ptr::null_mut()) }, WbStatus::NullArgument);
    let mut n = 0usize;
    assert_eq!(unsafe { wb_category_generator_count(ptr::null(), &mut n) }, WbStatus::NullArgument);
    unsafe {
        wb_category_free(ptr::null_mut());
        wb_string_free(ptr::null_mut());
    }
}

#[test]
fn category_handle_lifecycle() {
    let text = CString::new(EXTERIOR).unwrap();
    let mut cat = ptr::null_mut();
    assert_eq!(unsafe { wb_category_parse(text.as_ptr(), &mut cat) }, WbStatus::Ok);
    let mut n = 0usize;
    assert_eq!(unsafe { wb_category_generator_count(cat, &mut n) }, WbStatus::Ok);
    assert_eq!(n, 4);
    let mut failures = usize::MAX;
    assert_eq!(unsafe { wb_category_check_ainf(cat, 4, &mut failures) }, WbStatus::Ok);
    assert_eq!(failures, 0);
    let mut filtered = -1;
    assert_eq!(unsafe { wb_category_is_filtered(cat, &mut filtered) }, WbStatus::Ok);
    assert_eq!(filtered, 1);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { wb_category_serialize(cat, &mut s) }, WbStatus::Ok);
    let first = take(s);
    unsafe { wb_category_free(cat) };

    let again = CString::new(first.clone()).unwrap();
    let mut cat = ptr::null_mut();
    assert_eq!(unsafe { wb_category_parse(again.as_ptr(), &mut cat) }, WbStatus::Ok);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { wb_category_serialize(cat, &mut s) }, WbStatus::Ok);
    assert_eq!(take(s), first);
    unsafe { wb_category_free(cat) };
}

#[test]
fn bad_category_is_a_parse_error() {
    let text = CString::new("object X\ngen X Q f level=0 ham=0\n").unwrap();
    let mut cat = ptr::null_mut();
    assert_eq!(unsafe { wb_category_parse(text.as_ptr(), &mut cat) }, WbStatus::ParseError);
    assert!(cat.is_null());
}

#[test]
fn f_vector_buffer_protocol() {
    let mut len = 0usize;
    assert_eq!(unsafe { wb_cluster_f_vector(4, ptr::null_mut(), 0, &mut len) }, WbStatus::BufferTooSmall);
    assert_eq!(len, 3);
    let mut buf = vec![0usize; len];
    assert_eq!(unsafe { wb_cluster_f_vector(4, buf.as_mut_ptr(), buf.len(), &mut len) }, WbStatus::Ok);
    assert_eq!(buf, [5, 5, 1]);
    assert_eq!(unsafe { wb_cluster_f_vector(1, ptr::null_mut(), 0, &mut len) }, WbStatus::InvalidArgument);
}

#[test]
fn budgets_are_exact_strings() {
    let eps = CString::new("1").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { wb_vertex_curvature_budget(eps.as_ptr(), 7, 0, 0, &mut out) }, WbStatus::Ok);
    assert_eq!(take(out), "0");

    let delta = CString::new("9/10").unwrap();
    let (mut worst, mut cap) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { wb_eps_delta_budget(eps.as_ptr(), delta.as_ptr(), &mut worst, &mut cap) }, WbStatus::Ok);
    assert_eq!(take(worst), "0");
    assert_eq!(take(cap), "4/5");

    let bad = CString::new("one").unwrap();
    assert_eq!(unsafe { wb_vertex_curvature_budget(bad.as_ptr(), 3, 0, 0, &mut out) }, WbStatus::ParseError);
}

#[test]
fn dimensions_and_widths() {
    let mut dim = 0i64;
    let case = CString::new("sphere_cluster").unwrap();
    assert_eq!(unsafe { wb_moduli_dimension(case.as_ptr(), 5, 0, &mut dim) }, WbStatus::Ok);
    assert_eq!(dim, 6);
    let case = CString::new("open").unwrap();
    assert_eq!(unsafe { wb_moduli_dimension(case.as_ptr(), 5, 0, &mut dim) }, WbStatus::InvalidArgument);

    let expr = CString::new("strip").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { wb_intrinsic_width(expr.as_ptr(), &mut out) }, WbStatus::Ok);
    assert_eq!(take(out), "(0,0)");
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(wb_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_entry_point() {
    let header = include_str!("../include/workbench.h");
    for name in [
        "wb_last_error",
        "wb_string_free",
        "wb_version",
        "wb_reduce_tuple",
        "wb_category_parse",
        "wb_category_free",
        "wb_category_serialize",
        "wb_category_generator_count",
        "wb_category_check_ainf",
        "wb_category_is_filtered",
        "wb_cluster_f_vector",
        "wb_vertex_curvature_budget",
        "wb_eps_delta_budget",
        "wb_moduli_dimension",
        "wb_intrinsic_width",
        "typedef struct WbCategory WbCategory",
        "WB_STATUS_BUFFER_TOO_SMALL = 5",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

// Compiles the C example against the generated header, as C and as C++.
#[test]
fn header_compiles_as_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let status = std::process::Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, "-I"])
            .arg(format!("{dir}/include"))
            .arg(format!("{dir}/examples/smoke.c"))
            .status();
        match status {
            Ok(s) => assert!(s.success(), "{compiler} rejected the header"),
            Err(e) => eprintln!("skipping {compiler}: {e}"),
        }
    }
}
