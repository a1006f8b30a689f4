use std::ffi::{c_char, CStr, CString};
use std::ptr;

use elliptope_ffi::*;

fn owned(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { ell_string_free(p) };
    s
}

fn last_error() -> Option<String> {
    let p = ell_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

#[test]
fn graph_handles() {
    let edges = [0usize, 1, 2, 1, 2, 0];
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ell_graph_new(3, edges.as_ptr(), 3, &mut g) }, EllStatus::Ok);
    assert_eq!(unsafe { ell_graph_node_count(g) }, 3);
    assert_eq!(unsafe { ell_graph_edge_count(g) }, 3);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { ell_graph_to_json(g, &mut json) }, EllStatus::Ok);
    let text = CString::new(owned(json)).unwrap();
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { ell_graph_from_json(text.as_ptr(), &mut again) }, EllStatus::Ok);
    assert_eq!(unsafe { ell_graph_edge_count(again) }, 3);
    unsafe {
        ell_graph_free(g);
        ell_graph_free(again);
        ell_graph_free(ptr::null_mut());
    }
    assert_eq!(unsafe { ell_graph_node_count(ptr::null()) }, 0);
}

#[test]
fn errors_are_reported() {
    let mut g = ptr::null_mut();
    let loop_edge = [1usize, 1];
    assert_eq!(unsafe { ell_graph_new(2, loop_edge.as_ptr(), 1, &mut g) }, EllStatus::Malformed);
    assert!(last_error().is_some());
    assert!(g.is_null());
    assert_eq!(unsafe { ell_graph_new(2, ptr::null(), 1, &mut g) }, EllStatus::NullPointer);
    let bad = CString::new("{\"n\": 2, \"edges\": [[1, 0]]}").unwrap();
    assert_eq!(unsafe { ell_graph_from_json(bad.as_ptr(), &mut g) }, EllStatus::Malformed);
    assert!(last_error().unwrap().contains("parse") || last_error().unwrap().contains("graph"));
    let bytes = [0xffu8, 0xfe, 0];
    assert_eq!(unsafe { ell_graph_from_json(bytes.as_ptr().cast(), &mut g) }, EllStatus::InvalidUtf8);
    assert_eq!(unsafe { ell_graph_from_json(ptr::null(), &mut g) }, EllStatus::NullPointer);
    assert_eq!(unsafe { ell_graph_new(0, ptr::null(), 0, &mut g) }, EllStatus::Ok);
    assert!(last_error().is_none());
    unsafe { ell_graph_free(g) };
}

#[test]
fn reduce_and_verify() {
    let kind = CString::new("partition-gd2").unwrap();
    let source = CString::new(r#"{"a": ["1", "2", "3"]}"#).unwrap();
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { ell_reduce(kind.as_ptr(), source.as_ptr(), &mut inst) }, EllStatus::Ok);
    let mut agree = -1;
    assert_eq!(unsafe { ell_instance_verify(inst, 0, &mut agree) }, EllStatus::Ok);
    assert_eq!(agree, 1);
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ell_instance_graph(inst, &mut g) }, EllStatus::Ok);
    assert_eq!(unsafe { ell_graph_node_count(g) }, 3);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { ell_instance_to_json(inst, &mut json) }, EllStatus::Ok);
    let doc = CString::new(owned(json)).unwrap();
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { ell_instance_from_json(doc.as_ptr(), &mut back) }, EllStatus::Ok);
    assert_eq!(unsafe { ell_instance_verify(back, 1, &mut agree) }, EllStatus::ResourceLimit);
    unsafe {
        ell_instance_free(inst);
        ell_instance_free(back);
        ell_graph_free(g);
    }
    let unknown = CString::new("nope").unwrap();
    assert_eq!(unsafe { ell_reduce(unknown.as_ptr(), source.as_ptr(), &mut inst) }, EllStatus::Malformed);
}

#[test]
fn run_matches_the_command_line() {
    let args: Vec<CString> = ["check-e1"].iter().map(|a| CString::new(*a).unwrap()).collect();
    let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let input = CString::new(
        r#"{"graph": {"n": 3, "edges": [[0, 1], [0, 2], [1, 2]]}, "x": {"0,1": "-1", "0,2": "-1", "1,2": "-1"}}"#,
    )
    .unwrap();
    let (mut code, mut out, mut err) = (0, ptr::null_mut(), ptr::null_mut());
    let status = unsafe { ell_run(argv.len(), argv.as_ptr(), input.as_ptr(), &mut code, &mut out, &mut err) };
    assert_eq!(status, EllStatus::Ok);
    assert_eq!(code, 1);
    let expected = elliptope::cli::run(["elliptope", "check-e1"], &mut input.as_bytes());
    assert_eq!(owned(out), expected.stdout);
    assert_eq!(owned(err), "");
    let status = unsafe { ell_run(0, ptr::null(), ptr::null(), &mut code, ptr::null_mut(), ptr::null_mut()) };
    assert_eq!(status, EllStatus::Ok);
    assert_eq!(code, 64);
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(ell_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
