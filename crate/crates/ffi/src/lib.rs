//! C ABI over the elliptope library.
//!
//! Graphs and reduction instances are opaque handles created and released
//! here. Every fallible call returns an [`EllStatus`]; on failure
//! [`ell_last_error`] describes it. Strings handed out are NUL-terminated
//! JSON and must be released with [`ell_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use elliptope::graph::Graph;
use elliptope::reduction::{verify_reduction, ReductionInstance, ReductionKind, VerifyOptions};
use elliptope::schema::{
    graph_from_json, graph_to_json, instance_from_json, instance_to_json, parse_document, reduce_document,
};
use elliptope::Error;

/// Result of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Malformed = 3,
    ResourceLimit = 4,
    Ambiguous = 5,
    Internal = 6,
}

/// Opaque graph handle.
pub struct EllGraph(Graph);

/// Opaque reduction instance handle.
pub struct EllInstance(ReductionInstance);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Fallible = Result<(), (EllStatus, String)>;

fn set_error(message: Option<String>) {
    let c = message.map(|m| CString::new(m.replace('\0', " ")).expect("NUL bytes removed"));
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Fallible) -> EllStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(None);
            EllStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_error(Some(message));
            status
        }
        Err(_) => {
            set_error(Some("internal failure".into()));
            EllStatus::Internal
        }
    }
}

fn lib(e: Error) -> (EllStatus, String) {
    let status = match e {
        Error::ResourceLimit { .. } => EllStatus::ResourceLimit,
        Error::ToleranceAmbiguous(_) => EllStatus::Ambiguous,
        _ => EllStatus::Malformed,
    };
    (status, e.to_string())
}

fn null(what: &str) -> (EllStatus, String) {
    (EllStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (EllStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (EllStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Fallible {
    let c = CString::new(s).map_err(|_| (EllStatus::Internal, "output holds a NUL byte".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn ell_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL after a
/// successful one. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ell_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ell_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Graph on `n` nodes from `edge_count` pairs stored flat in `edges`.
///
/// # Safety
/// `edges` must point to `2 * edge_count` values (or may be NULL when
/// `edge_count` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ell_graph_new(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut EllGraph,
) -> EllStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if edges.is_null() && edge_count > 0 {
            return Err(null("edges"));
        }
        let flat = if edge_count == 0 { &[][..] } else { std::slice::from_raw_parts(edges, 2 * edge_count) };
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        put(out, EllGraph(Graph::new(n, pairs).map_err(lib)?));
        Ok(())
    })
}

/// Graph from `{"n": .., "edges": [[u, v], ..]}`.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ell_graph_from_json(json: *const c_char, out: *mut *mut EllGraph) -> EllStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let doc = parse_document(text(json, "json")?).map_err(lib)?;
        put(out, EllGraph(graph_from_json(&doc.raw).map_err(lib)?));
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn ell_graph_node_count(g: *const EllGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.node_count())
}

/// # Safety
/// `g` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn ell_graph_edge_count(g: *const EllGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ell_graph_to_json(g: *const EllGraph, out: *mut *mut c_char) -> EllStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        put_string(out, graph_to_json(&g.0).to_string())
    })
}

/// # Safety
/// `g` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn ell_graph_free(g: *mut EllGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Builds a reduction instance. `kind` is a command name such as
/// `"partition-gd2"` or a kind tag such as `"PARTITION_GD2"`; `source` is
/// the JSON source document the `reduce` command reads.
///
/// # Safety
/// Both strings must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ell_reduce(
    kind: *const c_char,
    source: *const c_char,
    out: *mut *mut EllInstance,
) -> EllStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let kind: ReductionKind = text(kind, "kind")?.parse().map_err(lib)?;
        let doc = parse_document(text(source, "source")?).map_err(lib)?;
        put(out, EllInstance(reduce_document(kind, &doc).map_err(lib)?));
        Ok(())
    })
}

/// Instance from its JSON document, as printed by `reduce`.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ell_instance_from_json(json: *const c_char, out: *mut *mut EllInstance) -> EllStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let doc = parse_document(text(json, "json")?).map_err(lib)?;
        put(out, EllInstance(instance_from_json(&doc.raw).map_err(lib)?));
        Ok(())
    })
}

/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ell_instance_to_json(inst: *const EllInstance, out: *mut *mut c_char) -> EllStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("instance"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        put_string(out, instance_to_json(&inst.0).to_string())
    })
}

/// Copy of the produced graph, owned by the caller.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ell_instance_graph(inst: *const EllInstance, out: *mut *mut EllGraph) -> EllStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("instance"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        put(out, EllGraph(inst.0.graph.clone()));
        Ok(())
    })
}

/// Runs the instance's decider against its oracle; `*agree` receives 1
/// when they agree and the side conditions hold, else 0. `budget` caps the
/// search, 0 for the default.
///
/// # Safety
/// `inst` must be a live handle; `agree` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ell_instance_verify(inst: *const EllInstance, budget: u64, agree: *mut i32) -> EllStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("instance"))?;
        if agree.is_null() {
            return Err(null("agree"));
        }
        let mut options = VerifyOptions::default();
        if budget > 0 {
            options.budget = budget;
        }
        *agree = i32::from(verify_reduction(&inst.0, &options).map_err(lib)?.agree);
        Ok(())
    })
}

/// # Safety
/// `inst` must come from this library and not be freed twice. NULL is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn ell_instance_free(inst: *mut EllInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Runs one command exactly as the command-line tool does. `argv` holds
/// `argc` arguments after the program name; `input` stands in for standard
/// input (NULL for none). The exit code goes to `*exit_code`, the report to
/// `*out_stdout` and diagnostics to `*out_stderr`; either output pointer may
/// be NULL to discard that stream.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings; `exit_code` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ell_run(
    argc: usize,
    argv: *const *const c_char,
    input: *const c_char,
    exit_code: *mut i32,
    out_stdout: *mut *mut c_char,
    out_stderr: *mut *mut c_char,
) -> EllStatus {
    guard(|| {
        if exit_code.is_null() {
            return Err(null("exit_code"));
        }
        if argv.is_null() && argc > 0 {
            return Err(null("argv"));
        }
        let mut args = vec!["elliptope".to_string()];
        for i in 0..argc {
            args.push(text(*argv.add(i), "argument")?.to_string());
        }
        let stdin = if input.is_null() { "" } else { text(input, "input")? };
        let out = elliptope::cli::run(args, &mut stdin.as_bytes());
        *exit_code = out.code;
        if !out_stdout.is_null() {
            put_string(out_stdout, out.stdout)?;
        }
        if !out_stderr.is_null() {
            put_string(out_stderr, out.stderr)?;
        }
        Ok(())
    })
}
