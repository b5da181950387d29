//! C ABI over `frobml`.
//!
//! Problems and analyses cross the boundary as opaque handles owned by the
//! caller and released with the matching `*_free`. Every fallible call
//! returns an [`FmlStatus`]; on failure the message is available from
//! [`fml_last_error`] on the same thread. Strings returned through `char **`
//! out-parameters are NUL-terminated UTF-8 and must be released with
//! [`fml_string_free`]. Panics never unwind into C: they surface as
//! [`FmlStatus::Panic`].

use frobml::analysis::{self, Analysis, Question};
use frobml::problem::{Problem, ProblemSpec};
use frobml::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

/// Status codes. Nonzero values agree with the command-line exit codes
/// where both exist.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FmlStatus {
    Ok = 0,
    InvalidInput = 2,
    CapExceeded = 3,
    Internal = 4,
    NullArgument = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FmlQuestion {
    /// X ∩ Γ is nonempty.
    Nonempty = 0,
    /// X ∩ Γ is infinite.
    Infinite = 1,
    /// X ∩ Γ contains a coset of an infinite subgroup.
    InfiniteCoset = 2,
}

/// A validated problem.
pub struct FmlProblem {
    inner: Problem,
}

/// The automata for one problem.
pub struct FmlAnalysis {
    problem: Problem,
    inner: Analysis,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Core(Error),
    Null(&'static str),
    Utf8(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn status_of(e: &Error) -> FmlStatus {
    match e.exit_code() {
        3 => FmlStatus::CapExceeded,
        4 => FmlStatus::Internal,
        _ => FmlStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FmlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FmlStatus::Ok,
        Ok(Err(Failure::Core(e))) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_last_error(&format!("{what} is null"));
            FmlStatus::NullArgument
        }
        Ok(Err(Failure::Utf8(what))) => {
            set_last_error(&format!("{what} is not valid UTF-8"));
            FmlStatus::InvalidInput
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            FmlStatus::Panic
        }
    }
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8(what))
}

/// # Safety
/// `p` is null or valid for reads of `T`.
unsafe fn read_ref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

/// # Safety
/// `out` is null or valid for writes of `T`.
unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|_| Failure::Core(Error::Internal("output contains NUL".into())))
}

fn to_json(v: &impl serde::Serialize) -> Result<String, Failure> {
    serde_json::to_string(v).map_err(|e| Failure::Core(Error::Internal(e.to_string())))
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next `fml_*` call on the same thread.
#[no_mangle]
pub extern "C" fn fml_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses and validates a problem given as JSON. Relative digit-set paths
/// are resolved against `base_dir`, which may be null for the current
/// directory.
///
/// # Safety
/// `json` and a non-null `base_dir` are NUL-terminated strings; `out` is
/// valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn fml_problem_from_json(
    json: *const c_char,
    base_dir: *const c_char,
    out: *mut *mut FmlProblem,
) -> FmlStatus {
    guard(|| {
        let src = read_str(json, "json")?;
        let base = if base_dir.is_null() { "." } else { read_str(base_dir, "base_dir")? };
        let problem = ProblemSpec::from_json(src)?.resolve(Path::new(base))?;
        write_out(out, Box::into_raw(Box::new(FmlProblem { inner: problem })), "out")
    })
}

/// # Safety
/// `problem` is null or came from [`fml_problem_from_json`] and was not freed.
#[no_mangle]
pub unsafe extern "C" fn fml_problem_free(problem: *mut FmlProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Number of digits in the problem's digit set.
///
/// # Safety
/// `problem` is a live handle; `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fml_problem_digit_count(problem: *const FmlProblem, out: *mut usize) -> FmlStatus {
    guard(|| {
        let p = read_ref(problem, "problem")?;
        write_out(out, p.inner.sigma.len(), "out")
    })
}

/// Builds the machine and both minimized languages.
///
/// # Safety
/// `problem` is a live handle; `out` is valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn fml_analyze(problem: *const FmlProblem, out: *mut *mut FmlAnalysis) -> FmlStatus {
    guard(|| {
        let p = read_ref(problem, "problem")?;
        let inner = analysis::analyze(&p.inner)?;
        let handle = FmlAnalysis { problem: p.inner.clone(), inner };
        write_out(out, Box::into_raw(Box::new(handle)), "out")
    })
}

/// # Safety
/// `analysis` is null or came from [`fml_analyze`] and was not freed.
#[no_mangle]
pub unsafe extern "C" fn fml_analysis_free(analysis: *mut FmlAnalysis) {
    if !analysis.is_null() {
        drop(Box::from_raw(analysis));
    }
}

/// State counts of the machine, of L and of the representative language.
///
/// # Safety
/// `analysis` is a live handle; each out-pointer is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fml_analysis_state_counts(
    analysis: *const FmlAnalysis,
    machine: *mut usize,
    language: *mut usize,
    representatives: *mut usize,
) -> FmlStatus {
    guard(|| {
        let a = &read_ref(analysis, "analysis")?.inner;
        write_out(machine, a.machine.state_count(), "machine")?;
        write_out(language, a.language.state_count(), "language")?;
        write_out(representatives, a.representatives.state_count(), "representatives")
    })
}

/// # Safety
/// `analysis` is a live handle; `answer` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fml_decide(analysis: *const FmlAnalysis, question: FmlQuestion, answer: *mut bool) -> FmlStatus {
    guard(|| {
        let a = &read_ref(analysis, "analysis")?.inner;
        let q = match question {
            FmlQuestion::Nonempty => Question::Nonempty,
            FmlQuestion::Infinite => Question::Infinite,
            FmlQuestion::InfiniteCoset => Question::InfiniteCoset,
        };
        write_out(answer, analysis::decide(a, q).answer, "answer")
    })
}

/// Orbit decomposition as a JSON array.
///
/// # Safety
/// `analysis` is a live handle; `out` is valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn fml_decompose_json(analysis: *const FmlAnalysis, out: *mut *mut c_char) -> FmlStatus {
    guard(|| {
        let a = read_ref(analysis, "analysis")?;
        let d = analysis::orbit_decompose(&a.problem, &a.inner)?;
        write_out(out, to_c_string(to_json(&d)?)?, "out")
    })
}

/// Per-length counts of the representative language as CSV with columns
/// n, count, cumulative.
///
/// # Safety
/// `analysis` is a live handle; `out` is valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn fml_census_csv(analysis: *const FmlAnalysis, max_len: usize, out: *mut *mut c_char) -> FmlStatus {
    guard(|| {
        let a = &read_ref(analysis, "analysis")?.inner;
        let csv = frobml::automata::census_csv(&a.representatives.census(max_len));
        write_out(out, to_c_string(csv)?, "out")
    })
}

/// Number of points of X ∩ Γ of height at most `height`.
///
/// # Safety
/// `analysis` is a live handle; `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fml_count_by_height(analysis: *const FmlAnalysis, height: u64, out: *mut u64) -> FmlStatus {
    guard(|| {
        let a = read_ref(analysis, "analysis")?;
        let gc = analysis::growth_constants(&a.problem.sigma)?;
        let n = analysis::count_by_height(&a.problem, &a.inner, &gc, height)?;
        write_out(out, n, "out")
    })
}

/// F-pure hull of the module generated by the problem's generators, which
/// must live in G_a. The result is JSON.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn fml_hull_json(json: *const c_char, out: *mut *mut c_char) -> FmlStatus {
    guard(|| {
        let spec = ProblemSpec::from_json(read_str(json, "json")?)?;
        let hull = analysis::f_pure_hull_additive(&spec.additive_generators()?)?;
        write_out(out, to_c_string(to_json(&hull)?)?, "out")
    })
}

/// # Safety
/// `s` is null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fml_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
