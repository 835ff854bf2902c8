//! C ABI over the algoprob library.
//!
//! Conventions, which the generated header repeats:
//! - Every fallible call returns [`ApStatus`] and writes results through
//!   out pointers. The out values are valid only on `AP_STATUS_OK`.
//! - Any other status stores a thread-local message; fetch it with
//!   [`ap_last_error_message`].
//! - Distributions are opaque handles created by the `ap_distribution_*`
//!   constructors and released exactly once with [`ap_distribution_free`].
//! - Strings cross the boundary as NUL-terminated UTF-8. Calls that fill a
//!   caller buffer need `len + 1` bytes and report `AP_STATUS_BUFFER_TOO_SMALL`
//!   otherwise.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use algoprob::distribution::{InitMode, PatternDistribution};
use algoprob::ingest::{compression_ratio, pi_digits};
use algoprob::persist;
use algoprob::stats::{compare_report, permutation_pvalue, spearman, SupportPolicy};
use algoprob::symmetry::{burnside_count, canonical, collapse_by_symmetry};
use algoprob::tm::{busy_beaver_search, decode_machine, run, EnumOptions, RunStatus};
use algoprob::Error;

/// Outcome of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApStatus {
    Ok = 0,
    /// Machine index outside its (n,2) space.
    IndexOutOfRange = 1,
    /// A hard capacity limit was exceeded (state count, space size).
    Capacity = 2,
    /// A parameter failed a precondition.
    Parameter = 3,
    /// The queried string is not in the distribution.
    NotObserved = 4,
    /// The two distributions cannot be merged.
    IncompatibleSources = 5,
    /// Fewer than 3 aligned strings to correlate.
    InsufficientSupport = 6,
    /// A rank vector has zero variance.
    UndefinedCorrelation = 7,
    /// File read or write failure.
    Io = 8,
    /// A distribution file failed validation.
    MalformedFile = 9,
    /// A required pointer argument was NULL.
    NullPointer = 10,
    /// A string argument was not valid UTF-8.
    InvalidString = 11,
    /// A caller-supplied buffer is too short.
    BufferTooSmall = 12,
    /// Internal panic; state is unchanged but the result is lost.
    Panic = 13,
}

/// Opaque pattern distribution handle.
pub struct ApDistribution {
    inner: PatternDistribution,
}

/// Busy Beaver search result.
#[repr(C)]
pub struct ApBusyBeaver {
    pub n_states: u32,
    /// Max ones left on the tape by a halting machine.
    pub sigma: u64,
    /// Max steps taken by a halting machine.
    pub s_max: u64,
    pub halting_count: u64,
    pub total_count: u64,
    pub cap_used: u64,
}

/// Result of running one machine.
#[repr(C)]
pub struct ApRunOutcome {
    /// True if the machine reached the halt state within the cap.
    pub halted: bool,
    pub steps: u64,
    /// Ones on the tape when the run ended.
    pub ones_count: u64,
    /// Byte length of the output string (excluding the NUL).
    pub output_len: usize,
}

/// Support alignment policy for comparisons.
#[repr(C)]
#[derive(Clone, Copy)]
pub enum ApSupportPolicy {
    /// Strings of length k present in both distributions.
    Intersection = 0,
    /// Strings of length k present in either; absentees count 0.
    UnionWithZeros = 1,
}

/// Rank correlation between two distributions.
#[repr(C)]
pub struct ApCorrelation {
    pub rho: f64,
    pub p_value: f64,
    /// Aligned strings the statistics were computed over.
    pub pair_count: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: ApStatus, message: impl std::fmt::Display) -> ApStatus {
    LAST_ERROR.with(|slot| {
        let text = message.to_string().replace('\0', " ");
        *slot.borrow_mut() = CString::new(text).unwrap_or_default();
    });
    status
}

fn fail_with(e: &Error) -> ApStatus {
    let status = match e {
        Error::IndexOutOfRange { .. } => ApStatus::IndexOutOfRange,
        Error::Capacity(_) => ApStatus::Capacity,
        Error::Parameter(_) => ApStatus::Parameter,
        Error::NotObserved(_) => ApStatus::NotObserved,
        Error::IncompatibleSources(_) => ApStatus::IncompatibleSources,
        Error::InsufficientSupport { .. } => ApStatus::InsufficientSupport,
        Error::UndefinedCorrelation => ApStatus::UndefinedCorrelation,
        Error::Io { .. } => ApStatus::Io,
        Error::MalformedFile { .. } => ApStatus::MalformedFile,
    };
    fail(status, e)
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(value) => value,
            Err(status) => return status,
        }
    };
}

unsafe fn required_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, ApStatus> {
    if p.is_null() {
        return Err(fail(ApStatus::NullPointer, format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(ApStatus::InvalidString, format!("{what} is not valid UTF-8")))
}

unsafe fn required_out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, ApStatus> {
    if p.is_null() {
        Err(fail(ApStatus::NullPointer, format!("{what} is NULL")))
    } else {
        Ok(&mut *p)
    }
}

unsafe fn required_dist<'a>(
    p: *const ApDistribution,
    what: &str,
) -> Result<&'a PatternDistribution, ApStatus> {
    if p.is_null() {
        Err(fail(ApStatus::NullPointer, format!("{what} is NULL")))
    } else {
        Ok(&(*p).inner)
    }
}

unsafe fn required_slice<'a>(
    p: *const f64,
    len: usize,
    what: &str,
) -> Result<&'a [f64], ApStatus> {
    if p.is_null() {
        Err(fail(ApStatus::NullPointer, format!("{what} is NULL")))
    } else {
        Ok(std::slice::from_raw_parts(p, len))
    }
}

/// Copies `s` plus a NUL into the caller buffer.
unsafe fn write_c_string(s: &str, buf: *mut c_char, buf_len: usize) -> ApStatus {
    if buf.is_null() {
        return fail(ApStatus::NullPointer, "output buffer is NULL");
    }
    let needed = s.len() + 1;
    if buf_len < needed {
        return fail(
            ApStatus::BufferTooSmall,
            format!("output needs {needed} bytes, buffer holds {buf_len}"),
        );
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    *buf.add(s.len()) = 0;
    ApStatus::Ok
}

fn guarded(body: impl FnOnce() -> ApStatus) -> ApStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(ApStatus::Panic, "internal panic"),
    }
}

fn publish(d: PatternDistribution, out: &mut *mut ApDistribution) -> ApStatus {
    *out = Box::into_raw(Box::new(ApDistribution { inner: d }));
    ApStatus::Ok
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ap_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copies the current thread's last error message into `buf` (truncating
/// if needed, always NUL-terminated when `buf_len > 0`) and returns the
/// full message length in bytes, excluding the NUL.
#[no_mangle]
pub unsafe extern "C" fn ap_last_error_message(buf: *mut c_char, buf_len: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes();
        if !buf.is_null() && buf_len > 0 {
            let n = bytes.len().min(buf_len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Builds the blank-tape output distribution of the (n,2) machine space.
/// `workers = 0` uses one thread per core.
#[no_mangle]
pub unsafe extern "C" fn ap_distribution_build_blank(
    n_states: u32,
    cap: u64,
    workers: usize,
    out: *mut *mut ApDistribution,
) -> ApStatus {
    let out = try_ffi!(required_out(out, "out"));
    guarded(|| {
        let opts = EnumOptions {
            workers,
            ..EnumOptions::default()
        };
        match algoprob::distribution::build_distribution(n_states, cap, InitMode::Blank, None, &opts)
        {
            Ok(d) => publish(d, out),
            Err(e) => fail_with(&e),
        }
    })
}

/// Builds the distribution over seeded pseudorandom tape segments:
/// `samples` tapes of `seg_len` bits per machine, pooled.
#[no_mangle]
pub unsafe extern "C" fn ap_distribution_build_random(
    n_states: u32,
    cap: u64,
    seg_len: u32,
    samples: u32,
    seed: u64,
    workers: usize,
    out: *mut *mut ApDistribution,
) -> ApStatus {
    let out = try_ffi!(required_out(out, "out"));
    guarded(|| {
        let opts = EnumOptions {
            workers,
            ..EnumOptions::default()
        };
        let init = InitMode::RandomSegment {
            len: seg_len,
            samples,
        };
        match algoprob::distribution::build_distribution(n_states, cap, init, Some(seed), &opts) {
            Ok(d) => publish(d, out),
            Err(e) => fail_with(&e),
        }
    })
}

/// Loads a distribution from its canonical JSON file.
#[no_mangle]
pub unsafe extern "C" fn ap_distribution_load(
    path: *const c_char,
    out: *mut *mut ApDistribution,
) -> ApStatus {
    let path = try_ffi!(required_str(path, "path"));
    let out = try_ffi!(required_out(out, "out"));
    guarded(|| match persist::load_distribution(Path::new(path)) {
        Ok(d) => publish(d, out),
        Err(e) => fail_with(&e),
    })
}

/// Saves a distribution as its canonical JSON file.
#[no_mangle]
pub unsafe extern "C" fn ap_distribution_save(
    d: *const ApDistribution,
    path: *const c_char,
) -> ApStatus {
    let d = try_ffi!(required_dist(d, "distribution"));
    let path = try_ffi!(required_str(path, "path"));
    guarded(|| match persist::save_distribution(d, Path::new(path)) {
        Ok(()) => ApStatus::Ok,
        Err(e) => fail_with(&e),
    })
}

/// Releases a distribution handle. NULL is a no-op; freeing twice is
/// undefined behavior.
#[no_mangle]
pub unsafe extern "C" fn ap_distribution_free(d: *mut ApDistribution) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Total runs attempted (or windows cut) when the distribution was built.
#[no_mangle]
pub unsafe extern "C" fn ap_distribution_total_runs(
    d: *const ApDistribution,
    out: *mut u64,
) -> ApStatus {
    let d = try_ffi!(required_dist(d, "distribution"));
    let out = try_ffi!(required_out(out, "out"));
    *out = d.total_runs();
    ApStatus::Ok
}

/// Runs that produced a string; the denominator of every frequency.
#[no_mangle]
pub unsafe extern "C" fn ap_distribution_contributing_runs(
    d: *const ApDistribution,
    out: *mut u64,
) -> ApStatus {
    let d = try_ffi!(required_dist(d, "distribution"));
    let out = try_ffi!(required_out(out, "out"));
    *out = d.contributing_runs();
    ApStatus::Ok
}

/// Number of distinct strings in the distribution.
#[no_mangle]
pub unsafe extern "C" fn ap_distribution_support_size(
    d: *const ApDistribution,
    out: *mut usize,
) -> ApStatus {
    let d = try_ffi!(required_dist(d, "distribution"));
    let out = try_ffi!(required_out(out, "out"));
    *out = d.support_size();
    ApStatus::Ok
}

/// Occurrence count of a string; AP_STATUS_NOT_OBSERVED if absent.
#[no_mangle]
pub unsafe extern "C" fn ap_distribution_count(
    d: *const ApDistribution,
    s: *const c_char,
    out: *mut u64,
) -> ApStatus {
    let d = try_ffi!(required_dist(d, "distribution"));
    let s = try_ffi!(required_str(s, "string"));
    let out = try_ffi!(required_out(out, "out"));
    match d.count(s) {
        Some(c) => {
            *out = c;
            ApStatus::Ok
        }
        None => fail_with(&Error::NotObserved(s.to_string())),
    }
}

/// Normalized frequency of a string; AP_STATUS_NOT_OBSERVED if absent.
#[no_mangle]
pub unsafe extern "C" fn ap_distribution_frequency(
    d: *const ApDistribution,
    s: *const c_char,
    out: *mut f64,
) -> ApStatus {
    let d = try_ffi!(required_dist(d, "distribution"));
    let s = try_ffi!(required_str(s, "string"));
    let out = try_ffi!(required_out(out, "out"));
    match d.frequency(s) {
        Some(f) => {
            *out = f;
            ApStatus::Ok
        }
        None => fail_with(&Error::NotObserved(s.to_string())),
    }
}

/// Complexity estimate -log2(frequency(s)) in bits.
#[no_mangle]
pub unsafe extern "C" fn ap_distribution_ctm_complexity(
    d: *const ApDistribution,
    s: *const c_char,
    out: *mut f64,
) -> ApStatus {
    let d = try_ffi!(required_dist(d, "distribution"));
    let s = try_ffi!(required_str(s, "string"));
    let out = try_ffi!(required_out(out, "out"));
    match d.ctm_complexity(s) {
        Ok(bits) => {
            *out = bits;
            ApStatus::Ok
        }
        Err(e) => fail_with(&e),
    }
}

/// 1-based frequency rank of a string; with `length_restricted`, ranked
/// only among strings of the same length.
#[no_mangle]
pub unsafe extern "C" fn ap_distribution_rank_of(
    d: *const ApDistribution,
    s: *const c_char,
    length_restricted: bool,
    out: *mut u64,
) -> ApStatus {
    let d = try_ffi!(required_dist(d, "distribution"));
    let s = try_ffi!(required_str(s, "string"));
    let out = try_ffi!(required_out(out, "out"));
    match d.rank_of(s, length_restricted) {
        Ok(rank) => {
            *out = rank;
            ApStatus::Ok
        }
        Err(e) => fail_with(&e),
    }
}

/// Entry `index` in canonical order (length, then frequency descending,
/// then lexicographic). The string lands in `buf`; count and frequency in
/// the out pointers. AP_STATUS_PARAMETER if the index is past the end.
#[no_mangle]
pub unsafe extern "C" fn ap_distribution_entry(
    d: *const ApDistribution,
    index: usize,
    buf: *mut c_char,
    buf_len: usize,
    count: *mut u64,
    frequency: *mut f64,
) -> ApStatus {
    let d = try_ffi!(required_dist(d, "distribution"));
    let count = try_ffi!(required_out(count, "count"));
    let frequency = try_ffi!(required_out(frequency, "frequency"));
    let entries = d.canonical_entries();
    let Some(&(s, c, f)) = entries.get(index) else {
        return fail(
            ApStatus::Parameter,
            format!("entry index {index} out of range, support is {}", entries.len()),
        );
    };
    let status = write_c_string(s, buf, buf_len);
    if status != ApStatus::Ok {
        return status;
    }
    *count = c;
    *frequency = f;
    ApStatus::Ok
}

/// Merges two shards of the same build into a new handle.
#[no_mangle]
pub unsafe extern "C" fn ap_distribution_merge(
    a: *const ApDistribution,
    b: *const ApDistribution,
    out: *mut *mut ApDistribution,
) -> ApStatus {
    let a = try_ffi!(required_dist(a, "first distribution"));
    let b = try_ffi!(required_dist(b, "second distribution"));
    let out = try_ffi!(required_out(out, "out"));
    guarded(|| match PatternDistribution::merge(a, b) {
        Ok(d) => publish(d, out),
        Err(e) => fail_with(&e),
    })
}

/// Folds a distribution onto canonical orbit representatives under the
/// reverse/complement symmetry group.
#[no_mangle]
pub unsafe extern "C" fn ap_distribution_collapse(
    d: *const ApDistribution,
    out: *mut *mut ApDistribution,
) -> ApStatus {
    let d = try_ffi!(required_dist(d, "distribution"));
    let out = try_ffi!(required_out(out, "out"));
    guarded(|| publish(collapse_by_symmetry(d), out))
}

/// Exhaustive Busy Beaver search over the (n,2) space with a step cap.
#[no_mangle]
pub unsafe extern "C" fn ap_busy_beaver(
    n_states: u32,
    cap: u64,
    workers: usize,
    out: *mut ApBusyBeaver,
) -> ApStatus {
    let out = try_ffi!(required_out(out, "out"));
    guarded(|| {
        let opts = EnumOptions {
            workers,
            ..EnumOptions::default()
        };
        match busy_beaver_search(n_states, cap, &opts) {
            Ok(r) => {
                *out = ApBusyBeaver {
                    n_states: r.n_states,
                    sigma: r.sigma,
                    s_max: r.s_max,
                    halting_count: r.halting_count,
                    total_count: r.total_count,
                    cap_used: r.cap_used,
                };
                ApStatus::Ok
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Runs machine `index` of the (n,2) space on an initial tape (a binary
/// string; pass "" for the blank tape) with a step cap. The output string
/// lands in `output_buf`. If the buffer is too small the outcome fields
/// are still filled (`output_len` says how many bytes are needed, plus
/// one for the NUL) and AP_STATUS_BUFFER_TOO_SMALL is returned.
#[no_mangle]
pub unsafe extern "C" fn ap_run_machine(
    index: u64,
    n_states: u32,
    initial_tape: *const c_char,
    cap: u64,
    outcome: *mut ApRunOutcome,
    output_buf: *mut c_char,
    output_buf_len: usize,
) -> ApStatus {
    let tape = try_ffi!(required_str(initial_tape, "initial_tape"));
    let outcome = try_ffi!(required_out(outcome, "outcome"));
    guarded(|| {
        let spec = match decode_machine(index, n_states) {
            Ok(spec) => spec,
            Err(e) => return fail_with(&e),
        };
        match run(&spec, tape, cap) {
            Ok(r) => {
                *outcome = ApRunOutcome {
                    halted: r.status == RunStatus::Halted,
                    steps: r.steps,
                    ones_count: r.ones_count,
                    output_len: r.output.len(),
                };
                write_c_string(&r.output, output_buf, output_buf_len)
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Number of equivalence classes of length-n binary strings under the
/// reverse/complement group.
#[no_mangle]
pub unsafe extern "C" fn ap_burnside_count(n: u32, out: *mut u64) -> ApStatus {
    let out = try_ffi!(required_out(out, "out"));
    match burnside_count(n) {
        Ok(v) => {
            *out = v;
            ApStatus::Ok
        }
        Err(e) => fail_with(&e),
    }
}

/// Canonical (lexicographically least) orbit member of a binary string.
/// The buffer needs the input's length plus one.
#[no_mangle]
pub unsafe extern "C" fn ap_canonical_form(
    s: *const c_char,
    buf: *mut c_char,
    buf_len: usize,
) -> ApStatus {
    let s = try_ffi!(required_str(s, "string"));
    match canonical(s) {
        Ok(c) => write_c_string(&c, buf, buf_len),
        Err(e) => fail_with(&e),
    }
}

/// First `count` decimal digits of pi ("3141..."); the buffer needs
/// `count + 1` bytes.
#[no_mangle]
pub unsafe extern "C" fn ap_pi_digits(
    count: usize,
    buf: *mut c_char,
    buf_len: usize,
) -> ApStatus {
    guarded(|| match pi_digits(count) {
        Ok(digits) => write_c_string(&digits, buf, buf_len),
        Err(e) => fail_with(&e),
    })
}

/// Deflate-compressed size over original size for a byte buffer of at
/// least 64 bytes.
#[no_mangle]
pub unsafe extern "C" fn ap_compression_ratio(
    bytes: *const u8,
    len: usize,
    out: *mut f64,
) -> ApStatus {
    if bytes.is_null() {
        return fail(ApStatus::NullPointer, "bytes is NULL");
    }
    let out = try_ffi!(required_out(out, "out"));
    let data = std::slice::from_raw_parts(bytes, len);
    guarded(|| match compression_ratio(data) {
        Ok(r) => {
            *out = r;
            ApStatus::Ok
        }
        Err(e) => fail_with(&e),
    })
}

/// Spearman rank correlation of two equal-length vectors (at least 3
/// finite values each).
#[no_mangle]
pub unsafe extern "C" fn ap_spearman(
    x: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> ApStatus {
    let x = try_ffi!(required_slice(x, len, "x"));
    let y = try_ffi!(required_slice(y, len, "y"));
    let out = try_ffi!(required_out(out, "out"));
    match spearman(x, y) {
        Ok(rho) => {
            *out = rho;
            ApStatus::Ok
        }
        Err(e) => fail_with(&e),
    }
}

/// Two-sided seeded permutation p-value for the Spearman correlation.
#[no_mangle]
pub unsafe extern "C" fn ap_permutation_pvalue(
    x: *const f64,
    y: *const f64,
    len: usize,
    permutations: u32,
    seed: u64,
    out: *mut f64,
) -> ApStatus {
    let x = try_ffi!(required_slice(x, len, "x"));
    let y = try_ffi!(required_slice(y, len, "y"));
    let out = try_ffi!(required_out(out, "out"));
    guarded(|| match permutation_pvalue(x, y, permutations, seed) {
        Ok(p) => {
            *out = p;
            ApStatus::Ok
        }
        Err(e) => fail_with(&e),
    })
}

/// Aligns the length-k supports of two distributions under a policy and
/// fills rho, the seeded permutation p-value, and the pair count.
#[no_mangle]
pub unsafe extern "C" fn ap_compare(
    a: *const ApDistribution,
    b: *const ApDistribution,
    k: u32,
    policy: ApSupportPolicy,
    permutations: u32,
    seed: u64,
    out: *mut ApCorrelation,
) -> ApStatus {
    let a = try_ffi!(required_dist(a, "first distribution"));
    let b = try_ffi!(required_dist(b, "second distribution"));
    let out = try_ffi!(required_out(out, "out"));
    let policy = match policy {
        ApSupportPolicy::Intersection => SupportPolicy::Intersection,
        ApSupportPolicy::UnionWithZeros => SupportPolicy::UnionWithZeros,
    };
    guarded(|| match compare_report(a, b, k, policy, permutations, seed) {
        Ok(r) => {
            *out = ApCorrelation {
                rho: r.rho,
                p_value: r.p_value,
                pair_count: r.pair_count,
            };
            ApStatus::Ok
        }
        Err(e) => fail_with(&e),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build_d1() -> *mut ApDistribution {
        let mut handle: *mut ApDistribution = ptr::null_mut();
        let status = unsafe { ap_distribution_build_blank(1, 10, 1, &mut handle) };
        assert_eq!(status, ApStatus::Ok);
        assert!(!handle.is_null());
        handle
    }

    fn last_error() -> String {
        let mut buf = [0i8; 256];
        let len = unsafe { ap_last_error_message(buf.as_mut_ptr() as *mut c_char, buf.len()) };
        let bytes: Vec<u8> = buf[..len.min(buf.len() - 1)]
            .iter()
            .map(|&b| b as u8)
            .collect();
        String::from_utf8(bytes).unwrap()
    }

    #[test]
    fn version_is_nul_terminated_package_version() {
        let p = ap_version();
        let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap();
        assert_eq!(s, env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn blank_build_lookups() {
        let d = build_d1();
        unsafe {
            let mut total = 0u64;
            assert_eq!(ap_distribution_total_runs(d, &mut total), ApStatus::Ok);
            assert_eq!(total, 64);
            let mut contributing = 0u64;
            assert_eq!(
                ap_distribution_contributing_runs(d, &mut contributing),
                ApStatus::Ok
            );
            assert_eq!(contributing, 32);
            let mut support = 0usize;
            assert_eq!(ap_distribution_support_size(d, &mut support), ApStatus::Ok);
            assert_eq!(support, 2);

            let zero = CString::new("0").unwrap();
            let mut count = 0u64;
            assert_eq!(
                ap_distribution_count(d, zero.as_ptr(), &mut count),
                ApStatus::Ok
            );
            assert_eq!(count, 16);
            let mut freq = 0.0f64;
            assert_eq!(
                ap_distribution_frequency(d, zero.as_ptr(), &mut freq),
                ApStatus::Ok
            );
            assert_eq!(freq, 0.5);
            let mut bits = 0.0f64;
            assert_eq!(
                ap_distribution_ctm_complexity(d, zero.as_ptr(), &mut bits),
                ApStatus::Ok
            );
            assert_eq!(bits, 1.0);
            let mut rank = 0u64;
            assert_eq!(
                ap_distribution_rank_of(d, zero.as_ptr(), false, &mut rank),
                ApStatus::Ok
            );
            assert_eq!(rank, 1);

            let missing = CString::new("0101").unwrap();
            assert_eq!(
                ap_distribution_count(d, missing.as_ptr(), &mut count),
                ApStatus::NotObserved
            );
            assert!(last_error().contains("0101"), "{}", last_error());

            ap_distribution_free(d);
        }
    }

    #[test]
    fn entry_iteration_and_buffers() {
        let d = build_d1();
        unsafe {
            let mut buf = [0 as c_char; 8];
            let mut count = 0u64;
            let mut freq = 0.0f64;
            assert_eq!(
                ap_distribution_entry(d, 0, buf.as_mut_ptr(), buf.len(), &mut count, &mut freq),
                ApStatus::Ok
            );
            assert_eq!(CStr::from_ptr(buf.as_ptr()).to_str().unwrap(), "0");
            assert_eq!((count, freq), (16, 0.5));
            assert_eq!(
                ap_distribution_entry(d, 1, buf.as_mut_ptr(), buf.len(), &mut count, &mut freq),
                ApStatus::Ok
            );
            assert_eq!(CStr::from_ptr(buf.as_ptr()).to_str().unwrap(), "1");
            assert_eq!(
                ap_distribution_entry(d, 2, buf.as_mut_ptr(), buf.len(), &mut count, &mut freq),
                ApStatus::Parameter
            );
            // A one-byte buffer cannot hold "0" plus the NUL.
            assert_eq!(
                ap_distribution_entry(d, 0, buf.as_mut_ptr(), 1, &mut count, &mut freq),
                ApStatus::BufferTooSmall
            );
            ap_distribution_free(d);
        }
    }

    #[test]
    fn save_load_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = CString::new(dir.path().join("d1.json").to_str().unwrap()).unwrap();
        let d = build_d1();
        unsafe {
            assert_eq!(ap_distribution_save(d, path.as_ptr()), ApStatus::Ok);
            let mut loaded: *mut ApDistribution = ptr::null_mut();
            assert_eq!(ap_distribution_load(path.as_ptr(), &mut loaded), ApStatus::Ok);
            let mut total = 0u64;
            assert_eq!(ap_distribution_total_runs(loaded, &mut total), ApStatus::Ok);
            assert_eq!(total, 64);
            ap_distribution_free(loaded);
            ap_distribution_free(d);

            let missing = CString::new("/nonexistent/d.json").unwrap();
            let mut bad: *mut ApDistribution = ptr::null_mut();
            assert_eq!(
                ap_distribution_load(missing.as_ptr(), &mut bad),
                ApStatus::Io
            );
            assert!(bad.is_null());
        }
    }

    #[test]
    fn merge_of_shards_through_handles() {
        use algoprob::distribution::{build_distribution_shard, IndexRange};
        let opts = EnumOptions::default();
        let lo = build_distribution_shard(
            1,
            10,
            InitMode::Blank,
            None,
            IndexRange { start: 0, end: 32 },
            &opts,
        )
        .unwrap();
        let hi = build_distribution_shard(
            1,
            10,
            InitMode::Blank,
            None,
            IndexRange { start: 32, end: 64 },
            &opts,
        )
        .unwrap();
        let a = Box::into_raw(Box::new(ApDistribution { inner: lo }));
        let b = Box::into_raw(Box::new(ApDistribution { inner: hi }));
        unsafe {
            let mut merged: *mut ApDistribution = ptr::null_mut();
            assert_eq!(ap_distribution_merge(a, b, &mut merged), ApStatus::Ok);
            let mut total = 0u64;
            assert_eq!(ap_distribution_total_runs(merged, &mut total), ApStatus::Ok);
            assert_eq!(total, 64);
            // Merging a full build with itself must fail: the shards overlap.
            let mut bad: *mut ApDistribution = ptr::null_mut();
            assert_eq!(
                ap_distribution_merge(merged, merged, &mut bad),
                ApStatus::IncompatibleSources
            );
            ap_distribution_free(merged);
            ap_distribution_free(a);
            ap_distribution_free(b);
        }
    }

    #[test]
    fn collapse_folds_the_orbit() {
        let d = build_d1();
        unsafe {
            let mut folded: *mut ApDistribution = ptr::null_mut();
            assert_eq!(ap_distribution_collapse(d, &mut folded), ApStatus::Ok);
            let zero = CString::new("0").unwrap();
            let mut count = 0u64;
            assert_eq!(
                ap_distribution_count(folded, zero.as_ptr(), &mut count),
                ApStatus::Ok
            );
            assert_eq!(count, 32);
            ap_distribution_free(folded);
            ap_distribution_free(d);
        }
    }

    #[test]
    fn busy_beaver_and_run_machine() {
        unsafe {
            let mut bb = ApBusyBeaver {
                n_states: 0,
                sigma: 0,
                s_max: 0,
                halting_count: 0,
                total_count: 0,
                cap_used: 0,
            };
            assert_eq!(ap_busy_beaver(1, 1000, 1, &mut bb), ApStatus::Ok);
            assert_eq!((bb.sigma, bb.s_max), (1, 1));
            assert_eq!((bb.halting_count, bb.total_count), (32, 64));

            // Machine 3 of the 1-state space writes a one, moves right, halts.
            let blank = CString::new("").unwrap();
            let mut outcome = ApRunOutcome {
                halted: false,
                steps: 0,
                ones_count: 0,
                output_len: 0,
            };
            let mut buf = [0 as c_char; 4];
            assert_eq!(
                ap_run_machine(3, 1, blank.as_ptr(), 100, &mut outcome, buf.as_mut_ptr(), 4),
                ApStatus::Ok
            );
            assert!(outcome.halted);
            assert_eq!((outcome.steps, outcome.ones_count, outcome.output_len), (1, 1, 1));
            assert_eq!(CStr::from_ptr(buf.as_ptr()).to_str().unwrap(), "1");

            assert_eq!(
                ap_run_machine(64, 1, blank.as_ptr(), 100, &mut outcome, buf.as_mut_ptr(), 4),
                ApStatus::IndexOutOfRange
            );
        }
    }

    #[test]
    fn scalar_helpers() {
        unsafe {
            let mut classes = 0u64;
            assert_eq!(ap_burnside_count(4, &mut classes), ApStatus::Ok);
            assert_eq!(classes, 6);
            assert_eq!(ap_burnside_count(0, &mut classes), ApStatus::Parameter);

            let s = CString::new("1101").unwrap();
            let mut buf = [0 as c_char; 8];
            assert_eq!(
                ap_canonical_form(s.as_ptr(), buf.as_mut_ptr(), buf.len()),
                ApStatus::Ok
            );
            assert_eq!(CStr::from_ptr(buf.as_ptr()).to_str().unwrap(), "0010");

            let mut pi_buf = [0 as c_char; 11];
            assert_eq!(ap_pi_digits(10, pi_buf.as_mut_ptr(), pi_buf.len()), ApStatus::Ok);
            assert_eq!(
                CStr::from_ptr(pi_buf.as_ptr()).to_str().unwrap(),
                "3141592653"
            );
            assert_eq!(
                ap_pi_digits(10, pi_buf.as_mut_ptr(), 10),
                ApStatus::BufferTooSmall
            );

            let zeros = vec![0u8; 4096];
            let mut ratio = 0.0f64;
            assert_eq!(
                ap_compression_ratio(zeros.as_ptr(), zeros.len(), &mut ratio),
                ApStatus::Ok
            );
            assert!(ratio < 0.1, "ratio {ratio}");
        }
    }

    #[test]
    fn correlation_entry_points() {
        unsafe {
            let x = [3.0f64, 2.0, 1.0];
            let y = [1.0f64, 2.0, 3.0];
            let mut rho = 0.0f64;
            assert_eq!(ap_spearman(x.as_ptr(), y.as_ptr(), 3, &mut rho), ApStatus::Ok);
            assert_eq!(rho, -1.0);

            let mut p = 0.0f64;
            assert_eq!(
                ap_permutation_pvalue(x.as_ptr(), y.as_ptr(), 3, 99, 7, &mut p),
                ApStatus::Ok
            );
            assert!(p > 0.0 && p <= 1.0);

            let flat = [1.0f64, 1.0, 1.0];
            assert_eq!(
                ap_spearman(x.as_ptr(), flat.as_ptr(), 3, &mut rho),
                ApStatus::UndefinedCorrelation
            );

            let d = build_d1();
            let mut report = ApCorrelation {
                rho: 0.0,
                p_value: 0.0,
                pair_count: 0,
            };
            // D(1) aligns only 2 strings at k = 1: not enough support.
            assert_eq!(
                ap_compare(d, d, 1, ApSupportPolicy::Intersection, 99, 7, &mut report),
                ApStatus::InsufficientSupport
            );
            ap_distribution_free(d);
        }
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            let mut total = 0u64;
            assert_eq!(
                ap_distribution_total_runs(ptr::null(), &mut total),
                ApStatus::NullPointer
            );
            let d = build_d1();
            assert_eq!(
                ap_distribution_count(d, ptr::null(), &mut total),
                ApStatus::NullPointer
            );
            assert!(last_error().contains("NULL"));
            ap_distribution_free(d);
        }
    }
}
