//! C interface to `warpmsa`.
//!
//! Objects cross the boundary as opaque handles that the caller releases with
//! the matching `*_free` function. Every fallible call returns a
//! [`WmStatus`]; on failure [`wm_last_error`] describes the problem. Strings
//! returned by the library are released with [`wm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use warpmsa::{
    align_all, align_pair, build_tables, compute_weights, read_aligned_fasta, read_fasta, render,
    score, simulate, write_aligned_fasta, Alphabet, Error, Mode, Msa, ScoringScheme, Sequence,
    SimParams,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Alignment = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WmAlphabet {
    Dna = 0,
    Protein = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WmMode {
    Global = 0,
    Overlap = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WmScoreReport {
    pub sp: f64,
    pub tc: f64,
    pub aligned_pairs_ref: u64,
    pub aligned_pairs_correct: u64,
    pub columns_ref: u64,
    pub columns_correct: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WmSimParams {
    pub n_ancestor: usize,
    pub k: usize,
    pub lambda: f64,
    pub mu: f64,
    pub alpha: f64,
    pub branch_length: f64,
    pub seed: u64,
}

/// Sequence set.
pub struct WmSequences(Vec<Sequence>);

/// Multiple alignment.
pub struct WmMsa(Msa);

/// Substitution matrix with gap penalties and alignment mode.
pub struct WmScheme(ScoringScheme);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(WmStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::MalformedHeader { .. }
            | Error::MissingHeader { .. }
            | Error::IllegalCharacter { .. }
            | Error::EmptyRecord { .. }
            | Error::EmptyAlignment
            | Error::RaggedAlignment { .. }
            | Error::Matrix(_)
            | Error::Tables(_) => WmStatus::Parse,
            Error::UnequalRows(..)
            | Error::GapGapColumn(_)
            | Error::InvalidPath(_)
            | Error::AlphabetMismatch { .. }
            | Error::InconsistentPairwise { .. }
            | Error::SequenceMismatch(_) => WmStatus::Alignment,
            Error::Io(_) => WmStatus::Io,
            _ => WmStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(WmStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> WmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WmStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            WmStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(WmStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

fn alphabet(a: WmAlphabet) -> Alphabet {
    match a {
        WmAlphabet::Dna => Alphabet::Dna,
        WmAlphabet::Protein => Alphabet::Protein,
    }
}

fn mode(m: WmMode) -> Mode {
    match m {
        WmMode::Global => Mode::Global,
        WmMode::Overlap => Mode::Overlap,
    }
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn wm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses FASTA text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wm_sequences_from_fasta(
    text: *const c_char,
    alpha: WmAlphabet,
    out: *mut *mut WmSequences,
) -> WmStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let seqs = read_fasta(str_arg(text, "text")?, alphabet(alpha))?;
        *out = Box::into_raw(Box::new(WmSequences(seqs)));
        Ok(())
    })
}

/// # Safety
/// `seqs` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wm_sequences_count(seqs: *const WmSequences) -> usize {
    seqs.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `seqs` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wm_sequences_free(seqs: *mut WmSequences) {
    if !seqs.is_null() {
        drop(Box::from_raw(seqs));
    }
}

/// Default DNA scheme: match 5, mismatch -4, gap open 10, extend 0.5.
#[no_mangle]
pub extern "C" fn wm_scheme_dna_default(m: WmMode) -> *mut WmScheme {
    Box::into_raw(Box::new(WmScheme(
        ScoringScheme::dna_default().with_mode(mode(m)),
    )))
}

/// BLOSUM62, gap open 10, extend 0.5.
#[no_mangle]
pub extern "C" fn wm_scheme_blosum62(m: WmMode) -> *mut WmScheme {
    Box::into_raw(Box::new(WmScheme(ScoringScheme::blosum62(mode(m)))))
}

/// # Safety
/// `scheme` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wm_scheme_free(scheme: *mut WmScheme) {
    if !scheme.is_null() {
        drop(Box::from_raw(scheme));
    }
}

/// Aligns two sequences. Writes the score and the path as text, one `x,y`
/// point per line; free the path with [`wm_string_free`].
///
/// # Safety
/// String arguments must be NUL-terminated, handles live, outputs writable.
#[no_mangle]
pub unsafe extern "C" fn wm_align_pair(
    x: *const c_char,
    y: *const c_char,
    alpha: WmAlphabet,
    scheme: *const WmScheme,
    score_out: *mut f64,
    path_out: *mut *mut c_char,
) -> WmStatus {
    guard(|| {
        let scheme = ref_arg(scheme, "scheme")?;
        let score_out = out_arg(score_out, "score_out")?;
        let path_out = out_arg(path_out, "path_out")?;
        let x = Sequence::new("x", str_arg(x, "x")?, alphabet(alpha))?;
        let y = Sequence::new("y", str_arg(y, "y")?, alphabet(alpha))?;
        let res = align_pair(&x, &y, &scheme.0)?;
        *score_out = res.score;
        *path_out = c_string(res.path.to_string());
        Ok(())
    })
}

/// Builds the median-warping MSA. `distances` may be null; otherwise it holds
/// one distance per sequence and weighted medians are used.
///
/// # Safety
/// Handles must be live, `distances` null or readable for
/// `wm_sequences_count(seqs)` values, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wm_align(
    seqs: *const WmSequences,
    scheme: *const WmScheme,
    distances: *const f64,
    epsilon: f64,
    out: *mut *mut WmMsa,
) -> WmStatus {
    guard(|| {
        let seqs = &ref_arg(seqs, "seqs")?.0;
        let scheme = ref_arg(scheme, "scheme")?;
        let out = out_arg(out, "out")?;
        let weights = if distances.is_null() {
            None
        } else {
            Some(compute_weights(
                std::slice::from_raw_parts(distances, seqs.len()),
                epsilon,
            )?)
        };
        let pairwise = align_all(seqs, &scheme.0)?;
        let msa = render(&build_tables(seqs, &pairwise, weights.as_ref())?, seqs)?;
        *out = Box::into_raw(Box::new(WmMsa(msa)));
        Ok(())
    })
}

/// Parses aligned FASTA text.
///
/// # Safety
/// `text` must be NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wm_msa_from_fasta(
    text: *const c_char,
    alpha: WmAlphabet,
    out: *mut *mut WmMsa,
) -> WmStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let msa = read_aligned_fasta(str_arg(text, "text")?, alphabet(alpha))?;
        *out = Box::into_raw(Box::new(WmMsa(msa)));
        Ok(())
    })
}

/// Writes the alignment as aligned FASTA; free with [`wm_string_free`].
///
/// # Safety
/// `msa` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wm_msa_to_fasta(msa: *const WmMsa, out: *mut *mut c_char) -> WmStatus {
    guard(|| {
        let msa = ref_arg(msa, "msa")?;
        let out = out_arg(out, "out")?;
        *out = c_string(write_aligned_fasta(&msa.0)?);
        Ok(())
    })
}

/// # Safety
/// `msa` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn wm_msa_rows(msa: *const WmMsa) -> usize {
    msa.as_ref().map_or(0, |m| m.0.num_rows())
}

/// # Safety
/// `msa` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn wm_msa_width(msa: *const WmMsa) -> usize {
    msa.as_ref().map_or(0, |m| m.0.width())
}

/// # Safety
/// `msa` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wm_msa_free(msa: *mut WmMsa) {
    if !msa.is_null() {
        drop(Box::from_raw(msa));
    }
}

/// SP and TC of `test` against `reference`.
///
/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wm_score(
    test: *const WmMsa,
    reference: *const WmMsa,
    out: *mut WmScoreReport,
) -> WmStatus {
    guard(|| {
        let test = ref_arg(test, "test")?;
        let reference = ref_arg(reference, "reference")?;
        let out = out_arg(out, "out")?;
        let r = score(&test.0, &reference.0)?;
        *out = WmScoreReport {
            sp: r.sp,
            tc: r.tc,
            aligned_pairs_ref: r.aligned_pairs_ref,
            aligned_pairs_correct: r.aligned_pairs_correct,
            columns_ref: r.columns_ref,
            columns_correct: r.columns_correct,
        };
        Ok(())
    })
}

/// Default simulation parameters (N 100, K 10, lambda = mu = 0.03,
/// alpha 0.1, t 1, seed 0).
#[no_mangle]
pub extern "C" fn wm_sim_params_default() -> WmSimParams {
    let p = SimParams::default();
    WmSimParams {
        n_ancestor: p.n_ancestor,
        k: p.k,
        lambda: p.lambda,
        mu: p.mu,
        alpha: p.alpha,
        branch_length: p.branch_length,
        seed: p.seed,
    }
}

/// Simulates descendants and their true alignment.
///
/// # Safety
/// `params` must be readable; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn wm_simulate(
    params: *const WmSimParams,
    descendants: *mut *mut WmSequences,
    reference: *mut *mut WmMsa,
) -> WmStatus {
    guard(|| {
        let p = ref_arg(params, "params")?;
        let descendants = out_arg(descendants, "descendants")?;
        let reference = out_arg(reference, "reference")?;
        let out = simulate(&SimParams {
            n_ancestor: p.n_ancestor,
            k: p.k,
            lambda: p.lambda,
            mu: p.mu,
            alpha: p.alpha,
            branch_length: p.branch_length,
            seed: p.seed,
        })?;
        *descendants = Box::into_raw(Box::new(WmSequences(out.descendants)));
        *reference = Box::into_raw(Box::new(WmMsa(out.reference)));
        Ok(())
    })
}
