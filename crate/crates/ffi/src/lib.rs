//! C ABI over `mbqc-xy`.
//!
//! Circuits, patterns and states are opaque heap handles created by
//! `mbqc_*_new`/`mbqc_*_from_json`/`mbqc_compile`/`mbqc_run_*` and released
//! with the matching `*_free`. Every fallible call returns an [`MbqcStatus`];
//! on failure [`mbqc_last_error_message`] describes the cause. Results are
//! written through out-pointers, which are left untouched on failure.
//!
//! Amplitude buffers are interleaved `re, im` doubles in basis order; bit `k`
//! of the basis index is row (or logical qubit) `k + 1`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mbqc_xy::cli::{CircuitDocument, PatternDocument};
use mbqc_xy::cluster::InputSpec;
use mbqc_xy::compiler::{compile_circuit, LogicalCircuit, LogicalGate, ZxOrientation};
use mbqc_xy::pattern::{run_adaptive, run_positive_branch, MeasurementPattern};
use mbqc_xy::statevec::StateVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MbqcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Simulation = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// `mbqc_circuit_push_rzx` orientation: `Z` on the lower-indexed qubit.
pub const MBQC_ZX_Z_ON_LOWER: u32 = 0;
/// `mbqc_circuit_push_rzx` orientation: `Z` on the higher-indexed qubit.
pub const MBQC_ZX_Z_ON_UPPER: u32 = 1;

pub struct MbqcCircuit(LogicalCircuit);
pub struct MbqcPattern(MeasurementPattern);
pub struct MbqcState(StateVector);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("nul bytes removed")));
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mbqc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

struct Failure(MbqcStatus, String);

impl From<mbqc_xy::Error> for Failure {
    fn from(e: mbqc_xy::Error) -> Self {
        let status = match e {
            mbqc_xy::Error::ImpossibleBranch { .. }
            | mbqc_xy::Error::PhaseInconsistency(_)
            | mbqc_xy::Error::NotNormalized(_) => MbqcStatus::Simulation,
            _ => MbqcStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MbqcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MbqcStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MbqcStatus::Panic
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(MbqcStatus::NullPointer, format!("{what} is null")))
}

unsafe fn as_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(MbqcStatus::NullPointer, format!("{what} is null")))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(MbqcStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(MbqcStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn out<T>(dst: *mut *mut T, value: T) -> Result<(), Failure> {
    let slot = as_mut(dst, "out")?;
    *slot = Box::into_raw(Box::new(value));
    Ok(())
}

/// Creates an empty circuit on `n ≥ 1` qubits.
#[no_mangle]
pub unsafe extern "C" fn mbqc_circuit_new(n: usize, result: *mut *mut MbqcCircuit) -> MbqcStatus {
    guard(|| {
        as_mut(result, "out")?;
        out(result, MbqcCircuit(LogicalCircuit::new(n, vec![])?))
    })
}

/// Parses a circuit document.
#[no_mangle]
pub unsafe extern "C" fn mbqc_circuit_from_json(
    json: *const c_char,
    result: *mut *mut MbqcCircuit,
) -> MbqcStatus {
    guard(|| {
        as_mut(result, "out")?;
        let text = c_str(json, "json")?;
        let c = CircuitDocument::parse(text)
            .and_then(|d| d.to_circuit())
            .map_err(|e| Failure(MbqcStatus::Parse, e.to_string()))?;
        out(result, MbqcCircuit(c))
    })
}

#[no_mangle]
pub unsafe extern "C" fn mbqc_circuit_free(c: *mut MbqcCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

#[no_mangle]
pub unsafe extern "C" fn mbqc_circuit_width(c: *const MbqcCircuit) -> usize {
    c.as_ref().map_or(0, |c| c.0.width())
}

#[no_mangle]
pub unsafe extern "C" fn mbqc_circuit_len(c: *const MbqcCircuit) -> usize {
    c.as_ref().map_or(0, |c| c.0.gates().len())
}

unsafe fn push(c: *mut MbqcCircuit, g: LogicalGate) -> MbqcStatus {
    guard(|| {
        as_mut(c, "circuit")?.0.push(g)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn mbqc_circuit_push_rz(c: *mut MbqcCircuit, qubit: usize, theta: f64) -> MbqcStatus {
    push(c, LogicalGate::Rz { qubit, theta })
}

#[no_mangle]
pub unsafe extern "C" fn mbqc_circuit_push_rx(c: *mut MbqcCircuit, qubit: usize, theta: f64) -> MbqcStatus {
    push(c, LogicalGate::Rx { qubit, theta })
}

/// `exp(−iθ/2 Z⊗X)` on `(qubit, qubit + 1)`; `orientation` is one of the
/// `MBQC_ZX_*` constants.
#[no_mangle]
pub unsafe extern "C" fn mbqc_circuit_push_rzx(
    c: *mut MbqcCircuit,
    qubit: usize,
    theta: f64,
    orientation: u32,
) -> MbqcStatus {
    let orientation = match orientation {
        MBQC_ZX_Z_ON_LOWER => ZxOrientation::ZOnLower,
        MBQC_ZX_Z_ON_UPPER => ZxOrientation::ZOnUpper,
        other => {
            set_error(format!("unknown orientation {other}"));
            return MbqcStatus::InvalidArgument;
        }
    };
    push(
        c,
        LogicalGate::Rzx {
            qubit,
            theta,
            orientation,
        },
    )
}

#[no_mangle]
pub unsafe extern "C" fn mbqc_circuit_push_h(c: *mut MbqcCircuit, qubit: usize) -> MbqcStatus {
    push(c, LogicalGate::H { qubit })
}

#[no_mangle]
pub unsafe extern "C" fn mbqc_circuit_push_cnot(c: *mut MbqcCircuit, control: usize, target: usize) -> MbqcStatus {
    push(c, LogicalGate::Cnot { control, target })
}

#[no_mangle]
pub unsafe extern "C" fn mbqc_circuit_push_swap(c: *mut MbqcCircuit, qubit: usize) -> MbqcStatus {
    push(c, LogicalGate::Swap { qubit })
}

#[no_mangle]
pub unsafe extern "C" fn mbqc_circuit_push_cz(c: *mut MbqcCircuit, qubit: usize) -> MbqcStatus {
    push(c, LogicalGate::Cz { qubit })
}

/// Compiles a circuit to an open-ended pattern.
#[no_mangle]
pub unsafe extern "C" fn mbqc_compile(c: *const MbqcCircuit, result: *mut *mut MbqcPattern) -> MbqcStatus {
    guard(|| {
        as_mut(result, "out")?;
        let compiled = compile_circuit(&as_ref(c, "circuit")?.0)?;
        out(result, MbqcPattern(compiled.pattern))
    })
}

/// Parses a pattern document.
#[no_mangle]
pub unsafe extern "C" fn mbqc_pattern_from_json(
    json: *const c_char,
    result: *mut *mut MbqcPattern,
) -> MbqcStatus {
    guard(|| {
        as_mut(result, "out")?;
        let text = c_str(json, "json")?;
        let p = PatternDocument::parse(text)
            .and_then(|d| d.to_pattern())
            .map_err(|e| Failure(MbqcStatus::Parse, e.to_string()))?;
        out(result, MbqcPattern(p))
    })
}

/// Serializes a pattern document. Release the string with [`mbqc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mbqc_pattern_to_json(p: *const MbqcPattern, result: *mut *mut c_char) -> MbqcStatus {
    guard(|| {
        let slot = as_mut(result, "out")?;
        let text = PatternDocument::from_pattern(&as_ref(p, "pattern")?.0).to_text();
        *slot = CString::new(text).expect("JSON has no nul bytes").into_raw();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn mbqc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn mbqc_pattern_free(p: *mut MbqcPattern) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

#[no_mangle]
pub unsafe extern "C" fn mbqc_pattern_rows(p: *const MbqcPattern) -> usize {
    p.as_ref().map_or(0, |p| p.0.geometry().rows())
}

#[no_mangle]
pub unsafe extern "C" fn mbqc_pattern_cols(p: *const MbqcPattern) -> usize {
    p.as_ref().map_or(0, |p| p.0.geometry().cols())
}

#[no_mangle]
pub unsafe extern "C" fn mbqc_pattern_measurements(p: *const MbqcPattern) -> usize {
    p.as_ref().map_or(0, |p| p.0.steps().len())
}

/// Builds a state from `2 · 2^n` interleaved doubles. The vector must be
/// normalised within 1e-9.
#[no_mangle]
pub unsafe extern "C" fn mbqc_state_from_amplitudes(
    re_im: *const f64,
    num_qubits: usize,
    result: *mut *mut MbqcState,
) -> MbqcStatus {
    guard(|| {
        as_mut(result, "out")?;
        if re_im.is_null() {
            return Err(Failure(MbqcStatus::NullPointer, "amplitudes is null".into()));
        }
        if num_qubits == 0 || num_qubits > 30 {
            return Err(Failure(
                MbqcStatus::InvalidArgument,
                format!("num_qubits must be in 1..=30, got {num_qubits}"),
            ));
        }
        let dim = 1usize << num_qubits;
        let raw = std::slice::from_raw_parts(re_im, 2 * dim);
        let amps = raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
        let labels: Vec<usize> = (1..=num_qubits).collect();
        out(result, MbqcState(StateVector::from_amplitudes(&labels, amps)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn mbqc_state_free(s: *mut MbqcState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn mbqc_state_num_qubits(s: *const MbqcState) -> usize {
    s.as_ref().map_or(0, |s| s.0.num_qubits())
}

/// Copies the amplitudes into `buffer`, which must hold `2 · 2^n` doubles.
#[no_mangle]
pub unsafe extern "C" fn mbqc_state_amplitudes(s: *const MbqcState, buffer: *mut f64, len: usize) -> MbqcStatus {
    guard(|| {
        let amps = as_ref(s, "state")?.0.amplitudes();
        if buffer.is_null() {
            return Err(Failure(MbqcStatus::NullPointer, "buffer is null".into()));
        }
        if len < 2 * amps.len() {
            return Err(Failure(
                MbqcStatus::BufferTooSmall,
                format!("buffer holds {len} doubles, {} needed", 2 * amps.len()),
            ));
        }
        let dst = std::slice::from_raw_parts_mut(buffer, 2 * amps.len());
        for (pair, a) in dst.chunks_exact_mut(2).zip(amps) {
            pair[0] = a.re;
            pair[1] = a.im;
        }
        Ok(())
    })
}

/// `|⟨a|b⟩|²`, with qubits matched by position.
#[no_mangle]
pub unsafe extern "C" fn mbqc_state_fidelity(a: *const MbqcState, b: *const MbqcState, result: *mut f64) -> MbqcStatus {
    guard(|| {
        let slot = as_mut(result, "out")?;
        let a = &as_ref(a, "a")?.0;
        let b = &as_ref(b, "b")?.0;
        let b = b.clone().relabeled(a.labels())?;
        *slot = a.fidelity(&b)?;
        Ok(())
    })
}

unsafe fn input_for(p: &MeasurementPattern, input: *const MbqcState) -> Result<InputSpec, Failure> {
    match input.as_ref() {
        None => Ok(InputSpec::Standard),
        Some(s) => {
            let labels = p.geometry().column_labels(1);
            Ok(InputSpec::Generic(s.0.clone().relabeled(&labels)?))
        }
    }
}

fn output_state(s: StateVector) -> Result<MbqcState, Failure> {
    let labels: Vec<usize> = (1..=s.num_qubits()).collect();
    Ok(MbqcState(s.relabeled(&labels)?))
}

/// Runs the all-zero branch. A null `input` means `|+⟩^{⊗n}`.
#[no_mangle]
pub unsafe extern "C" fn mbqc_run_positive(
    p: *const MbqcPattern,
    input: *const MbqcState,
    result: *mut *mut MbqcState,
) -> MbqcStatus {
    guard(|| {
        as_mut(result, "out")?;
        let p = &as_ref(p, "pattern")?.0;
        let state = run_positive_branch(p, &input_for(p, input)?)?;
        out(result, output_state(state)?)
    })
}

/// Runs with sampled outcomes and feed-forward, returning the
/// frame-corrected output. A null `input` means `|+⟩^{⊗n}`. Outcomes are
/// drawn from ChaCha8 seeded with `seed`, as in `mbqc-xy run --seed`.
#[no_mangle]
pub unsafe extern "C" fn mbqc_run_adaptive(
    p: *const MbqcPattern,
    input: *const MbqcState,
    seed: u64,
    result: *mut *mut MbqcState,
) -> MbqcStatus {
    guard(|| {
        as_mut(result, "out")?;
        let p = &as_ref(p, "pattern")?.0;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let run = run_adaptive(p, &input_for(p, input)?, &mut rng)?;
        out(result, output_state(run.corrected()?)?)
    })
}

