//! C ABI over the rules engine and the outcome comparisons.
//!
//! Conventions:
//! - every fallible function returns a [`VlStatus`]; results go through out-pointers;
//! - strings handed out are NUL-terminated, owned by the caller and released with
//!   [`vl_string_free`];
//! - on failure the calling thread's last error message is set; read it with
//!   [`vl_last_error_message`];
//! - a [`VlPosition`] remembers the positions it passed through so that
//!   repetition draws are detected.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use variant_lab::notation::{parse_fen, parse_lan, serialize_fen, serialize_lan};
use variant_lab::rules::{perft, repetition_key, status, RepetitionKey};
use variant_lab::stats::{draw_rate_comparison, expected_score_comparison, Comparison, OutcomeCounts, StatsError};
use variant_lab::{Outcome, Position, Reason, Variant};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    UnknownVariant = 3,
    BadFen = 4,
    IllegalMove = 5,
    GameOver = 6,
    InvalidArgument = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VlOutcome {
    Ongoing = 0,
    WhiteWins = 1,
    BlackWins = 2,
    Draw = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VlReason {
    None = 0,
    Checkmate = 1,
    Stalemate = 2,
    FiftyMove = 3,
    ThreefoldRepetition = 4,
}

/// Opaque game state: the current position plus the repetition keys of
/// every earlier one.
pub struct VlPosition {
    pos: Position,
    history: Vec<RepetitionKey>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: VlStatus, msg: impl Into<String>) -> VlStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning a panic into [`VlStatus::Panic`].
fn guard(f: impl FnOnce() -> VlStatus) -> VlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(VlStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, VlStatus> {
    if p.is_null() {
        return Err(fail(VlStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(VlStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> VlStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            VlStatus::Ok
        }
        Err(_) => fail(VlStatus::InvalidArgument, "string contains NUL"),
    }
}

macro_rules! nonnull {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(VlStatus::NullPointer, concat!(stringify!($p), " is null"));
        })+
    };
}

fn boxed(pos: Position) -> *mut VlPosition {
    Box::into_raw(Box::new(VlPosition { pos, history: Vec::new() }))
}

/// Initial position of `variant` (an id such as `"torpedo"`).
///
/// # Safety
/// `variant` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vl_position_new(variant: *const c_char, out: *mut *mut VlPosition) -> VlStatus {
    guard(|| {
        nonnull!(out);
        let id = match read_str(variant, "variant") {
            Ok(s) => s,
            Err(s) => return s,
        };
        match id.parse::<Variant>() {
            Ok(v) => {
                *out = boxed(Position::initial(v));
                VlStatus::Ok
            }
            Err(e) => fail(VlStatus::UnknownVariant, e.to_string()),
        }
    })
}

/// Position from a standard or extended FEN. The game history starts empty.
///
/// # Safety
/// `fen` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vl_position_from_fen(fen: *const c_char, out: *mut *mut VlPosition) -> VlStatus {
    guard(|| {
        nonnull!(out);
        let text = match read_str(fen, "fen") {
            Ok(s) => s,
            Err(s) => return s,
        };
        match parse_fen(text) {
            Ok(p) => {
                *out = boxed(p);
                VlStatus::Ok
            }
            Err(e) => fail(VlStatus::BadFen, e.to_string()),
        }
    })
}

/// Releases a position. Null is ignored.
///
/// # Safety
/// `p` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vl_position_free(p: *mut VlPosition) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Extended FEN of the current position.
///
/// # Safety
/// `p` must be a live position; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vl_position_to_fen(p: *const VlPosition, out: *mut *mut c_char) -> VlStatus {
    guard(|| {
        nonnull!(p, out);
        write_string(out, serialize_fen(&(*p).pos))
    })
}

/// Legal moves as space-separated LAN in canonical order; empty when none.
///
/// # Safety
/// `p` must be a live position; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vl_position_legal_moves(p: *const VlPosition, out: *mut *mut c_char) -> VlStatus {
    guard(|| {
        nonnull!(p, out);
        let moves: Vec<String> = (*p).pos.legal_moves().iter().map(serialize_lan).collect();
        write_string(out, moves.join(" "))
    })
}

/// Plays one LAN move in place. Fails on illegal moves and finished games;
/// the position is unchanged on failure.
///
/// # Safety
/// `p` must be a live position; `lan` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn vl_position_apply(p: *mut VlPosition, lan: *const c_char) -> VlStatus {
    guard(|| {
        nonnull!(p);
        let text = match read_str(lan, "lan") {
            Ok(s) => s,
            Err(s) => return s,
        };
        let state = &mut *p;
        if status(&state.pos, &state.history).is_terminal() {
            return fail(VlStatus::GameOver, "game is already over");
        }
        match parse_lan(&state.pos, text) {
            Ok(m) => {
                let next = state.pos.make_move(&m);
                state.history.push(repetition_key(&state.pos));
                state.pos = next;
                VlStatus::Ok
            }
            Err(e) => fail(VlStatus::IllegalMove, e.to_string()),
        }
    })
}

/// Result of the game so far, including repetitions since creation.
///
/// # Safety
/// `p` must be a live position; `outcome` and `reason` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vl_position_status(
    p: *const VlPosition,
    outcome: *mut VlOutcome,
    reason: *mut VlReason,
) -> VlStatus {
    guard(|| {
        nonnull!(p, outcome, reason);
        let s = status(&(*p).pos, &(*p).history);
        *outcome = match s.state {
            Outcome::Ongoing => VlOutcome::Ongoing,
            Outcome::WhiteWins => VlOutcome::WhiteWins,
            Outcome::BlackWins => VlOutcome::BlackWins,
            Outcome::Draw => VlOutcome::Draw,
        };
        *reason = match s.reason {
            Reason::None => VlReason::None,
            Reason::Checkmate => VlReason::Checkmate,
            Reason::Stalemate => VlReason::Stalemate,
            Reason::FiftyMove => VlReason::FiftyMove,
            Reason::ThreefoldRepetition => VlReason::ThreefoldRepetition,
        };
        VlStatus::Ok
    })
}

/// Leaf count of the legal move tree below `p`.
///
/// # Safety
/// `p` must be a live position; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vl_perft(p: *const VlPosition, depth: u32, out: *mut u64) -> VlStatus {
    guard(|| {
        nonnull!(p, out);
        *out = perft(&(*p).pos, depth);
        VlStatus::Ok
    })
}

/// White-perspective result counts of one game set.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VlCounts {
    pub wins: u64,
    pub draws: u64,
    pub losses: u64,
}

/// Monte Carlo probability with its standard error.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VlProbability {
    pub probability: f64,
    pub std_error: f64,
}

unsafe fn comparison(
    a: VlCounts,
    b: VlCounts,
    samples: u64,
    seed: u64,
    out: *mut VlProbability,
    f: fn(&OutcomeCounts, &OutcomeCounts, u64, u64) -> Result<Comparison, StatsError>,
) -> VlStatus {
    guard(|| {
        nonnull!(out);
        let ca = OutcomeCounts::new(a.wins, a.draws, a.losses);
        let cb = OutcomeCounts::new(b.wins, b.draws, b.losses);
        match f(&ca, &cb, samples, seed) {
            Ok(c) => {
                *out = VlProbability {
                    probability: c.probability,
                    std_error: c.std_error,
                };
                VlStatus::Ok
            }
            Err(e) => fail(VlStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Posterior probability that set A draws less often than set B.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vl_draw_rate_comparison(
    a: VlCounts,
    b: VlCounts,
    samples: u64,
    seed: u64,
    out: *mut VlProbability,
) -> VlStatus {
    comparison(a, b, samples, seed, out, draw_rate_comparison)
}

/// Posterior probability that White's expected score is higher in set A.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vl_expected_score_comparison(
    a: VlCounts,
    b: VlCounts,
    samples: u64,
    seed: u64,
    out: *mut VlProbability,
) -> VlStatus {
    comparison(a, b, samples, seed, out, expected_score_comparison)
}

/// Copy of this thread's last error message, or null if there was none.
/// Free it with [`vl_string_free`].
#[no_mangle]
pub extern "C" fn vl_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |m| m.clone().into_raw()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
