//! C interface to `parity-justify`.
//!
//! Games and solutions are opaque handles owned by the caller and released
//! with the matching `*_free` function. Nodes are addressed by their dense
//! index `0..pg_game_node_count(game)`. Every fallible function returns a
//! [`PgStatus`]; on failure, [`pg_last_error_message`] describes the error
//! for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use parity_justify::io::{emit_game, emit_solution, parse_game, parse_solution};
use parity_justify::oracle::{oracle_solve_bounded, OracleError};
use parity_justify::{
    check_solution, solve, Algorithm, NodeId, ParameterMap, ParityGame, ResetPolicy, Solution,
    SolverConfig,
};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgStatus {
    Ok = 0,
    VerificationFailed = 1,
    InvalidArgument = 2,
    ParseError = 3,
    BoundExceeded = 4,
    Internal = 5,
}

/// Values accepted for the `algorithm` argument of [`pg_solve`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgAlgorithm {
    Fixpoint = 0,
    Zielonka = 1,
    PriorityPromotion = 2,
}

/// Values accepted for the `reset` argument of [`pg_solve`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgReset {
    Minimal = 0,
    Aggressive = 1,
}

/// A parity game.
pub struct PgGame(ParityGame);

/// A solution of a parity game.
pub struct PgSolution(Solution);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let mut bytes = message.into().into_bytes();
    bytes.retain(|&b| b != 0);
    let message = CString::new(bytes).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

fn fail(status: PgStatus, message: impl Into<String>) -> PgStatus {
    set_error(message);
    status
}

/// Runs `f`, turning a panic into [`PgStatus::Internal`].
fn guard(f: impl FnOnce() -> PgStatus) -> PgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(PgStatus::Internal, "internal error"),
    }
}

unsafe fn c_str<'a>(s: *const c_char) -> Result<&'a str, PgStatus> {
    if s.is_null() {
        return Err(fail(PgStatus::InvalidArgument, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(PgStatus::InvalidArgument, "string is not valid UTF-8"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last error on this thread. The pointer stays valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a game in PGSolver format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_game_parse(text: *const c_char, out: *mut *mut PgGame) -> PgStatus {
    guard(|| {
        if out.is_null() {
            return fail(PgStatus::InvalidArgument, "null output pointer");
        }
        *out = ptr::null_mut();
        let s = match c_str(text) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match parse_game(s) {
            Ok(game) => {
                *out = Box::into_raw(Box::new(PgGame(game)));
                PgStatus::Ok
            }
            Err(e) => fail(PgStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `game` must come from [`pg_game_parse`] and not be freed already.
#[no_mangle]
pub unsafe extern "C" fn pg_game_free(game: *mut PgGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Number of nodes, or 0 for a null game.
///
/// # Safety
/// `game` must be null or a live game handle.
#[no_mangle]
pub unsafe extern "C" fn pg_game_node_count(game: *const PgGame) -> usize {
    game.as_ref().map_or(0, |g| g.0.node_count())
}

/// The id a node has in the game file, or `u64::MAX` if `node` is out of
/// range.
///
/// # Safety
/// `game` must be null or a live game handle.
#[no_mangle]
pub unsafe extern "C" fn pg_game_external_id(game: *const PgGame, node: usize) -> u64 {
    match game.as_ref() {
        Some(g) if node < g.0.node_count() => g.0.external_id(NodeId(node)),
        _ => u64::MAX,
    }
}

/// Writes the game in PGSolver format. Release the string with
/// [`pg_string_free`].
///
/// # Safety
/// `game` must be a live game handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_game_emit(game: *const PgGame, out: *mut *mut c_char) -> PgStatus {
    guard(|| {
        let (Some(g), false) = (game.as_ref(), out.is_null()) else {
            return fail(PgStatus::InvalidArgument, "null argument");
        };
        *out = into_c_string(emit_game(&g.0));
        PgStatus::Ok
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn pg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Solves `game`. `algorithm` is a [`PgAlgorithm`] and `reset` a
/// [`PgReset`] value.
///
/// # Safety
/// `game` must be a live game handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_solve(
    game: *const PgGame,
    algorithm: u32,
    reset: u32,
    out: *mut *mut PgSolution,
) -> PgStatus {
    guard(|| {
        let (Some(g), false) = (game.as_ref(), out.is_null()) else {
            return fail(PgStatus::InvalidArgument, "null argument");
        };
        *out = ptr::null_mut();
        let algorithm = match algorithm {
            0 => Algorithm::Fixpoint,
            1 => Algorithm::Zielonka,
            2 => Algorithm::PriorityPromotion,
            a => return fail(PgStatus::InvalidArgument, format!("unknown algorithm {a}")),
        };
        let reset = match reset {
            0 => ResetPolicy::Minimal,
            1 => ResetPolicy::Aggressive,
            r => {
                return fail(
                    PgStatus::InvalidArgument,
                    format!("unknown reset policy {r}"),
                )
            }
        };
        let config = SolverConfig::new(algorithm).with_reset(reset);
        match solve(&g.0, &config) {
            Ok(result) => {
                *out = Box::into_raw(Box::new(PgSolution(result.solution)));
                PgStatus::Ok
            }
            Err(e) => fail(PgStatus::Internal, e.to_string()),
        }
    })
}

/// Solves `game` by strategy enumeration, refusing games with more than
/// `bound` nodes.
///
/// # Safety
/// `game` must be a live game handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_oracle_solve(
    game: *const PgGame,
    bound: usize,
    out: *mut *mut PgSolution,
) -> PgStatus {
    guard(|| {
        let (Some(g), false) = (game.as_ref(), out.is_null()) else {
            return fail(PgStatus::InvalidArgument, "null argument");
        };
        *out = ptr::null_mut();
        let params = ParameterMap::empty(g.0.node_count());
        match oracle_solve_bounded(&g.0, &params, bound) {
            Ok(solution) => {
                *out = Box::into_raw(Box::new(PgSolution(solution)));
                PgStatus::Ok
            }
            Err(e @ OracleError::TooLarge { .. }) => fail(PgStatus::BoundExceeded, e.to_string()),
            Err(e) => fail(PgStatus::Internal, e.to_string()),
        }
    })
}

/// Parses a solution file of `game`.
///
/// # Safety
/// `game` must be a live game handle, `text` a NUL-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_solution_parse(
    game: *const PgGame,
    text: *const c_char,
    out: *mut *mut PgSolution,
) -> PgStatus {
    guard(|| {
        let (Some(g), false) = (game.as_ref(), out.is_null()) else {
            return fail(PgStatus::InvalidArgument, "null argument");
        };
        *out = ptr::null_mut();
        let s = match c_str(text) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match parse_solution(s, &g.0) {
            Ok(solution) => {
                *out = Box::into_raw(Box::new(PgSolution(solution)));
                PgStatus::Ok
            }
            Err(e) => fail(PgStatus::ParseError, e.to_string()),
        }
    })
}

/// Writes a solution file. Release the string with [`pg_string_free`].
///
/// # Safety
/// `game` and `solution` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_solution_emit(
    game: *const PgGame,
    solution: *const PgSolution,
    out: *mut *mut c_char,
) -> PgStatus {
    guard(|| {
        let (Some(g), Some(s), false) = (game.as_ref(), solution.as_ref(), out.is_null()) else {
            return fail(PgStatus::InvalidArgument, "null argument");
        };
        if s.0.winner.len() != g.0.node_count() {
            return fail(
                PgStatus::InvalidArgument,
                "solution belongs to another game",
            );
        }
        *out = into_c_string(emit_solution(&g.0, &s.0));
        PgStatus::Ok
    })
}

/// Winner (0 or 1) of `node`, or -1 if the node is out of range.
///
/// # Safety
/// `solution` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn pg_solution_winner(solution: *const PgSolution, node: usize) -> i32 {
    match solution.as_ref() {
        Some(s) if node < s.0.winner.len() => s.0.winner(NodeId(node)).index() as i32,
        _ => -1,
    }
}

/// Successor chosen by the winner at `node`, or -1 if the winner does not
/// move there or the node is out of range.
///
/// # Safety
/// `solution` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn pg_solution_strategy(solution: *const PgSolution, node: usize) -> i64 {
    match solution.as_ref() {
        Some(s) if node < s.0.winner.len() => {
            s.0.choice(NodeId(node)).map_or(-1, |w| w.index() as i64)
        }
        _ => -1,
    }
}

/// Checks `solution` against `game`. Returns [`PgStatus::VerificationFailed`]
/// with a description of the counterexample when it does not hold.
///
/// # Safety
/// `game` and `solution` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn pg_solution_verify(
    game: *const PgGame,
    solution: *const PgSolution,
) -> PgStatus {
    guard(|| {
        let (Some(g), Some(s)) = (game.as_ref(), solution.as_ref()) else {
            return fail(PgStatus::InvalidArgument, "null argument");
        };
        let params = ParameterMap::empty(g.0.node_count());
        match check_solution(&g.0, &params, &s.0) {
            Ok(()) => PgStatus::Ok,
            Err(e) if e.is_malformed() => fail(PgStatus::InvalidArgument, e.to_string()),
            Err(e) => fail(PgStatus::VerificationFailed, e.to_string()),
        }
    })
}

/// # Safety
/// `solution` must come from this library and not be freed already.
#[no_mangle]
pub unsafe extern "C" fn pg_solution_free(solution: *mut PgSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}
