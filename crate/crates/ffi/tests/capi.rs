use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use parity_justify::io::{emit_game, parse_game};
use parity_justify::oracle::{oracle_solve, random_game};
use parity_justify::{NodeId, ParameterMap};
use parity_justify_ffi::*;

fn game_handle(text: &str) -> *mut PgGame {
    let text = CString::new(text).unwrap();
    let mut game = ptr::null_mut();
    assert_eq!(
        unsafe { pg_game_parse(text.as_ptr(), &mut game) },
        PgStatus::Ok
    );
    assert!(!game.is_null());
    game
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(pg_last_error_message()) }
        .to_str()
        .unwrap()
        .to_owned()
}

fn take_string(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let owned = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { pg_string_free(s) };
    owned
}

const GAME: &str = "parity 13;\n10 2 0 11;\n11 3 1 10,12;\n12 1 1 12;\n13 0 0 13,10;\n";

#[test]
fn solve_and_verify_every_configuration() {
    let game = game_handle(GAME);
    assert_eq!(unsafe { pg_game_node_count(game) }, 4);
    assert_eq!(unsafe { pg_game_external_id(game, 3) }, 13);
    assert_eq!(unsafe { pg_game_external_id(game, 4) }, u64::MAX);

    let reference = parse_game(GAME).unwrap();
    let expected = oracle_solve(&reference, &ParameterMap::empty(4)).unwrap();
    for algorithm in [
        PgAlgorithm::Fixpoint,
        PgAlgorithm::Zielonka,
        PgAlgorithm::PriorityPromotion,
    ] {
        for reset in [PgReset::Minimal, PgReset::Aggressive] {
            let mut sol = ptr::null_mut();
            let status = unsafe { pg_solve(game, algorithm as u32, reset as u32, &mut sol) };
            assert_eq!(status, PgStatus::Ok, "{}", last_error());
            for v in 0..4 {
                let w = unsafe { pg_solution_winner(sol, v) };
                assert_eq!(w, expected.winner(NodeId(v)).index() as i32);
                let s = unsafe { pg_solution_strategy(sol, v) };
                if s >= 0 {
                    assert!(reference.has_edge(NodeId(v), NodeId(s as usize)));
                }
            }
            assert_eq!(unsafe { pg_solution_winner(sol, 4) }, -1);
            assert_eq!(unsafe { pg_solution_strategy(sol, 4) }, -1);
            assert_eq!(unsafe { pg_solution_verify(game, sol) }, PgStatus::Ok);
            unsafe { pg_solution_free(sol) };
        }
    }
    unsafe { pg_game_free(game) };
}

#[test]
fn corrupted_solution_fails_verification() {
    let game = game_handle(GAME);
    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { pg_oracle_solve(game, 12, &mut sol) }, PgStatus::Ok);
    let mut text = ptr::null_mut();
    assert_eq!(
        unsafe { pg_solution_emit(game, sol, &mut text) },
        PgStatus::Ok
    );
    let text = take_string(text);
    unsafe { pg_solution_free(sol) };

    // Node 12 only loops on priority 1: hand it to player 0.
    assert!(text.contains("12 1 12;"));
    let corrupted = CString::new(text.replace("12 1 12;", "12 0;")).unwrap();
    let mut bad = ptr::null_mut();
    assert_eq!(
        unsafe { pg_solution_parse(game, corrupted.as_ptr(), &mut bad) },
        PgStatus::Ok
    );
    assert_eq!(
        unsafe { pg_solution_verify(game, bad) },
        PgStatus::VerificationFailed
    );
    assert!(last_error().contains("losing cycle"), "{}", last_error());
    unsafe {
        pg_solution_free(bad);
        pg_game_free(game);
    }
}

#[test]
fn errors_are_reported() {
    let mut game = ptr::null_mut();
    let text = CString::new("parity 0;\n0 2 0;\n").unwrap();
    assert_eq!(
        unsafe { pg_game_parse(text.as_ptr(), &mut game) },
        PgStatus::ParseError
    );
    assert!(game.is_null());
    assert!(last_error().contains("line 2"), "{}", last_error());

    assert_eq!(
        unsafe { pg_game_parse(ptr::null(), &mut game) },
        PgStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { pg_game_parse(text.as_ptr(), ptr::null_mut()) },
        PgStatus::InvalidArgument
    );

    let game = game_handle(GAME);
    let mut sol = ptr::null_mut();
    assert_eq!(
        unsafe { pg_solve(game, 7, 0, &mut sol) },
        PgStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { pg_solve(game, 0, 9, &mut sol) },
        PgStatus::InvalidArgument
    );
    assert!(sol.is_null());
    assert_eq!(
        unsafe { pg_oracle_solve(game, 3, &mut sol) },
        PgStatus::BoundExceeded
    );
    assert!(sol.is_null());
    assert_eq!(
        unsafe { pg_solution_verify(game, ptr::null()) },
        PgStatus::InvalidArgument
    );
    assert_eq!(unsafe { pg_game_node_count(ptr::null()) }, 0);
    unsafe {
        pg_game_free(ptr::null_mut());
        pg_solution_free(ptr::null_mut());
        pg_string_free(ptr::null_mut());
        pg_game_free(game);
    }
}

#[test]
fn emitted_games_round_trip() {
    for seed in 0..50 {
        let g = random_game(seed, 1 + seed as usize % 9, seed % 5, 0.4);
        let text = emit_game(&g);
        let handle = game_handle(&text);
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { pg_game_emit(handle, &mut out) }, PgStatus::Ok);
        assert_eq!(take_string(out), text);
        unsafe { pg_game_free(handle) };
    }
}

#[test]
fn error_messages_are_per_thread() {
    let game = game_handle(GAME);
    let mut sol = ptr::null_mut();
    assert_eq!(
        unsafe { pg_solve(game, 7, 0, &mut sol) },
        PgStatus::InvalidArgument
    );
    let here = last_error();
    std::thread::spawn(|| assert_eq!(last_error(), ""))
        .join()
        .unwrap();
    assert_eq!(last_error(), here);
    unsafe { pg_game_free(game) };
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/parity_justify.h")
}

#[test]
fn header_declares_the_interface() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "pg_game_parse",
        "pg_game_free",
        "pg_game_node_count",
        "pg_game_emit",
        "pg_string_free",
        "pg_solve",
        "pg_oracle_solve",
        "pg_solution_parse",
        "pg_solution_emit",
        "pg_solution_winner",
        "pg_solution_strategy",
        "pg_solution_verify",
        "pg_solution_free",
        "pg_last_error_message",
        "PG_STATUS_BOUND_EXCEEDED = 4",
        "PG_ALGORITHM_PRIORITY_PROMOTION = 2",
        "PG_RESET_AGGRESSIVE = 1",
        "typedef struct PgGame PgGame;",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "parity_justify.h"

int main(void) {
    PgGame *game = NULL;
    if (pg_game_parse("parity 2;\n0 2 0 1;\n1 1 1 0,2;\n2 0 1 2;\n", &game) != PG_STATUS_OK) {
        return 10;
    }
    PgSolution *sol = NULL;
    if (pg_solve(game, PG_ALGORITHM_ZIELONKA, PG_RESET_MINIMAL, &sol) != PG_STATUS_OK) {
        return 11;
    }
    if (pg_solution_verify(game, sol) != PG_STATUS_OK) {
        return 12;
    }
    printf("%d %d %d\n", pg_solution_winner(sol, 0), pg_solution_winner(sol, 1),
           pg_solution_winner(sol, 2));
    pg_solution_free(sol);
    if (pg_solve(game, 99, PG_RESET_MINIMAL, &sol) != PG_STATUS_INVALID_ARGUMENT
        || strlen(pg_last_error_message()) == 0) {
        return 13;
    }
    pg_game_free(game);
    return 0;
}
"#;

/// Compiles a C program against the header and the static library built
/// for this test run.
#[test]
fn c_program_links_against_the_static_library() {
    let exe = std::env::current_exe().unwrap();
    // target/<profile>/deps/<test binary>
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libparity_justify_ffi.a");
    assert!(
        lib.exists(),
        "static library not found at {}",
        lib.display()
    );

    let dir = tempfile::tempdir().unwrap();
    let source = dir.path().join("main.c");
    std::fs::write(&source, C_PROGRAM).unwrap();
    let binary = dir.path().join("main");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&source)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&binary)
        .status()
        .expect("C compiler not available");
    assert!(status.success());
    let output = Command::new(&binary).output().unwrap();
    assert!(output.status.success(), "exit status {:?}", output.status);
    let expected = oracle_solve(
        &parse_game("parity 2;\n0 2 0 1;\n1 1 1 0,2;\n2 0 1 2;\n").unwrap(),
        &ParameterMap::empty(3),
    )
    .unwrap();
    let line = format!(
        "{} {} {}\n",
        expected.winner(NodeId(0)),
        expected.winner(NodeId(1)),
        expected.winner(NodeId(2))
    );
    assert_eq!(String::from_utf8(output.stdout).unwrap(), line);
}
