use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

use parity_justify::io::{parse_game, parse_solution};
use parity_justify::oracle::oracle_solve;
use parity_justify::ParameterMap;

fn pgjustify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgjustify"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

struct Workdir(TempDir);

impl Workdir {
    fn new() -> Self {
        Workdir(tempfile::tempdir().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> String {
        let p = self.path(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_owned()
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &Workdir, seed: u64) -> String {
    let out = pgjustify(&[
        "gen",
        "--seed",
        &seed.to_string(),
        "--nodes",
        "7",
        "--max-priority",
        "5",
        "--density",
        "0.4",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    dir.write(&format!("g{seed}.pg"), &stdout(&out))
}

#[test]
fn solve_then_verify_on_generated_games() {
    let dir = Workdir::new();
    for seed in 0..8 {
        let game = generate(&dir, seed);
        let parsed = parse_game(&std::fs::read_to_string(&game).unwrap()).unwrap();
        let expected = oracle_solve(&parsed, &ParameterMap::empty(parsed.node_count())).unwrap();
        for algorithm in ["fixpoint", "zielonka", "pp"] {
            for reset in ["minimal", "aggressive"] {
                let sol = dir.path("out.sol");
                let trace = dir.path("out.tsv");
                let dot = dir.path("out.dot");
                let out = pgjustify(&[
                    "solve",
                    &game,
                    "--algorithm",
                    algorithm,
                    "--reset",
                    reset,
                    "--audit",
                    "--trace",
                    s(&trace),
                    "--dot",
                    s(&dot),
                    "--solution",
                    s(&sol),
                ]);
                assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

                let text = std::fs::read_to_string(&sol).unwrap();
                let solution = parse_solution(&text, &parsed).unwrap();
                assert_eq!(solution.winner, expected.winner, "seed {seed} {algorithm}");

                let out = pgjustify(&["verify", &game, s(&sol)]);
                assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

                let steps = std::fs::read_to_string(&trace).unwrap().lines().count() - 1;
                for replay in [false, true] {
                    let mut args = vec!["audit-trace", s(&trace)];
                    if replay {
                        args.extend(["--game", &game]);
                    }
                    let out = pgjustify(&args);
                    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
                    let first = stdout(&out).lines().next().unwrap().to_owned();
                    assert_eq!(first, format!("monotone: yes, steps: {steps}"));
                }
                assert!(std::fs::read_to_string(&dot)
                    .unwrap()
                    .starts_with("digraph"));
            }
        }
    }
}

#[test]
fn solutions_from_different_algorithms_agree() {
    let dir = Workdir::new();
    let game = generate(&dir, 99);
    let outputs: Vec<String> = ["fixpoint", "zielonka", "pp"]
        .iter()
        .map(|a| {
            let out = pgjustify(&["solve", &game, "--algorithm", a]);
            assert_eq!(out.status.code(), Some(0));
            stdout(&out)
        })
        .collect();
    let oracle = pgjustify(&["oracle", &game]);
    assert_eq!(oracle.status.code(), Some(0));
    let parsed = parse_game(&std::fs::read_to_string(&game).unwrap()).unwrap();
    let winners = |text: &str| parse_solution(text, &parsed).unwrap().winner;
    for text in &outputs {
        assert_eq!(winners(text), winners(&stdout(&oracle)));
        // Any solver's file verifies.
        let sol = dir.write("x.sol", text);
        assert_eq!(pgjustify(&["verify", &game, &sol]).status.code(), Some(0));
    }
}

#[test]
fn corrupted_winner_is_refuted_with_a_node() {
    let dir = Workdir::new();
    // 0 and 1 form an odd cycle; 2 is an even self-loop.
    let game = dir.write("g.pg", "parity 2;\n0 1 0 1;\n1 3 1 0;\n2 2 0 2;\n");
    let good = dir.write("good.sol", "paritysol 3;\n0 1;\n1 1 0;\n2 0 2;\n");
    assert_eq!(pgjustify(&["verify", &game, &good]).status.code(), Some(0));

    let bad = dir.write("bad.sol", "paritysol 3;\n0 1;\n1 1 0;\n2 1;\n");
    let out = pgjustify(&["verify", &game, &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).trim(), "counterexample: node 2");
    assert!(stderr(&out).contains("<2>"), "{}", stderr(&out));
}

#[test]
fn tampered_traces_fail_the_audit() {
    let dir = Workdir::new();
    let game = generate(&dir, 5);
    let trace = dir.path("t.tsv");
    let out = pgjustify(&[
        "solve",
        &game,
        "--algorithm",
        "zielonka",
        "--trace",
        s(&trace),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&trace).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() >= 3);

    // Swapping two steps breaks monotonicity.
    lines.swap(1, 2);
    let swapped = dir.write("swapped.tsv", &(lines.join("\n") + "\n"));
    let out = pgjustify(&["audit-trace", &swapped]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("monotone: no"));

    // A wrong size column is caught by the replay only.
    lines.swap(1, 2);
    let last = lines.len() - 1;
    let mut cols: Vec<&str> = lines[last].split('\t').collect();
    let inflated = format!("inf={}", parsed_nodes(&game) + 1);
    cols[5] = &inflated;
    let row = cols.join("\t");
    lines[last] = &row;
    let wrong = dir.write("wrong.tsv", &(lines.join("\n") + "\n"));
    assert_eq!(pgjustify(&["audit-trace", &wrong]).status.code(), Some(0));
    let out = pgjustify(&["audit-trace", &wrong, "--game", &game]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stdout(&out).contains("1 size mismatches"),
        "{}",
        stdout(&out)
    );
}

fn parsed_nodes(path: &str) -> usize {
    parse_game(&std::fs::read_to_string(path).unwrap())
        .unwrap()
        .node_count()
}

#[test]
fn exit_codes() {
    let dir = Workdir::new();
    let game = generate(&dir, 1);
    // Usage errors.
    assert_eq!(pgjustify(&[]).status.code(), Some(2));
    assert_eq!(pgjustify(&["solve", &game]).status.code(), Some(2));
    assert_eq!(
        pgjustify(&["solve", &game, "--algorithm", "bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        pgjustify(&[
            "gen",
            "--seed",
            "1",
            "--nodes",
            "3",
            "--max-priority",
            "2",
            "--density",
            "2"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        pgjustify(&["oracle", &game, "--bound", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(pgjustify(&["--help"]).status.code(), Some(0));

    // I/O and parse errors.
    let missing = dir.path("missing.pg");
    assert_eq!(
        pgjustify(&["solve", s(&missing), "--algorithm", "pp"])
            .status
            .code(),
        Some(3)
    );
    let leaf = dir.write("leaf.pg", "0 2 0;\n");
    let out = pgjustify(&["solve", &leaf, "--algorithm", "pp"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(
        stderr(&out).contains("line 1, column 6"),
        "{}",
        stderr(&out)
    );
    let garbage = dir.write("garbage.sol", "this is not a solution\n");
    assert_eq!(
        pgjustify(&["verify", &game, &garbage]).status.code(),
        Some(3)
    );
    let not_a_trace = dir.write("x.tsv", "nope\n");
    assert_eq!(
        pgjustify(&["audit-trace", &not_a_trace]).status.code(),
        Some(3)
    );
}

#[test]
fn gen_is_reproducible() {
    let args = [
        "gen",
        "--seed",
        "42",
        "--nodes",
        "6",
        "--max-priority",
        "4",
        "--density",
        "0.5",
    ];
    let a = stdout(&pgjustify(&args));
    assert_eq!(a, stdout(&pgjustify(&args)));
    assert_eq!(parse_game(&a).unwrap().node_count(), 6);
}
