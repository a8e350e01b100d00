use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn chroma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chroma"))
        .args(args)
        .env_remove("CHROMA_CACHE")
        .output()
        .expect("binary runs")
}

fn with_input(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_chroma"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    // The game may end before all input is read.
    let _ = child.stdin.take().unwrap().write_all(input.as_bytes());
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn solve_k333() {
    let o = chroma(&["solve", "3,3,3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("chi_g = 4"), "{}", stdout(&o));
}

#[test]
fn formula_with_singleton_is_not_applicable() {
    let o = chroma(&["formula", "4,3,1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("not applicable: singleton with k ≥ 3"));
}

#[test]
fn verify_pass_and_fail_exit_codes() {
    let o = chroma(&["verify", "--side", "bob", "--strategy", "b1", "--colors", "4", "--partition", "4,4,4"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("pass"));
    let o = chroma(&["verify", "4,4,4", "--colors", "4", "--side", "bob", "--strategy", "b1", "--universal"]);
    assert_eq!(code(&o), 0);

    let o = chroma(&["verify", "3,3,3", "--colors", "3", "--side", "alice", "--strategy", "a1"]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains("counterexample") && text.contains("outcome: bob_won"), "{text}");
}

#[test]
fn domain_errors_exit_two() {
    let cases: [&[&str]; 7] = [
        &["solve", "3,0"],
        &["solve", "a,b"],
        &["simulate", "3,3", "--colors", "3", "--alice", "x9", "--bob", "b1"],
        &["simulate", "3,3", "--colors", "3", "--alice", "a3", "--bob", "b1"],
        &["simulate", "3,3", "--colors", "7", "--alice", "a1", "--bob", "b1"],
        &["verify", "3,3", "--colors", "3", "--side", "alice", "--strategy", "b1"],
        &["conjecture", "nonopt", "--k", "5"],
    ];
    for args in cases {
        let o = chroma(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
    assert_eq!(code(&chroma(&["frobnicate"])), 2);
}

#[test]
fn solve_json_schema() {
    let o = chroma(&["solve", "2,2,1,1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["partition", "chi_g", "win_vector", "table1", "bounds"]);
    assert_eq!(v["partition"], serde_json::json!([2, 2, 1, 1]));
    assert_eq!(v["chi_g"], 5);
    let wins = v["win_vector"].as_array().unwrap();
    assert_eq!(wins.len(), 6);
    let first_win = wins.iter().position(|w| w == true).unwrap() + 1;
    assert_eq!(first_win, 5);
    assert!(v["table1"].is_null());
    assert!(v["bounds"].as_array().unwrap().iter().all(|b| b["source"].is_string()));
}

#[test]
fn solve_and_scan_agree() {
    let o = chroma(&["scan", "--max-n", "7", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let mut rows = csv::Reader::from_reader(o.stdout.as_slice());
    let header: Vec<String> = rows.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["partition", "n", "k", "chi_g", "table1", "agrees", "monotone", "winvector", "ms"]);
    let records: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 1 + 2 + 3 + 5 + 7 + 11 + 15);
    for rec in records.iter().filter(|r| r[1].parse::<u32>().unwrap() >= 6) {
        let solved: Value = serde_json::from_slice(&chroma(&["solve", &rec[0], "--format", "json"]).stdout).unwrap();
        assert_eq!(solved["chi_g"].to_string(), rec[3], "{}", &rec[0]);
        let single = chroma(&["solve", &rec[0], "--format", "csv"]);
        let line = stdout(&single).lines().nth(1).unwrap().to_string();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(rec).unwrap();
        assert_eq!(format!("{line}\n"), String::from_utf8(w.into_inner().unwrap()).unwrap());
    }
}

#[test]
fn scan_file_is_sorted_and_worker_independent() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let oa = chroma(&["scan", "--max-n", "9", "--jobs", "1", "--out", a.to_str().unwrap()]);
    let ob = chroma(&["scan", "--max-n", "9", "--jobs", "4", "--out", b.to_str().unwrap()]);
    assert_eq!((code(&oa), code(&ob)), (0, 0));
    let fa = std::fs::read(&a).unwrap();
    assert_eq!(fa, std::fs::read(&b).unwrap());
    // Streamed rows are the same set as the file body.
    let mut streamed: Vec<String> = stdout(&ob).lines().map(String::from).collect();
    let text = String::from_utf8(fa).unwrap();
    let mut body: Vec<String> = text.lines().skip(1).map(String::from).collect();
    assert_eq!(body.len(), 1 + 2 + 3 + 5 + 7 + 11 + 15 + 22 + 30);
    streamed.sort();
    body.sort();
    assert_eq!(streamed, body);
}

#[test]
fn scan_filters_and_singleton_row() {
    let o = chroma(&["scan", "--max-n", "6", "--filter", "with-singletons"]);
    let text = stdout(&o);
    assert!(text.contains("\"2,2,1,1\",6,4,5,n/a,false,true,011,0"), "{text}");
    let o = chroma(&["scan", "--max-n", "6", "--filter", "no-singletons", "--triangle"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().skip(1).all(|l| l.contains(",true,true,")));
    assert_eq!(code(&chroma(&["scan", "--max-n", "3", "--filter", "odd"])), 2);
}

#[test]
fn cache_file_is_written_and_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.txt");
    let run = |p: &str| {
        Command::new(env!("CARGO_BIN_EXE_chroma"))
            .args(["solve", p])
            .env("CHROMA_CACHE", &path)
            .output()
            .unwrap()
    };
    assert!(stdout(&run("3,3,3")).contains("chi_g = 4"));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "3,3,3;4;0111111\n");
    // A stored entry is used as-is.
    std::fs::write(&path, "2,2;2;111\n").unwrap();
    assert!(stdout(&run("2,2")).contains("chi_g = 2"));
    std::fs::write(&path, "garbage\n").unwrap();
    assert_eq!(code(&run("2,2")), 2);
}

#[test]
fn seeded_random_games_are_byte_identical() {
    let args = ["simulate", "4,3,3,2", "--colors", "6", "--alice", "random:7", "--bob", "random:7"];
    let (a, b) = (chroma(&args), chroma(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let bare = chroma(&["simulate", "4,3,3,2", "--colors", "6", "--alice", "random", "--bob", "random", "--seed", "7"]);
    assert_eq!(a.stdout, bare.stdout);
}

#[test]
fn simulate_json_record() {
    let o = chroma(&["simulate", "3,3,3", "--colors", "4", "--alice", "a2", "--bob", "b1", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["outcome"], "alice_won");
    assert_eq!(v["alice"], "a2");
    assert_eq!(v["moves"].as_array().unwrap().len(), 9);
    assert_eq!(v["colors_used"], 4);
    assert!(v["fixing_move"].is_u64());
}

fn human_game(args: &[&str], choice: impl Fn(usize) -> usize) -> String {
    // Enough answers for any game on these graphs; out-of-range answers
    // re-prompt, so index 0 follows each pick as a fallback.
    let input: String = (0..40).map(|i| format!("{}\n0\n", choice(i))).collect();
    let o = with_input(args, &input);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn human_bob_loses_to_a2_on_k333() {
    for seed in 0..6usize {
        let out = human_game(&["play", "3,3,3", "--colors", "4", "--alice", "a2", "--bob", "human"], |i| {
            (i * 7 + seed) % 4
        });
        assert!(out.contains("outcome: alice_won"), "{out}");
    }
}

#[test]
fn human_alice_loses_to_b1_on_k444() {
    for seed in 0..6usize {
        let out = human_game(&["play", "4,4,4", "--colors", "4", "--alice", "human", "--bob", "b1"], |i| {
            (i * 5 + seed) % 6
        });
        assert!(out.contains("outcome: bob_won"), "{out}");
        assert!(!out.contains("fixing move"));
    }
}

#[test]
fn play_renders_and_aborts_on_eof() {
    let o = with_input(&["play", "2,2", "--colors", "3", "--alice", "human", "--bob", "b1"], "0\n");
    assert_eq!(code(&o), 2);
    let text = stdout(&o);
    assert!(text.contains("part0: 1/2 colored, colors {1} started by alice"), "{text}");
    assert!(text.contains("[0] part1 with new color 3"));
    let o = with_input(&["play", "3,3", "--colors", "3", "--alice", "a1", "--bob", "b1"], "");
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("fixing move"));
}

#[test]
fn conjecture_commands() {
    let o = chroma(&["conjecture", "b1p", "--max-n", "7"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0 counterexamples"));
    let o = chroma(&["conjecture", "nonopt", "--k", "6", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["chi_g"], 8);
    assert_eq!(v["composite"]["pass"], true);
    assert!(v["simple"].as_array().unwrap().iter().all(|s| s["pass"] == false));
}

#[test]
fn bounds_output() {
    let o = chroma(&["bounds", "3,3,3"]);
    assert!(stdout(&o).starts_with("K[3,3,3]: 4 ≤ chi_g ≤ 4"), "{}", stdout(&o));
    let o = chroma(&["bounds", "3,3,3", "--format", "csv"]);
    assert!(stdout(&o).starts_with("source,kind,value,applicable,reason\ntable1,exact,4,true,\n"));
}
