//! End-to-end tests driving the `ssg` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn ssg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("ssg-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn gen_writes_edge_lists() {
    let out = ssg(&["gen", "--family", "grid4", "--rows", "3", "--cols", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("12 17\n# grid 3 4 4\n"));

    let out = ssg(&["gen", "--family", "regular-gadget", "--delta", "3", "--q", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("8 12\n"));

    // single vertex is a valid degenerate path
    let out = ssg(&["gen", "--family", "path", "--n", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1 0\n");

    // invalid parameters exit 1
    let out = ssg(&["gen", "--family", "cycle", "--n", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn poa_reports_known_values() {
    let out = ssg(&["poa", "--family", "grid4", "--rows", "2", "--cols", "3", "--o", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"poa\": \"25/22\""), "{text}");
    assert!(text.contains("\"bound_respected\": true"));

    let out = ssg(&["poa", "--family", "cycle", "--n", "12", "--o", "4"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"poa\": \"5/4\"")); // 10/8 in lowest terms

    let out = ssg(&["poa", "--family", "path", "--n", "3", "--o", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"poa\": \"inf\""));
}

#[test]
fn poa_reports_are_byte_identical() {
    let args = ["poa", "--family", "grid8", "--rows", "3", "--cols", "3", "--o", "2", "--jobs", "3"];
    let a = ssg(&args);
    let b = ssg(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn simulate_converges_on_cycle() {
    let out = ssg(&[
        "simulate", "--family", "cycle", "--n", "8", "--o", "4", "--seed", "1",
        "--scheduler", "random",
    ]);
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let text = stdout(&out);
    assert!(text.contains("\"kind\": \"Converged\""));
    // the same invocation is reproducible
    let again = ssg(&[
        "simulate", "--family", "cycle", "--n", "8", "--o", "4", "--seed", "1",
        "--scheduler", "random",
    ]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn simulate_budget_zero_exits_3() {
    // alternating columns on a path are unstable, so budget 0 exhausts
    let init = tmp("init.txt");
    std::fs::write(&init, "0 1 0 1\n").unwrap();
    let out = ssg(&[
        "simulate", "--family", "path", "--n", "4", "--o", "2",
        "--init", init.to_str().unwrap(), "--budget", "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
    std::fs::remove_file(init).ok();
}

#[test]
fn check_frame_and_characterization() {
    let graph = tmp("frame-graph.txt");
    let coloring = tmp("frame-coloring.txt");
    let out = ssg(&[
        "construct", "--which", "frame", "--n", "6",
        "--out-graph", graph.to_str().unwrap(),
        "--out-coloring", coloring.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let out = ssg(&["check", "--graph", graph.to_str().unwrap(), "--coloring", coloring.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"is_equilibrium\": true"));

    // characterization mode agrees with the direct check
    let out = ssg(&[
        "check", "--graph", graph.to_str().unwrap(), "--coloring", coloring.to_str().unwrap(),
        "--method", "characterization",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"characterization_agrees_with_direct\": true"));
    std::fs::remove_file(graph).ok();
    std::fs::remove_file(coloring).ok();
}

#[test]
fn check_unstable_coloring_reports_witness() {
    let graph = tmp("cycle4.txt");
    let coloring = tmp("cycle4-col.txt");
    let gen = ssg(&["gen", "--family", "cycle", "--n", "4", "--out", graph.to_str().unwrap()]);
    assert!(gen.status.success());
    std::fs::write(&coloring, "0 1 0 1\n").unwrap();
    let out = ssg(&["check", "--graph", graph.to_str().unwrap(), "--coloring", coloring.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"is_equilibrium\": false"));
    assert!(text.contains("\"witness\""));
    std::fs::remove_file(graph).ok();
    std::fs::remove_file(coloring).ok();
}

#[test]
fn construct_tree_lse_from_file() {
    // a double star is a tree; build its post-order local equilibrium for
    // three colors and re-check it through the CLI
    let graph = tmp("tree.txt");
    let coloring = tmp("tree-col.txt");
    let gen = ssg(&["gen", "--family", "double-star", "--leaves", "4", "--out", graph.to_str().unwrap()]);
    assert!(gen.status.success());
    let out = ssg(&[
        "construct", "--which", "tree-lse", "--graph", graph.to_str().unwrap(),
        "--types", "3,3,3", "--out-coloring", coloring.to_str().unwrap(),
        "--out-graph", tmp("tree-echo.txt").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let check = ssg(&[
        "check", "--graph", graph.to_str().unwrap(), "--coloring", coloring.to_str().unwrap(),
        "--locality", "local",
    ]);
    assert!(check.status.success());
    assert!(stdout(&check).contains("\"is_equilibrium\": true"));
    for p in [graph, coloring, tmp("tree-echo.txt")] {
        std::fs::remove_file(p).ok();
    }
}

#[test]
fn construct_emits_verified_profiles() {
    let out = ssg(&["construct", "--which", "cycle-worst", "--n", "12", "--o", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("12 12\n"));
    assert!(text.trim_end().ends_with("1 1 1 1 1 1"), "{text}");

    let out = ssg(&["construct", "--which", "grid8", "--rows", "3", "--cols", "4", "--o", "5"]);
    assert!(out.status.success());

    let out = ssg(&["construct", "--which", "two-by-h", "--h", "5"]);
    assert_eq!(out.status.code(), Some(1)); // h must be a multiple of 6
}

#[test]
fn scripted_replay_detects_the_cycle() {
    // the 8-swap improving-response cycle on the 3x3 8-grid with 4
    // minority agents, replayed step by step
    let graph = tmp("irc-graph.txt");
    let init = tmp("irc-init.txt");
    let script = tmp("irc-script.txt");
    let gen = ssg(&["gen", "--family", "grid8", "--rows", "3", "--cols", "3", "--out", graph.to_str().unwrap()]);
    assert!(gen.status.success());
    std::fs::write(&init, "0 0 1 1 0 0 1 1 1\n").unwrap();
    std::fs::write(&script, "1 2\n0 7\n5 8\n2 3\n6 7\n1 8\n0 3\n5 6\n").unwrap();
    let out = ssg(&[
        "simulate", "--graph", graph.to_str().unwrap(), "--o", "4",
        "--init", init.to_str().unwrap(), "--script", script.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2)); // cycle detected
    assert!(stdout(&out).contains("\"kind\": \"CycleDetected\""));
    for p in [graph, init, script] {
        std::fs::remove_file(p).ok();
    }
}

#[test]
fn poa_text_and_csv_formats() {
    let out = ssg(&["poa", "--family", "cycle", "--n", "12", "--o", "4", "--format", "text"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let poa_line = text.lines().find(|l| l.starts_with("price of anarchy")).unwrap();
    assert!(poa_line.ends_with("5/4"), "{text}");

    let out = ssg(&["poa", "--family", "grid8", "--rows", "3", "--cols", "3", "--o", "1", "--format", "csv"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("897/704"));
}

#[test]
fn reproduce_runs_named_suites() {
    let out = ssg(&["reproduce", "grid4-o1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("grid4-o1: PASS"));
    assert!(text.contains("25/22"));

    let out = ssg(&["reproduce", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(1));
}
