//! End-to-end checks of the command-line surface: formats, exit codes,
//! and the byte-identical determinism contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_branchtree"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("branchtree-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn gen_extremal_matches_formula() {
    let out = run(&["gen", "--family", "extremal", "--s", "1", "--m", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    assert_eq!(header.split_whitespace().next().unwrap(), "10");
}

#[test]
fn gen_is_deterministic() {
    let args = ["gen", "--family", "random-mindeg", "--n", "14", "--min-degree", "4", "--seed", "9"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "identical seed must give identical bytes");
    let c = run(&["gen", "--family", "random-mindeg", "--n", "14", "--min-degree", "4", "--seed", "10"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn solve_cycle_exit_zero_branches() {
    let g = tmp("c9.el");
    let mut text = String::from("9 9\n");
    for i in 0..9 {
        let (u, v) = (i, (i + 1) % 9);
        text.push_str(&format!("{} {}\n", u.min(v), u.max(v)));
    }
    // Canonical order for the wrap-around edge.
    let g2 = branchtree_edge_sorted(&text);
    std::fs::write(&g, g2).unwrap();
    let out = run(&["solve", "--input", g.to_str().unwrap(), "--s", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("branches=0"));
}

fn branchtree_edge_sorted(text: &str) -> String {
    let mut lines: Vec<&str> = text.lines().collect();
    let header = lines.remove(0);
    lines.sort();
    let mut out = String::from(header);
    out.push('\n');
    for l in lines {
        out.push_str(l);
        out.push('\n');
    }
    out
}

#[test]
fn solve_infeasible_exits_one_with_minimum() {
    let g = tmp("ex13.el");
    let gen = run(&["gen", "--family", "extremal", "--s", "1", "--m", "3", "--out", g.to_str().unwrap()]);
    assert!(gen.status.success());
    let out = run(&["solve", "--input", g.to_str().unwrap(), "--s", "1", "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("infeasible: minimum is 2"));
}

#[test]
fn solve_s0_on_star_exits_one() {
    let g = tmp("k13.el");
    std::fs::write(&g, "4 3\n0 1\n0 2\n0 3\n").unwrap();
    let out = run(&["solve", "--input", g.to_str().unwrap(), "--s", "0", "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn emitted_trees_pass_verify() {
    let g = tmp("r12.el");
    let t = tmp("r12.tree");
    assert!(run(&["gen", "--family", "random-mindeg", "--n", "12", "--min-degree", "4", "--seed", "3", "--out", g.to_str().unwrap()]).status.success());
    let solve = run(&["solve", "--input", g.to_str().unwrap(), "--s", "1", "--out", t.to_str().unwrap()]);
    assert!(solve.status.success());
    let verify = run(&["verify", "--graph", g.to_str().unwrap(), "--tree", t.to_str().unwrap(), "--max-branches", "1"]);
    assert!(verify.status.success(), "{}", stdout(&verify));
    assert!(stdout(&verify).starts_with("OK"));
}

#[test]
fn verify_rejects_broken_tree() {
    let g = tmp("p4.el");
    let t = tmp("p4.tree");
    std::fs::write(&g, "4 3\n0 1\n1 2\n2 3\n").unwrap();
    std::fs::write(&t, "0 1\n2 3\n").unwrap(); // disconnected
    let out = run(&["verify", "--graph", g.to_str().unwrap(), "--tree", t.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("FAIL"));
}

#[test]
fn solve_is_byte_deterministic() {
    let g = tmp("det.el");
    assert!(run(&["gen", "--family", "random-mindeg", "--n", "16", "--min-degree", "5", "--seed", "4", "--out", g.to_str().unwrap()]).status.success());
    let args = ["solve", "--input", g.to_str().unwrap(), "--s", "1", "--seed", "11", "--output", "json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn partition_emits_json_lines() {
    let g = tmp("bridge.el");
    // Two K5s and a bridge, written in canonical form.
    let mut edges = Vec::new();
    for u in 0..5 {
        for v in u + 1..5 {
            edges.push((u, v));
            edges.push((u + 5, v + 5));
        }
    }
    edges.push((0, 5));
    edges.sort();
    let mut text = format!("10 {}\n", edges.len());
    for (u, v) in edges {
        text.push_str(&format!("{u} {v}\n"));
    }
    std::fs::write(&g, text).unwrap();
    let out = run(&[
        "partition",
        "--input",
        g.to_str().unwrap(),
        "--r",
        "3",
        "--gamma",
        "1/30",
        "--sigma-top",
        "1/2",
        "--sigma-ratio",
        "1/2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].contains("\"schema\":\"branchtree/partition/v1\""));
    assert_eq!(lines.len(), 3, "header + two parts: {text}");
    assert!(lines[1].contains("\"vertices\":[0,1,2,3,4]"));
    assert!(lines[2].contains("\"vertices\":[5,6,7,8,9]"));
    assert!(lines[1].contains("\"alpha_certified\":true"));
}

#[test]
fn dimacs_input_is_accepted() {
    let g = tmp("tri.col");
    std::fs::write(&g, "c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
    let out = run(&["solve", "--input", g.to_str().unwrap(), "--s", "0"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("branches=0"));
}

#[test]
fn experiment_conjecture_small() {
    let out = run(&["experiment", "conjecture", "--n-max", "6", "--s", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("counterexamples: 0"));
}

#[test]
fn experiment_star_bound_witness() {
    let out = run(&["experiment", "star-matching-bound", "--s", "1", "--n", "10", "--trials", "10"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("witness gen_bipartite_lower(1,5)"));
    assert!(text.contains("no spanning star-matching within budget"));
    assert!(text.contains("0 spanning structures"));
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["solve", "--input", "/nonexistent/file.el", "--s", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["experiment", "conjecture", "--n-max", "6", "--s", "1", "--sample", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dot_output_marks_branch_vertices() {
    let g = tmp("star.el");
    std::fs::write(&g, "4 3\n0 1\n0 2\n0 3\n").unwrap();
    let out = run(&["solve", "--input", g.to_str().unwrap(), "--s", "1", "--output", "dot"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("graph tree {"));
    assert!(text.contains("0 [style=filled, shape=doublecircle];"));
}
