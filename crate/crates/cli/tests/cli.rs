use std::path::PathBuf;
use std::process::{Command, Output};

use default_bilattices::json;
use default_bilattices::kn::build_kn;

fn dbl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dbl"))
        .args(args)
        .env_remove("BILATTICE_MAX_SIZE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn free_count_at_level_one() {
    let out = dbl(&["free", "--n", "1", "--gens", "1", "--count-only"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "5879");
}

#[test]
fn truth_diagram_has_the_covers_of_k1() {
    let out = dbl(&["kn", "--n", "1", "--export", "dot", "--order", "t"]);
    assert!(out.status.success());
    let dot = stdout(&out);
    // f0 < f1, f0 < top0 < t0, t1 < t0, f1 < top1, top2 < t1
    let edges = dot.lines().filter(|l| l.contains("->")).count();
    assert_eq!(edges, 8);
    for edge in ["n0 -> n1", "n0 -> n4", "n4 -> n2", "n3 -> n2", "n1 -> n5", "n1 -> n6", "n5 -> n3", "n6 -> n3"] {
        assert!(dot.contains(edge), "missing {edge}");
    }
}

#[test]
fn kn_json_reloads() {
    let out = dbl(&["kn", "--n", "2"]);
    let a = json::algebra_from_str(&stdout(&out)).unwrap();
    assert_eq!(a, build_kn(2).into_algebra());
}

#[test]
fn outputs_are_deterministic() {
    let a = dbl(&["kn", "--n", "2", "--export", "dot"]);
    let b = dbl(&["kn", "--n", "2", "--export", "dot"]);
    assert_eq!(a.stdout, b.stdout);
    let path = scratch("k1_det.json", &stdout(&dbl(&["kn", "--n", "1"])));
    let p = path.to_str().unwrap();
    assert_eq!(dbl(&["dualize", p, "--n", "1"]).stdout, dbl(&["dualize", p, "--n", "1"]).stdout);
}

#[test]
fn dual_round_trip_through_files() {
    let k = scratch("k1.json", &stdout(&dbl(&["kn", "--n", "1"])));
    let dual = dbl(&["dualize", k.to_str().unwrap(), "--n", "1"]);
    assert!(dual.status.success());
    let space = scratch("k1_dual.json", &stdout(&dual));
    json::space_from_str(&stdout(&dual)).unwrap();
    let back = dbl(&["evaluate", space.to_str().unwrap(), "--n", "1"]);
    let e = json::algebra_from_str(&stdout(&back)).unwrap();
    assert_eq!(e.size(), 7);
    let poset = dbl(&["reconstruct", space.to_str().unwrap()]);
    assert_eq!(json::poset_from_str(&stdout(&poset)).unwrap().size(), 4);
}

#[test]
fn product_representation_and_odot() {
    let k = scratch("k2.json", &stdout(&dbl(&["kn", "--n", "2"])));
    let seq = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("k2_seq.json");
    let out = dbl(&["product-rep", k.to_str().unwrap(), "--n", "2", "--sequence-out", seq.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("isomorphism verified"));
    let odot = dbl(&["odot", seq.to_str().unwrap()]);
    assert_eq!(json::algebra_from_str(&stdout(&odot)).unwrap().size(), 10);
}

#[test]
fn subalgebras_and_congruences_of_k1() {
    let k = scratch("k1_sub.json", &stdout(&dbl(&["kn", "--n", "1"])));
    let subs = stdout(&dbl(&["subalg", k.to_str().unwrap()]));
    assert_eq!(subs.lines().count(), 1);
    let cons = stdout(&dbl(&["congruences", k.to_str().unwrap()]));
    assert_eq!(cons.lines().count(), 3);
}

#[test]
fn optimality_reports_a_witness() {
    let out = dbl(&["optimality", "--n", "1", "--drop", "op:1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("witness on sort 1: [top0]"));
}

#[test]
fn algebra_suite_passes() {
    let out = dbl(&["verify", "--suite", "algebra", "--max-n", "1"]);
    assert!(out.status.success());
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(dbl(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dbl(&["kn", "--n", "1", "--bogus"]).status.code(), Some(2));
    assert_eq!(dbl(&["optimality", "--n", "1", "--drop", "rel"]).status.code(), Some(2));
    assert_eq!(dbl(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(dbl(&["dualize", "/nonexistent.json", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn size_guard_exits_with_three() {
    assert_eq!(dbl(&["free", "--n", "1", "--gens", "2"]).status.code(), Some(3));
    assert_eq!(dbl(&["free", "--n", "1", "--gens", "1", "--max-size", "100"]).status.code(), Some(3));
    let env = Command::new(env!("CARGO_BIN_EXE_dbl"))
        .args(["free", "--n", "0", "--gens", "1"])
        .env("BILATTICE_MAX_SIZE", "10")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
    assert!(dbl(&["free", "--n", "0", "--gens", "1"]).status.success());
}
