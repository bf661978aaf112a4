use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use treemetrics_core::{parse_tree, TreeFormat};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treemetrics")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &TempDir, name: &str, seed: u64, leaves: usize) -> PathBuf {
    let p = dir.path().join(name);
    let out = run(&["gen-random", "--seed", &seed.to_string(), "--leaves", &leaves.to_string(), "--out", path_str(&p)]);
    assert!(out.status.success());
    p
}

fn value(metric: &str, a: &Path, b: &Path) -> f64 {
    json_of(&run(&["dist", "--metric", metric, path_str(a), path_str(b)]))["value"].as_f64().unwrap()
}

#[test]
fn distance_of_a_tree_to_itself_is_zero() {
    let d = TempDir::new().unwrap();
    let a = gen(&d, "a.json", 3, 4);
    for metric in ["fl-merge", "interleaving", "edit", "alignment"] {
        assert_eq!(value(metric, &a, &a), 0.0, "{metric}");
    }
}

#[test]
fn interleaving_is_below_frechet_like() {
    let d = TempDir::new().unwrap();
    for seed in 0..8 {
        let a = gen(&d, "a.json", seed, 4);
        let b = gen(&d, "b.json", 100 + seed, 5);
        assert!(value("interleaving", &a, &b) <= value("fl-merge", &a, &b) + 1e-9, "seed {seed}");
    }
}

#[test]
fn edit_is_below_alignment() {
    let d = TempDir::new().unwrap();
    let a = d.path().join("a.nwk");
    let b = d.path().join("b.json");
    std::fs::write(&a, "(((x:-3,y:-3):-2,z:-3):-1)r:0;").unwrap();
    std::fs::write(
        &b,
        r#"{"nodes":[{"id":0,"parent":null,"label":"r"},{"id":1,"parent":0,"label":"x"},
            {"id":2,"parent":0},{"id":3,"parent":2,"label":"y"},{"id":4,"parent":2,"label":"z"}]}"#,
    )
    .unwrap();
    let e = json_of(&run(&["dist", "--metric", "edit", "--costs", "1,1,1", path_str(&a), path_str(&b)]))["value"].as_f64().unwrap();
    let al = value("alignment", &a, &b);
    assert!(e <= al, "{e} > {al}");
    assert!(e > 0.0);
}

#[test]
fn eps_and_delta_switch_to_decisions() {
    let d = TempDir::new().unwrap();
    let a = gen(&d, "a.json", 5, 4);
    let b = gen(&d, "b.json", 6, 4);
    let fl = value("fl-merge", &a, &b);
    let decide = |eps: f64| json_of(&run(&["dist", "--metric", "fl-merge", "--eps", &eps.to_string(), path_str(&a), path_str(&b)]));
    assert_eq!(decide(fl)["accepted"], true);
    if fl > 0.0 {
        assert_eq!(decide(fl - 0.25)["accepted"], false);
    }
    let di = value("interleaving", &a, &b);
    let good = json_of(&run(&["dist", "--metric", "interleaving", "--delta", &di.to_string(), path_str(&a), path_str(&b)]));
    assert_eq!(good["exists"], true);
    let misuse = run(&["dist", "--metric", "edit", "--eps", "1", path_str(&a), path_str(&b)]);
    assert_eq!(misuse.status.code(), Some(2));
}

#[test]
fn gadget_examples_and_determinism() {
    let yes = json_of(&run(&["gadget", "--X", "1,1,2", "--k", "1"]));
    assert_eq!(yes["gap_respected"], true);
    assert!(yes["fl"].as_f64().unwrap() <= 1.0);
    assert!(yes["partition"].is_object());
    let no = json_of(&run(&["gadget", "--X", "1,1,3", "--k", "2", "--relaxed"]));
    assert_eq!(no["gap_respected"], true);
    assert!(no["partition"].is_null());
    assert!(no["fl"].as_f64().unwrap() >= 3.0);

    let d = TempDir::new().unwrap();
    let (p, q) = (d.path().join("g1.json"), d.path().join("g2.json"));
    for target in [&p, &q] {
        assert!(run(&["gadget", "--X", "2,1,1,2,1,1", "--k", "2", "--out", path_str(target)]).status.success());
    }
    assert_eq!(std::fs::read(&p).unwrap(), std::fs::read(&q).unwrap());

    // strict mode needs |X| = 3k
    assert_eq!(run(&["gadget", "--X", "1,1", "--k", "1"]).status.code(), Some(2));
}

#[test]
fn random_trees_have_the_requested_leaves() {
    let single = run(&["gen-random", "--seed", "1", "--leaves", "1"]);
    let t = parse_tree(std::str::from_utf8(&single.stdout).unwrap(), TreeFormat::Json).unwrap();
    assert_eq!(t.tree().leaves().len(), 1);

    for leaves in 1..=6 {
        let out = json_of(&run(&["gen-random", "--seed", "7", "--leaves", &leaves.to_string(), "--count", "170"]));
        let trees = out.as_array().unwrap();
        assert_eq!(trees.len(), 170);
        for v in trees {
            let m = parse_tree(&v.to_string(), TreeFormat::Json).unwrap().into_merge().unwrap();
            assert_eq!(m.tree().leaves().len(), leaves);
        }
    }
    let a = run(&["gen-random", "--seed", "9", "--leaves", "5", "--format", "newick"]);
    let b = run(&["gen-random", "--seed", "9", "--leaves", "5", "--format", "newick"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(parse_tree(std::str::from_utf8(&a.stdout).unwrap().trim(), TreeFormat::NewickExt).is_ok());
}

#[test]
fn lemma_check_summaries() {
    let empty = json_of(&run(&["check-lemma", "--count", "0"]));
    assert_eq!(empty["violations"], 0);
    let full = json_of(&run(&["check-lemma", "--count", "60", "--leaves", "6", "--seed", "4"]));
    assert_eq!(full["pairs"], 60);
    assert_eq!(full["violations"], 0);
    let csv = run(&["check-lemma", "--count", "5", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.starts_with("index,interleaving,fl_merge,violation"));
}

#[test]
fn dot_export() {
    let d = TempDir::new().unwrap();
    let single = d.path().join("s.json");
    std::fs::write(&single, r#"{"nodes":[{"id":0,"parent":null,"height":0}]}"#).unwrap();
    let dot = String::from_utf8(run(&["export-dot", path_str(&single)]).stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("[label=").count(), 1);

    let g = d.path().join("g.json");
    assert!(run(&["gadget", "--X", "1,1,1", "--k", "1", "--out", path_str(&g)]).status.success());
    let dot = String::from_utf8(run(&["export-dot", path_str(&g)]).stdout).unwrap();
    assert_eq!(dot.matches("subgraph cluster_").count(), 2);

    let a = gen(&d, "a.json", 11, 3);
    let b = gen(&d, "b.json", 12, 3);
    let report = d.path().join("r.json");
    assert!(run(&["dist", "--metric", "fl-merge", path_str(&a), path_str(&b), "--out", path_str(&report)]).status.success());
    let pairs = serde_json::from_str::<Value>(&std::fs::read_to_string(&report).unwrap()).unwrap()["witness"]
        .as_array()
        .unwrap()
        .len();
    let out = run(&["export-dot", path_str(&a), path_str(&b), "--witness", path_str(&report)]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert_eq!(dot.matches("style=dashed").count(), pairs);

    let map = d.path().join("m.json");
    assert!(run(&["dist", "--metric", "interleaving", path_str(&a), path_str(&b), "--out", path_str(&map)]).status.success());
    assert!(run(&["export-dot", path_str(&a), path_str(&b), "--witness", path_str(&map)]).status.success());
}

#[test]
fn exit_codes_and_no_partial_output() {
    let d = TempDir::new().unwrap();
    let a = gen(&d, "a.json", 1, 4);
    let bad = d.path().join("bad.json");
    std::fs::write(&bad, r#"{"nodes":[{"id":0,"parent":nul"#).unwrap();
    let out_path = d.path().join("never.json");
    let r = run(&["dist", "--metric", "fl-merge", path_str(&bad), path_str(&a), "--out", path_str(&out_path)]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("bad.json"));
    assert!(!out_path.exists());

    let missing = d.path().join("missing.json");
    assert_eq!(run(&["dist", "--metric", "edit", path_str(&missing), path_str(&a)]).status.code(), Some(2));

    let wide = d.path().join("wide.json");
    std::fs::write(
        &wide,
        r#"{"nodes":[{"id":0,"parent":null,"height":0},{"id":1,"parent":0,"height":-1},{"id":2,"parent":0,"height":-1},{"id":3,"parent":0,"height":-1}]}"#,
    )
    .unwrap();
    let cap = run(&["dist", "--metric", "alignment", "--degree-bound", "2", path_str(&wide), path_str(&a), "--out", path_str(&out_path)]);
    assert_eq!(cap.status.code(), Some(3));
    assert!(!out_path.exists());

    let mono = d.path().join("mono.nwk");
    std::fs::write(&mono, "(a:1)r:0;").unwrap();
    assert_eq!(run(&["dist", "--metric", "fl-merge", path_str(&mono), path_str(&a)]).status.code(), Some(2));
    let geometry_needed = run(&["dist", "--metric", "hausdorff", path_str(&a), path_str(&a)]);
    assert_eq!(geometry_needed.status.code(), Some(2));
}

#[test]
fn embedded_metrics() {
    let d = TempDir::new().unwrap();
    let p = d.path().join("p.json");
    let q = d.path().join("q.json");
    std::fs::write(&p, r#"{"nodes":[{"id":0,"parent":null,"geometry":[[0,0]]},{"id":1,"parent":0,"geometry":[[0,0],[2,0]]}]}"#).unwrap();
    std::fs::write(&q, r#"{"nodes":[{"id":0,"parent":null,"geometry":[[0,1]]},{"id":1,"parent":0,"geometry":[[0,1],[2,1]]}]}"#).unwrap();
    let h = json_of(&run(&["dist", "--metric", "hausdorff", "--resolution", "0.1", path_str(&p), path_str(&q)]))["value"].as_f64().unwrap();
    let fl = json_of(&run(&["dist", "--metric", "fl-euclid", "--resolution", "0.1", path_str(&p), path_str(&q)]))["value"].as_f64().unwrap();
    assert!((h - 1.0).abs() < 1e-9);
    assert!((fl - 1.0).abs() < 1e-9);
    let aligned = json_of(&run(&["dist", "--metric", "fl-euclid", "--align-roots", path_str(&p), path_str(&q)]))["value"].as_f64().unwrap();
    assert_eq!(aligned, 0.0);
}
