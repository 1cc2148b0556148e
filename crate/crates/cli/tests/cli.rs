use std::path::Path;
use std::process::{Command, Output};

fn ncgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncgraph")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_writes_one_file_per_member() {
    let dir = tempfile::tempdir().unwrap();
    let out = ncgraph(&["build", "--family", "dihedral:3..5", "--out", path(dir.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for k in 3..=5 {
        let text = std::fs::read_to_string(dir.path().join(format!("dihedral({k}).cay"))).unwrap();
        assert_eq!(text.lines().next().unwrap(), (2 * k).to_string());
    }
}

#[test]
fn build_rejects_many_members_into_one_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = ncgraph(&["build", "--family", "dicyclic:2..3", "--out", path(&dir.path().join("x.cay"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn audit_isomorphic_pair() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("d16.cay"), dir.path().join("q16.cay"));
    assert!(ncgraph(&["build", "--family", "dihedral(8)", "--out", path(&a)]).status.success());
    assert!(ncgraph(&["build", "--family", "dicyclic(4)", "--out", path(&b)]).status.success());
    let out = ncgraph(&["audit", "--a", path(&a), "--b", path(&b)]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["outcome"]["status"], "isomorphic");
    assert_eq!(report["case_a"]["holds"], true);
    assert_eq!(report["lemma"]["verdict"]["status"], "consistent");
}

#[test]
fn audit_rejects_non_associative_table() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("loop.cay");
    std::fs::write(&bad, "5\n0 1 2 3 4\n1 0 3 4 2\n2 3 4 0 1\n3 4 1 2 0\n4 2 0 1 3\n").unwrap();
    let out = ncgraph(&["audit", "--a", path(&bad), "--b", path(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("invalid group table: not associative: (1*1)*2 != 1*(1*2)\n"), "{err}");
}

#[test]
fn goormaghtigh_lines() {
    let out = ncgraph(&["goormaghtigh", "--max-base", "100", "--max-exp", "20"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "2 5 5 3 31\n2 90 13 3 8191\n");
    let json = ncgraph(&["goormaghtigh", "--max-base", "12", "--max-exp", "20", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
}

#[test]
fn goormaghtigh_overflow_is_an_error() {
    let out = ncgraph(&["goormaghtigh", "--max-base", "1000", "--max-exp", "40"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn chain_of_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("h.cay");
    assert!(ncgraph(&["build", "--family", "heisenberg(3,2)", "--out", path(&g)]).status.success());
    for extra in [&[][..], &["--seed", "7"][..]] {
        let mut args = vec!["chain", "--group", path(&g)];
        args.extend_from_slice(extra);
        let out = ncgraph(&args);
        assert!(out.status.success());
        let chain: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(chain["terminal_ac"], true);
        assert_eq!(chain["links"][0]["order"], 243);
    }
}

#[test]
fn scan_small_config_with_cache() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("catalog.json");
    std::fs::write(&config, r#"{"families": ["dihedral:4..8", "dicyclic:2..4"], "max_order": 16, "max_cofactor": 0}"#)
        .unwrap();
    let report = dir.path().join("report.json");
    let cache = dir.path().join("cache");
    let args = ["scan", "--config", path(&config), "--report", path(&report), "--cache", path(&cache)];
    let first = ncgraph(&args);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let text = std::fs::read_to_string(&report).unwrap();
    let second = ncgraph(&args);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&report).unwrap(), text);
    let stats = String::from_utf8_lossy(&second.stderr);
    assert!(stats.contains(", 0 misses,"), "{stats}");

    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["summary"]["theorem_1_2_violations"], 0);
    let classes = v["classes"].as_array().unwrap();
    assert!(classes.iter().any(|c| c["members"] == serde_json::json!(["dicyclic(4)", "dihedral(8)"])));
}

#[test]
fn bad_config_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("catalog.json");
    std::fs::write(&config, r#"{"families": ["octahedral"]}"#).unwrap();
    let out = ncgraph(&["scan", "--config", path(&config), "--report", path(&dir.path().join("r.json"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn case_d_small_bounds() {
    let out = ncgraph(&["case-d", "--max-prime", "3", "--max-exp", "5", "--max-cofactor", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["survivors"].as_array().unwrap().is_empty());
}

#[test]
fn help_exits_cleanly() {
    assert!(ncgraph(&["--help"]).status.success());
    assert_eq!(ncgraph(&["frobnicate"]).status.code(), Some(1));
}
