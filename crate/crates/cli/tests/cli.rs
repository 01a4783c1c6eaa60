use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use assert_cmd::Command;
use serde_json::Value;
use tempfile::TempDir;

use twinroot::chevalley::SplitGroup;
use twinroot::field::Field;
use twinroot::trd::{building_ball, BallConfig, Sign, SplitOracle};

fn bin() -> Command {
    let mut c = Command::cargo_bin("twinroot").unwrap();
    c.env_remove("TWINROOT_SEED");
    c
}

fn gcm_file(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn a2(dir: &TempDir) -> PathBuf {
    gcm_file(dir, "a2.json", r#"{"n":2,"a":[[2,-1],[-1,2]]}"#)
}

fn affine_a1(dir: &TempDir) -> PathBuf {
    gcm_file(dir, "affine_a1.json", r#"{"n":2,"a":[[2,-2],[-2,2]]}"#)
}

fn stdout(cmd: &mut Command) -> String {
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn result(text: &str) -> Value {
    let v: Value = serde_json::from_str(text).unwrap();
    v["result"].clone()
}

/// Panel node -> number of chambers, per DOT graph, checking that every edge
/// joins declared nodes and that braces balance.
fn dot_panel_degrees(dot: &str) -> Vec<BTreeMap<String, usize>> {
    let mut graphs = Vec::new();
    let mut depth = 0;
    let mut nodes = BTreeSet::new();
    let mut degrees = BTreeMap::new();
    for line in dot.lines().map(str::trim) {
        if line.starts_with("//") || line.is_empty() {
            continue;
        }
        if line.starts_with("graph ") && line.ends_with('{') {
            assert_eq!(depth, 0);
            depth += 1;
            nodes.clear();
            degrees = BTreeMap::new();
        } else if line == "}" {
            assert_eq!(depth, 1);
            depth -= 1;
            graphs.push(std::mem::take(&mut degrees));
        } else if let Some((a, b)) = line.trim_end_matches(';').split_once(" -- ") {
            assert!(nodes.contains(a) && nodes.contains(b), "{line}");
            *degrees.entry(b.to_string()).or_insert(0) += 1;
        } else {
            let (id, rest) = line.split_once(' ').unwrap();
            assert!(rest.starts_with('[') && rest.ends_with("];"), "{line}");
            nodes.insert(id.to_string());
        }
    }
    assert_eq!(depth, 0);
    graphs
}

#[test]
fn every_subcommand_has_help() {
    let cases: &[(&[&str], &[&str])] = &[
        (&["weyl", "length"], &["--gcm", "--word"]),
        (&["weyl", "ball"], &["--gcm", "--radius", "--format"]),
        (&["roots", "interval"], &["--gcm", "--alpha", "--beta", "--search-radius"]),
        (&["cone", "fold"], &["--gcm", "--word"]),
        (&["group", "sample"], &["--group", "--q", "--seed"]),
        (&["trd", "check"], &["--group", "--q", "--level-window", "--search-radius", "--seed", "--format"]),
        (&["trd", "twintree"], &["--group", "--q", "--radius", "--format", "--jobs"]),
        (&["trd", "integrate"], &["--group", "--q", "--radius"]),
        (&["gcm", "coxeter"], &["--gcm", "--format"]),
    ];
    for (args, flags) in cases {
        let text = stdout(bin().args(*args).arg("--help"));
        for f in *flags {
            assert!(text.contains(f), "{args:?} help lacks {f}");
        }
    }
    for verb in ["gcm", "weyl", "roots", "cone", "group", "trd"] {
        bin().args([verb, "--help"]).assert().success();
    }
}

#[test]
fn weyl_length() {
    let dir = TempDir::new().unwrap();
    let out = stdout(bin().args(["weyl", "length", "--gcm"]).arg(a2(&dir)).args(["--word", "0,1,0"]));
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("# twinroot weyl length"));
    assert_eq!(lines.next(), Some("3"));
    let out = stdout(bin().args(["weyl", "reduce", "--gcm"]).arg(a2(&dir)).args(["--word", "1,0,1"]));
    assert_eq!(out.lines().nth(1), Some("0,1,0"));
}

#[test]
fn root_interval() {
    let dir = TempDir::new().unwrap();
    let out = stdout(bin().args(["roots", "interval", "--gcm"]).arg(a2(&dir)).args(["--alpha", "0", "--beta", "1"]));
    let members = result(&out);
    assert_eq!(members, serde_json::json!([[1, 0], [1, 1], [0, 1]]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["config"]["alpha"], "0");
}

#[test]
fn su3_twin_tree_valencies() {
    let out = stdout(bin().args(["trd", "twintree", "--group", "su3", "--q", "2", "--radius", "2", "--format", "dot"]));
    assert!(out.starts_with("// twinroot trd twintree"));
    let graphs = dot_panel_degrees(&out);
    assert_eq!(graphs.len(), 2);
    for g in graphs {
        let sizes: BTreeSet<usize> = g.values().copied().collect();
        assert_eq!(sizes, BTreeSet::from([3, 9]));
    }
}

#[test]
fn sl2_json_ball_matches_library() {
    let out =
        stdout(bin().args(["trd", "twintree", "--group", "sl2", "--q", "2", "--radius", "2", "--format", "json"]));
    let r = result(&out);
    let o = SplitOracle::new(SplitGroup::loop_group(2, Field::F2).unwrap()).unwrap();
    let ball = building_ball(&o, Sign::Plus, &BallConfig { radius: 2, ..BallConfig::default() }).unwrap();
    assert_eq!(r["plus"]["nodes"].as_array().unwrap().len(), ball.chambers.len());
    assert_eq!(ball.chambers.len(), 13);
    assert_eq!(r["minus"]["nodes"].as_array().unwrap().len(), 13);
    for e in r["plus"]["edges"].as_array().unwrap() {
        assert!(e["a"].as_u64().unwrap() < 13 && e["b"].as_u64().unwrap() < 13);
    }
    let radius0 =
        stdout(bin().args(["trd", "twintree", "--group", "sl2", "--q", "2", "--radius", "0", "--format", "json"]));
    assert_eq!(result(&radius0)["plus"]["nodes"].as_array().unwrap().len(), 1);
}

#[test]
fn output_is_byte_stable() {
    let runs: Vec<Vec<String>> = vec![
        vec!["trd", "twintree", "--group", "su3", "--q", "2", "--radius", "2", "--format", "json", "--jobs", "1"],
        vec!["trd", "check", "--group", "sl2", "--q", "3", "--seed", "5"],
        vec!["group", "sample", "--group", "sl3", "--q", "2", "--seed", "9"],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();
    for args in runs {
        let a = bin().args(&args).output().unwrap().stdout;
        let b = bin().args(&args).output().unwrap().stdout;
        assert_eq!(a, b, "{args:?}");
    }
    let serial = bin()
        .args(["trd", "twintree", "--group", "sl3", "--q", "2", "--radius", "2", "--format", "tsv"])
        .output()
        .unwrap()
        .stdout;
    let parallel = bin()
        .args(["trd", "twintree", "--group", "sl3", "--q", "2", "--radius", "2", "--format", "tsv", "--jobs", "4"])
        .output()
        .unwrap()
        .stdout;
    let body = |v: &[u8]| String::from_utf8_lossy(v).lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&serial), body(&parallel));
}

#[test]
fn seed_from_environment() {
    let with_flag = stdout(bin().args(["group", "sample", "--group", "sl2", "--q", "3", "--seed", "42"]));
    let with_env = stdout(bin().env("TWINROOT_SEED", "42").args(["group", "sample", "--group", "sl2", "--q", "3"]));
    assert_eq!(with_flag, with_env);
    bin().env("TWINROOT_SEED", "many").args(["group", "sample", "--group", "sl2", "--q", "3"]).assert().code(1);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    bin().args(["weyl", "length", "--gcm"]).arg(a2(&dir)).args(["--word", "0", "--bogus", "1"]).assert().code(1);
    bin().args(["trd", "check", "--group", "sl2", "--q", "5"]).assert().code(1);
    let bad = gcm_file(&dir, "bad.json", r#"{"n":2,"a":[[2,-1],[0,2]]}"#);
    bin().args(["weyl", "length", "--gcm"]).arg(bad).args(["--word", "0"]).assert().code(1);
    bin().args(["weyl", "length", "--gcm"]).arg(a2(&dir)).args(["--word", "0,5"]).assert().code(1);
    bin().args(["trd", "twintree", "--group", "sl2", "--q", "2", "--radius", "1", "--format", "yaml"]).assert().code(1);
    // no chamber besides the fundamental one is searched, so the pair stays undecided
    bin()
        .args(["roots", "prenilpotent", "--gcm"])
        .arg(affine_a1(&dir))
        .args(["--alpha", "0", "--beta", "1", "--search-radius", "0"])
        .assert()
        .code(2);
    // a0 + a1 = delta, so -a0 and -a1 are disjoint, while a0 contains -a1
    let out = stdout(
        bin().args(["roots", "prenilpotent", "--gcm"]).arg(affine_a1(&dir)).args(["--alpha", "0", "--beta", "1"]),
    );
    assert_eq!(out.lines().nth(1), Some("false"));
    let out = stdout(
        bin().args(["roots", "prenilpotent", "--gcm"]).arg(affine_a1(&dir)).args(["--alpha", "0", "--beta", "0,-1"]),
    );
    assert_eq!(out.lines().nth(1), Some("true"));
}

#[test]
fn folding_and_nibbling() {
    let dir = TempDir::new().unwrap();
    let aa2 = gcm_file(&dir, "aa2.json", r#"{"n":3,"a":[[2,-1,-1],[-1,2,-1],[-1,-1,2]]}"#);
    let out = stdout(bin().args(["cone", "fold", "--gcm"]).arg(aa2).args(["--word", "0,2,1"]));
    assert_eq!(result(&out)["coxeter"]["m"], serde_json::json!([[1, null], [null, 1]]));
    let b2 = gcm_file(&dir, "b2.json", r#"{"n":2,"a":[[2,-2],[-1,2]]}"#);
    let out = stdout(bin().args(["roots", "nibbling", "--gcm"]).arg(b2));
    assert_eq!(result(&out).as_array().unwrap().len(), 4);
}
