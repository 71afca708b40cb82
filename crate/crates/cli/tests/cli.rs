use std::fs;
use std::path::{Path, PathBuf};

use assert_cmd::Command;
use serde_json::Value;
use tempfile::TempDir;

use primnorm::io::{group_to_json, parse_group};
use primnorm::wreath::{alt, cyclic, product_action_wreath, sym};
use primnorm::PermGroup;

fn write(dir: &Path, name: &str, g: &PermGroup) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string(&group_to_json(g)).unwrap()).unwrap();
    path
}

fn primnorm() -> Command {
    Command::cargo_bin("primnorm").unwrap()
}

fn json_out(cmd: &mut Command) -> Value {
    let out = cmd.assert().success().get_output().stdout.clone();
    serde_json::from_slice(&out).unwrap()
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/psl25_on_6.json")
}

#[test]
fn normalizer_of_a5_wreath() {
    let dir = TempDir::new().unwrap();
    let g = write(
        dir.path(),
        "g.json",
        &product_action_wreath(&alt(5), &sym(2)).unwrap(),
    );
    let out = json_out(
        primnorm()
            .args(["normalizer", "--report", "--brute-force", "--pa"])
            .arg(&g),
    );
    assert_eq!(out["order"], "14400");
    assert_eq!(out["verification"]["contains_G"], true);
    assert_eq!(out["verification"]["all_generators_normalize"], true);
    assert_eq!(out["verification"]["oracle_match"], true);
    let report = &out["report"];
    assert_eq!(report["ell"], 2);
    assert_eq!(report["m"], 5);
    assert_eq!(report["r"], 2);
    assert_eq!(report["reduced_degree"], 4);
    assert_eq!(report["orders"]["t"], "60");
    assert!(report["timings_ms"]["socle"].is_number());

    // the output is itself a group file
    let back = parse_group(&out.to_string()).unwrap();
    assert_eq!(back.order().to_string(), "14400");
}

#[test]
fn normalizer_with_given_socle() {
    let dir = TempDir::new().unwrap();
    let g = write(
        dir.path(),
        "g.json",
        &product_action_wreath(&alt(5), &cyclic(3)).unwrap(),
    );
    let socle = write(
        dir.path(),
        "s.json",
        &product_action_wreath(&alt(5), &PermGroup::trivial(3)).unwrap(),
    );
    let out = json_out(
        primnorm()
            .args(["normalizer", "--pa"])
            .arg(&g)
            .arg("--socle")
            .arg(&socle),
    );
    assert_eq!(out["order"], "2592000");
    assert!(out.get("report").is_none());
}

#[test]
fn normalizer_in_ambient() {
    let dir = TempDir::new().unwrap();
    let s6 = write(dir.path(), "s6.json", &sym(6));
    let out = json_out(
        primnorm()
            .args(["normalizer", "--brute-force", "--ambient"])
            .arg(&s6)
            .arg("--group")
            .arg(fixture()),
    );
    assert_eq!(out["order"], "120");
    assert_eq!(out["verification"]["oracle_match"], true);
}

#[test]
fn not_pa_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let s5 = write(dir.path(), "s5.json", &sym(5));
    let assert = primnorm()
        .args(["normalizer", "--pa"])
        .arg(&s5)
        .assert()
        .code(2);
    let err = String::from_utf8_lossy(&assert.get_output().stderr).to_string();
    assert!(err.contains("ell = 1"), "{err}");

    let out = json_out(primnorm().arg("classify").arg(&s5));
    assert_eq!(out["type"], "not-PA");
    assert_eq!(out["reason"], "ell = 1");
}

#[test]
fn malformed_input_exits_with_one() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"degree\": 3, ").unwrap();
    primnorm()
        .args(["normalizer", "--pa"])
        .arg(&bad)
        .assert()
        .code(1);
    primnorm()
        .arg("classify")
        .arg(dir.path().join("missing.json"))
        .assert()
        .code(1);
}

#[test]
fn classify_decompose_socle() {
    let dir = TempDir::new().unwrap();
    let g3 = write(
        dir.path(),
        "g3.json",
        &product_action_wreath(&alt(5), &sym(3)).unwrap(),
    );
    let out = json_out(primnorm().arg("classify").arg(&g3));
    assert_eq!(out["type"], "PA");
    assert_eq!(out["ell"], 3);
    assert_eq!(out["m"], 5);
    assert_eq!(out["socle_order"], "216000");

    let out = json_out(primnorm().arg("decompose").arg(&g3));
    assert_eq!(out["ell"], 3);
    assert_eq!(out["m"], 5);
    assert_eq!(out["relabeling"].as_array().unwrap().len(), 125);
    let projections = out["projections"].as_array().unwrap();
    assert_eq!(projections.len(), 3);
    assert_eq!(projections[0]["target_size"], 5);

    let g2 = write(
        dir.path(),
        "g2.json",
        &product_action_wreath(&alt(5), &sym(2)).unwrap(),
    );
    let out = json_out(primnorm().arg("socle").arg(&g2));
    assert_eq!(out["order"], "3600");
    assert_eq!(out["factors"].as_array().unwrap().len(), 2);
}

#[test]
fn make_wreath_both_actions() {
    let dir = TempDir::new().unwrap();
    let s2 = write(dir.path(), "s2.json", &sym(2));
    let out = json_out(
        primnorm()
            .args(["make-wreath", "--base"])
            .arg(fixture())
            .arg("--top")
            .arg(&s2),
    );
    assert_eq!(out["degree"], 36);
    let g = parse_group(&out.to_string()).unwrap();
    assert_eq!(g.order().to_string(), "7200");

    let out = json_out(
        primnorm()
            .args(["make-wreath", "--action", "imprimitive", "--base"])
            .arg(fixture())
            .arg("--top")
            .arg(&s2),
    );
    assert_eq!(out["degree"], 12);

    primnorm()
        .args(["make-wreath", "--cap", "30", "--base"])
        .arg(fixture())
        .arg("--top")
        .arg(&s2)
        .assert()
        .code(1);
}

fn csv_orders(stdout: &[u8]) -> Vec<String> {
    let text = String::from_utf8_lossy(stdout);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "family,ell,degree,socle_ms,decomposition_ms,m_construction_ms,reduction_ms,backtrack_ms,preimage_ms,total_ms,order"
    );
    lines
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            format!("{}/{}/{}/{}", cols[0], cols[1], cols[2], cols[10])
        })
        .collect()
}

#[test]
fn bench_is_deterministic() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let run = |dir: &Path, jobs: &str| {
        primnorm()
            .args([
                "--seed", "5", "bench", "--csv", "--ell", "2..3", "--family", "alt5", "--family",
                "psl25",
            ])
            .args(["--jobs", jobs, "--out-dir"])
            .arg(dir)
            .assert()
            .success()
            .get_output()
            .stdout
            .clone()
    };
    let first = csv_orders(&run(a.path(), "1"));
    let second = csv_orders(&run(b.path(), "2"));
    assert_eq!(first, second);
    assert_eq!(
        first,
        [
            "alt5/2/25/14400",
            "alt5/3/125/2592000",
            "psl25/2/36/14400",
            "psl25/3/216/2592000"
        ]
    );
    let mut names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 8);
    for name in names {
        assert_eq!(
            fs::read(a.path().join(&name)).unwrap(),
            fs::read(b.path().join(&name)).unwrap()
        );
    }
}

#[test]
fn bench_markdown_table() {
    let out = primnorm()
        .args(["bench", "--ell", "2", "--family", "alt7", "--top", "cyclic"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("| socle type | degree |"));
    assert!(text.contains("| (A7)^2 | 49 |"));
    assert!(text.trim_end().ends_with("| 25401600 |"));
}
