//! End-to-end tests of the `zslab` binary: documented exit codes, output
//! schemas, and cache behavior.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn zslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zslab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn zslab_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_zslab"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON: {e}\n{}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn write_construct(dir: &Path, name: &str, args: &[&str]) -> std::path::PathBuf {
    let out = zslab(args);
    assert!(out.status.success());
    let path = dir.join(name);
    std::fs::write(&path, &out.stdout).unwrap();
    path
}

#[test]
fn count_on_the_p3_construction_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let seq = write_construct(
        dir.path(),
        "J3.json",
        &["construct", "--family", "theorem2", "--p", "3"],
    );
    let out = zslab(&[
        "count",
        "--n",
        "3",
        "--d",
        "3",
        "--seq",
        seq.to_str().unwrap(),
        "--len",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out), serde_json::json!({ "count": "0" }));
}

#[test]
fn lift_emits_the_printed_coefficients() {
    let out = zslab(&["lift", "--base-k", "4", "--target", "9p-3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["constant"], 56);
    assert_eq!(doc["domain"], "9p-3");
    let coefs: Vec<i64> = doc["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["coef"].as_i64().unwrap())
        .collect();
    assert_eq!(coefs, vec![-21, 6, -1]);

    // identity documents round-trip byte-identically through the canonical form
    let reparsed: Value = serde_json::from_slice(&out.stdout).unwrap();
    let reemitted = serde_json::to_string_pretty(&reparsed).unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), reemitted);
}

#[test]
fn search_s_constant_schema() {
    let out = zslab(&["search", "s-constant", "--n", "3", "--d", "2", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["value"], 9);
    assert_eq!(doc["witness"]["elements"].as_array().unwrap().len(), 8);
    assert_eq!(doc["witness_validated"], true);
}

#[test]
fn verification_failure_exits_one() {
    // a corrupted identity (constant 2 instead of 1) at p = 5
    let dir = tempfile::tempdir().unwrap();
    let ident = dir.path().join("bad.json");
    std::fs::write(
        &ident,
        r#"{"domain":"3p-3","constant":2,"terms":[{"len":"p-1","coef":-1},{"len":"p","coef":-1},{"len":"2p-1","coef":1},{"len":"2p","coef":1}],"d":2,"p_min":3}"#,
    )
    .unwrap();
    let out = zslab(&[
        "verify",
        "--identity",
        ident.to_str().unwrap(),
        "--p",
        "5",
        "--trials",
        "100",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json_of(&out);
    assert_eq!(doc["status"], "fail");
    assert!(!doc["failures"].as_array().unwrap().is_empty());

    // the genuine identity passes with exit 0
    let out = zslab(&[
        "verify",
        "--remark-zp2",
        "--p",
        "5",
        "--trials",
        "100",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["status"], "pass");
}

#[test]
fn usage_errors_exit_two() {
    let out = zslab(&["count", "--len", "3"]); // missing --seq
    assert_eq!(out.status.code(), Some(2));

    let out = zslab(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));

    let out = zslab(&["derive", "--replay", "nope", "--p", "11"]);
    assert_eq!(out.status.code(), Some(2));

    let out = zslab(&["campaign", "--statement", "lemma1", "--p", "4", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(2), "4 is not prime");
}

#[test]
fn budget_refusal_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let seq = write_construct(
        dir.path(),
        "J5.json",
        &["construct", "--family", "theorem2", "--p", "5"],
    );
    let _ = seq;
    let out = zslab(&[
        "oracle",
        "polysum",
        "--instances",
        "3",
        "--seed",
        "1",
        "--budget",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn campaign_and_oracle_pass() {
    let out = zslab(&[
        "campaign",
        "--statement",
        "lemma1",
        "--p",
        "3",
        "--trials",
        "200",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["status"], "pass");
    assert_eq!(doc["seed"], 3);

    let out = zslab(&["oracle", "counting", "--instances", "40", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn theorem3_and_lemma3_on_a_file() {
    let dir = tempfile::tempdir().unwrap();
    // 96 zeros over Z_11^3
    let mut elements = Vec::new();
    for _ in 0..96 {
        elements.push(vec![0u32, 0, 0]);
    }
    let path = dir.path().join("zeros.json");
    std::fs::write(
        &path,
        serde_json::to_string(&serde_json::json!({"n": 11, "d": 3, "elements": elements}))
            .unwrap(),
    )
    .unwrap();

    let out = zslab(&["lemma3", "--seq", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["common_value"], 0);

    let out = zslab(&["theorem3", "--seq", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["n_p_positive"], true);
    assert_eq!(doc["claim_holds"], true);

    let out = zslab(&["polysum", "--seq", path.to_str().unwrap(), "--pair", "1,8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["value"], 0);
}

#[test]
fn cache_round_trip_and_seed_separation() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = [
        "campaign",
        "--statement",
        "lemma1",
        "--p",
        "3",
        "--trials",
        "50",
        "--seed",
        "7",
    ];
    let first = zslab_env(&args, &[("ZSLAB_CACHE", cache.to_str().unwrap())]);
    assert_eq!(first.status.code(), Some(0));
    let entries = std::fs::read_dir(&cache).unwrap().count();
    assert_eq!(entries, 1);

    let second = zslab_env(&args, &[("ZSLAB_CACHE", cache.to_str().unwrap())]);
    assert_eq!(second.stdout, first.stdout, "cache hit must be byte-identical");

    // a different seed is a different cache key
    let mut other = args;
    other[8] = "8";
    let third = zslab_env(&other, &[("ZSLAB_CACHE", cache.to_str().unwrap())]);
    assert_eq!(third.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 2);

    // corrupt the first entry: recomputed with a warning, same bytes
    for entry in std::fs::read_dir(&cache).unwrap() {
        std::fs::write(entry.unwrap().path(), "garbage").unwrap();
    }
    let fourth = zslab_env(&args, &[("ZSLAB_CACHE", cache.to_str().unwrap())]);
    assert_eq!(fourth.stdout, first.stdout);
    assert!(String::from_utf8_lossy(&fourth.stderr).contains("recomputing"));
}

#[test]
fn tsv_format_flattens() {
    let out = zslab(&["solve", "--size", "5p-3", "--format", "tsv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("solution.display.1\t2r+4"));
    assert!(text.lines().all(|l| l.is_empty() || l.contains('\t')));
}

#[test]
fn derive_replays_via_cli() {
    let out = zslab(&["derive", "--replay", "lemma2", "--p", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    // N^{2p} == -5 == 6, N^{4p} == 15 == 4, N^{5p} == 16 == 5 mod 11
    assert_eq!(doc["counts"]["N^{2p}"]["residue"], 6);
    assert_eq!(doc["counts"]["N^{4p}"]["residue"], 4);
    assert_eq!(doc["counts"]["N^{5p}"]["residue"], 5);

    let out = zslab(&["derive", "--replay", "theorem1", "--p", "13"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["chain"]["consistent"], true);
}

#[test]
fn exceptional_presets_via_cli() {
    let out = zslab(&["exceptional", "--preset", "corollary1-printed"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    let primes: Vec<u64> = doc["report"]["exceptional_primes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(primes, vec![13, 17, 19, 47, 61]);

    // affine-vector files are accepted too
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("forms.json");
    std::fs::write(&path, r#"{"param":"k","forms":[[6,56],[6,120]]}"#).unwrap();
    let out = zslab(&["exceptional", "--forms", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["report"]["pairs"][0]["reduced_constant"], 64);
}
