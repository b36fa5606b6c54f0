//! Black-box tests of the `hamcover` binary: exit codes, file formats, and
//! byte-level determinism, each exercised through a real process spawn.

use hamcover_core::graph::{graph_hash, standard, CoverCertificate, HamiltonCycle};
use hamcover_core::io::{certificate_to_json, parse_edge_list, write_edge_list};
use hamcover_core::random::{sample_gnp, SampleSpec};
use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_hamcover");

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run<I, S>(dir: &Path, args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    run_with_env(dir, args, &[])
}

fn run_with_env<I, S>(dir: &Path, args: I, env: &[(&str, &str)]) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let mut cmd = Command::new(BIN);
    cmd.current_dir(dir).args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let output = cmd.output().expect("binary spawns");
    Outcome {
        code: output.status.code().expect("no signal"),
        stdout: String::from_utf8(output.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(output.stderr).expect("utf-8 stderr"),
    }
}

fn k5_edge_list() -> String {
    write_edge_list(&standard::complete(5))
}

#[test]
fn gen_then_stats_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), ["gen", "--n", "6", "--p", "0.9", "--seed", "1", "--out", "g.el"]);
    assert_eq!(out.code, 0, "{}", out.stderr);

    // The file reproduces the in-memory sample exactly.
    let text = std::fs::read_to_string(tmp.path().join("g.el")).unwrap();
    let parsed = parse_edge_list(&text).unwrap();
    let sampled = sample_gnp(&SampleSpec::new(6, 0.9, 1)).unwrap();
    assert_eq!(parsed, sampled);

    let stats = run(tmp.path(), ["stats", "--in", "g.el"]);
    assert_eq!(stats.code, 0);
    let json: serde_json::Value = serde_json::from_str(&stats.stdout).unwrap();
    assert_eq!(json["vertices"], 6);
    assert!(json["histogram"].is_array());
}

#[test]
fn cover_k5_exits_zero_with_two_cycles() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("k5.el"), k5_edge_list()).unwrap();
    let out = run(
        tmp.path(),
        [
            "cover", "--in", "k5.el", "--p", "0.99", "--profile", "desk", "--seed", "3",
            "--cert-out", "k5.cert.json", "--report-out", "k5.report.json",
        ],
    );
    assert_eq!(out.code, 0, "{}", out.stderr);

    let cert: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("k5.cert.json")).unwrap())
            .unwrap();
    assert_eq!(cert["cycles"].as_array().unwrap().len(), 2);

    let verify = run(tmp.path(), ["verify", "--in", "k5.el", "--cert", "k5.cert.json"]);
    assert_eq!(verify.code, 0, "{}", verify.stderr);
    let report: serde_json::Value = serde_json::from_str(&verify.stdout).unwrap();
    assert_eq!(report["valid"], true);
    assert_eq!(report["optimal"], true);
}

#[test]
fn cover_reports_suboptimal_with_exit_two() {
    // This sparse 19-vertex draw measures at 8 cycles against a target of 6:
    // the decomposition cannot fit the forest budget and extension splits
    // forests, so the certificate is valid but above target.
    let tmp = tempfile::tempdir().unwrap();
    let gen = run(
        tmp.path(),
        ["gen", "--n", "19", "--p", "0.4", "--seed", "49419", "--out", "g.el"],
    );
    assert_eq!(gen.code, 0);
    let out = run(
        tmp.path(),
        [
            "cover", "--in", "g.el", "--p", "0.4", "--profile", "desk", "--seed", "13",
            "--cert-out", "c.json", "--report-out", "r.json",
        ],
    );
    assert_eq!(out.code, 2, "stdout: {} stderr: {}", out.stdout, out.stderr);
    assert!(out.stdout.contains("optimal=false"));

    let verify = run(tmp.path(), ["verify", "--in", "g.el", "--cert", "c.json"]);
    assert_eq!(verify.code, 0, "suboptimal covers still verify");
}

#[test]
fn verify_rejects_tampered_certificate() {
    let tmp = tempfile::tempdir().unwrap();
    let c4 = standard::cycle(4);
    std::fs::write(tmp.path().join("c4.el"), write_edge_list(&c4)).unwrap();

    let good = CoverCertificate {
        n: 4,
        graph_hash: graph_hash(&c4),
        cycles: vec![HamiltonCycle::new(vec![0, 1, 2, 3])],
        target_count: None,
    };
    std::fs::write(tmp.path().join("good.json"), certificate_to_json(&good)).unwrap();
    let ok = run(tmp.path(), ["verify", "--in", "c4.el", "--cert", "good.json"]);
    assert_eq!(ok.code, 0, "{}", ok.stderr);

    // Visit order 0-1-3-2 needs the chords of the square; not a cycle here.
    let bad = CoverCertificate {
        cycles: vec![HamiltonCycle::new(vec![0, 1, 3, 2])],
        ..good
    };
    std::fs::write(tmp.path().join("bad.json"), certificate_to_json(&bad)).unwrap();
    let rejected = run(tmp.path(), ["verify", "--in", "c4.el", "--cert", "bad.json"]);
    assert_eq!(rejected.code, 1);
    let report: serde_json::Value = serde_json::from_str(&rejected.stdout).unwrap();
    assert_eq!(report["valid"], false);
}

#[test]
fn malformed_edge_list_exits_65_with_line_number() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("bad.el"), "4 3\n0 1\nbogus\n2 3\n").unwrap();
    let out = run(tmp.path(), ["stats", "--in", "bad.el"]);
    assert_eq!(out.code, 65);
    assert!(out.stderr.contains("line 3"), "stderr: {}", out.stderr);
}

#[test]
fn unreadable_input_exits_66() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), ["stats", "--in", "does-not-exist.el"]);
    assert_eq!(out.code, 66);
}

#[test]
fn usage_errors_exit_64() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("k5.el"), k5_edge_list()).unwrap();

    let unknown_flag = run(tmp.path(), ["stats", "--in", "k5.el", "--frobnicate"]);
    assert_eq!(unknown_flag.code, 64);

    let bad_p = run(
        tmp.path(),
        [
            "cover", "--in", "k5.el", "--p", "1.5", "--profile", "desk", "--seed", "1",
            "--cert-out", "c", "--report-out", "r",
        ],
    );
    assert_eq!(bad_p.code, 64);

    let bad_profile = run(
        tmp.path(),
        [
            "cover", "--in", "k5.el", "--p", "0.9", "--profile", "nosuch", "--seed", "1",
            "--cert-out", "c", "--report-out", "r",
        ],
    );
    assert_eq!(bad_profile.code, 64);
    assert!(bad_profile.stderr.contains("nosuch"));

    // The expansion check needs its set parameters.
    let missing_params = run(
        tmp.path(),
        ["check-props", "--in", "k5.el", "--p", "0.9", "--which", "expansion"],
    );
    assert_eq!(missing_params.code, 64);

    // Exact enumeration is guarded by size.
    let gen = run(
        tmp.path(),
        ["gen", "--n", "30", "--p", "0.5", "--seed", "1", "--out", "g30.el"],
    );
    assert_eq!(gen.code, 0);
    let exact_too_big = run(
        tmp.path(),
        [
            "check-props", "--in", "g30.el", "--p", "0.5", "--which", "expansion",
            "--mode", "exact", "--s", "2", "--d", "2", "--alpha", "0.5",
        ],
    );
    assert_eq!(exact_too_big.code, 64, "stderr: {}", exact_too_big.stderr);
}

#[test]
fn profile_directory_overrides_builtins() {
    let tmp = tempfile::tempdir().unwrap();
    let profiles = tmp.path().join("profiles");
    std::fs::create_dir(&profiles).unwrap();
    std::fs::write(
        profiles.join("quick.json"),
        serde_json::to_string_pretty(&serde_json::json!({
            "profile": "quick-v1",
            "t": 10,
            "alpha": 0.05,
            "prop_alpha": 0.01,
            "eps_arb": 0.1,
            "rho_v": 0.05,
            "rho_d": 0.01,
            "core_ratio": 0.25,
            "c_merge": 0.2,
            "pack_retries": 12,
            "split_retries": 8,
            "extension_attempts": 5,
            "repack_rounds": 1,
            "budget_factor": 4,
            "seed": 0
        }))
        .unwrap(),
    )
    .unwrap();
    let gen = run(
        tmp.path(),
        ["gen", "--n", "30", "--p", "0.5", "--seed", "7", "--out", "g.el"],
    );
    assert_eq!(gen.code, 0);

    let dir = profiles.to_str().unwrap().to_string();
    let out = run_with_env(
        tmp.path(),
        [
            "cover", "--in", "g.el", "--p", "0.5", "--profile", "quick", "--seed", "4",
            "--cert-out", "c.json", "--report-out", "r.json",
        ],
        &[("HAMCOVER_PROFILE_DIR", dir.as_str())],
    );
    assert_eq!(out.code, 0, "{}", out.stderr);
    let report = std::fs::read_to_string(tmp.path().join("r.json")).unwrap();
    assert!(report.contains("\"profile\": \"quick-v1\""));

    // A profile file that is not valid JSON is malformed data, not usage.
    std::fs::write(profiles.join("broken.json"), "{\"profile\": 3").unwrap();
    let broken = run_with_env(
        tmp.path(),
        [
            "cover", "--in", "g.el", "--p", "0.5", "--profile", "broken", "--seed", "4",
            "--cert-out", "c.json", "--report-out", "r.json",
        ],
        &[("HAMCOVER_PROFILE_DIR", dir.as_str())],
    );
    assert_eq!(broken.code, 65);
    assert!(broken.stderr.contains("line 1"), "stderr: {}", broken.stderr);
}

#[test]
fn identical_invocations_write_identical_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let gen = run(
        tmp.path(),
        ["gen", "--n", "30", "--p", "0.5", "--seed", "7", "--out", "g.el"],
    );
    assert_eq!(gen.code, 0);
    let mut files: Vec<(Vec<u8>, Vec<u8>)> = Vec::new();
    for i in 0..2 {
        let cert = format!("c{i}.json");
        let report = format!("r{i}.json");
        let out = run(
            tmp.path(),
            [
                "cover", "--in", "g.el", "--p", "0.5", "--profile", "desk", "--seed", "11",
                "--cert-out", &cert, "--report-out", &report,
            ],
        );
        assert!(out.code == 0 || out.code == 2, "{}", out.stderr);
        files.push((
            std::fs::read(tmp.path().join(&cert)).unwrap(),
            std::fs::read(tmp.path().join(&report)).unwrap(),
        ));
    }
    assert_eq!(files[0].0, files[1].0, "certificates differ between runs");
    assert_eq!(files[0].1, files[1].1, "reports differ between runs");
}

#[test]
fn check_props_exit_code_tracks_verdict() {
    let tmp = tempfile::tempdir().unwrap();

    // K5 declared at p = 0.9 sits outside the concentration regime:
    // inconclusive, so the check does not pass.
    std::fs::write(tmp.path().join("k5.el"), k5_edge_list()).unwrap();
    let inconclusive = run(
        tmp.path(),
        ["check-props", "--in", "k5.el", "--p", "0.9", "--which", "degree"],
    );
    assert_eq!(inconclusive.code, 1);
    let report: serde_json::Value = serde_json::from_str(&inconclusive.stdout).unwrap();
    assert_eq!(report["property"], "degree_window");
    assert_eq!(report["verdict"], "inconclusive");

    // A moderate sample at its own density passes.
    let n = 3000usize;
    let p = format!("{}", 100.0 * (n as f64).ln() / n as f64);
    let gen = run(
        tmp.path(),
        ["gen", "--n", "3000", "--p", &p, "--seed", "3558", "--out", "g.el"],
    );
    assert_eq!(gen.code, 0);
    let holds = run(
        tmp.path(),
        ["check-props", "--in", "g.el", "--p", &p, "--which", "degree"],
    );
    assert_eq!(holds.code, 0, "stdout: {}", holds.stdout);

    let highdeg = run(
        tmp.path(),
        ["check-props", "--in", "g.el", "--p", &p, "--which", "highdeg", "--alpha", "0.01"],
    );
    assert_eq!(highdeg.code, 0, "stdout: {}", highdeg.stdout);
}

#[test]
fn oracle_answers_small_instances_and_guards_large() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("c5.el"), write_edge_list(&standard::cycle(5))).unwrap();
    let out = run(tmp.path(), ["oracle", "--in", "c5.el", "--which", "mincover"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let json: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(json["result"], "exact");
    assert_eq!(json["count"], 1);

    let linarb = run(tmp.path(), ["oracle", "--in", "c5.el", "--which", "linarb"]);
    assert_eq!(linarb.code, 0);
    let json: serde_json::Value = serde_json::from_str(&linarb.stdout).unwrap();
    assert_eq!(json["count"], 2);

    std::fs::write(tmp.path().join("p10.el"), write_edge_list(&standard::petersen())).unwrap();
    let guarded = run(tmp.path(), ["oracle", "--in", "p10.el", "--which", "mincover"]);
    assert_eq!(guarded.code, 64, "stderr: {}", guarded.stderr);
}
