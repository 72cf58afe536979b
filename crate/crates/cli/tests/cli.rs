//! End-to-end tests against the built binary: subcommand outputs, exit
//! codes, and byte-identical reruns of the verifier.

use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_schreierlab"))
}

fn stdout_of(args: &[&str]) -> String {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8")
}

#[test]
fn membership_queries() {
    assert_eq!(
        stdout_of(&["schreier", "member", "--alpha", "2", "--set", "2,4,6"]).trim(),
        "true"
    );
    assert_eq!(
        stdout_of(&["schreier", "member", "--alpha", "1", "--set", "2,4,6"]).trim(),
        "false"
    );
    assert_eq!(
        stdout_of(&["schreier", "maximal", "--alpha", "2", "--set", "[2,7]"]).trim(),
        "true"
    );
    assert_eq!(
        stdout_of(&["schreier", "mstar", "--alpha", "2", "--size", "7"]).trim(),
        "3"
    );
    assert_eq!(
        stdout_of(&["schreier", "tpack", "--alpha", "1", "--set", "[2,7]"]).trim(),
        "2"
    );
    let partition = stdout_of(&[
        "schreier",
        "partition",
        "--alpha",
        "1",
        "--anchor",
        "2",
        "--count",
        "2",
    ]);
    assert!(
        partition.contains("s(1) = 4") && partition.contains("s(2) = 8"),
        "{partition}"
    );
}

#[test]
fn averages_and_blocksum() {
    let avg = stdout_of(&["averages", "build", "--alpha", "2", "--set", "[2,7]"]);
    assert!(avg.contains("\"1/4\"") && avg.contains("\"1/8\""), "{avg}");
    let sum = stdout_of(&[
        "averages", "blocksum", "--alpha", "1", "--anchor", "2", "--count", "2", "--f", "3,4,5",
    ]);
    assert_eq!(sum.trim(), "1");
}

#[test]
fn usage_errors_exit_two() {
    let out = bin()
        .args(["schreier", "member", "--alpha", "2"])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(2),
        "missing required arg should be a usage error"
    );
    let out = bin().args(["no-such-command"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_suite_exits_one() {
    let out = bin()
        .args(["verify", "definitely-not-a-suite"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn norm_of_unit_vector_is_one() {
    let dir = tempdir();
    let vec_path = dir.join("e5.jsonl");
    fs::write(
        &vec_path,
        "{\"lo\": \"5\", \"hi\": \"5\", \"pattern\": \"const\", \"value\": \"1\"}\n",
    )
    .unwrap();
    let out = stdout_of(&[
        "norm",
        "--space",
        "s4aa",
        "--alpha",
        "w*1",
        vec_path.to_str().unwrap(),
    ]);
    let first = out.lines().next().unwrap();
    assert_eq!(first.trim(), "1", "{out}");
    assert!(out.contains("certificate: exact"), "{out}");

    // The gauge-weighted space also normalizes unit vectors.
    let out = stdout_of(&["norm", "--space", "s3", vec_path.to_str().unwrap()]);
    assert_eq!(out.lines().next().unwrap().trim(), "1", "{out}");
}

#[test]
fn gauge_build_check_round_trip() {
    let dir = tempdir();
    let prof = dir.join("desk.gauge");
    let out = bin()
        .args([
            "gauge",
            "build",
            "--alpha",
            "0",
            "--m-seq",
            "3",
            "--n-seq",
            "500",
            "--window",
            "500*2^500",
            "--desk-relax",
            "--out",
            prof.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let check = stdout_of(&["gauge", "check", "--profile", prof.to_str().unwrap()]);
    assert!(
        check.lines().filter(|l| l.starts_with("pass")).count() >= 8,
        "{check}"
    );
    assert!(!check.contains("FAIL"), "{check}");
}

#[test]
fn scan_csv_has_header_and_rows() {
    let dir = tempdir();
    let csv = dir.join("report.csv");
    let out = bin()
        .args([
            "scan",
            "uncond",
            "--space",
            "s4aa",
            "--alpha",
            "1",
            "--gamma",
            "1",
            "--trials",
            "2",
            "--seed",
            "7",
            "--out",
            csv.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let body = fs::read_to_string(&csv).unwrap();
    assert!(
        body.starts_with("witness_id,params,value,bound,verdict"),
        "{body}"
    );
    assert!(body.lines().count() > 10, "{body}");
}

#[test]
fn verify_suite_deterministic_output_files() {
    let dir = tempdir();
    let cfg = dir.join("quick.cfg");
    fs::write(
        &cfg,
        "seed = 5\nblock_sum_trials = 10\nqg_trials = 2\nsandwich_trials = 4\nscan_trials = 2\n",
    )
    .unwrap();
    let out1 = dir.join("r1.json");
    let out2 = dir.join("r2.json");
    for out in [&out1, &out2] {
        let st = bin()
            .args([
                "verify",
                "block-sum-bound",
                "--config",
                cfg.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(st.success());
    }
    let b1 = fs::read(&out1).unwrap();
    let b2 = fs::read(&out2).unwrap();
    assert_eq!(
        b1, b2,
        "verifier output must be byte-identical under a fixed config"
    );
    assert!(!b1.is_empty());
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("schreierlab-test-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}
