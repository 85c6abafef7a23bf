//! End-to-end tests of the `halfgrid` binary: flags, file formats, exit
//! codes, and output determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_halfgrid"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "expected success for {args:?}: stdout={} stderr={}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn run_converges_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let args = |out: &Path| {
        vec![
            "run".to_string(),
            "--coeffs".into(),
            "1,-2".into(),
            "--offset".into(),
            "1".into(),
            "--stream".into(),
            "permuted".into(),
            "--seed".into(),
            "9".into(),
            "--out".into(),
            out.display().to_string(),
        ]
    };
    let first = bin().args(args(&a)).output().unwrap();
    assert!(first.status.success());
    assert!(stdout(&first).starts_with("CONVERGED t="));
    let second = bin().args(args(&b)).output().unwrap();
    assert!(second.status.success());
    assert_eq!(
        fs::read(&a).unwrap(),
        fs::read(&b).unwrap(),
        "identical configs must give identical trace bytes"
    );
}

#[test]
fn run_reports_non_convergence_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("t.jsonl");
    let out = bin()
        .args([
            "run",
            "--coeffs",
            "3,4",
            "--offset",
            "-3",
            "--max-steps",
            "8",
            "--window",
            "8",
            "--out",
        ])
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("NOT_CONVERGED"));
    assert!(out_path.exists(), "trace still written");
}

#[test]
fn run_rejects_all_zero_slopes() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", "--coeffs", "0,0", "--offset", "1", "--out"])
        .arg(dir.path().join("t.jsonl"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("target slopes all zero"));
}

#[test]
fn run_checks_coefficient_count_against_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", "--dim", "3", "--coeffs", "1,1", "--out"])
        .arg(dir.path().join("t.jsonl"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("dim"));
    // a three-dimensional run works end to end
    let trace = dir.path().join("t3.jsonl");
    let out = run_ok(&[
        "run",
        "--dim",
        "3",
        "--coeffs",
        "1,1,1",
        "--offset",
        "-1",
        "--max-steps",
        "4000",
        "--out",
        trace.to_str().unwrap(),
    ]);
    assert!(stdout(&out).starts_with("CONVERGED"));
}

#[test]
fn run_rejects_decimal_offsets() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", "--coeffs", "0,1", "--offset", "0.5", "--out"])
        .arg(dir.path().join("t.jsonl"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("exact rational"));
}

#[test]
fn verify_passes_algorithm_trace_for_origin_excluding_target() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    run_ok(&[
        "run",
        "--coeffs",
        "1,-2",
        "--offset",
        "-1",
        "--out",
        trace.to_str().unwrap(),
    ]);
    let out = run_ok(&[
        "verify",
        "--trace",
        trace.to_str().unwrap(),
        "--restrictions",
        "conv,snu",
    ]);
    let text = stdout(&out);
    assert!(text.contains("conv: PASS"));
    assert!(text.contains("snu: PASS"));
}

#[test]
fn verify_flags_handcrafted_cautious_violation() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("bad.jsonl");
    // shrink from x >= 0 to x >= 1 on a consistent datum
    let lines = concat!(
        r#"{"dim":2,"init":{"hyp":"a","mode":"open","sem":"hs 1,0;0"},"learner":"synthetic","order":"maxnorm-shell-lex","pairing":"cantor","params":"","seed":0,"stream":"canonical","target":"hs 0,1;0","version":"test"}"#,
        "\n",
        r#"{"hyp":"b","label":1,"mode":"open","point":[5,5],"sem":"hs 1,0;-1","t":0}"#,
        "\n"
    );
    fs::write(&trace, lines).unwrap();
    let out = bin()
        .args([
            "verify",
            "--trace",
            trace.to_str().unwrap(),
            "--restrictions",
            "caut",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("caut: FAIL(0,0,1)"));
}

#[test]
fn verify_modes_bounded_and_membership_only() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    // target y >= -1: one lock, every hypothesis grows, so the run is
    // genuinely cautious
    run_ok(&[
        "run",
        "--coeffs",
        "0,1",
        "--offset",
        "1",
        "--out",
        trace.to_str().unwrap(),
    ]);
    // bounded mode: semantic comparisons become BOUNDED-PASS
    let out = run_ok(&[
        "verify",
        "--trace",
        trace.to_str().unwrap(),
        "--restrictions",
        "caut",
        "--radius",
        "6",
    ]);
    assert!(stdout(&out).contains("caut: BOUNDED-PASS(6)"));
    // membership-only without a radius: semantic restrictions error out
    let out = bin()
        .args([
            "verify",
            "--trace",
            trace.to_str().unwrap(),
            "--restrictions",
            "caut",
            "--membership-only",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("adapter insufficient"));
    // ...but identity-only restrictions still work there
    let out = run_ok(&[
        "verify",
        "--trace",
        trace.to_str().unwrap(),
        "--restrictions",
        "canny",
        "--membership-only",
    ]);
    assert!(stdout(&out).contains("canny: PASS"));
}

#[test]
fn verify_rejects_malformed_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("junk.jsonl");
    fs::write(&trace, "not json\n").unwrap();
    let out = bin()
        .args(["verify", "--trace", trace.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_rows_respect_the_lock_bound() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    run_ok(&[
        "bench",
        "--coeff-bound",
        "1",
        "--offset-min",
        "-1",
        "--offset-max",
        "1",
        "--seeds",
        "2",
        "--out",
        csv.to_str().unwrap(),
    ]);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "target,seed,steps_to_converge,lock_count,max_lock_count_bound"
    );
    let mut rows = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        // target itself contains one comma: a1,a2;c
        assert_eq!(cols.len(), 6, "row: {line}");
        let steps = cols[3];
        assert_ne!(steps, "nc", "every cell of this small grid converges");
        let locks: u64 = cols[4].parse().unwrap();
        let bound: u64 = cols[5].parse().unwrap();
        assert!(locks <= bound, "row violates the lock bound: {line}");
        rows += 1;
    }
    // 8 primitive normals in the unit box, 3 offsets, 2 seeds
    assert_eq!(rows, 48);
}

#[test]
fn bench_medium_grid_completes_within_budget() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let start = std::time::Instant::now();
    run_ok(&[
        "bench",
        "--coeff-bound",
        "3",
        "--offset-min",
        "-3",
        "--offset-max",
        "3",
        "--seeds",
        "1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    let elapsed = start.elapsed();
    assert!(
        elapsed < std::time::Duration::from_secs(120),
        "bench sweep took {elapsed:?}"
    );
    let text = fs::read_to_string(&csv).unwrap();
    // 32 primitive normals with coordinates up to 3, 7 offsets, 1 seed
    assert_eq!(text.lines().count(), 1 + 32 * 7);
}

#[test]
fn bench_with_zero_seeds_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    run_ok(&[
        "bench",
        "--coeff-bound",
        "1",
        "--offset-min",
        "0",
        "--offset-max",
        "0",
        "--seeds",
        "0",
        "--out",
        csv.to_str().unwrap(),
    ]);
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(
        text,
        "target,seed,steps_to_converge,lock_count,max_lock_count_bound\n"
    );
}

#[test]
fn geom_prints_exact_rationals() {
    assert_eq!(stdout(&run_ok(&["geom", "mindist", "3", "4"])), "1/25 (squared)\n");
    assert_eq!(stdout(&run_ok(&["geom", "reduce", "4", "6", "2"])), "2 3 | 1\n");
    assert_eq!(
        stdout(&run_ok(&["geom", "reduce", "2/3", "-1/2", "1/6"])),
        "4 -3 | 1\n"
    );
    assert_eq!(
        stdout(&run_ok(&["geom", "jdist", "--axis", "1", "2", "3", "0"])),
        "1/2\n"
    );
    assert_eq!(
        stdout(&run_ok(&["geom", "jdist", "--axis", "2", "1", "0", "0"])),
        "undefined\n"
    );
    assert_eq!(
        stdout(&run_ok(&["geom", "tangent", "1", "-1", "1/2"])),
        "plus: 1 -1 | 0\nminus: -1 1 | -1\n"
    );
    // degenerate input is a hard error
    let out = bin().args(["geom", "mindist", "2", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn transform_matches_the_mapping_cases() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.jsonl");
    let output = dir.path().join("out.jsonl");
    fs::write(&input, "[4,1]\n[3,0]\n").unwrap();
    run_ok(&[
        "transform",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(
        fs::read_to_string(&output).unwrap(),
        "[8,1]\n[9,0]\n[7,1]\n[6,0]\n"
    );
    run_ok(&[
        "transform",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
        "--text",
    ]);
    assert_eq!(fs::read_to_string(&output).unwrap(), "8\n7\n");
}

#[test]
fn transform_handles_empty_and_rejects_inconsistent_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.jsonl");
    let output = dir.path().join("out.jsonl");
    fs::write(&input, "").unwrap();
    run_ok(&[
        "transform",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(fs::read_to_string(&output).unwrap(), "");
    fs::write(&input, "[2,1]\n[2,0]\n").unwrap();
    let out = bin()
        .args([
            "transform",
            "--input",
            input.to_str().unwrap(),
            "--output",
            output.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn coded_learner_runs_from_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    let out = run_ok(&[
        "run",
        "--learner",
        "coded2d",
        "--coeffs",
        "0,1",
        "--offset",
        "0",
        "--out",
        trace.to_str().unwrap(),
    ]);
    assert!(stdout(&out).starts_with("CONVERGED"));
    // the spec'd alias is accepted too and behaves identically
    let trace2 = dir.path().join("t2.jsonl");
    run_ok(&[
        "run",
        "--learner",
        "paper2d",
        "--coeffs",
        "0,1",
        "--offset",
        "0",
        "--out",
        trace2.to_str().unwrap(),
    ]);
    assert_eq!(fs::read(&trace).unwrap(), fs::read(&trace2).unwrap());
    // dimension guard
    let out = bin()
        .args([
            "run",
            "--learner",
            "coded2d",
            "--dim",
            "3",
            "--coeffs",
            "0,0,1",
            "--out",
        ])
        .arg(dir.path().join("t3.jsonl"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("requires dimension 2"));
}

#[test]
fn verify_replays_witness_wrapped_traces() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("w.jsonl");
    run_ok(&[
        "run",
        "--learner",
        "witness(general)",
        "--coeffs",
        "1,-2",
        "--offset",
        "-1",
        "--out",
        trace.to_str().unwrap(),
    ]);
    // witness-wrapped tags are patched languages; wb checks need only
    // membership and must pass on these traces
    let out = run_ok(&[
        "verify",
        "--trace",
        trace.to_str().unwrap(),
        "--restrictions",
        "canny",
    ]);
    assert!(stdout(&out).contains("canny"));
}
