//! End-to-end tests of the `bench` binary: exit codes, file outputs, and
//! determinism of the accuracy columns across repeated runs.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_bench");

fn bench(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn bench")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn gen_then_verify_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let stream = dir.path().join("s.bin");
    let stream_str = stream.to_str().unwrap();

    let out = bench(&["gen", "--zipf", "1000,1.3,20000", "--seed", "9", "--out", stream_str]);
    assert!(out.status.success(), "gen failed: {}", stderr(&out));
    assert!(stream.exists());
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("s.bin.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["universe"], 1000);
    assert_eq!(meta["seed"], 9);
    assert_eq!(meta["length"], 20000);

    let out = bench(&["verify", "--stream", stream_str, "--k", "50", "--workers", "3"]);
    assert!(out.status.success(), "verify failed: {}", stderr(&out));
    let report = String::from_utf8_lossy(&out.stdout).into_owned();
    assert!(report.starts_with("item,f,f_hat,delta_f\n"), "report: {report}");
    assert!(report.contains("recall=1"), "report: {report}");
}

#[test]
fn gen_text_format_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let stream = dir.path().join("s.txt");
    let stream_str = stream.to_str().unwrap();

    let out = bench(&[
        "gen", "--zipf", "100,1.1,5000", "--seed", "4", "--out", stream_str, "--format", "text",
    ]);
    assert!(out.status.success(), "gen failed: {}", stderr(&out));
    let first = fs::read_to_string(&stream).unwrap();
    assert!(first.lines().all(|l| l.parse::<u64>().is_ok()));

    let out = bench(&[
        "verify", "--stream", stream_str, "--k", "20", "--workers", "2", "--format", "text",
    ]);
    assert!(out.status.success(), "verify failed: {}", stderr(&out));
}

#[test]
fn verify_rejects_corrupt_binary_stream() {
    let dir = tempfile::tempdir().unwrap();
    let stream = dir.path().join("bad.bin");
    fs::write(&stream, [1, 2, 3]).unwrap(); // not a multiple of 8
    let out =
        bench(&["verify", "--stream", stream.to_str().unwrap(), "--k", "5", "--workers", "1"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn verify_rejects_missing_stream() {
    let out = bench(&["verify", "--stream", "/nonexistent/s.bin", "--k", "5", "--workers", "1"]);
    assert!(!out.status.success());
}

#[test]
fn verify_rejects_unknown_mode() {
    let dir = tempfile::tempdir().unwrap();
    let stream = dir.path().join("s.bin");
    fs::write(&stream, 7u64.to_le_bytes()).unwrap();
    let out = bench(&[
        "verify", "--stream", stream.to_str().unwrap(), "--k", "5", "--workers", "1", "--mode",
        "turbo",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("unknown mode"));
}

#[test]
fn verify_rejects_indivisible_hybrid_shape() {
    let dir = tempfile::tempdir().unwrap();
    let stream = dir.path().join("s.bin");
    fs::write(&stream, 7u64.to_le_bytes()).unwrap();
    let out = bench(&[
        "verify", "--stream", stream.to_str().unwrap(), "--k", "5", "--workers", "3", "--mode",
        "hybrid", "--processes", "2",
    ]);
    assert!(!out.status.success());
}

#[test]
fn gen_rejects_malformed_zipf_argument() {
    for bad in ["1000,1.1", "1000;1.1;50", "x,1.1,50", "1000,0.0,50"] {
        let out = bench(&["gen", "--zipf", bad, "--out", "/tmp/unused.bin"]);
        assert!(!out.status.success(), "accepted {bad:?}");
    }
}

fn write_grid(path: &Path, seed: u64) {
    fs::write(
        path,
        format!(
            "[experiment]\n\
             n = 30000\n\
             k = 60\n\
             rho = 1.2\n\
             workers = 1,2\n\
             mode = flat,hybrid\n\
             universe = 2000\n\
             seed = {seed}\n\
             reps = 1\n"
        ),
    )
    .unwrap();
}

#[test]
fn run_emits_reports_with_pinned_schema() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("g.grid");
    write_grid(&grid, 3);
    let out_dir = dir.path().join("out");
    let out = bench(&[
        "run", "--grid", grid.to_str().unwrap(), "--out", out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "run failed: {}", stderr(&out));

    let csv = fs::read_to_string(out_dir.join("results.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,k,rho,workers,mode,seed,wall_s,compute_s,overhead_s,speedup,frac_overhead,are_reported,are_frequent,precision,recall"
    );
    assert_eq!(lines.count(), 4);
    for name in ["candidates.csv", "runtime_vs_workers.dat", "are_vs_workers.dat", "overhead_vs_workers.dat"] {
        assert!(out_dir.join(name).exists(), "{name} missing");
    }
}

#[test]
fn run_accuracy_columns_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("g.grid");
    write_grid(&grid, 11);

    let mut masked = Vec::new();
    let mut candidates = Vec::new();
    for sub in ["a", "b"] {
        let out_dir = dir.path().join(sub);
        let out = bench(&[
            "run", "--grid", grid.to_str().unwrap(), "--out", out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "run failed: {}", stderr(&out));
        let csv = fs::read_to_string(out_dir.join("results.csv")).unwrap();
        masked.push(ssbench::report::mask_timing_columns(&csv));
        candidates.push(fs::read(out_dir.join("candidates.csv")).unwrap());
    }
    assert_eq!(masked[0], masked[1], "accuracy columns differ between runs");
    assert_eq!(candidates[0], candidates[1], "candidate lists differ between runs");
}

#[test]
fn run_seed_override_changes_accuracy_columns() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("g.grid");
    write_grid(&grid, 3);
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for (out_dir, seed) in [(&out_a, "3"), (&out_b, "77")] {
        let out = bench(&[
            "run",
            "--grid",
            grid.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
            "--seed",
            seed,
        ]);
        assert!(out.status.success(), "run failed: {}", stderr(&out));
    }
    let a = fs::read_to_string(out_a.join("results.csv")).unwrap();
    let b = fs::read_to_string(out_b.join("results.csv")).unwrap();
    assert_ne!(
        ssbench::report::mask_timing_columns(&a),
        ssbench::report::mask_timing_columns(&b)
    );
}

#[test]
fn run_rejects_bad_grid() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("g.grid");
    fs::write(&grid, "[experiment]\nn = 100\nbogus_key = 3\n").unwrap();
    let out = bench(&[
        "run", "--grid", grid.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("bogus_key"));
}

#[test]
fn run_rejects_missing_grid_file() {
    let out = bench(&["run", "--grid", "/nonexistent/g.grid", "--out", "/tmp/unused_out"]);
    assert!(!out.status.success());
}
