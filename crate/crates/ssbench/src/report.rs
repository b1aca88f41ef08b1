//! Report emission: `results.csv` with a pinned schema, gnuplot-ready data
//! files (one block per series, blank-line separated), and the serialized
//! candidate lists for replay comparison. Accuracy columns and candidates
//! are seed-deterministic; the timing columns are the only fields that vary
//! between runs.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

use crate::experiment::CellResult;

pub const CSV_HEADER: &str =
    "n,k,rho,workers,mode,seed,wall_s,compute_s,overhead_s,speedup,frac_overhead,are_reported,are_frequent,precision,recall";

fn results_csv(results: &[CellResult]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in results {
        let c = &r.cell;
        writeln!(
            out,
            "{},{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{},{},{},{}",
            c.n,
            c.k,
            c.rho,
            c.workers,
            c.mode,
            c.seed,
            r.wall_s,
            r.compute_s,
            r.overhead_s,
            r.speedup,
            r.frac_overhead,
            r.accuracy.are_reported,
            r.accuracy.are_frequent,
            r.accuracy.precision,
            r.accuracy.recall
        )
        .expect("string write");
    }
    out
}

fn candidates_csv(results: &[CellResult]) -> String {
    let mut out = String::from("n,k,rho,workers,mode,seed,candidates\n");
    for r in results {
        let c = &r.cell;
        let list: Vec<String> =
            r.candidates.iter().map(|x| format!("{}:{}", x.item, x.freq)).collect();
        writeln!(out, "{},{},{},{},{},{},{}", c.n, c.k, c.rho, c.workers, c.mode, c.seed, list.join(" "))
            .expect("string write");
    }
    out
}

// One gnuplot block per (n, k, rho, mode, seed) series, rows by workers.
fn plot_data(
    results: &[CellResult],
    title: &str,
    columns: &str,
    row: impl Fn(&CellResult) -> String,
) -> String {
    let mut out = format!("# {title}\n");
    let mut series: Vec<(&CellResult, Vec<&CellResult>)> = Vec::new();
    for r in results {
        let key = (r.cell.n, r.cell.k, r.cell.rho.to_bits(), &r.cell.mode, r.cell.seed);
        match series.iter_mut().find(|(head, _)| {
            (head.cell.n, head.cell.k, head.cell.rho.to_bits(), &head.cell.mode, head.cell.seed)
                == key
        }) {
            Some((_, rows)) => rows.push(r),
            None => series.push((r, vec![r])),
        }
    }
    for (head, mut rows) in series {
        let c = &head.cell;
        writeln!(out, "\n# series n={} k={} rho={} mode={} seed={}", c.n, c.k, c.rho, c.mode, c.seed)
            .expect("string write");
        writeln!(out, "# workers {columns}").expect("string write");
        rows.sort_by_key(|r| r.cell.workers);
        for r in rows {
            writeln!(out, "{} {}", r.cell.workers, row(r)).expect("string write");
        }
    }
    out
}

/// Write `results.csv`, the three plot data files, and `candidates.csv`
/// into `out_dir` (created if needed).
pub fn emit_report(results: &[CellResult], out_dir: &Path) -> Result<()> {
    if results.is_empty() {
        bail!("no results to report");
    }
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;

    let write = |name: &str, contents: String| -> Result<()> {
        let path = out_dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
    };

    write("results.csv", results_csv(results))?;
    write("candidates.csv", candidates_csv(results))?;
    write(
        "runtime_vs_workers.dat",
        plot_data(results, "runtime vs workers", "wall_s speedup", |r| {
            format!("{:.6} {:.6}", r.wall_s, r.speedup)
        }),
    )?;
    write(
        "are_vs_workers.dat",
        plot_data(results, "average relative error vs workers", "are_reported are_frequent", |r| {
            format!("{} {}", r.accuracy.are_reported, r.accuracy.are_frequent)
        }),
    )?;
    write(
        "overhead_vs_workers.dat",
        plot_data(results, "overhead vs workers", "overhead_s frac_overhead", |r| {
            format!("{:.6} {:.6}", r.overhead_s, r.frac_overhead)
        }),
    )?;
    Ok(())
}

/// The accuracy-and-identity view of `results.csv`: timing columns masked,
/// used by determinism checks.
pub fn mask_timing_columns(csv: &str) -> String {
    let mut out = String::new();
    for (idx, line) in csv.lines().enumerate() {
        if idx == 0 {
            out.push_str(line);
            out.push('\n');
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let masked: Vec<&str> = fields
            .iter()
            .enumerate()
            .map(|(i, &f)| if (6..=10).contains(&i) { "-" } else { f })
            .collect();
        out.push_str(&masked.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::CellConfig;
    use spacesaving::evaluate::AccuracyReport;
    use spacesaving::Counter;

    fn fake_result(n: u64, k: usize, rho: f64, workers: usize, mode: &str) -> CellResult {
        CellResult {
            cell: CellConfig {
                n,
                k,
                rho,
                universe: 100,
                seed: 1,
                workers,
                mode: mode.to_string(),
                processes: 2,
                reps: 1,
            },
            wall_s: 1.0 / workers as f64,
            compute_s: 0.9 / workers as f64,
            overhead_s: 0.1 / workers as f64,
            speedup: workers as f64,
            frac_overhead: 0.1,
            accuracy: AccuracyReport {
                rows: Vec::new(),
                are_reported: 0.0,
                are_frequent: 0.0,
                precision: 1.0,
                recall: 1.0,
                reported_empty: false,
            },
            candidates: vec![Counter { item: 3, freq: n }, Counter { item: 9, freq: 2 }],
        }
    }

    #[test]
    fn csv_schema_is_pinned() {
        let rows = vec![fake_result(100, 5, 1.1, 1, "flat")];
        let csv = results_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,k,rho,workers,mode,seed,wall_s,compute_s,overhead_s,speedup,frac_overhead,are_reported,are_frequent,precision,recall"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("100,5,1.1,1,flat,1,"));
        assert!(row.ends_with(",0,0,1,1"));
        assert_eq!(row.split(',').count(), 15);
    }

    #[test]
    fn emit_writes_all_files() {
        let dir = tempfile::tempdir().unwrap();
        let rows = vec![
            fake_result(100, 5, 1.1, 2, "flat"),
            fake_result(100, 5, 1.1, 1, "flat"),
            fake_result(100, 5, 1.1, 2, "hybrid"),
        ];
        emit_report(&rows, dir.path()).unwrap();
        for name in [
            "results.csv",
            "candidates.csv",
            "runtime_vs_workers.dat",
            "are_vs_workers.dat",
            "overhead_vs_workers.dat",
        ] {
            assert!(dir.path().join(name).exists(), "{name} missing");
        }
        let dat = fs::read_to_string(dir.path().join("runtime_vs_workers.dat")).unwrap();
        // Two series (flat, hybrid), flat's rows sorted by workers.
        assert_eq!(dat.matches("# series").count(), 2);
        let flat_block = dat.split("# series").nth(1).unwrap();
        let rows: Vec<&str> = flat_block
            .lines()
            .filter(|l| l.chars().next().is_some_and(|c| c.is_ascii_digit()))
            .collect();
        assert_eq!(rows[0].split(' ').next().unwrap(), "1");
        assert_eq!(rows[1].split(' ').next().unwrap(), "2");
    }

    #[test]
    fn emit_refuses_empty_results() {
        let dir = tempfile::tempdir().unwrap();
        assert!(emit_report(&[], dir.path()).is_err());
    }

    #[test]
    fn candidate_lists_serialize_in_rank_order() {
        let rows = vec![fake_result(42, 5, 1.5, 4, "flat")];
        let csv = candidates_csv(&rows);
        assert!(csv.ends_with("42,5,1.5,4,flat,1,3:42 9:2\n"));
    }

    #[test]
    fn masking_hides_only_timing() {
        let rows = vec![fake_result(100, 5, 1.1, 2, "flat")];
        let masked = mask_timing_columns(&results_csv(&rows));
        let row = masked.lines().nth(1).unwrap();
        assert_eq!(row, "100,5,1.1,2,flat,1,-,-,-,-,-,0,0,1,1");
    }
}
