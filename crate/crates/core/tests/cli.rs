use std::path::PathBuf;
use std::process::Command;

use matchcheck::cli::{self, cmd_compare_with, InputFormat, RunConfig};
use matchcheck::counting::{count_triangles_with, CountError, KernelChoice};
use matchcheck::metrics::{read_records, MetricRecord, OutputFormat};
use matchcheck::reorder::SortOrder;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["matchcheck"];
    argv.extend_from_slice(args);
    let code = cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn csv_records(text: &str) -> Vec<MetricRecord> {
    read_records(OutputFormat::Csv, text.as_bytes()).unwrap()
}

fn config(name: &str) -> RunConfig {
    RunConfig {
        input: fixture(name),
        input_format: InputFormat::Auto,
        order: SortOrder::Original,
        kernel: KernelChoice::Scalar,
        output_format: OutputFormat::Csv,
        cpu_ghz: None,
        n1: None,
        seed: None,
        no_timing: true,
    }
}

#[test]
fn count_k4() {
    let path = fixture("k4.tsv");
    let (code, out, err) = run(&["count", "--input", path.to_str().unwrap(), "--no-timing"]);
    assert_eq!(code, 0, "{err}");
    let recs = csv_records(&out);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].triangles, 4);
    assert_eq!(recs[0].match_checks, 4);
    assert_eq!(recs[0].graph_label, "k4.tsv");
    assert_eq!(recs[0].wall_time, 0.0);
}

#[test]
fn count_timed_reports_rates() {
    let path = fixture("k4.mtx");
    let (code, out, err) = run(&[
        "count",
        "--input",
        path.to_str().unwrap(),
        "--kernel",
        "blocked",
        "--order",
        "degree-desc",
        "--cpu-ghz",
        "3.0",
        "--n1",
        "2",
    ]);
    assert_eq!(code, 0, "{err}");
    let r = &csv_records(&out)[0];
    assert_eq!((r.triangles, r.match_checks), (4, 4));
    assert_eq!(r.kernel_label, "blocked");
    assert_eq!(r.order_label, "degree-desc");
    assert!(r.wall_time > 0.0);
    assert!((r.checks_per_second - 4.0 / r.wall_time).abs() <= 1e-9 * r.checks_per_second);
    assert!((r.checks_per_cycle.unwrap() - r.checks_per_second / 3e9).abs() <= 1e-20);
    assert!(r.beta.is_some());
}

#[test]
fn count_path_and_interleaved() {
    let path = fixture("path.tsv");
    let (code, out, _) = run(&["count", "--input", path.to_str().unwrap(), "--no-timing"]);
    assert_eq!(code, 0);
    assert_eq!(csv_records(&out)[0].triangles, 0);

    let path = fixture("interleaved.tsv");
    let (code, out, _) = run(&["count", "--input", path.to_str().unwrap(), "--no-timing"]);
    assert_eq!(code, 0);
    let r = &csv_records(&out)[0];
    assert_eq!((r.triangles, r.match_checks), (0, 15));
}

#[test]
fn count_json_lines() {
    let path = fixture("triangle.tsv");
    let (code, out, _) = run(&[
        "count",
        "--input",
        path.to_str().unwrap(),
        "--output",
        "json-lines",
        "--no-timing",
    ]);
    assert_eq!(code, 0);
    let recs = read_records(OutputFormat::JsonLines, out.as_bytes()).unwrap();
    assert_eq!(recs[0].triangles, 1);
    assert_eq!(recs[0].num_edges, 3);
}

#[test]
fn input_errors_exit_one() {
    let (code, out, err) = run(&["count", "--input", "/no/such/file.tsv"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("/no/such/file.tsv"), "{err}");

    // an edge list forced through the MatrixMarket reader has no header
    let tsv = fixture("k4.tsv");
    let (code, _, err) = run(&["count", "--input", tsv.to_str().unwrap(), "--format", "mtx"]);
    assert_eq!(code, 1);
    assert!(err.contains("bad header"), "{err}");

    let mtx = fixture("k4.mtx");

    let (code, _, _) = run(&[
        "count",
        "--input",
        mtx.to_str().unwrap(),
        "--kernel",
        "avx512",
    ]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["generate", "--kind", "gnp", "--n", "5", "--p", "2"]);
    assert_eq!(code, 1);
}

#[test]
fn beta_undefined_is_an_input_error() {
    let path = fixture("k4.tsv");
    let (code, _, err) = run(&["count", "--input", path.to_str().unwrap(), "--n1", "6"]);
    assert_eq!(code, 1);
    assert!(err.contains("beta"), "{err}");
}

#[test]
fn compare_triangle_and_k4() {
    for (name, expected) in [("triangle.tsv", 1), ("k4.tsv", 4), ("k4.mtx", 4)] {
        let path = fixture(name);
        let (code, out, err) = run(&["compare", "--input", path.to_str().unwrap(), "--no-timing"]);
        assert_eq!(code, 0, "{err}");
        let recs = csv_records(&out);
        assert_eq!(recs.len(), 6);
        assert!(recs.iter().all(|r| r.triangles == expected));
        let combos: Vec<_> = recs
            .iter()
            .map(|r| (r.order_label.as_str(), r.kernel_label.as_str()))
            .collect();
        assert_eq!(
            combos,
            [
                ("original", "scalar"),
                ("original", "blocked"),
                ("degree-desc", "scalar"),
                ("degree-desc", "blocked"),
                ("degree-asc", "scalar"),
                ("degree-asc", "blocked"),
            ]
        );
    }
}

#[test]
fn compare_timed_has_speedups() {
    let path = fixture("k4.tsv");
    let (code, out, err) = run(&["compare", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let recs = csv_records(&out);
    for r in &recs {
        let s = r.speedup_vs_original.unwrap();
        assert!(s > 0.0);
        if r.order_label == "original" {
            assert_eq!(s, 1.0);
        }
    }
}

#[test]
fn compare_disagreement_exits_two() {
    let cfg = config("k4.tsv");
    let faulty = |g: &_, k: KernelChoice, t| -> Result<_, CountError> {
        let mut r = count_triangles_with(g, k, t)?;
        if k == KernelChoice::Blocked {
            r.triangles += 1;
        }
        Ok(r)
    };
    let mut out = Vec::new();
    let err = cmd_compare_with(&cfg, &mut out, &faulty).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(
        out.is_empty(),
        "nothing is emitted before the agreement check"
    );

    let honest = |g: &_, k, t| count_triangles_with(g, k, t);
    cmd_compare_with(&cfg, &mut out, &honest).unwrap();
    assert_eq!(csv_records(std::str::from_utf8(&out).unwrap()).len(), 6);
}

#[test]
fn generate_outputs() {
    let (code, out, _) = run(&["generate", "--kind", "complete", "--n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 6);

    let (code, out, _) = run(&["generate", "--kind", "gnp", "--n", "10", "--p", "0"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 0);

    let args = [
        "generate", "--kind", "gnp", "--n", "50", "--p", "0.3", "--seed", "11",
    ];
    let (_, first, _) = run(&args);
    let (_, second, _) = run(&args);
    assert_eq!(first, second);
    assert!(first.lines().count() > 100);
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("compare"));
}

#[test]
fn binary_round_trip() {
    let exe = env!("CARGO_BIN_EXE_matchcheck");
    let gen = Command::new(exe)
        .args([
            "generate", "--kind", "gnp", "--n", "30", "--p", "0.4", "--seed", "3",
        ])
        .output()
        .unwrap();
    assert!(gen.status.success());
    let dir = std::env::temp_dir().join(format!("matchcheck-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("g.tsv");
    std::fs::write(&file, &gen.stdout).unwrap();

    let out = Command::new(exe)
        .args([
            "compare",
            "--no-timing",
            "--output",
            "json-lines",
            "--input",
        ])
        .arg(&file)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let recs = read_records(OutputFormat::JsonLines, &out.stdout[..]).unwrap();
    assert_eq!(recs.len(), 6);
    let el = matchcheck::graph_io::load_edge_list(&gen.stdout[..]).unwrap();
    let expected = matchcheck::oracle::brute_force_triangles(&matchcheck::canonicalize(&el));
    assert!(recs.iter().all(|r| r.triangles == expected));

    let missing = Command::new(exe)
        .args(["count", "--input"])
        .arg(dir.join("absent.tsv"))
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}
