use std::path::Path;
use std::process::{Command, Output};

use expochar::data;
use expochar::efficiency::EfficiencyReport;
use expochar::null::{run_test, StatKind, TestConfig, TestReport};
use expochar::vstat::Convention;

fn expochar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expochar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = expochar(args);
    assert!(
        out.status.success(),
        "expochar {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn json_report(args: &[&str]) -> TestReport {
    let mut all = vec!["test", "--format", "json"];
    all.extend_from_slice(args);
    serde_json::from_str(&stdout(&all)).unwrap()
}

#[test]
fn json_report_matches_library() {
    let report = json_report(&["--reps", "500", "--convention", "weak"]);
    let config = TestConfig {
        reps: 500,
        convention: Convention::Weak,
        ..TestConfig::default()
    };
    assert_eq!(report, run_test(&data::aircraft(), &config).unwrap());
    assert!((report.i_value - 0.0373).abs() < 5e-4);
    assert!((report.k_value - 0.2078).abs() < 5e-4);
}

#[test]
fn output_is_reproducible() {
    let args = [
        "test", "--format", "csv", "--reps", "300", "--alpha", "0.05,0.1",
    ];
    assert_eq!(stdout(&args), stdout(&args));
    let other = stdout(&[
        "test", "--format", "csv", "--reps", "300", "--alpha", "0.05,0.1", "--seed", "1",
    ]);
    assert_ne!(stdout(&args), other);
}

#[test]
fn rescaled_data_gives_same_statistics() {
    let dir = tempfile::tempdir().unwrap();
    let scaled: Vec<String> = data::aircraft()
        .values()
        .iter()
        .map(|v| (v * 1000.0).to_string())
        .collect();
    let path = write(dir.path(), "scaled.txt", &scaled.join("\n"));
    let a = json_report(&["--reps", "200"]);
    let b = json_report(&["--reps", "200", "--data", &path]);
    assert_eq!(a.i_value, b.i_value);
    assert_eq!(a.k_value, b.k_value);
    assert_eq!(a.p_i, b.p_i);
}

#[test]
fn single_observation() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "one.txt", "# a lone value\n3.5\n");
    let r = json_report(&["--reps", "100", "--data", &path]);
    assert_eq!(r.n, 1);
    assert_eq!(r.i_value, 0.0);
    assert_eq!(r.k_value, 1.0);
}

fn failure(args: &[&str]) -> String {
    let out = expochar(args);
    assert_eq!(
        out.status.code(),
        Some(2),
        "expected exit code 2 for {args:?}"
    );
    assert!(out.stdout.is_empty());
    String::from_utf8(out.stderr).unwrap()
}

#[test]
fn bad_input_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "1 2\n3 x4\n");
    assert!(failure(&["test", "--data", &bad]).contains("line 2: cannot parse `x4`"));

    let neg = write(dir.path(), "neg.txt", "1 -3\n");
    assert!(failure(&["test", "--data", &neg]).contains("negative"));

    let empty = write(dir.path(), "empty.txt", "# nothing\n");
    assert!(failure(&["test", "--data", &empty]).contains("empty"));

    let missing = dir.path().join("missing.txt");
    let msg = failure(&["test", "--data", missing.to_str().unwrap()]);
    assert!(msg.contains("missing.txt"), "{msg}");

    assert!(failure(&["test", "--reps", "10"]).contains("--reps"));
    assert!(failure(&["test", "--reps", "200", "--alpha", "1.5"]).contains("alpha"));
    assert!(
        failure(&["power", "--family", "weibull", "--reps", "10"]).contains("needs a parameter")
    );
}

#[test]
fn critvals_csv() {
    let text = stdout(&[
        "critvals", "--format", "csv", "--stat", "both", "--sizes", "10,20", "--reps", "2000",
    ]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kind,n,reps,seed,alpha,critical_value"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2 * 2 * 4);
    for r in &rows {
        assert_eq!(r.len(), 6);
        let c: f64 = r[5].parse().unwrap();
        assert!(c.is_finite());
    }
    // Smaller alpha, larger critical value, within one (kind, n) block.
    for block in rows.chunks(4) {
        let cs: Vec<f64> = block.iter().map(|r| r[5].parse().unwrap()).collect();
        assert!(cs.windows(2).all(|w| w[0] <= w[1]), "{cs:?}");
    }
}

#[test]
fn critvals_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = [
        "critvals", "--format", "csv", "--sizes", "15", "--reps", "1000", "--cache", cache,
    ];
    let first = stdout(&args);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    assert_eq!(stdout(&args), first);
}

#[test]
fn weibull_efficiencies() {
    let text = stdout(&["efficiency", "--format", "json", "--family", "weibull"]);
    let rows: Vec<EfficiencyReport> = serde_json::from_str(&text).unwrap();
    let eff = |k| rows.iter().find(|r| r.kind == k).unwrap().efficiency;
    assert!((eff(StatKind::I) - 0.746).abs() < 5e-4);
    assert!((eff(StatKind::K) - 0.258).abs() < 5e-3);
}

#[test]
fn sigma2_curve_grid() {
    let text = stdout(&[
        "efficiency",
        "--curve",
        "sigma2",
        "--format",
        "csv",
        "--step",
        "0.05",
        "--max-t",
        "1",
    ]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,sigma2_k"));
    let ts: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ts.len(), 21);
    assert_eq!(ts[3], "0.15");
    assert_eq!(ts[20], "1");
}

#[test]
fn power_markdown_and_csv() {
    let md = stdout(&[
        "power",
        "--family",
        "u,weibull:0.4",
        "--reps",
        "200",
        "--stat",
        "k",
    ]);
    assert!(md.contains("| Alternative | I | K |"));
    assert!(md.contains("| u |"));
    assert!(md.contains("| weibull:0.4 | - |"));
    let csv = stdout(&[
        "power", "--format", "csv", "--family", "u", "--reps", "200", "--n", "10,20",
    ]);
    assert_eq!(csv.lines().count(), 1 + 2 * 2);
}

#[test]
fn demo_distances() {
    let text = stdout(&["demo", "--format", "csv", "--quadruples", "20000"]);
    let dist: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(dist.len(), 2);
    assert!(dist[0] < 0.02, "{dist:?}");
    assert!(dist[1] > 0.3, "{dist:?}");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("crit.md");
    let printed = stdout(&["critvals", "--sizes", "10", "--reps", "500"]);
    let out = expochar(&[
        "critvals",
        "--sizes",
        "10",
        "--reps",
        "500",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), printed);
}
