use std::fs;
use std::process::Command;

fn curvelab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_curvelab"))
}

#[test]
fn run_writes_report_and_csvs() {
    let dir = std::env::temp_dir().join(format!("curvelab-cli-{}", std::process::id()));
    let out = curvelab()
        .args(["run", "dgz-points", "--q", "2", "--ext", "3", "--jobs", "1", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["suite"], "dgz-points");
    assert_eq!(report["checks"].as_array().unwrap().len(), 3);
    let points = fs::read_to_string(dir.join("points.csv")).unwrap();
    let mut lines = points.lines();
    assert_eq!(lines.next(), Some("curve_id,q,m,count,elapsed_ms"));
    assert!(lines.nth(1).unwrap().starts_with("dgz,2,2,14,"));
    assert!(fs::read_to_string(dir.join("checks.csv")).unwrap().starts_with("name,passed,elapsed_ms,detail"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn bad_parameters_exit_nonzero() {
    let dir = std::env::temp_dir().join(format!("curvelab-cli-bad-{}", std::process::id()));
    let out = curvelab().args(["run", "hemisystem", "--q", "4", "--out"]).arg(&dir).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));
}

#[test]
fn catalog_lists_every_curve() {
    let out = curvelab().args(["catalog", "list"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    for id in ["dgz", "hermitian", "pgu-pencil", "singer-big", "hemisystem"] {
        assert!(text.lines().any(|l| l.starts_with(id)), "{id} missing");
    }
}

#[test]
fn count_prints_csv_rows() {
    let out = curvelab().args(["count", "--curve", "dgz", "--q", "2", "--ext", "2"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "curve_id,q,m,count,elapsed_ms");
    assert!(rows[1].starts_with("dgz,2,1,0,"));
    assert!(rows[2].starts_with("dgz,2,2,14,"));
}

#[test]
fn pencils_need_a_value() {
    let out = curvelab().args(["count", "--curve", "pgl2-pencil", "--q", "3", "--ext", "1"]).output().unwrap();
    assert!(!out.status.success());
    let ok = curvelab().args(["count", "--curve", "pgl2-pencil", "--q", "3", "--ext", "1", "--lambda", "0"]).output().unwrap();
    assert!(ok.status.success());
}
