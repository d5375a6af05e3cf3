use std::process::{Command, Output};

use dec_core::experiment::parse_csv_report;
use dec_core::mesh::read_mesh;

fn declab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_declab")).args(args).output().expect("run declab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn convergence_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k1.csv");
    let o = declab(&["convergence", "--k", "1", "--family", "symmetric", "--levels", "2..4", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let records = parse_csv_report(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(records.iter().map(|r| r.level).collect::<Vec<_>>(), [2, 3, 4]);
    assert_eq!(records[0].norms.len(), 4);
}

#[test]
fn convergence_markdown_on_stdout() {
    let o = declab(&["convergence", "--k", "0", "--levels", "2..3", "--format", "markdown"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("| h | e_u | rate | de_u | rate |"));
    assert!(text.contains("| 2^-2 |") && text.contains("| -- |"));
}

#[test]
fn perturbed_runs_are_reproducible() {
    let args = ["convergence", "--k", "2", "--family", "perturbed", "--levels", "2..3", "--seed", "4", "--format", "csv"];
    let strip = |s: String| s.lines().map(|l| l.rsplitn(3, ',').nth(2).unwrap_or(l).to_string()).collect::<Vec<_>>();
    assert_eq!(strip(stdout(&declab(&args))), strip(stdout(&declab(&args))));
}

#[test]
fn solver_failure_exits_with_2() {
    let o = declab(&["convergence", "--k", "1", "--levels", "3..3", "--solver-maxit", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mesh_failure_exits_with_3() {
    let o = declab(&["gen-mesh", "--family", "perturbed", "--level", "3", "--alpha", "0.7"]);
    assert_eq!(o.status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mesh");
    std::fs::write(&bad, "2 3 1\n0 0\n1 0\n2 0\n0 1 2\n").unwrap();
    let o = declab(&["dual-report", "--mesh", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_do_not_collide_with_solver_code() {
    assert_eq!(declab(&["convergence", "--k", "7"]).status.code(), Some(1));
    assert_eq!(declab(&["convergence", "--k", "0", "--levels", "5..2"]).status.code(), Some(1));
}

#[test]
fn gen_mesh_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.mesh");
    let o = declab(&["gen-mesh", "--family", "perturbed", "--level", "3", "--seed", "2", "--alpha", "0.15", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let k = read_mesh(&path).unwrap();
    assert_eq!((k.count(0), k.count(2)), (45, 64));
    let report = declab(&["dual-report", "--mesh", path.to_str().unwrap()]);
    assert!(report.status.success());
}

#[test]
fn dual_report_columns() {
    let text = stdout(&declab(&["dual-report", "--level", "2"]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("dim,simplex_id,primal_volume,dual_volume,ratio_a,is_boundary"));
    assert_eq!(lines.count(), 15 + 30 + 16);
}

#[test]
fn dump_operators_is_coordinate_format() {
    let text = stdout(&declab(&["dump-operators", "--level", "1", "--k", "1"]));
    let mut headers = 0;
    for line in text.lines() {
        if line.starts_with('#') {
            headers += 1;
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(f.len(), 3);
        f[0].parse::<usize>().unwrap();
        f[1].parse::<usize>().unwrap();
        f[2].parse::<f64>().unwrap();
    }
    assert_eq!(headers, 5);
}

#[test]
fn diagnostics_and_selftest() {
    let sym = stdout(&declab(&["diagnostics", "--level", "3", "--family", "symmetric", "--k", "1"]));
    assert!(!sym.contains("FAIL"), "{sym}");
    let pert = stdout(&declab(&["diagnostics", "--level", "3", "--family", "perturbed", "--k", "1"]));
    assert!(pert.lines().any(|l| l.starts_with("FAIL") && l.contains("centroid")));
    assert!(pert.lines().any(|l| l.starts_with("PASS") && l.contains("constant form")));
    let o = declab(&["selftest-forms"]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("FAIL"));
}
