use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn poincare(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poincare"))
        .args(args)
        .output()
        .expect("run poincare")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn config(field: &str, v0: &str, step: f64, n: usize, extra: &str) -> String {
    format!(
        r#"{{"k": 1, "q": 1, "m": 1, "field": {field}, "x0": [0, 0, 0, 0], "v0": {v0},
            "step": {step}, "n_steps": {n}{extra}}}"#
    )
}

fn simulate(dir: &Path, cfg: &str) -> (Output, PathBuf) {
    let c = write(dir, "cfg.json", cfg);
    let out = dir.join("traj.csv");
    let o = poincare(&[
        "simulate",
        "--config",
        c.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    (o, out)
}

fn summary_value(text: &str, prefix: &str) -> f64 {
    let line = text
        .lines()
        .find(|l| l.starts_with(prefix))
        .unwrap_or_else(|| panic!("no `{prefix}` in\n{text}"));
    line[prefix.len()..]
        .split(|c: char| c == ',' || c.is_whitespace())
        .find(|s| !s.is_empty())
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn verify_algebra_exit_codes() {
    let o = poincare(&["verify", "algebra"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all suites passed"));

    let o = poincare(&["verify", "algebra", "--k", "0"]);
    assert_eq!(o.status.code(), Some(0));

    let o = poincare(&[
        "verify", "algebra", "--c1", "0.3", "--c2", "-1.2", "--c3", "0.7", "--c4", "2",
    ]);
    assert_eq!(o.status.code(), Some(0));

    let o = poincare(&["verify", "algebra", "--corrupt-j", "2,3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("J^{23}"), "{}", stdout(&o));

    let o = poincare(&["verify", "algebra", "--k", "oops"]);
    assert_eq!(o.status.code(), Some(2));
    let o = poincare(&["verify", "algebra", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zero_field_is_a_straight_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(r#"{"b": [0, 0, 0]}"#, "[0.6, 0, 0]", 0.5, 20, "");
    let (o, out) = simulate(dir.path(), &cfg);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(summary_value(&stdout(&o), "norm drift:"), 0.0);

    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 21);
    for r in &rows {
        assert_eq!(&r[5..], &rows[0][5..]);
        assert!((r[1] - 0.75 * r[0]).abs() < 1e-14);
    }

    let o = poincare(&["check-invariants", "--traj", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("max drift: 0.000e0"), "{}", stdout(&o));
}

#[test]
fn constant_b_summary_reports_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        r#"{"e": [0, 0, 0], "b": [0, 0, 1]}"#,
        "[0.5, 0, 0]",
        1e-3,
        10_000,
        r#", "integrator": "rk4""#,
    );
    let (o, out) = simulate(dir.path(), &cfg);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(
        summary_value(&s, "closed form (constant B): max |dX| =") <= 1e-9,
        "{s}"
    );
    assert!(summary_value(&s, "norm drift:") <= 1e-9);

    let o = poincare(&["check-invariants", "--traj", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn constant_e_summary_reports_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(r#"{"e": [0, 0, 1]}"#, "[0, 0, 0, 1]", 1e-3, 3000, "");
    let (o, _) = simulate(dir.path(), &cfg);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(summary_value(&stdout(&o), "closed form (constant E): max |dX| =") <= 1e-9);
}

#[test]
fn symmetric_tensor_warns_with_rate() {
    let dir = tempfile::tempdir().unwrap();
    let field = r#"{"t": [[0.1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]}"#;
    let (o, _) = simulate(dir.path(), &config(field, "[0.5, 0, 0]", 1e-4, 100, ""));
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(
        s.contains("warning: connection tensor not antisymmetric; norm will drift"),
        "{s}"
    );
    let measured = summary_value(&s, "measured drift rate d(eta V.V)/dtau at start:");
    // 2 k (γu)² T¹¹ with γ²u² = 1/3
    assert!(
        (measured - 0.2 / 3.0).abs() <= 1e-6 * 0.2 / 3.0,
        "{measured}"
    );
}

#[test]
fn malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = simulate(dir.path(), "{\n  \"k\": 1,\n  \"q\": ,\n}");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    assert!(!out.exists());

    let cfg = config(
        r#"{"b": [0, 0, 1]}"#,
        "[0.5, 0, 0]",
        1e-3,
        10,
        r#", "integrator": "leapfrog""#,
    );
    let (o, _) = simulate(dir.path(), &cfg);
    assert_eq!(o.status.code(), Some(2));

    let cfg = config(r#"{"b": [0, 0, 1]}"#, "[0.5, 0, 0]", -1.0, 10, "");
    let (o, _) = simulate(dir.path(), &cfg);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("step"));

    let o = poincare(&[
        "simulate",
        "--config",
        "/nonexistent/cfg.json",
        "--out",
        "x.csv",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn blow_up_exits_3_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let field =
        r#"{"t": [[1e200, 0, 0, 0], [0, 1e200, 0, 0], [0, 0, 1e200, 0], [0, 0, 0, 1e200]]}"#;
    let cfg = format!(
        r#"{{"k": 1e200, "q": 1, "m": 1, "field": {field}, "x0": [0, 0, 0, 0], "v0": [0.5, 0, 0],
            "step": 1, "n_steps": 10, "integrator": "euler"}}"#
    );
    let (o, out) = simulate(dir.path(), &cfg);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("last good tau = 0"), "{}", stderr(&o));
    assert!(!out.exists());
    let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 1, "only the config should remain");
}

#[test]
fn check_invariants_flags_corrupted_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(r#"{"b": [0, 0, 1]}"#, "[0.5, 0, 0]", 1e-2, 50, "");
    let (o, out) = simulate(dir.path(), &cfg);
    assert_eq!(o.status.code(), Some(0));

    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut fields: Vec<String> = lines[20].split(',').map(String::from).collect();
    fields[5] = "0.9".into();
    lines[20] = fields.join(",");
    let bad = write(dir.path(), "bad.csv", &(lines.join("\n") + "\n"));

    let o = poincare(&["check-invariants", "--traj", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("at line 21"), "{}", stdout(&o));

    let mut fields: Vec<String> = lines[30].split(',').map(String::from).collect();
    fields[3] = "abc".into();
    lines[30] = fields.join(",");
    let broken = write(dir.path(), "broken.csv", &(lines.join("\n") + "\n"));
    let o = poincare(&["check-invariants", "--traj", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 31"), "{}", stderr(&o));
}

#[test]
fn check_invariants_detects_uneven_spacing() {
    let dir = tempfile::tempdir().unwrap();
    let text = "tau,x1,x2,x3,x4,v1,v2,v3,v4\n0,0,0,0,0,0,0,0,1\n0.1,0,0,0,0.1,0,0,0,1\n0.25,0,0,0,0.25,0,0,0,1\n";
    let p = write(dir.path(), "uneven.csv", text);
    let o = poincare(&["check-invariants", "--traj", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("uniform tau spacing: NO"));
}

#[test]
fn scan_connection_forms() {
    let scan = |c: [&str; 4]| {
        poincare(&[
            "scan-connection",
            "--c1",
            c[0],
            "--c2",
            c[1],
            "--c3",
            c[2],
            "--c4",
            c[3],
        ])
    };
    let o = scan(["0", "0.5", "-0.5", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("form: Γ = kT"));
    assert_eq!(stdout(&o).matches("  e_").count(), 16);

    let o = scan(["1", "-1", "0", "0"]);
    assert!(
        stdout(&o).contains("Γ^{μν} ∝ η^{μν}·trace(T)"),
        "{}",
        stdout(&o)
    );
    let o = scan(["0", "0", "0", "0"]);
    assert!(stdout(&o).contains("zero connection"));
    let o = scan(["0.2", "0.7", "0", "0"]);
    assert!(stdout(&o).contains("symmetry: symmetric"));
    let o = scan(["0", "0", "0.4", "-0.3"]);
    assert!(stdout(&o).contains("symmetry: antisymmetric"));

    let o = poincare(&["scan-connection", "--c1", "0", "--c2", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn show_matrices() {
    let o = poincare(&["show", "generator", "--rho", "1", "--sigma", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 22);
    let row_v1: Vec<&str> = s.lines().nth(2).unwrap().split_whitespace().collect();
    assert_eq!(row_v1[0], "v1");
    assert_eq!(row_v1[2], "-i");

    let o = poincare(&["show", "momentum", "--mu", "1"]);
    assert_eq!(o.status.code(), Some(0));

    let o = poincare(&["show", "translation-matrix", "--dx", "1,0,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(!s.contains('i'), "{s}");

    let o = poincare(&["show", "generator", "--rho", "5", "--sigma", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = poincare(&["show", "translation-matrix", "--dx", "1,0"]);
    assert_eq!(o.status.code(), Some(2));
}
