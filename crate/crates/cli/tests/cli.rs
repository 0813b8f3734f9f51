use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sswme(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sswme")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = sswme(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str]) -> String {
    let out = sswme(args);
    assert!(!out.status.success(), "{args:?} unexpectedly succeeded");
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1, "diagnostic should be one line: {err}");
    err
}

fn read(p: &Path) -> String {
    fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&read(&dir.join("manifest.json"))).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn basis_export_and_samples() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("l3");
    let stdout = ok(&["basis", "L3", "--out", path(&out), "--samples", "11"]);
    assert!(stdout.contains("3 functions") && stdout.contains("breakpoints 0 1/3 2/3 1"), "{stdout}");
    let csv = read(&out.join("samples.csv"));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("zeta,phi_1,phi_2,phi_3"));
    assert_eq!(lines.count(), 11);
    let export: serde_json::Value = serde_json::from_str(&read(&out.join("basis.json"))).unwrap();
    assert_eq!(export["grid"], serde_json::json!(["0", "1/3", "2/3", "1"]));

    let m = manifest(&out);
    assert_eq!(m["subcommand"], "basis");
    assert_eq!(m["bases"][0], "L3");
    let again: serde_json::Value = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
    assert_eq!(again, m);

    let out = tmp.path().join("q3");
    let stdout = ok(&["basis", "Q3", "--out", path(&out)]);
    assert!(stdout.contains("3 functions") && stdout.contains("breakpoints 0 1/2 1"), "{stdout}");
}

#[test]
fn unknown_basis_is_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    let err = fails(&["basis", "Z9", "--out", path(tmp.path())]);
    assert!(err.contains("Z9"), "{err}");
}

#[test]
fn tensors_and_catalogue() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("t");
    ok(&["tensors", "L2", "--out", path(&out)]);
    let dump = read(&out.join("tensors.txt"));
    assert!(dump.lines().any(|l| l.starts_with("M 1 1 ")));
    assert_eq!(dump.lines().filter(|l| l.starts_with("A ")).count(), 8);

    let out = tmp.path().join("c");
    ok(&["catalogue", "--bases", "L1,Q2,Legendre2", "--out", path(&out)]);
    let csv = read(&out.join("catalogue.csv"));
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.lines().nth(2).unwrap().starts_with("Q2,spline(k=2),2,2,0 1,true,true"));
}

#[test]
fn hyperbolicity_scan_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("scan");
    ok(&["hyperbolicity-scan", "Q2", "--out", path(&out), "--resolution", "11", "--line-samples", "21"]);
    let region = read(&out.join("region.csv"));
    assert_eq!(region.lines().next(), Some("a,b,s_bar_1,s_bar_2,max_imag,on_restriction_line"));
    assert_eq!(region.lines().count(), 1 + 121);
    let line = read(&out.join("line.csv"));
    for row in line.lines().skip(1) {
        let imag: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!(imag <= 1e-9);
    }
}

#[test]
fn simulation_is_deterministic_and_profiles_work() {
    let tmp = tempfile::tempdir().unwrap();
    let args = |dir: &str| {
        vec![
            "simulate".to_string(),
            "Q4".into(),
            "--experiment".into(),
            "fast".into(),
            "--nx".into(),
            "40".into(),
            "--t-end".into(),
            "0.2".into(),
            "--output-times".into(),
            "0.1".into(),
            "--out".into(),
            dir.into(),
        ]
    };
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for d in [&a, &b] {
        let v = args(path(d));
        ok(&v.iter().map(String::as_str).collect::<Vec<_>>());
    }
    for name in ["fields_t0.000000.csv", "fields_t0.100000.csv", "fields_t0.200000.csv"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    let fields = read(&a.join("fields_t0.200000.csv"));
    assert_eq!(fields.lines().next(), Some("x,h,u_m,s_1,s_2,s_3,s_4,alpha1,alpha2"));
    assert_eq!(fields.lines().count(), 41);
    let m = manifest(&a);
    assert_eq!(m["experiment"], "fast");
    assert_eq!(m["grid"]["nx"], 40);

    let prof = tmp.path().join("p");
    ok(&["profiles", "--run", path(&a), "--x", "-0.105,0.025", "--out", path(&prof)]);
    let csv = read(&prof.join("profiles.csv"));
    assert_eq!(csv.lines().next(), Some("zeta,u(x=-0.105),u(x=0.025)"));
    assert_eq!(csv.lines().count(), 102);

    let err = fails(&["profiles", "--run", path(&a), "--x", "5", "--out", path(&prof)]);
    assert!(err.contains("outside the domain"), "{err}");
}

#[test]
fn profile_of_constant_state_is_constant() {
    let tmp = tempfile::tempdir().unwrap();
    let run = tmp.path().join("run");
    fs::create_dir_all(&run).unwrap();
    let manifest = serde_json::json!({
        "subcommand": "simulate",
        "bases": ["L2"],
        "regularized": false,
        "experiment": "smooth",
        "physics": { "g": 1.0, "nu": 0.0, "slip_length": 1.0 },
        "grid": { "x_min": 0.0, "x_max": 1.0, "nx": 4, "t_end": 0.0, "cfl": 0.5, "output_times": [] },
        "nzeta": null,
        "settings": null,
        "arguments": [],
        "determinism": "",
        "version": "0",
        "outputs": ["fields_t0.000000.csv"],
    });
    fs::write(run.join("manifest.json"), manifest.to_string()).unwrap();
    let mut csv = String::from("x,h,u_m,s_1,s_2,alpha1,alpha2\n");
    for i in 0..4 {
        csv += &format!("{},1.0,0.75,0.0,0.0,0.0,0.0\n", 0.125 + 0.25 * i as f64);
    }
    fs::write(run.join("fields_t0.000000.csv"), csv).unwrap();
    let out = tmp.path().join("p");
    ok(&["profiles", "--run", path(&run), "--x", "0.6", "--out", path(&out)]);
    for row in read(&out.join("profiles.csv")).lines().skip(1) {
        let u: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(u, 0.75);
    }
}

#[test]
fn error_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("empty");
    ok(&["errors", "--bases", "", "--out", path(&out)]);
    assert_eq!(read(&out.join("errors.csv")).trim_end(), "basis,N,err_h,err_um,err_alpha1,err_alpha2");

    let out = tmp.path().join("small");
    let common = ["--nx", "40", "--t-end", "0.3", "--nzeta", "12", "--out", path(&out)];
    let mut args = vec!["errors", "--bases", "L2,Q2"];
    args.extend(common);
    ok(&args);
    let csv = read(&out.join("errors.csv"));
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let err_h: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert!(err_h > 0.0 && err_h < 0.05, "{row}");
    }
}

#[test]
fn reference_run_writes_levels() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("r");
    ok(&["reference", "--nx", "20", "--nzeta", "5", "--t-end", "0.1", "--out", path(&out)]);
    let csv = read(&out.join("fields_t0.100000.csv"));
    assert_eq!(csv.lines().next(), Some("x,h,u_m,alpha1,alpha2,u_0,u_1,u_2,u_3,u_4"));
    assert_eq!(manifest(&out)["nzeta"], 5);
}

#[test]
fn bad_arguments_fail_cleanly() {
    let tmp = tempfile::tempdir().unwrap();
    let d = path(tmp.path());
    fails(&["simulate", "L2", "--experiment", "tsunami", "--out", d]);
    fails(&["simulate", "L2", "--cfl", "2", "--out", d]);
    fails(&["simulate", "L2", "--nu", "-1", "--out", d]);
    fails(&["profiles", "--run", d, "--x", "0", "--out", d]);
}
