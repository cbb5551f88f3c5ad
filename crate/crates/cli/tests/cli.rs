use std::path::Path;
use std::process::{Command, Output};

const NAMES: [&str; 10] = [
    "sphere_cp2",
    "sphere_ch2",
    "tube_cp1_in_cp2",
    "tube_cp1_in_cp3",
    "tube_quadric_cp2",
    "tube_quadric_cp3",
    "tube_rp2_in_cp2",
    "singular_sextic",
    "duality_quadric",
    "hyperplane_dual_point",
];

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopf-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn version_prints_name_and_version() {
    let o = lab(&["version"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).trim(),
        format!("hopf-lab {}", env!("CARGO_PKG_VERSION"))
    );
}

#[test]
fn list_shows_bundled_scenarios() {
    let o = lab(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for n in NAMES {
        assert!(out.lines().any(|l| l.starts_with(n)), "{n} missing");
    }
    assert_eq!(out.lines().count(), 10);
}

#[test]
fn list_with_directories() {
    let empty = tempfile::tempdir().unwrap();
    let o = lab(&["list", "--dir", empty.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 10);

    std::fs::write(
        empty.path().join("mine.cfg"),
        "[scenario]\nname = mine\ndescription = my sphere\nchecks = hopf\n",
    )
    .unwrap();
    std::fs::write(empty.path().join("notes.txt"), "ignored").unwrap();
    let out = stdout(&lab(&["list", "--dir", empty.path().to_str().unwrap()]));
    assert_eq!(out.lines().count(), 11);
    assert!(out.lines().last().unwrap().contains("my sphere"));

    let o = lab(&["list", "--dir", "/definitely/not/here"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(lab(&[]).status.code(), Some(2));
    assert_eq!(lab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(lab(&["run"]).status.code(), Some(2));
    assert_eq!(
        lab(&["run", "sphere_cp2", "--seed", "x"]).status.code(),
        Some(2)
    );
    assert_eq!(
        lab(&["run", "sphere_cp2", "--tol", "-1"]).status.code(),
        Some(2)
    );
    let o = lab(&["run", "no_such_scenario"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no_such_scenario"));
}

#[test]
fn sphere_report_contents() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["run", "sphere_cp2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("[PASS] hopf"));
    let r = json(dir.path());
    assert_eq!(r["passed"], true);
    assert_eq!(r["scenario"], "sphere_cp2");
    assert!(r.get("runtime_seconds").is_none());
    let checks = r["checks"].as_array().unwrap();
    let hopf = checks.iter().find(|c| c["name"] == "hopf").unwrap();
    assert_eq!(hopf["metrics"]["is_hopf"], true);
    let spec = checks.iter().find(|c| c["name"] == "spectrum").unwrap();
    let ev: Vec<f64> = spec["metrics"]["eigenvalues_first"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let r0 = std::f64::consts::FRAC_PI_3;
    let want = [2.0 / (2.0 * r0).tan(), 1.0 / r0.tan(), 1.0 / r0.tan()];
    for (a, b) in ev.iter().zip(want) {
        assert!((a - b).abs() < 1e-5);
    }
    for csv in [
        "spectrum_spectrum.csv",
        "hopf_mu.csv",
        "focal_cells.csv",
        "rank_sweep_ranks.csv",
    ] {
        let text = std::fs::read_to_string(dir.path().join(csv)).unwrap();
        assert!(text.lines().count() > 1, "{csv}");
    }
    let cells = std::fs::read_to_string(dir.path().join("focal_cells.csv")).unwrap();
    assert_eq!(cells.lines().count(), 51);
    assert!(dir.path().join("report.txt").exists());
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        lab(&[
            "run",
            "duality_quadric",
            "--out",
            d.path().to_str().unwrap(),
        ]);
    }
    for f in [
        "report.json",
        "report.txt",
        "duality_tube_duality.csv",
        "blowup_probe.csv",
    ] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn overrides_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&[
        "run",
        "sphere_ch2",
        "--seed",
        "77",
        "--fd-step",
        "2e-4",
        "--timing",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(dir.path());
    assert_eq!(r["seed"], 77);
    assert_eq!(r["fd_step"], 2e-4);
    assert!(r["runtime_seconds"].as_f64().is_some());
}

#[test]
fn tight_tolerance_fails_checks() {
    let o = lab(&["run", "sphere_cp2", "--tol", "1e-14"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL] spectrum"));
    assert!(stdout(&o).contains("result: FAIL"));
}

#[test]
fn json_flag_prints_report() {
    let o = lab(&["run", "hyperplane_dual_point", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn malformed_configs_report_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("[scenario]\nname = x\nthis line is broken\n", "line 3"),
        ("[scenario]\nname = x\nchecks = hopf\n[space]\nkind = cp\nn = 2\n[object]\ntype = sphere\nradius = 2.0\n", "line 9"),
        ("[scenario]\nname = x\nchecks = hopf\nbogus = 1\n", "line 4"),
        ("[scenario]\nname = x\nchecks = nope\n[space]\nkind = cp\nn = 2\n[object]\ntype = sphere\nradius = 1\n", "line 3"),
        ("[scenario]\nname = x\nchecks = hopf\n[space]\nkind = cp\nn = 2\n[object]\ntype = sphere\nradius = 1\ngrid = 1\n", "line 10"),
        ("[scenario]\nname = x\nchecks = hopf\ngrid = 2 2\n[space]\nkind = cp\nn = 2\n[object]\ntype = sphere\nradius = 1\n", "line 4"),
        ("[scenario]\nname = x\nchecks = duality\n[space]\nkind = cp\nn = 2\n[object]\ntype = sphere\nradius = 1\n", "line 3"),
        ("[scenario]\nname = x\nchecks = duality\n[space]\nkind = cp\nn = 2\n[object]\ntype = variety\npolynomial = file:missing.poly\n", "line 9"),
    ];
    for (k, (text, line)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("bad{k}.cfg"));
        std::fs::write(&path, text).unwrap();
        let o = lab(&["run", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "case {k}");
        assert!(stderr(&o).contains(line), "case {k}: {}", stderr(&o));
    }
}

#[test]
fn files_resolve_relative_to_the_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cubic.poly"),
        "# Fermat cubic\n1 0 : 3 0 0\n1 0 : 0 3 0\n1 0 : 0 0 3\n",
    )
    .unwrap();
    std::fs::write(
        dir.path().join("cubic.cfg"),
        "[scenario]\nname = cubic\nchecks = duality singular_locus\n[space]\nkind = cp\nn = 2\n[object]\ntype = variety\npolynomial = file:cubic.poly\n[params]\nsamples = 10\nduality_radii = 0.3 0.9\nbiduality_points = 5\n",
    )
    .unwrap();
    let o = lab(&["run", dir.path().join("cubic.cfg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));

    std::fs::write(dir.path().join("bad.poly"), "1 0 : 3 0 0\n1 0 : 0 2 0\n").unwrap();
    std::fs::write(
        dir.path().join("bad.cfg"),
        "[scenario]\nname = bad\nchecks = duality\n[space]\nkind = cp\nn = 2\n[object]\ntype = variety\npolynomial = file:bad.poly\n",
    )
    .unwrap();
    let o = lab(&["run", dir.path().join("bad.cfg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("homogeneous"), "{}", stderr(&o));
}

#[test]
fn custom_chart_scenario() {
    let dir = tempfile::tempdir().unwrap();
    // [1 : w : t] with t real: a real hypersurface of CP^2
    std::fs::write(
        dir.path().join("plane.chart"),
        "origin 1, 0, 0.2\naxis 0, 1, 0\ndomain -0.4 0.4\naxis 0, 0 1, 0\ndomain -0.4 0.4\naxis 0, 0, 1\ndomain -0.3 0.3\n",
    )
    .unwrap();
    std::fs::write(
        dir.path().join("chart.cfg"),
        "[scenario]\nname = chart\nchecks = spectrum structure hopf\ngrid = 2 2 2\n[space]\nkind = cp\nn = 2\n[object]\ntype = custom_chart\nfile = plane.chart\n",
    )
    .unwrap();
    let out = tempfile::tempdir().unwrap();
    let o = lab(&[
        "run",
        dir.path().join("chart.cfg").to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    let r = json(out.path());
    let checks = r["checks"].as_array().unwrap();
    let spec = checks.iter().find(|c| c["name"] == "spectrum").unwrap();
    assert_eq!(spec["passed"], true);
    assert!(spec["summary"].as_str().unwrap().contains("no closed-form"));
    let st = checks.iter().find(|c| c["name"] == "structure").unwrap();
    assert_eq!(st["passed"], true);
    // the exit code follows the checks
    let expected = if r["passed"] == true { 0 } else { 1 };
    assert_eq!(o.status.code(), Some(expected));
}

#[test]
fn sphere_center_relabeling() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("s.cfg"),
        "[scenario]\nname = s\nchecks = spectrum hopf\ngrid = 2 2 2\n[space]\nkind = cp\nn = 2\n[object]\ntype = sphere\nradius = 0.8\ncenter = 2\n",
    )
    .unwrap();
    let o = lab(&["run", dir.path().join("s.cfg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn singular_sextic_records_skipped_scales() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&[
        "run",
        "singular_sextic",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let csv = std::fs::read_to_string(dir.path().join("blowup_probe.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);
    assert!(csv.contains("singular"));
    let r = json(dir.path());
    let sl = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "singular_locus")
        .unwrap();
    assert_eq!(sl["passed"], true);
    assert_eq!(
        o.status.code(),
        Some(if r["passed"] == true { 0 } else { 1 })
    );
}
