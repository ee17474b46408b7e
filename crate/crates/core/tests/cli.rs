use std::path::Path;
use std::process::{Command, Output};

use casimir_core::optical_data::DrudeParams;
use casimir_core::oracles::drude_dispersion_closed_form;

fn casimir(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn write_drude_table(path: &Path, p: DrudeParams) {
    let mut text = String::from("# material = synthetic\nomega_eV,eps2\n");
    for i in 0..25 {
        let w = 0.1 * 10f64.powf(i as f64 / 24.0);
        text.push_str(&format!("{w:.17e},{:.17e}\n", p.eps2(w)));
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn fit_recovers_synthetic_drude() {
    let dir = tempfile::tempdir().unwrap();
    write_drude_table(
        &dir.path().join("syn.csv"),
        DrudeParams::new(9.0, 0.035).unwrap(),
    );
    let o = casimir(
        &["fit", "--material", "syn=syn.csv", "--out", "o"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let grab = |key: &str| -> f64 {
        let rest = out.split(key).nth(1).unwrap();
        rest.split_whitespace()
            .next()
            .unwrap()
            .trim_end_matches(',')
            .parse()
            .unwrap()
    };
    assert!((grab("omega_p = ") / 9.0 - 1.0).abs() < 1e-3);
    assert!((grab("gamma = ") / 0.035 - 1.0).abs() < 1e-3);
    assert!(dir.path().join("o/syn_fit.json").exists());
}

#[test]
fn negative_eps2_is_an_input_error_naming_the_row() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.csv"),
        "omega_eV,eps2\n0.1,3.0\n0.2,-1.0\n0.3,1.0\n",
    )
    .unwrap();
    let o = casimir(&["fit", "--material", "bad=bad.csv"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn missing_file_and_bad_flags_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = casimir(&["fit", "--material", "x=nope.csv"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = casimir(&["eta", "--lmin", "-1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = casimir(&["frobnicate"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn epsilon_pure_drude_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let o = casimir(
        &["epsilon", "--material", "d=drude:9,0.035", "--out", "o"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("o/d_eps.csv")).unwrap();
    let p = DrudeParams::new(9.0, 0.035).unwrap();
    let mut n = 0;
    for row in data_rows(&text).iter().filter(|r| r[0] == "eps_imag") {
        let xi: f64 = row[1].parse().unwrap();
        let eps: f64 = row[2].parse().unwrap();
        // printed to nine significant digits
        assert!(
            (eps / drude_dispersion_closed_form(p, xi) - 1.0).abs() < 1e-8,
            "xi={xi}"
        );
        n += 1;
    }
    assert!(n > 90);
}

#[test]
fn epsilon_reproduces_table_samples_and_names_files() {
    let dir = tempfile::tempdir().unwrap();
    write_drude_table(
        &dir.path().join("syn.csv"),
        DrudeParams::new(9.0, 0.035).unwrap(),
    );
    let o = casimir(
        &[
            "epsilon",
            "--material",
            "syn=syn.csv",
            "--material",
            "cu",
            "--out",
            "o",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("o/syn_eps.csv").exists());
    assert!(dir.path().join("o/cu_eps.csv").exists());
    let text = std::fs::read_to_string(dir.path().join("o/syn_eps.csv")).unwrap();
    let p = DrudeParams::new(9.0, 0.035).unwrap();
    let rows: Vec<_> = data_rows(&text)
        .into_iter()
        .filter(|r| r[0] == "eps2_real")
        .map(|r| (r[1].parse::<f64>().unwrap(), r[2].parse::<f64>().unwrap()))
        .filter(|(w, _)| (0.1..=1.0).contains(w))
        .collect();
    assert_eq!(rows.len(), 25);
    for (w, e) in rows {
        assert!((e / p.eps2(w) - 1.0).abs() < 1e-8, "w={w}");
    }
}

#[test]
fn eta_perfect_mirror_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = casimir(
        &[
            "eta",
            "--material",
            "ideal=perfect",
            "--lpoints",
            "4",
            "--out",
            "o",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("o/ideal_eta.csv")).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 4);
    for r in rows {
        for col in [2, 4] {
            let eta: f64 = r[col].parse().unwrap();
            assert!((eta - 1.0).abs() < 1e-6);
        }
    }
    assert!(!stderr(&o).contains("warning"), "{}", stderr(&o));
}

#[test]
fn outputs_are_byte_identical_and_carry_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| ["eta", "--lpoints", "5", "--out", out];
    assert_eq!(casimir(&args("a"), dir.path()).status.code(), Some(0));
    assert_eq!(casimir(&args("b"), dir.path()).status.code(), Some(0));
    for f in [
        "au_eta.csv",
        "cu_eta.csv",
        "au_eta.json",
        "comparison.csv",
        "reference_comparison.csv",
    ] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
    let au = std::fs::read_to_string(dir.path().join("a/au_eta.csv")).unwrap();
    assert!(au.starts_with("# casimir eta\n# config_sha256 = "));
    assert!(au.contains("# dataset = builtin:au: "));
    assert!(au.contains("# dataset_sha256 = "));
    assert!(au.contains("L_um,E_pp_J_per_m2,eta_E,F_pp_N_per_m2,eta_F,est_rel_error\n"));
    // nine significant digits, scientific
    let first = &data_rows(&au)[0][2];
    assert_eq!(first.split('e').next().unwrap().len(), 10, "{first}");
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a/au_eta.json")).unwrap())
            .unwrap();
    assert!(meta["drude"]["omega_p"].as_f64().unwrap() > 0.0);
    assert_eq!(meta["quadrature"]["scheme"], "gauss_legendre_mapped");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "materials = [\"d=drude:9,0.035\"]\nlmin = 1.0\nlmax = 2.0\nlpoints = 7\nout = \"res\"\n",
    )
    .unwrap();
    let o = casimir(
        &["eta", "--config", "run.toml", "--lpoints", "2"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("res/d_eta.csv")).unwrap();
    let ls: Vec<f64> = data_rows(&text)
        .iter()
        .map(|r| r[0].parse().unwrap())
        .collect();
    assert_eq!(ls, vec![1.0, 2.0]);
    std::fs::write(dir.path().join("typo.toml"), "lpionts = 3\n").unwrap();
    let o = casimir(&["eta", "--config", "typo.toml"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn force_reports_sphere_plane_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = casimir(
        &[
            "force",
            "--material",
            "ideal=perfect",
            "--lmin",
            "1",
            "--lmax",
            "1",
            "--lpoints",
            "1",
            "--radius-cm",
            "10",
            "--out",
            "o",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("o/ideal_force.csv")).unwrap();
    let row = &data_rows(&text)[0];
    let f: f64 = row[1].parse().unwrap();
    let k = casimir_core::PhysicalConstants::codata();
    let expected = 2.0 * std::f64::consts::PI * 0.1 * k.perfect_energy(1.0);
    assert!((f / expected - 1.0).abs() < 1e-6);
    assert_eq!(row[5], "0");
}

#[test]
fn certify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("empty.toml"), "probes = []\n").unwrap();
    let o = casimir(
        &["certify", "--config", "empty.toml", "--out", "o"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim().is_empty());

    // ħc off by 1% through c; e/ħ stays consistent.
    std::fs::write(
        dir.path().join("c.toml"),
        "c = 302790380.58\nprobes = [1.0]\nmaterials = [\"d=drude:9,0.035\"]\n",
    )
    .unwrap();
    let o = casimir(&["certify", "--config", "c.toml", "--out", "o"], dir.path());
    assert_eq!(o.status.code(), Some(1));

    std::fs::write(dir.path().join("h.toml"), "hbar = 1.06e-34\n").unwrap();
    let o = casimir(&["certify", "--config", "h.toml", "--out", "o"], dir.path());
    assert_eq!(o.status.code(), Some(1));

    std::fs::write(
        dir.path().join("fault.toml"),
        "fault = \"flip_tm_sign\"\nprobes = [1.0]\nmaterials = [\"d=drude:9,0.035\"]\n",
    )
    .unwrap();
    let o = casimir(
        &["certify", "--config", "fault.toml", "--out", "o"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    let failed: Vec<String> = stdout(&o)
        .lines()
        .filter(|l| l.contains("\"passed\":false"))
        .map(str::to_string)
        .collect();
    assert!(failed.iter().any(|l| l.contains("perfect/energy")));
    assert!(failed.iter().any(|l| l.contains("brute-force")));
}

#[test]
fn certify_default_config_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = casimir(&["certify", "--out", "o"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report = std::fs::read_to_string(dir.path().join("o/certify_report.jsonl")).unwrap();
    let records: Vec<serde_json::Value> = report
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(records.len() >= 30);
    assert!(records.iter().all(|r| r["passed"] == true));
}
