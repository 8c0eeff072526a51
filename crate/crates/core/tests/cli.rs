use std::path::Path;
use std::process::Command;

use chainmap::cli::{run_dynamics, run_map, tebd_vs_dense, tiny_lattice, RunConfig};
use chainmap::chain::SystemSpec;
use chainmap::specdens::overdamped_brownian;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chainmap"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn flat_density_maps_to_constant_site_energies() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::from_toml(
        r#"
        [spectral_density]
        family = "power_law"
        alpha = 1.0
        s = 0.0
        omega_c = 800.0
        [mapping]
        n_chain = 30
        "#,
    )
    .unwrap();
    let out = run_map(&cfg, dir.path(), dir.path()).unwrap();
    let text = std::fs::read_to_string(&out.files[0]).unwrap();
    for row in csv_rows(&text) {
        let eps: f64 = row[1].parse().unwrap();
        assert!((eps - 400.0).abs() < 1e-9, "{row:?}");
    }
}

#[test]
fn obo_summary_reports_cut_off_reorganization_energy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::from_toml(
        r#"
        [spectral_density]
        family = "overdamped_brownian"
        lambda = 100.0
        gamma = 53.0
        [mapping]
        n_chain = 40
        "#,
    )
    .unwrap();
    let out = run_map(&cfg, dir.path(), dir.path()).unwrap();
    let lambda = out.summary.get_f64("lambda_cm1").unwrap();
    let expected = 100.0 * 2.0 / std::f64::consts::PI * 20f64.atan();
    assert!((lambda - expected).abs() < 1e-6, "{lambda} vs {expected}");
    assert!((lambda - 96.8).abs() < 0.05);
    assert_eq!(out.summary.get("szego"), Some("\"in_class\""));
    // the summary is itself TOML
    let back: toml::Table = std::fs::read_to_string(out.files.last().unwrap()).unwrap().parse().unwrap();
    assert_eq!(back["n_chain"].as_integer(), Some(40));
}

#[test]
fn high_energy_line_changes_every_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let ar = |s_h: f64| {
        format!(
            r#"
            [spectral_density]
            family = "adolphs_renger"
            lambda = 100.0
            s_h = {s_h}
            omega_h = 180.0
            omega_1 = 0.5
            omega_2 = 1.95
            omega_c = 1000.0
            [mapping]
            n_chain = 30
            "#
        )
    };
    let with = run_map(&RunConfig::from_toml(&ar(0.22)).unwrap(), dir.path(), dir.path()).unwrap();
    let without = run_map(&RunConfig::from_toml(&ar(0.0)).unwrap(), dir.path(), dir.path()).unwrap();
    let (a, b) = (&with.chains[0], &without.chains[0]);
    for n in 0..30 {
        assert!((a.eps[n] - b.eps[n]).abs() > 1e-9 * b.eps[n].abs(), "eps {n}");
        assert!((a.t[n] - b.t[n]).abs() > 1e-9 * b.t[n].abs(), "t {n}");
    }
    let l_with = with.summary.get_f64("lambda_cm1").unwrap();
    let l_without = without.summary.get_f64("lambda_cm1").unwrap();
    assert!((l_with - l_without - 0.22 * 180.0).abs() < 1e-6);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        r#"
        [spectral_density]
        family = "overdamped_brownian"
        lambda = 50.0
        gamma = 53.0
        [mapping]
        n_chain = 4
        [evolution]
        local_dim = 3
        t_final = 0.02
        dt = 0.002
        measure_stride = 1
        chi_max = 6
        "#,
    );
    let mut outputs = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("o{k}"));
        let st = bin().args(["dynamics", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]).output().unwrap();
        assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
        outputs.push((
            std::fs::read(out.join("run.trajectory.csv")).unwrap(),
            std::fs::read(out.join("run.summary")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert!(text.starts_with("t_ps,p1,p2,re_c12,im_c12,S_max,discarded\n"));
    assert_eq!(text.lines().count(), 12);
}

#[test]
fn dynamics_keeps_one_excitation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::from_toml(
        r#"
        [spectral_density]
        family = "overdamped_brownian"
        lambda = 200.0
        gamma = 53.0
        [mapping]
        n_chain = 6
        [evolution]
        local_dim = 4
        chi_max = 8
        t_final = 0.1
        record_occupations = true
        excited_site = 2
        "#,
    )
    .unwrap();
    let out = run_dynamics(&cfg, dir.path(), dir.path(), |_, _| {}).unwrap();
    let tr = &out.trajectory;
    assert_eq!(tr.p2[0], 1.0);
    assert!(tr.conservation_excess() < 1e-8);
    assert!(tr.norm_excess() < 1e-8);
    assert!(out.files.iter().any(|p| p.ends_with("run.occupations.csv")));
    assert!(out.summary.get_f64("coherence_lifetime_ps").is_some());
}

#[test]
fn overrides_and_thread_settings_reach_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "[spectral_density]\nfamily = \"power_law\"\nalpha = 1.0\ns = 1.0\nomega_c = 1000.0\n",
    );
    let st = bin()
        .env("CHAINMAP_THREADS", "2")
        .args(["map", cfg.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()])
        .args(["--override", "mapping.n_chain=7", "--override", "output.stem=ohm", "--override", "mapping.method=little_q"])
        .output()
        .unwrap();
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    let text = std::fs::read_to_string(dir.path().join("ohm.chain.csv")).unwrap();
    assert_eq!(csv_rows(&text).len(), 7);
    assert!(text.contains("AnalyticLittleQJacobi"));
    let st = bin().args(["map", cfg.to_str().unwrap(), "--threads", "1", "--out-dir", dir.path().to_str().unwrap()]).output().unwrap();
    assert!(st.status.success());
}

#[test]
fn every_error_is_one_coded_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "[spectral_density]\nfamily = \"power_law\"\nalpha = 1.0\ns = 1.0\nomega_c = 1000.0\n[mapping]\nn_chians = 3\n");
    let negative = write(dir.path(), "neg.toml", "[spectral_density]\nfamily = \"overdamped_brownian\"\nlambda = -1.0\ngamma = 53.0\n");
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["map", "/nonexistent/x.toml"], "error[E_CONFIG]"),
        (vec!["map", bad.to_str().unwrap()], "error[E_CONFIG]"),
        (vec!["map", negative.to_str().unwrap()], "error[E_INVALID_PARAMETER]"),
        (vec!["explode", bad.to_str().unwrap()], "error[E_USAGE]"),
        (vec!["map", bad.to_str().unwrap(), "--override", "nonsense"], "error[E_CONFIG]"),
    ];
    for (args, prefix) in cases {
        let st = bin().args(&args).args(["--out-dir", dir.path().to_str().unwrap()]).output().unwrap();
        assert!(!st.status.success(), "{args:?}");
        let err = String::from_utf8_lossy(&st.stderr);
        let lines: Vec<&str> = err.lines().collect();
        assert_eq!(lines.len(), 1, "{args:?}: {err}");
        assert!(lines[0].starts_with(prefix), "{args:?}: {err}");
    }
}

#[test]
fn coarse_step_breaks_the_order_check() {
    let j = overdamped_brownian(100.0, 53.0, 1060.0).unwrap();
    let lat = tiny_lattice(&j, &SystemSpec::dimer(100.0, 0.0, 100.0), 2, 3).unwrap();
    let cmp = tebd_vs_dense(&lat, 0.1, 0.5, 2).unwrap();
    let ratio = cmp.coarse / cmp.fine;
    assert!(!(3.0..=5.0).contains(&ratio), "ratio {ratio}");
}
