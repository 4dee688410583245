use std::{fs, path::Path, process::Command};

const BIN: &str = env!("CARGO_BIN_EXE_sdfs-jcm");

fn sdfs(args: &[&str]) -> std::process::Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn read_csv(path: &Path) -> (String, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn fig1a_inversion_starts_excited() {
    let dir = tempfile::tempdir().unwrap();
    let out = sdfs(&["preset", "fig1a", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("inversion.csv"));
    assert_eq!(header, "lambda_t,W");
    assert_eq!(rows.len(), 2000);
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[0][1] - 1.0).abs() <= 1e-10);
    let summary = fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert!(summary.contains("n_max = ") && summary.contains("wall_time_s = "));
}

#[test]
fn fig2a_entropy_starts_pure() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(sdfs(&["preset", "fig2a", "--out", dir.path().to_str().unwrap()]).status.code(), Some(0));
    let (header, rows) = read_csv(&dir.path().join("entropy.csv"));
    assert_eq!(header, "lambda_t,S_f,lambda_plus,lambda_minus");
    assert!(rows[0][1] <= 1e-10);
}

#[test]
fn fig5a_q_grid_is_normalized() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(sdfs(&["preset", "fig5a", "--out", dir.path().to_str().unwrap()]).status.code(), Some(0));
    let (header, rows) = read_csv(&dir.path().join("qfunc.csv"));
    assert_eq!(header, "x,y,Q");
    assert_eq!(rows.len(), 201 * 201);
    let cell = (16.0f64 / 200.0).powi(2);
    let total: f64 = rows.iter().map(|r| r[2]).sum::<f64>() * cell;
    assert!((total - 1.0).abs() <= 1e-3, "integral {total}");
}

#[test]
fn remaining_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(sdfs(&["preset", "fig3a", "--out", &format!("{d}/p")]).status.code(), Some(0));
    assert_eq!(sdfs(&["preset", "fig4a", "--out", &format!("{d}/f")]).status.code(), Some(0));
    assert_eq!(read_csv(&dir.path().join("p/photon_dist.csv")).0, "lambda_t,n,P");
    let (header, rows) = read_csv(&dir.path().join("f/phase_dist.csv"));
    assert_eq!(header, "lambda_t,eta,P");
    assert_eq!(rows.len(), 251 * 512);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let body = |out: &str| {
        format!(
            "# determinism probe\nalpha0_re = 1.5\nalpha0_im = -0.5\nr = 0.7\nphi = 1.1\nm = 1\n\
             detuning_ratio = 0.4\nt_max_scaled = 12\nt_points = 300\n\
             observables = inversion, entropy, photon_dist, phase_dist, qfunc\neta_points = 256\n\
             q_nx = 41\nq_ny = 41\noutput_dir = {out}\n"
        )
    };
    let mut produced = Vec::new();
    for name in ["a", "b"] {
        let out = dir.path().join(name);
        fs::write(&cfg, body(out.to_str().unwrap())).unwrap();
        let res = sdfs(&["run", cfg.to_str().unwrap()]);
        assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
        produced.push(out);
    }
    for file in ["inversion.csv", "entropy.csv", "photon_dist.csv", "phase_dist.csv", "qfunc.csv"] {
        let a = fs::read(produced[0].join(file)).unwrap();
        let b = fs::read(produced[1].join(file)).unwrap();
        assert!(!a.is_empty() && a == b, "{file} differs");
        assert!(!a.contains(&b'\r'));
    }
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "alpha0_re = 3\nr = -1\n").unwrap();
    let out = sdfs(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains('r'));

    fs::write(&cfg, "alpha0_re = 3\nbogus = 1\n").unwrap();
    let out = sdfs(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));

    let out = sdfs(&["run", dir.path().join("missing.cfg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn coarse_phase_grid_is_an_invariant_failure() {
    // 64 samples cannot resolve the 80 Fock components of this state
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("coarse.cfg");
    let out = dir.path().join("out");
    fs::write(
        &cfg,
        format!("alpha0_re = 1.5\nalpha0_im = -0.5\nr = 0.7\nphi = 1.1\nm = 1\nt_max_scaled = 12\nt_points = 300\nobservables = phase_dist\neta_points = 64\noutput_dir = {}\n", out.display()),
    )
    .unwrap();
    let res = sdfs(&["run", cfg.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("status = invariant failure"));
}

#[test]
fn unknown_preset_lists_names() {
    let out = sdfs(&["preset", "fig9z"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("fig1a") && err.contains("fig5c"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(sdfs(&[]).status.code(), Some(2));
    assert_eq!(sdfs(&["overlap", "--p1", "1,0,0,0"]).status.code(), Some(2));
}

#[test]
fn overlap_verb_prints_magnitude_and_phase() {
    let out = sdfs(&["overlap", "--p1", "3,0,1,0,1", "--p2", "3,0,1,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let field = |key: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(key)).unwrap();
        line.split('=').nth(1).unwrap().trim().parse().unwrap()
    };
    assert!((field("magnitude") - 1.0).abs() <= 1e-10);
    assert!(field("phase").abs() <= 1e-10);

    let out = sdfs(&["overlap", "--p1", "3,0,1,0,0", "--p2", "3,0,1,0,2"]);
    let text = String::from_utf8_lossy(&out.stdout);
    let mag: f64 = text.lines().find(|l| l.starts_with("magnitude")).unwrap().split('=').nth(1).unwrap().trim().parse().unwrap();
    assert!(mag <= 1e-10);
}

#[test]
fn check_verb_passes() {
    let out = sdfs(&["check"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.lines().all(|l| l.starts_with("[PASS]")));
}
