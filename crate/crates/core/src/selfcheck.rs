//! The invariant suite behind the `check` verb.

use std::f64::consts::{FRAC_PI_2, LN_2};

use crate::{
    config::figure_preset,
    dynamics::{evolve, field_density, JcmConfig},
    error::Result,
    fock::{build_sdfs_oracle, inner_product, FockVector},
    observables::{atomic_inversion, field_entropy, gram, phase_distribution, q_grid, uniform_etas, QGridSpec},
    sdfs::{choose_truncation, photon_distribution, sdfs_amplitude, sdfs_overlap, sdfs_state, SdfsParams},
    C64,
};

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, worst: f64, tol: f64) -> CheckOutcome {
    CheckOutcome { name, passed: worst <= tol, detail: format!("worst {worst:.3e} (tol {tol:.0e})") }
}

fn grid_params() -> Vec<SdfsParams> {
    let alphas = [C64::new(0.0, 0.0), C64::new(0.5, 0.0), C64::new(3.0, 0.0), C64::new(1.0, 1.0)];
    let mut out = Vec::new();
    for alpha in alphas {
        for r in [0.0, 0.3, 1.0] {
            for phi in [0.0, FRAC_PI_2] {
                for m in 0..3 {
                    out.push(SdfsParams::new(alpha, r, phi, m).expect("valid grid point"));
                }
            }
        }
    }
    out
}

fn oracle_equivalence() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for p in grid_params() {
        let n = choose_truncation(&p, 1e-12)?;
        let oracle = build_sdfs_oracle(&p, 2 * (n + 1))?;
        for k in 0..=n {
            worst = worst.max((sdfs_amplitude(&p, k) - oracle.get(k)).norm());
        }
    }
    Ok(outcome("amplitudes match the matrix-exponential oracle", worst, 1e-8))
}

fn overlap_consistency() -> Result<CheckOutcome> {
    let ps = [
        SdfsParams::new(C64::new(1.0, -0.5), 0.7, 0.4, 2)?,
        SdfsParams::new(C64::new(-0.3, 1.2), 0.2, 2.0, 1)?,
        SdfsParams::new(C64::new(2.0, 0.0), 0.0, 0.0, 3)?,
        SdfsParams::new(C64::new(0.0, 0.0), 1.1, 5.0, 0)?,
    ];
    let mut worst = 0.0f64;
    for p1 in &ps {
        for p2 in &ps {
            let n = choose_truncation(p1, 1e-12)?.max(choose_truncation(p2, 1e-12)?);
            let dim = 2 * (n + 1);
            let want = inner_product(&build_sdfs_oracle(p1, dim)?, &build_sdfs_oracle(p2, dim)?)?;
            let got = sdfs_overlap(p1, p2);
            worst = worst
                .max((got - want).norm())
                .max((got - sdfs_overlap(p2, p1).conj()).norm());
        }
    }
    Ok(outcome("overlaps match oracle inner products", worst, 1e-7))
}

fn conservation() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for name in ["fig1a", "fig1b", "fig1c"] {
        let cfg = figure_preset(name)?;
        let n = choose_truncation(&cfg.state, cfg.tail_tol)?;
        let q = sdfs_state(&cfg.state, n)?;
        let jcm = JcmConfig::new(cfg.coupling, cfg.detuning_ratio, n)?;
        for t in cfg.times() {
            worst = worst.max((evolve(&q, t, &jcm)?.total_probability() - 1.0).abs());
        }
    }
    Ok(outcome("probability conservation on fig1 presets", worst, 1e-10))
}

fn entropy_bounds() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for name in ["fig2a", "fig2b", "fig2c"] {
        let cfg = figure_preset(name)?;
        let n = choose_truncation(&cfg.state, cfg.tail_tol)?;
        let q = sdfs_state(&cfg.state, n)?;
        let jcm = JcmConfig::new(cfg.coupling, cfg.detuning_ratio, n)?;
        for t in cfg.times() {
            let e = field_entropy(&gram(&field_density(&evolve(&q, t, &jcm)?)))?;
            worst = worst
                .max(-e.entropy)
                .max(e.entropy - LN_2)
                .max((e.lambda_plus + e.lambda_minus - 1.0).abs());
            if t == 0.0 {
                worst = worst.max(e.entropy);
            }
        }
    }
    Ok(outcome("entropy bounds and initial purity on fig2 presets", worst, 1e-10))
}

fn vacuum_rabi() -> Result<CheckOutcome> {
    let q = FockVector::basis(0, 2)?;
    let jcm = JcmConfig::resonant(1)?;
    let mut worst = 0.0f64;
    for k in 0..=1000 {
        let t = 10.0 * k as f64 / 1000.0;
        worst = worst.max((atomic_inversion(&evolve(&q, t, &jcm)?) - (2.0 * t).cos()).abs());
    }
    Ok(outcome("vacuum inversion equals cos 2λt", worst, 1e-12))
}

fn coherent_poisson() -> Result<CheckOutcome> {
    let p = SdfsParams::new(C64::new(3.0, 0.0), 0.0, 0.0, 0)?;
    let dist = photon_distribution(&p, choose_truncation(&p, 1e-12)?)?;
    let mut poisson = (-9.0f64).exp();
    let mut worst = 0.0f64;
    for (n, prob) in dist.probs.iter().enumerate() {
        if n > 0 {
            poisson *= 9.0 / n as f64;
        }
        worst = worst.max((prob - poisson).abs());
    }
    Ok(outcome("coherent photon statistics are Poissonian", worst, 1e-10))
}

fn phase_and_q_normalization() -> Result<Vec<CheckOutcome>> {
    let p = SdfsParams::new(C64::new(3.0, 0.0), 1.0, 0.0, 1)?;
    let n = choose_truncation(&p, 1e-12)?;
    let q = sdfs_state(&p, n)?;
    let jcm = JcmConfig::resonant(n)?;
    let etas = uniform_etas(512);
    let (mut phase_worst, mut q_worst) = (0.0f64, 0.0f64);
    for t in [0.0, 5.0, 10.1, 20.2] {
        let st = evolve(&q, t, &jcm)?;
        phase_worst = phase_worst.max((phase_distribution(&st, &etas).integral() - 1.0).abs());
        q_worst = q_worst.max((q_grid(&st, &QGridSpec::default()).integral() - 1.0).abs());
    }
    Ok(vec![
        outcome("phase distribution integrates to one", phase_worst, 1e-6),
        outcome("Q function integrates to one", q_worst, 1e-3),
    ])
}

/// Runs every check; errors inside a check are reported as failures.
pub fn run_checks() -> Vec<CheckOutcome> {
    let single: [(&'static str, fn() -> Result<CheckOutcome>); 6] = [
        ("oracle equivalence", oracle_equivalence),
        ("overlap consistency", overlap_consistency),
        ("conservation", conservation),
        ("entropy bounds", entropy_bounds),
        ("vacuum Rabi", vacuum_rabi),
        ("coherent Poisson", coherent_poisson),
    ];
    let mut out = Vec::new();
    for (name, f) in single {
        out.push(f().unwrap_or_else(|e| CheckOutcome { name, passed: false, detail: e.to_string() }));
    }
    match phase_and_q_normalization() {
        Ok(v) => out.extend(v),
        Err(e) => out.push(CheckOutcome { name: "phase and Q normalization", passed: false, detail: e.to_string() }),
    }
    out
}
