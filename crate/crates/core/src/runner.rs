//! Executes a [`RunConfig`]: one CSV per observable plus `summary.txt`.
//!
//! CSV numbers use `{:.16e}` (17 significant digits) and `\n` endings, and
//! rows are assembled in time order whatever the worker count, so identical
//! configs give byte-identical files.

use std::{
    fs::{self, File},
    io::{BufWriter, Write},
    path::{Path, PathBuf},
    time::Instant,
};

use rayon::prelude::*;

use crate::{
    config::{Observable, RunConfig},
    dynamics::{evolve, field_density, EvolvedState, JcmConfig},
    error::Result,
    observables::{
        atomic_inversion, field_entropy, gram, phase_distribution, photon_number_dist_t, q_grid,
        uniform_etas,
    },
    sdfs::{choose_truncation, sdfs_state},
};

pub const CONSERVATION_TOL: f64 = 1e-10;
pub const NORMALIZATION_TOL: f64 = 1e-10;
pub const PHASE_NORM_TOL: f64 = 1e-6;
pub const Q_NORM_TOL: f64 = 1e-3;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunSummary {
    pub n_max: usize,
    /// max_t |Σ_n (|A_n|² + |B_n|²) − 1|
    pub conservation_residual: f64,
    /// |‖q‖² − 1| of the initial field
    pub normalization_residual: f64,
    pub entropy_bound_residual: Option<f64>,
    pub phase_norm_residual: Option<f64>,
    pub q_norm_residual: Option<f64>,
    pub wall_time_s: f64,
    pub files: Vec<PathBuf>,
    /// Human-readable descriptions of every residual over tolerance.
    pub failures: Vec<String>,
}

impl RunSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn render(&self) -> String {
        let opt = |x: Option<f64>| x.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3e}"));
        let mut s = String::new();
        s += &format!("n_max = {}\n", self.n_max);
        s += &format!("conservation_residual = {:.3e}\n", self.conservation_residual);
        s += &format!("normalization_residual = {:.3e}\n", self.normalization_residual);
        s += &format!("entropy_bound_residual = {}\n", opt(self.entropy_bound_residual));
        s += &format!("phase_norm_residual = {}\n", opt(self.phase_norm_residual));
        s += &format!("q_norm_residual = {}\n", opt(self.q_norm_residual));
        s += &format!("wall_time_s = {:.3}\n", self.wall_time_s);
        s += &format!("status = {}\n", if self.passed() { "ok" } else { "invariant failure" });
        for f in &self.failures {
            s += &format!("failure = {f}\n");
        }
        s
    }
}

/// Fixed 17-significant-digit formatting; −0 prints as 0.
pub fn fmt_num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn csv_writer(dir: &Path, name: &str, header: &str) -> Result<(PathBuf, BufWriter<File>)> {
    let path = dir.join(name);
    let mut w = BufWriter::new(File::create(&path)?);
    w.write_all(header.as_bytes())?;
    w.write_all(b"\n")?;
    Ok((path, w))
}

fn check(failures: &mut Vec<String>, what: &str, value: f64, tol: f64) {
    if !(value <= tol) {
        failures.push(format!("{what} {value:.3e} exceeds {tol:.0e}"));
    }
}

pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    let started = Instant::now();
    let n_max = choose_truncation(&cfg.state, cfg.tail_tol)?;
    let q = sdfs_state(&cfg.state, n_max)?;
    let jcm = JcmConfig::new(cfg.coupling, cfg.detuning_ratio, n_max)?;
    fs::create_dir_all(&cfg.output_dir)?;

    let mut summary = RunSummary { n_max, normalization_residual: (q.norm_sqr() - 1.0).abs(), ..Default::default() };

    let times = cfg.times();
    let needs_sweep = cfg.observables.iter().any(|o| *o != Observable::Qfunc);
    let states: Vec<EvolvedState> = if needs_sweep {
        times.par_iter().map(|&t| evolve(&q, t, &jcm)).collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    summary.conservation_residual =
        states.iter().map(|st| (st.total_probability() - 1.0).abs()).fold(0.0, f64::max);

    for obs in &cfg.observables {
        let dir = cfg.output_dir.as_path();
        let path = match obs {
            Observable::Inversion => {
                let (path, mut w) = csv_writer(dir, "inversion.csv", "lambda_t,W")?;
                for st in &states {
                    writeln!(w, "{},{}", fmt_num(st.t_scaled), fmt_num(atomic_inversion(st)))?;
                }
                w.flush()?;
                path
            }
            Observable::Entropy => {
                let (path, mut w) = csv_writer(dir, "entropy.csv", "lambda_t,S_f,lambda_plus,lambda_minus")?;
                let points = states
                    .par_iter()
                    .map(|st| field_entropy(&gram(&field_density(st))))
                    .collect::<Result<Vec<_>>>()?;
                let mut worst = 0.0f64;
                for (st, e) in states.iter().zip(&points) {
                    worst = worst
                        .max(-e.entropy)
                        .max(e.entropy - std::f64::consts::LN_2)
                        .max((e.lambda_plus + e.lambda_minus - 1.0).abs());
                    writeln!(
                        w,
                        "{},{},{},{}",
                        fmt_num(st.t_scaled),
                        fmt_num(e.entropy),
                        fmt_num(e.lambda_plus),
                        fmt_num(e.lambda_minus)
                    )?;
                }
                w.flush()?;
                summary.entropy_bound_residual = Some(worst);
                path
            }
            Observable::PhotonDist => {
                let (path, mut w) = csv_writer(dir, "photon_dist.csv", "lambda_t,n,P")?;
                for st in &states {
                    let fd = field_density(st);
                    let t = fmt_num(st.t_scaled);
                    for n in 0..st.field_dim() {
                        writeln!(w, "{t},{n},{}", fmt_num(photon_number_dist_t(&fd, n)?))?;
                    }
                }
                w.flush()?;
                path
            }
            Observable::PhaseDist => {
                let (path, mut w) = csv_writer(dir, "phase_dist.csv", "lambda_t,eta,P")?;
                let etas = uniform_etas(cfg.eta_points);
                let dists: Vec<_> = states.par_iter().map(|st| phase_distribution(st, &etas)).collect();
                let mut worst = 0.0f64;
                for (st, pd) in states.iter().zip(&dists) {
                    worst = worst.max((pd.integral() - 1.0).abs());
                    let t = fmt_num(st.t_scaled);
                    for (eta, p) in pd.etas.iter().zip(&pd.values) {
                        writeln!(w, "{t},{},{}", fmt_num(*eta), fmt_num(*p))?;
                    }
                }
                w.flush()?;
                summary.phase_norm_residual = Some(worst);
                path
            }
            Observable::Qfunc => {
                let (path, mut w) = csv_writer(dir, "qfunc.csv", "x,y,Q")?;
                let st = evolve(&q, cfg.q_time, &jcm)?;
                let grid = q_grid(&st, &cfg.q_grid);
                for (x, row) in grid.x_axis.iter().zip(&grid.values) {
                    let xs = fmt_num(*x);
                    for (y, v) in grid.y_axis.iter().zip(row) {
                        writeln!(w, "{xs},{},{}", fmt_num(*y), fmt_num(*v))?;
                    }
                }
                w.flush()?;
                summary.q_norm_residual = Some((grid.integral() - 1.0).abs());
                path
            }
        };
        summary.files.push(path);
    }

    let mut failures = Vec::new();
    check(&mut failures, "probability conservation residual", summary.conservation_residual, CONSERVATION_TOL);
    check(&mut failures, "normalization residual", summary.normalization_residual, NORMALIZATION_TOL);
    if let Some(r) = summary.entropy_bound_residual {
        check(&mut failures, "entropy bound residual", r, 1e-10);
    }
    if let Some(r) = summary.phase_norm_residual {
        check(&mut failures, "phase normalization residual", r, PHASE_NORM_TOL);
    }
    if let Some(r) = summary.q_norm_residual {
        check(&mut failures, "Q normalization residual", r, Q_NORM_TOL);
    }
    summary.failures = failures;
    summary.wall_time_s = started.elapsed().as_secs_f64();

    let summary_path = cfg.output_dir.join("summary.txt");
    fs::write(&summary_path, summary.render())?;
    summary.files.push(summary_path);
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_num(-0.0), "0.0000000000000000e0");
        assert_eq!(fmt_num(-0.125), "-1.2500000000000000e-1");
    }
}
