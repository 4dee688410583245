//! Run configuration: a flat `key = value` document with `#` comments, and
//! the built-in figure presets.

use std::{fmt, path::PathBuf, str::FromStr};

use crate::{
    error::{Error, Result},
    observables::{revival_time, QGridSpec},
    sdfs::SdfsParams,
    C64,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Observable {
    Inversion,
    Entropy,
    PhotonDist,
    PhaseDist,
    Qfunc,
}

impl Observable {
    pub const ALL: [Observable; 5] =
        [Self::Inversion, Self::Entropy, Self::PhotonDist, Self::PhaseDist, Self::Qfunc];

    pub fn name(self) -> &'static str {
        match self {
            Self::Inversion => "inversion",
            Self::Entropy => "entropy",
            Self::PhotonDist => "photon_dist",
            Self::PhaseDist => "phase_dist",
            Self::Qfunc => "qfunc",
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| format!("unknown observable `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub state: SdfsParams,
    pub coupling: f64,
    pub detuning_ratio: f64,
    pub t_max_scaled: f64,
    pub t_points: usize,
    pub tail_tol: f64,
    pub eta_points: usize,
    pub q_grid: QGridSpec,
    /// Scaled time of the single Q-function snapshot.
    pub q_time: f64,
    /// Sorted, without duplicates.
    pub observables: Vec<Observable>,
    pub output_dir: PathBuf,
}

impl RunConfig {
    pub fn new(state: SdfsParams) -> Self {
        Self {
            state,
            coupling: 1.0,
            detuning_ratio: 0.0,
            t_max_scaled: 25.0,
            t_points: 2000,
            tail_tol: 1e-12,
            eta_points: 512,
            q_grid: QGridSpec::default(),
            q_time: 0.0,
            observables: vec![Observable::Inversion, Observable::Entropy],
            output_dir: PathBuf::from("out"),
        }
    }

    /// Scaled times t_k = t_max·k/(t_points − 1).
    pub fn times(&self) -> Vec<f64> {
        let last = (self.t_points - 1) as f64;
        (0..self.t_points).map(|k| self.t_max_scaled * k as f64 / last).collect()
    }

    pub fn wants(&self, obs: Observable) -> bool {
        self.observables.contains(&obs)
    }

    /// Checks the cross-field invariants. `lines` maps keys to the line that
    /// set them, for diagnostics.
    fn validate(&self, line_of: impl Fn(&str) -> usize) -> Result<()> {
        let err = |key: &str, msg: String| Error::Config { line: line_of(key), key: key.into(), msg };
        if !(self.coupling.is_finite() && self.coupling > 0.0) {
            return Err(err("coupling", "must be > 0".into()));
        }
        if !self.detuning_ratio.is_finite() {
            return Err(err("detuning_ratio", "must be finite".into()));
        }
        if !(self.t_max_scaled.is_finite() && self.t_max_scaled > 0.0) {
            return Err(err("t_max_scaled", "must be > 0".into()));
        }
        if self.t_points < 2 {
            return Err(err("t_points", "must be >= 2".into()));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return Err(err("tail_tol", "must lie in (0, 1)".into()));
        }
        if self.eta_points < 1 {
            return Err(err("eta_points", "must be >= 1".into()));
        }
        if !(self.q_time.is_finite() && self.q_time >= 0.0) {
            return Err(err("q_time", "must be finite and >= 0".into()));
        }
        if self.observables.is_empty() {
            return Err(err("observables", "at least one observable is required".into()));
        }
        let g = &self.q_grid;
        if g.nx < 2 || g.ny < 2 {
            return Err(err(if g.nx < 2 { "q_nx" } else { "q_ny" }, "must be >= 2".into()));
        }
        if !(g.x_min < g.x_max) {
            return Err(err("q_x_max", "must exceed q_x_min".into()));
        }
        if !(g.y_min < g.y_max) {
            return Err(err("q_y_max", "must exceed q_y_min".into()));
        }
        if self.wants(Observable::Qfunc) {
            let radius = self.state.alpha0.norm() + 4.0;
            let covers = g.x_min <= -radius && g.x_max >= radius && g.y_min <= -radius && g.y_max >= radius;
            if !covers {
                return Err(err("q_x_min", format!("Q grid must span radius |alpha0| + 4 = {radius}")));
            }
        }
        Ok(())
    }

    /// Serialize as a config document that [`parse_config`] reads back to an
    /// identical value.
    pub fn to_config_string(&self) -> String {
        let p = &self.state;
        let g = &self.q_grid;
        let obs: Vec<&str> = self.observables.iter().map(|o| o.name()).collect();
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        put("alpha0_re", format!("{:?}", p.alpha0.re));
        put("alpha0_im", format!("{:?}", p.alpha0.im));
        put("r", format!("{:?}", p.r));
        put("phi", format!("{:?}", p.phi));
        put("m", p.m.to_string());
        put("coupling", format!("{:?}", self.coupling));
        put("detuning_ratio", format!("{:?}", self.detuning_ratio));
        put("t_max_scaled", format!("{:?}", self.t_max_scaled));
        put("t_points", self.t_points.to_string());
        put("tail_tol", format!("{:?}", self.tail_tol));
        put("eta_points", self.eta_points.to_string());
        put("q_x_min", format!("{:?}", g.x_min));
        put("q_x_max", format!("{:?}", g.x_max));
        put("q_y_min", format!("{:?}", g.y_min));
        put("q_y_max", format!("{:?}", g.y_max));
        put("q_nx", g.nx.to_string());
        put("q_ny", g.ny.to_string());
        put("q_time", format!("{:?}", self.q_time));
        put("observables", obs.join(","));
        put("output_dir", self.output_dir.display().to_string());
        out
    }
}

const KEYS: [&str; 20] = [
    "alpha0_re", "alpha0_im", "r", "phi", "m", "coupling", "detuning_ratio", "t_max_scaled",
    "t_points", "tail_tol", "eta_points", "q_x_min", "q_x_max", "q_y_min", "q_y_max", "q_nx",
    "q_ny", "q_time", "observables", "output_dir",
];

/// Parse a `key = value` document. Unknown or repeated keys are rejected;
/// missing keys take their defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut entries: Vec<(usize, &str, &str)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
            line,
            key: content.into(),
            msg: "expected `key = value`".into(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(Error::Config { line, key: key.into(), msg: "unknown key".into() });
        }
        if let Some((first, ..)) = entries.iter().find(|(_, k, _)| *k == key) {
            return Err(Error::Config { line, key: key.into(), msg: format!("already set on line {first}") });
        }
        if value.is_empty() {
            return Err(Error::Config { line, key: key.into(), msg: "missing value".into() });
        }
        entries.push((line, key, value));
    }

    let lookup = |key: &str| entries.iter().find(|(_, k, _)| *k == key).map(|&(l, _, v)| (l, v));
    let real = |key: &str, default: f64| -> Result<f64> {
        match lookup(key) {
            None => Ok(default),
            Some((line, v)) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Config { line, key: key.into(), msg: format!("expected a finite number, got `{v}`") }),
        }
    };
    let count = |key: &str, default: usize| -> Result<usize> {
        match lookup(key) {
            None => Ok(default),
            Some((line, v)) => match v.parse::<i64>() {
                Ok(n) if n >= 0 => Ok(n as usize),
                Ok(n) => Err(Error::Config { line, key: key.into(), msg: format!("must be >= 0, got {n}") }),
                Err(_) => Err(Error::Config { line, key: key.into(), msg: format!("expected an integer, got `{v}`") }),
            },
        }
    };
    let line_of = |key: &str| lookup(key).map(|(l, _)| l).unwrap_or(0);

    let r = real("r", 0.0)?;
    if r < 0.0 {
        return Err(Error::Config { line: line_of("r"), key: "r".into(), msg: format!("squeeze magnitude must be >= 0, got {r}") });
    }
    let alpha0 = C64::new(real("alpha0_re", 0.0)?, real("alpha0_im", 0.0)?);
    let state = SdfsParams::new(alpha0, r, real("phi", 0.0)?, count("m", 0)?)
        .map_err(|e| Error::Config { line: 0, key: "state".into(), msg: e.to_string() })?;

    let mut cfg = RunConfig::new(state);
    cfg.coupling = real("coupling", cfg.coupling)?;
    cfg.detuning_ratio = real("detuning_ratio", cfg.detuning_ratio)?;
    cfg.t_max_scaled = real("t_max_scaled", cfg.t_max_scaled)?;
    cfg.t_points = count("t_points", cfg.t_points)?;
    cfg.tail_tol = real("tail_tol", cfg.tail_tol)?;
    cfg.eta_points = count("eta_points", cfg.eta_points)?;
    let d = cfg.q_grid;
    cfg.q_grid = QGridSpec {
        x_min: real("q_x_min", d.x_min)?,
        x_max: real("q_x_max", d.x_max)?,
        y_min: real("q_y_min", d.y_min)?,
        y_max: real("q_y_max", d.y_max)?,
        nx: count("q_nx", d.nx)?,
        ny: count("q_ny", d.ny)?,
    };
    cfg.q_time = real("q_time", cfg.q_time)?;
    if let Some((line, v)) = lookup("observables") {
        let mut obs = v
            .split(',')
            .map(|s| s.trim().parse::<Observable>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|msg| Error::Config { line, key: "observables".into(), msg })?;
        obs.sort();
        obs.dedup();
        cfg.observables = obs;
    }
    if let Some((_, v)) = lookup("output_dir") {
        cfg.output_dir = PathBuf::from(v);
    }
    cfg.validate(line_of)?;
    Ok(cfg)
}

pub const PRESET_NAMES: [&str; 15] = [
    "fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "fig3c", "fig4a",
    "fig4b", "fig4c", "fig5a", "fig5b", "fig5c",
];

/// Time samples used by the phase-distribution presets (Δλt = 0.1).
pub const PHASE_PRESET_T_POINTS: usize = 251;

/// Parameter sets of the five figure families: r = 1, φ = 0, Δ = 0 with
/// α₀ = 3 (α₀ = 0.5 for the photon distributions) and m = 0, 1, 2 across
/// panels a-c. The Q-function panels use m = 1 at λt = 0, T_R/2 and T_R.
pub fn figure_preset(name: &str) -> Result<RunConfig> {
    let unknown = || Error::UnknownPreset { name: name.into(), valid: PRESET_NAMES.join(", ") };
    if !PRESET_NAMES.contains(&name) {
        return Err(unknown());
    }
    let family = &name[3..4];
    let panel = match &name[4..] {
        "a" => 0,
        "b" => 1,
        "c" => 2,
        _ => return Err(unknown()),
    };
    let alpha0 = if family == "3" { 0.5 } else { 3.0 };
    let m = if family == "5" { 1 } else { panel };
    let state = SdfsParams::new(C64::new(alpha0, 0.0), 1.0, 0.0, m)?;

    let mut cfg = RunConfig::new(state);
    cfg.output_dir = PathBuf::from("out").join(name);
    cfg.observables = vec![match family {
        "1" => Observable::Inversion,
        "2" => Observable::Entropy,
        "3" => Observable::PhotonDist,
        "4" => Observable::PhaseDist,
        _ => Observable::Qfunc,
    }];
    if family == "4" {
        cfg.t_points = PHASE_PRESET_T_POINTS;
    }
    if family == "5" {
        cfg.q_time = revival_time(&state)? * panel as f64 / 2.0;
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_takes_defaults() {
        let cfg = parse_config("alpha0_re = 3\nr = 1\nm = 0\n").unwrap();
        assert_eq!(cfg.state.alpha0, C64::new(3.0, 0.0));
        assert_eq!(cfg.state.r, 1.0);
        assert_eq!(cfg.detuning_ratio, 0.0);
        assert_eq!(cfg.coupling, 1.0);
        assert_eq!(cfg.t_points, 2000);
        assert_eq!(cfg.tail_tol, 1e-12);
        assert_eq!(cfg.eta_points, 512);
        assert_eq!(cfg.q_grid, QGridSpec::default());
    }

    #[test]
    fn comments_and_blank_lines() {
        let doc = "# header\n\nalpha0_re = 1.5   # trailing\nobservables = qfunc, inversion,inversion\n";
        let cfg = parse_config(doc).unwrap();
        assert_eq!(cfg.state.alpha0.re, 1.5);
        assert_eq!(cfg.observables, vec![Observable::Inversion, Observable::Qfunc]);
    }

    #[test]
    fn negative_r_names_the_key() {
        match parse_config("alpha0_re = 3\nr = -1\n") {
            Err(Error::Config { line, key, .. }) => {
                assert_eq!(key, "r");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_m_names_the_key() {
        match parse_config("m = -2") {
            Err(Error::Config { key, .. }) => assert_eq!(key, "m"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_documents() {
        for doc in ["bogus = 1", "r 1", "r = 1\nr = 2", "t_points = 1", "r = abc", "observables = wigner", "r ="] {
            assert!(matches!(parse_config(doc), Err(Error::Config { .. })), "{doc}");
        }
    }

    #[test]
    fn q_grid_must_cover_support() {
        let doc = "alpha0_re = 6\nobservables = qfunc\n";
        assert!(matches!(parse_config(doc), Err(Error::Config { .. })));
        assert!(parse_config("alpha0_re = 3\nobservables = qfunc\n").is_ok());
    }

    #[test]
    fn presets_round_trip() {
        for name in PRESET_NAMES {
            let cfg = figure_preset(name).unwrap();
            assert_eq!(parse_config(&cfg.to_config_string()).unwrap(), cfg, "{name}");
        }
    }

    #[test]
    fn preset_parameters() {
        let b = figure_preset("fig1b").unwrap();
        assert_eq!((b.state.alpha0, b.state.r, b.state.phi, b.state.m), (C64::new(3.0, 0.0), 1.0, 0.0, 1));
        assert_eq!(b.detuning_ratio, 0.0);
        assert_eq!(b.observables, vec![Observable::Inversion]);

        let a = figure_preset("fig3a").unwrap();
        assert_eq!((a.state.alpha0.re, a.state.r, a.state.m), (0.5, 1.0, 0));
        assert_eq!(a.observables, vec![Observable::PhotonDist]);

        let half = figure_preset("fig5b").unwrap();
        assert_eq!(half.state.m, 1);
        assert!((half.q_time - 10.122).abs() < 1e-3);
        assert_eq!(figure_preset("fig5a").unwrap().q_time, 0.0);

        match figure_preset("fig6a") {
            Err(Error::UnknownPreset { valid, .. }) => assert!(valid.contains("fig5c")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
