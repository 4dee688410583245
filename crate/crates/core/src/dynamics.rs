//! Closed-form Jaynes-Cummings evolution with the atom initially excited.
//!
//! In the interaction picture the n-photon sector couples |n, e⟩ to
//! |n+1, g⟩ only, so
//!
//! ```text
//! A_n = q_n (cos(λt ν_n) − i Δ/(2λν_n) sin(λt ν_n))
//! B_n = −i q_n √(n+1) sin(λt ν_n)/ν_n
//! ν_n = √(Δ²/4λ² + n + 1)
//! ```
//!
//! Times are always the scaled variable λt.

use crate::{
    error::{Error, Result},
    fock::FockVector,
    C64,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JcmConfig {
    /// λ; only fixes the time unit.
    pub coupling: f64,
    /// Δ/λ.
    pub detuning_ratio: f64,
    pub n_max: usize,
}

impl JcmConfig {
    pub fn new(coupling: f64, detuning_ratio: f64, n_max: usize) -> Result<Self> {
        if !(coupling.is_finite() && coupling > 0.0) {
            return Err(Error::InvalidParam { name: "coupling", reason: format!("must be > 0, got {coupling}") });
        }
        if !detuning_ratio.is_finite() {
            return Err(Error::InvalidParam { name: "detuning_ratio", reason: "must be finite".into() });
        }
        if n_max < 1 {
            return Err(Error::InvalidParam { name: "n_max", reason: "must be >= 1".into() });
        }
        Ok(Self { coupling, detuning_ratio, n_max })
    }

    /// Resonant coupling with λ = 1.
    pub fn resonant(n_max: usize) -> Result<Self> {
        Self::new(1.0, 0.0, n_max)
    }
}

/// A_n(t), B_n(t) for n = 0..=n_max at one scaled time.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolvedState {
    pub t_scaled: f64,
    pub a_coeffs: Vec<C64>,
    pub b_coeffs: Vec<C64>,
}

impl EvolvedState {
    pub fn n_max(&self) -> usize {
        self.a_coeffs.len() - 1
    }

    /// Σ_n (|A_n|² + |B_n|²).
    pub fn total_probability(&self) -> f64 {
        self.a_coeffs.iter().chain(&self.b_coeffs).map(|z| z.norm_sqr()).sum()
    }

    /// Dimension of the field space the state occupies, n_max + 2.
    pub fn field_dim(&self) -> usize {
        self.a_coeffs.len() + 1
    }

    fn a(&self, n: usize) -> C64 {
        self.a_coeffs.get(n).copied().unwrap_or_default()
    }

    /// B_{l−1}, zero for l = 0.
    fn b_shifted(&self, l: usize) -> C64 {
        match l {
            0 => C64::new(0.0, 0.0),
            _ => self.b_coeffs.get(l - 1).copied().unwrap_or_default(),
        }
    }
}

/// The two field vectors with ρ_f = |C⟩⟨C| + |S⟩⟨S|.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldDensity {
    pub c_vec: FockVector,
    pub s_vec: FockVector,
}

/// ν_n = √(Δ²/4λ² + n + 1).
pub fn rabi_freq(n: usize, cfg: &JcmConfig) -> f64 {
    (cfg.detuning_ratio * cfg.detuning_ratio / 4.0 + n as f64 + 1.0).sqrt()
}

/// Evolve the initial field amplitudes `q` (atom excited) to scaled time
/// `t_scaled`. Uses the first n_max + 1 entries of `q`.
pub fn evolve(q: &FockVector, t_scaled: f64, cfg: &JcmConfig) -> Result<EvolvedState> {
    if q.dim() < cfg.n_max + 1 {
        return Err(Error::DimensionMismatch { expected: cfg.n_max + 1, found: q.dim() });
    }
    if !t_scaled.is_finite() {
        return Err(Error::InvalidParam { name: "t_scaled", reason: "must be finite".into() });
    }
    let deficit = (1.0 - q.norm_sqr()).abs();
    if deficit > 1e-8 {
        return Err(Error::NotNormalized { deficit });
    }
    let mut a_coeffs = Vec::with_capacity(cfg.n_max + 1);
    let mut b_coeffs = Vec::with_capacity(cfg.n_max + 1);
    for (n, &qn) in q.amps().iter().take(cfg.n_max + 1).enumerate() {
        let nu = rabi_freq(n, cfg);
        let (sin, cos) = (t_scaled * nu).sin_cos();
        a_coeffs.push(qn * C64::new(cos, -cfg.detuning_ratio / (2.0 * nu) * sin));
        b_coeffs.push(qn * C64::new(0.0, -((n + 1) as f64).sqrt() * sin / nu));
    }
    Ok(EvolvedState { t_scaled, a_coeffs, b_coeffs })
}

/// |C⟩ carries A_n at index n, |S⟩ carries B_n at index n + 1.
pub fn field_density(st: &EvolvedState) -> FieldDensity {
    let dim = st.field_dim();
    let mut c = st.a_coeffs.clone();
    c.push(C64::new(0.0, 0.0));
    let mut s = Vec::with_capacity(dim);
    s.push(C64::new(0.0, 0.0));
    s.extend_from_slice(&st.b_coeffs);
    FieldDensity {
        c_vec: FockVector::new(c).expect("finite coefficients"),
        s_vec: FockVector::new(s).expect("finite coefficients"),
    }
}

/// ρ_lj = A_l A_j* + B_{l−1} B_{j−1}*, indices 0..=n_max+1.
pub fn density_element(st: &EvolvedState, l: usize, j: usize) -> Result<C64> {
    let dim = st.field_dim();
    for index in [l, j] {
        if index >= dim {
            return Err(Error::IndexOutOfBounds { index, dim });
        }
    }
    Ok(st.a(l) * st.a(j).conj() + st.b_shifted(l) * st.b_shifted(j).conj())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    use super::*;
    use crate::fock::inner_product;
    use crate::sdfs::{choose_truncation, sdfs_state, SdfsParams};

    fn sdfs(re: f64, r: f64, m: usize) -> (FockVector, usize) {
        let p = SdfsParams::new(C64::new(re, 0.0), r, 0.0, m).unwrap();
        let n = choose_truncation(&p, 1e-12).unwrap();
        (sdfs_state(&p, n).unwrap(), n)
    }

    #[test]
    fn rabi_frequencies() {
        let cfg = JcmConfig::resonant(4).unwrap();
        assert_eq!(rabi_freq(0, &cfg), 1.0);
        assert_eq!(rabi_freq(3, &cfg), 2.0);
        let det = JcmConfig::new(1.0, 2.0, 4).unwrap();
        assert!((rabi_freq(0, &det) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(JcmConfig::new(0.0, 0.0, 3).is_err());
        assert!(JcmConfig::new(1.0, 0.0, 0).is_err());
        assert!(JcmConfig::new(1.0, f64::NAN, 3).is_err());
    }

    #[test]
    fn initial_time_is_initial_state() {
        let (q, n) = sdfs(3.0, 1.0, 1);
        let st = evolve(&q, 0.0, &JcmConfig::resonant(n).unwrap()).unwrap();
        assert_eq!(st.a_coeffs, q.amps());
        assert!(st.b_coeffs.iter().all(|b| b.norm() == 0.0));
    }

    #[test]
    fn vacuum_full_transfer() {
        let q = FockVector::basis(0, 2).unwrap();
        let st = evolve(&q, FRAC_PI_2, &JcmConfig::resonant(1).unwrap()).unwrap();
        assert!(st.a_coeffs[0].norm() < 1e-15);
        assert!((st.b_coeffs[0] - C64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn pointwise_conservation() {
        let (q, n) = sdfs(3.0, 1.0, 0);
        for det in [0.0, 1.7] {
            let cfg = JcmConfig::new(1.0, det, n).unwrap();
            let st = evolve(&q, 5.0, &cfg).unwrap();
            assert!((st.total_probability() - 1.0).abs() < 1e-10);
            for k in 0..=n {
                let lhs = st.a_coeffs[k].norm_sqr() + st.b_coeffs[k].norm_sqr();
                assert!((lhs - q.get(k).norm_sqr()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_unnormalized_input() {
        let q = FockVector::new(vec![C64::new(0.5, 0.0), C64::new(0.5, 0.0)]).unwrap();
        assert!(matches!(
            evolve(&q, 1.0, &JcmConfig::resonant(1).unwrap()),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn field_density_layout() {
        let (q, n) = sdfs(3.0, 1.0, 0);
        let cfg = JcmConfig::resonant(n).unwrap();
        let fd0 = field_density(&evolve(&q, 0.0, &cfg).unwrap());
        assert_eq!(fd0.c_vec, q.padded(n + 2));
        assert!(fd0.s_vec.norm_sqr() == 0.0);
        assert_eq!(fd0.s_vec.dim(), n + 2);

        let st = evolve(&q, 3.3, &cfg).unwrap();
        let fd = field_density(&st);
        assert!((fd.c_vec.norm_sqr() + fd.s_vec.norm_sqr() - 1.0).abs() < 1e-10);
        assert_eq!(fd.s_vec.get(0), C64::new(0.0, 0.0));
        assert_eq!(fd.s_vec.get(4), st.b_coeffs[3]);

        let vac = FockVector::basis(0, 2).unwrap();
        let fd = field_density(&evolve(&vac, FRAC_PI_4, &JcmConfig::resonant(1).unwrap()).unwrap());
        assert!((fd.c_vec.norm_sqr() - 0.5).abs() < 1e-15);
        assert!((fd.s_vec.norm_sqr() - 0.5).abs() < 1e-15);
        assert_eq!(inner_product(&fd.c_vec, &fd.s_vec).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn density_elements() {
        let (q, n) = sdfs(3.0, 0.0, 0);
        let cfg = JcmConfig::resonant(n).unwrap();
        let st = evolve(&q, 0.0, &cfg).unwrap();
        assert!((density_element(&st, 0, 0).unwrap().re - (-9.0f64).exp()).abs() < 1e-15);

        let (q, n) = sdfs(3.0, 1.0, 1);
        let st = evolve(&q, 7.3, &JcmConfig::resonant(n).unwrap()).unwrap();
        let trace: f64 = (0..n + 2).map(|l| density_element(&st, l, l).unwrap().re).sum();
        assert!((trace - 1.0).abs() < 1e-10);
        for (l, j) in [(0, 5), (3, 17), (n + 1, 2), (11, 11)] {
            let lj = density_element(&st, l, j).unwrap();
            let jl = density_element(&st, j, l).unwrap();
            assert!((lj - jl.conj()).norm() < 1e-16);
        }
        assert!(matches!(
            density_element(&st, n + 2, 0),
            Err(Error::IndexOutOfBounds { .. })
        ));
    }

    #[test]
    fn large_detuning_suppresses_transitions() {
        let (q, n) = sdfs(3.0, 1.0, 0);
        let cfg = JcmConfig::new(1.0, 1e3, n).unwrap();
        for t in [0.3, 1.0, 4.2, 11.0, 25.0] {
            let st = evolve(&q, t, &cfg).unwrap();
            for (k, b) in st.b_coeffs.iter().enumerate() {
                assert!(b.norm() <= 2.0 * ((k + 1) as f64).sqrt() / 1e3);
            }
        }
    }
}
