//! Atom and field observables derived from an [`EvolvedState`].

use std::f64::consts::{LN_2, PI, TAU};

use rayon::prelude::*;
use statrs::function::factorial::ln_factorial;

use crate::{
    dynamics::{density_element, field_density, EvolvedState, FieldDensity},
    error::{Error, Result},
    fock::inner_product,
    sdfs::SdfsParams,
    C64,
};

/// Below this |⟨C|S⟩| the eigenvalues are read off the diagonal.
const GRAM_EPS: f64 = 1e-14;
const CLAMP_SLACK: f64 = 1e-12;

/// ⟨C|C⟩, ⟨S|S⟩ and ⟨C|S⟩.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GramData {
    pub cc: f64,
    pub ss: f64,
    pub cs: C64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyPoint {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    /// von Neumann entropy in nats.
    pub entropy: f64,
    /// asinh((cc − ss)/2|cs|); ±∞ when cs vanishes.
    pub theta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseDistribution {
    pub etas: Vec<f64>,
    pub values: Vec<f64>,
    pub eta0: f64,
}

impl PhaseDistribution {
    /// Trapezoid rule on a uniform periodic grid over [−π, π).
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * TAU / self.values.len() as f64
    }
}

/// Rectangular sampling grid in the complex α plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QGridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Default for QGridSpec {
    fn default() -> Self {
        Self { x_min: -8.0, x_max: 8.0, y_min: -8.0, y_max: 8.0, nx: 201, ny: 201 }
    }
}

impl QGridSpec {
    pub fn x_axis(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.nx)
    }

    pub fn y_axis(&self) -> Vec<f64> {
        linspace(self.y_min, self.y_max, self.ny)
    }

    pub fn cell_area(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64 * (self.y_max - self.y_min) / (self.ny - 1) as f64
    }
}

/// Q(α) sampled on a grid; `values[i][j]` sits at (x_axis[i], y_axis[j]).
#[derive(Clone, Debug, PartialEq)]
pub struct QGrid {
    pub x_axis: Vec<f64>,
    pub y_axis: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl QGrid {
    /// Grid sum times cell area.
    pub fn integral(&self) -> f64 {
        let dx = self.x_axis[1] - self.x_axis[0];
        let dy = self.y_axis[1] - self.y_axis[0];
        self.values.iter().flatten().sum::<f64>() * dx * dy
    }

    pub fn max(&self) -> f64 {
        self.values.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|k| lo + step * k as f64).collect()
}

/// `count` uniform phase angles −π + 2πk/count.
pub fn uniform_etas(count: usize) -> Vec<f64> {
    (0..count).map(|k| -PI + TAU * k as f64 / count as f64).collect()
}

/// W(t) = Σ_n (|A_n|² − |B_n|²).
pub fn atomic_inversion(st: &EvolvedState) -> f64 {
    st.a_coeffs.iter().zip(&st.b_coeffs).map(|(a, b)| a.norm_sqr() - b.norm_sqr()).sum()
}

pub fn gram(fd: &FieldDensity) -> GramData {
    let ip = |u, v| inner_product(u, v).expect("field vectors share a dimension");
    GramData {
        cc: ip(&fd.c_vec, &fd.c_vec).re,
        ss: ip(&fd.s_vec, &fd.s_vec).re,
        cs: ip(&fd.c_vec, &fd.s_vec),
    }
}

fn clamp_unit(x: f64) -> f64 {
    if (-CLAMP_SLACK..0.0).contains(&x) {
        0.0
    } else if x > 1.0 && x <= 1.0 + CLAMP_SLACK {
        1.0
    } else {
        x
    }
}

fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Eigenvalues λ± = cc ± e^{∓θ}|cs| of the rank-2 field density and its
/// entropy −Σ λ ln λ.
pub fn field_entropy(g: &GramData) -> Result<EntropyPoint> {
    let GramData { cc, ss, cs } = *g;
    let in_unit = |x: f64| (-CLAMP_SLACK..=1.0 + CLAMP_SLACK).contains(&x);
    if !in_unit(cc) || !in_unit(ss) {
        return Err(Error::InvalidGram(format!("cc = {cc}, ss = {ss} outside [0, 1]")));
    }
    if (cc + ss - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidGram(format!("cc + ss = {} is not 1", cc + ss)));
    }
    let cs_abs = cs.norm();
    if cs_abs * cs_abs > cc * ss + 1e-12 {
        return Err(Error::InvalidGram(format!("|cs| = {cs_abs} violates Cauchy-Schwarz")));
    }

    let (plus, minus, theta) = if cs_abs > GRAM_EPS {
        let theta = ((cc - ss) / (2.0 * cs_abs)).asinh();
        (cc + (-theta).exp() * cs_abs, cc - theta.exp() * cs_abs, theta)
    } else {
        let theta = if cc >= ss { f64::INFINITY } else { f64::NEG_INFINITY };
        (cc.max(ss), cc.min(ss), theta)
    };
    let (lambda_plus, lambda_minus) = (clamp_unit(plus), clamp_unit(minus));
    let entropy = (-(xlnx(lambda_plus) + xlnx(lambda_minus))).clamp(0.0, LN_2);
    Ok(EntropyPoint { lambda_plus, lambda_minus, entropy, theta })
}

/// P(n, t) = |C_n|² + |S_n|².
pub fn photon_number_dist_t(fd: &FieldDensity, n: usize) -> Result<f64> {
    let dim = fd.c_vec.dim();
    if n >= dim {
        return Err(Error::IndexOutOfBounds { index: n, dim });
    }
    Ok(fd.c_vec.get(n).norm_sqr() + fd.s_vec.get(n).norm_sqr())
}

/// Sums of the d-th superdiagonal, Σ_l ρ_{l,l+d} for d = 0..dim.
fn diagonal_sums(st: &EvolvedState) -> Vec<C64> {
    let dim = st.field_dim();
    (0..dim)
        .map(|d| {
            (0..dim - d)
                .map(|l| density_element(st, l, l + d).expect("indices in range"))
                .sum()
        })
        .collect()
}

/// P(η, t) = (1/2π)[1 + 2 Re Σ_{j>l} ρ_lj e^{i(j−l)η}] with η₀ = 0.
///
/// The double sum is grouped by j − l, so each angle costs O(n_max) after an
/// O(n_max²) pass over ρ.
pub fn phase_distribution(st: &EvolvedState, etas: &[f64]) -> PhaseDistribution {
    let sums = diagonal_sums(st);
    let values = etas
        .iter()
        .map(|&eta| {
            let off: C64 = sums
                .iter()
                .enumerate()
                .skip(1)
                .map(|(d, s)| s * C64::from_polar(1.0, d as f64 * eta))
                .sum();
            (1.0 + 2.0 * off.re) / TAU
        })
        .collect();
    PhaseDistribution { etas: etas.to_vec(), values, eta0: 0.0 }
}

/// (1/2π) Σ_{l,j} ρ_lj e^{i(j−l)η} summed term by term over the full square,
/// before any real part is taken.
pub fn phase_density_full(st: &EvolvedState, eta: f64) -> C64 {
    let dim = st.field_dim();
    let mut acc = C64::new(0.0, 0.0);
    for l in 0..dim {
        for j in 0..dim {
            let rho = density_element(st, l, j).expect("indices in range");
            acc += rho * C64::from_polar(1.0, (j as f64 - l as f64) * eta);
        }
    }
    acc / TAU
}

/// Coherent-state amplitudes ⟨n|α⟩, n < dim, with magnitudes in log form.
pub fn coherent_amplitudes(alpha: C64, dim: usize) -> Vec<C64> {
    let ln_fact: Vec<f64> = (0..dim as u64).map(ln_factorial).collect();
    coherent_amplitudes_with(alpha, &ln_fact)
}

fn coherent_amplitudes_with(alpha: C64, ln_fact: &[f64]) -> Vec<C64> {
    let rho = alpha.norm();
    let mut out = vec![C64::new(0.0, 0.0); ln_fact.len()];
    if rho == 0.0 {
        out[0] = C64::new(1.0, 0.0);
        return out;
    }
    let (ln_rho, theta) = (rho.ln(), alpha.arg());
    for (n, (slot, lf)) in out.iter_mut().zip(ln_fact).enumerate() {
        let ln_mag = -0.5 * rho * rho + n as f64 * ln_rho - 0.5 * lf;
        *slot = C64::from_polar(ln_mag.exp(), n as f64 * theta);
    }
    out
}

fn q_from_field(fd: &FieldDensity, alpha: C64, ln_fact: &[f64]) -> f64 {
    let coh = coherent_amplitudes_with(alpha, ln_fact);
    let proj = |v: &[C64]| -> C64 { coh.iter().zip(v).map(|(a, x)| a.conj() * x).sum() };
    (proj(fd.c_vec.amps()).norm_sqr() + proj(fd.s_vec.amps()).norm_sqr()) / PI
}

/// Q(α) = ⟨α|ρ_f|α⟩/π = (|⟨α|C⟩|² + |⟨α|S⟩|²)/π.
pub fn q_function(st: &EvolvedState, alpha: C64) -> f64 {
    let fd = field_density(st);
    let ln_fact: Vec<f64> = (0..fd.c_vec.dim() as u64).map(ln_factorial).collect();
    q_from_field(&fd, alpha, &ln_fact)
}

/// Q on every point of `spec`, rows evaluated in parallel.
pub fn q_grid(st: &EvolvedState, spec: &QGridSpec) -> QGrid {
    let fd = field_density(st);
    let ln_fact: Vec<f64> = (0..fd.c_vec.dim() as u64).map(ln_factorial).collect();
    let x_axis = spec.x_axis();
    let y_axis = spec.y_axis();
    let values = x_axis
        .par_iter()
        .map(|&x| y_axis.iter().map(|&y| q_from_field(&fd, C64::new(x, y), &ln_fact)).collect())
        .collect();
    QGrid { x_axis, y_axis, values }
}

/// T_R = 2π√(|α₀|² + sinh²r) in scaled time. Ignores m.
pub fn revival_time(p: &SdfsParams) -> Result<f64> {
    if p.alpha0.norm_sqr() == 0.0 && p.r == 0.0 {
        return Err(Error::VacuumRevival);
    }
    Ok(TAU * (p.alpha0.norm_sqr() + p.r.sinh().powi(2)).sqrt())
}
