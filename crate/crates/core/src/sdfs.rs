//! Squeezed displaced Fock states |α₀, z, m⟩ = D(α₀)S(z)|m⟩.
//!
//! Number-basis amplitudes are evaluated in closed form as a finite sum over
//! min(n, m) + 1 products of Hermite polynomials. The Hermite factors are
//! carried through the rescaled recurrence
//!
//! ```text
//! g_j = (ν/2μ)^{j/2} H_j(ᾱ₀/√(2μν)) / √j!,
//! √(j+1)·g_{j+1} = (ᾱ₀/μ)·g_j − √j·(ν/μ)·g_{j−1},
//! ```
//!
//! which has no square roots of ν and no factorial overflow. Binomial weights
//! and the Gaussian prefactor are kept in log form.

use std::f64::consts::TAU;

use statrs::function::factorial::{factorial, ln_binomial, ln_factorial};

use crate::{
    error::{Error, Result},
    fock::FockVector,
    C64, DIM_CAP,
};

/// Parameters (α₀, r, φ, m) of |α₀, z, m⟩ with z = r·e^{iφ}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SdfsParams {
    pub alpha0: C64,
    pub r: f64,
    pub phi: f64,
    pub m: usize,
}

impl SdfsParams {
    /// Validates r ≥ 0 and finiteness, and reduces φ to [0, 2π).
    pub fn new(alpha0: C64, r: f64, phi: f64, m: usize) -> Result<Self> {
        if !alpha0.re.is_finite() || !alpha0.im.is_finite() {
            return Err(Error::InvalidParam { name: "alpha0", reason: "must be finite".into() });
        }
        if !r.is_finite() || r < 0.0 {
            return Err(Error::InvalidParam { name: "r", reason: format!("must be finite and >= 0, got {r}") });
        }
        if !phi.is_finite() {
            return Err(Error::InvalidParam { name: "phi", reason: "must be finite".into() });
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(Self { alpha0, r, phi, m })
    }

    pub fn z(&self) -> C64 {
        C64::from_polar(self.r, self.phi)
    }

    /// μ = cosh r.
    pub fn mu(&self) -> f64 {
        self.r.cosh()
    }

    /// ν = e^{iφ} sinh r.
    pub fn nu(&self) -> C64 {
        C64::from_polar(self.r.sinh(), self.phi)
    }

    /// ᾱ₀ = μα₀ + να₀*.
    pub fn alpha_bar(&self) -> C64 {
        self.alpha0 * self.mu() + self.nu() * self.alpha0.conj()
    }

    fn is_fock(&self) -> bool {
        self.r == 0.0 && self.alpha0.norm_sqr() == 0.0
    }
}

/// Number-state probabilities P_n for n ≤ N_max plus the mass cut off above.
#[derive(Clone, Debug, PartialEq)]
pub struct PhotonDistribution {
    pub probs: Vec<f64>,
    pub tail_mass: f64,
}

/// Physicists' Hermite polynomial H_k(x) for complex x by the three-term
/// recurrence H_{k+1} = 2x·H_k − 2k·H_{k−1}.
pub fn hermite(k: usize, x: C64) -> C64 {
    let mut prev = C64::new(1.0, 0.0);
    if k == 0 {
        return prev;
    }
    let mut cur = x * 2.0;
    for j in 1..k {
        let next = x * 2.0 * cur - prev * (2.0 * j as f64);
        prev = cur;
        cur = next;
    }
    cur
}

/// Rescaled Hermite sequence s_j = c^j H_j(x)/√j! written through
/// b = 2cx and q = c², so that √(j+1)·s_{j+1} = b·s_j − 2q·√j·s_{j−1}.
fn scaled_hermite_seq(b: C64, q: C64, len: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    out.push(C64::new(1.0, 0.0));
    if len == 1 {
        return out;
    }
    out.push(b);
    for j in 1..len - 1 {
        let jf = j as f64;
        let next = (b * out[j] - q * 2.0 * jf.sqrt() * out[j - 1]) / (jf + 1.0).sqrt();
        out.push(next);
    }
    out
}

/// Precomputed pieces shared by all amplitudes of one state.
struct AmplitudeKernel {
    m: usize,
    ln_mu: f64,
    /// log of exp(−|ᾱ₀|²/2 + (ν*/2μ)ᾱ₀²)/√μ
    log_pref: C64,
    /// n-side factors g_j
    row: Vec<C64>,
    /// m-side factors f_j = (−ν*/2μ)^{j/2} H_j(−α₀*/√(−2ν*μ))/√j!
    seed: Vec<C64>,
}

impl AmplitudeKernel {
    fn new(p: &SdfsParams, n_max: usize) -> Self {
        let mu = p.mu();
        let nu = p.nu();
        let ab = p.alpha_bar();
        let log_pref = -ab.norm_sqr() / 2.0 + nu.conj() * ab * ab / (2.0 * mu) - 0.5 * mu.ln();
        let row = scaled_hermite_seq(ab / mu, nu / (2.0 * mu), n_max + 1);
        let seed = scaled_hermite_seq(-p.alpha0.conj() / mu, -nu.conj() / (2.0 * mu), p.m + 1);
        Self { m: p.m, ln_mu: mu.ln(), log_pref, row, seed }
    }

    fn amplitude(&self, n: usize) -> C64 {
        let m = self.m;
        let sum: C64 = (0..=n.min(m))
            .map(|k| {
                let ln_w = 0.5 * (ln_binomial(n as u64, k as u64) + ln_binomial(m as u64, k as u64))
                    - k as f64 * self.ln_mu;
                self.row[n - k] * self.seed[m - k] * ln_w.exp()
            })
            .sum();
        if sum.norm_sqr() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        sum * self.log_pref.exp()
    }
}

/// ⟨n|D(α)|m⟩ for the unsqueezed case:
/// e^{−|α|²/2} Σ_k √(C(n,k)C(m,k)) α^{n−k}/√(n−k)! · (−α*)^{m−k}/√(m−k)!,
/// with every magnitude in log form.
fn displaced_fock_amplitude(alpha: C64, m: usize, n: usize) -> C64 {
    let rho = alpha.norm();
    if rho == 0.0 {
        return if n == m { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
    }
    let ln_rho = rho.ln();
    let theta = alpha.arg();
    (0..=n.min(m))
        .map(|k| {
            let (dn, dm) = (n - k, m - k);
            let ln_mag = 0.5 * (ln_binomial(n as u64, k as u64) + ln_binomial(m as u64, k as u64))
                + (dn + dm) as f64 * ln_rho
                - 0.5 * (ln_factorial(dn as u64) + ln_factorial(dm as u64))
                - 0.5 * rho * rho;
            // (−α*)^{dm} = (−1)^{dm} ρ^{dm} e^{−i dm θ}
            let sign = if dm % 2 == 0 { 1.0 } else { -1.0 };
            C64::from_polar(sign * ln_mag.exp(), (dn as f64 - dm as f64) * theta)
        })
        .sum()
}

/// ⟨n|α₀, z, m⟩.
pub fn sdfs_amplitude(p: &SdfsParams, n: usize) -> C64 {
    if p.r == 0.0 {
        return displaced_fock_amplitude(p.alpha0, p.m, n);
    }
    AmplitudeKernel::new(p, n).amplitude(n)
}

fn amplitudes(p: &SdfsParams, n_max: usize) -> Vec<C64> {
    if p.r == 0.0 {
        return (0..=n_max).map(|n| displaced_fock_amplitude(p.alpha0, p.m, n)).collect();
    }
    let kernel = AmplitudeKernel::new(p, n_max);
    (0..=n_max).map(|n| kernel.amplitude(n)).collect()
}

/// ⟨a†a⟩ = (|μ|² + |ν|²)m + |ν|² + |α₀|².
pub fn mean_photon_number(p: &SdfsParams) -> f64 {
    let mu2 = p.mu().powi(2);
    let nu2 = p.nu().norm_sqr();
    (mu2 + nu2) * p.m as f64 + nu2 + p.alpha0.norm_sqr()
}

/// Smallest N_max whose discarded mass Σ_{n>N_max} P_n is below `tail_tol`,
/// raised to at least ⟨a†a⟩ + 10·√(⟨a†a⟩ + 1).
///
/// A pure number state (α₀ = 0, r = 0) has finite support and returns
/// max(m, 1) without the floor.
pub fn choose_truncation(p: &SdfsParams, tail_tol: f64) -> Result<usize> {
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::InvalidParam { name: "tail_tol", reason: format!("must lie in (0, 1), got {tail_tol}") });
    }
    let cap = DIM_CAP - 1;
    if p.is_fock() {
        let n = p.m.max(1);
        return if n > cap { Err(Error::TruncationCap { needed: n, cap }) } else { Ok(n) };
    }
    let mean = mean_photon_number(p);
    let floor = (mean + 10.0 * (mean + 1.0).sqrt()).ceil() as usize;
    if floor > cap {
        return Err(Error::TruncationCap { needed: floor, cap });
    }

    let amps = amplitudes(p, cap);
    let mut kept = 0.0;
    let mut found = None;
    for (n, a) in amps.iter().enumerate() {
        kept += a.norm_sqr();
        if n >= p.m && 1.0 - kept < tail_tol {
            found = Some(n);
            break;
        }
    }
    match found {
        Some(n) => Ok(n.max(floor)),
        None => Err(Error::TruncationCap { needed: cap + 1, cap }),
    }
}

/// The state as a Fock vector over n = 0..=n_max.
///
/// Fails with [`Error::UnderTruncated`] when more than 1e−8 of the norm lies
/// above `n_max`; the vector is never renormalized.
pub fn sdfs_state(p: &SdfsParams, n_max: usize) -> Result<FockVector> {
    if n_max + 1 > DIM_CAP {
        return Err(Error::TruncationCap { needed: n_max, cap: DIM_CAP - 1 });
    }
    let v = FockVector::new(amplitudes(p, n_max))?;
    let deficit = 1.0 - v.norm_sqr();
    if deficit > 1e-8 {
        return Err(Error::UnderTruncated { deficit });
    }
    Ok(v)
}

pub fn photon_distribution(p: &SdfsParams, n_max: usize) -> Result<PhotonDistribution> {
    let v = sdfs_state(p, n_max)?;
    let probs: Vec<f64> = v.amps().iter().map(|a| a.norm_sqr()).collect();
    let tail_mass = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    Ok(PhotonDistribution { probs, tail_mass })
}

/// Gaussian data of the generating function
/// Σ s*^{m₁} t^{m₂}/√(m₁!m₂!) ⟨α₁,z₁,m₁|α₂,z₂,m₂⟩
///   = N₀·exp(C s*t + D s* + A s*² + E t + B t²).
struct OverlapKernel {
    log_n0: C64,
    a: C64,
    b: C64,
    c: C64,
    d: C64,
    e: C64,
}

impl OverlapKernel {
    fn new(p1: &SdfsParams, p2: &SdfsParams) -> Self {
        let (mu1, nu1, a1, ab1) = (p1.mu(), p1.nu(), p1.alpha0, p1.alpha_bar());
        let (mu2, nu2, a2, ab2) = (p2.mu(), p2.nu(), p2.alpha0, p2.alpha_bar());
        let mu12 = mu1 * mu2;
        // K = (μ₂μ₁ − ν₂ν₁*)/μ₂μ₁, Re K > 0
        let k = 1.0 - nu2 * nu1.conj() / mu12;

        let log_e1 = -a1.norm_sqr() / 2.0 - nu1 * a1.conj() * a1.conj() / (2.0 * mu1);
        let log_e2 = -a2.norm_sqr() / 2.0 - nu2 * a2.conj() * a2.conj() / (2.0 * mu2);
        let ab1c = ab1.conj();
        let c0 = (ab2 * ab1c / mu12
            - nu1.conj() * ab2 * ab2 / (2.0 * mu1 * mu2 * mu2)
            - nu2 * ab1c * ab1c / (2.0 * mu2 * mu1 * mu1))
            / k;
        let log_n0 = log_e1.conj() + log_e2 + c0 - 0.5 * (k * mu12).ln();

        Self {
            log_n0,
            c: 1.0 / (k * mu12),
            d: -a1 / mu1 + (ab2 / mu12 - nu2 * ab1c / (mu2 * mu1 * mu1)) / k,
            e: -a2.conj() / mu2 + (ab1c / mu12 - nu1.conj() * ab2 / (mu1 * mu2 * mu2)) / k,
            a: nu1 / (2.0 * mu1) - nu2 / (2.0 * mu2 * mu1 * mu1 * k),
            b: nu2.conj() / (2.0 * mu2) - nu1.conj() / (2.0 * mu1 * mu2 * mu2 * k),
        }
    }
}

/// Coefficient of x^j in exp(q x² + l x): Σ_k q^k l^{j−2k}/(k!(j−2k)!), the
/// explicit series of (√−q)^j H_j(l/(2√−q))/j!.
fn gaussian_coeff(j: usize, q: C64, l: C64) -> C64 {
    (0..=j / 2)
        .map(|k| q.powu(k as u32) * l.powu((j - 2 * k) as u32) / (factorial(k as u64) * factorial((j - 2 * k) as u64)))
        .sum()
}

/// ⟨α₁, z₁, m₁ | α₂, z₂, m₂⟩ with the phase convention of D(α₀)S(z)|m⟩.
pub fn sdfs_overlap(p1: &SdfsParams, p2: &SdfsParams) -> C64 {
    if p1.r == 0.0 && p2.r == 0.0 {
        return displaced_fock_overlap(p1.alpha0, p1.m, p2.alpha0, p2.m);
    }
    let kern = OverlapKernel::new(p1, p2);
    let n0 = kern.log_n0.exp();
    if p1.m == 0 && p2.m == 0 {
        // squeezed coherent states
        return n0;
    }
    let (m1, m2) = (p1.m, p2.m);
    let norm = (factorial(m1 as u64) * factorial(m2 as u64)).sqrt();
    let sum: C64 = (0..=m1.min(m2))
        .map(|r| {
            kern.c.powu(r as u32) / factorial(r as u64)
                * gaussian_coeff(m1 - r, kern.a, kern.d)
                * gaussian_coeff(m2 - r, kern.b, kern.e)
        })
        .sum();
    n0 * norm * sum
}

/// ⟨α₁|α₂⟩ √(m₁!m₂!) Σ_r (α₂−α₁)^{m₁−r} (α₁*−α₂*)^{m₂−r} / (r!(m₁−r)!(m₂−r)!).
fn displaced_fock_overlap(a1: C64, m1: usize, a2: C64, m2: usize) -> C64 {
    let coherent = (-a1.norm_sqr() / 2.0 - a2.norm_sqr() / 2.0 + a1.conj() * a2).exp();
    let d = a2 - a1;
    let e = a1.conj() - a2.conj();
    let norm = (factorial(m1 as u64) * factorial(m2 as u64)).sqrt();
    let sum: C64 = (0..=m1.min(m2))
        .map(|r| {
            d.powu((m1 - r) as u32) * e.powu((m2 - r) as u32)
                / (factorial(r as u64) * factorial((m1 - r) as u64) * factorial((m2 - r) as u64))
        })
        .sum();
    coherent * norm * sum
}
