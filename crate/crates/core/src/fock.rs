//! Truncated Fock-space linear algebra.
//!
//! Everything here works on the number basis |0⟩, …, |dim − 1⟩. The dense
//! matrices are small enough (dim ≤ [`DIM_CAP`]) that no sparse storage is
//! needed; [`build_sdfs_oracle`] uses them to build D(α₀)S(z)|m⟩ directly from
//! the operator definition, which is the reference every analytic formula in
//! [`crate::sdfs`] is checked against.

use ndarray::Array2;

use crate::{
    error::{Error, Result},
    sdfs::SdfsParams,
    C64, DIM_CAP,
};

/// Complex amplitudes over the truncated number basis, indexed by photon
/// number.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    amps: Vec<C64>,
}

impl FockVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("Fock vector"));
        }
        Ok(Self { amps })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![C64::new(0.0, 0.0); dim])
    }

    /// The number state |n⟩ in a space of dimension `dim`.
    pub fn basis(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::IndexOutOfBounds { index: n, dim });
        }
        let mut v = Self::zeros(dim)?;
        v.amps[n] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    /// Amplitude at photon number `n`, zero beyond the truncation.
    pub fn get(&self, n: usize) -> C64 {
        self.amps.get(n).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// True when |Σ|amps|² − 1| ≤ 1e−10.
    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= 1e-10
    }

    /// Zero-pad (or keep) to at least `dim` entries.
    pub fn padded(&self, dim: usize) -> Self {
        let mut amps = self.amps.clone();
        if amps.len() < dim {
            amps.resize(dim, C64::new(0.0, 0.0));
        }
        Self { amps }
    }

    /// Mean photon number ⟨v|a†a|v⟩ without normalizing.
    pub fn mean_number(&self) -> f64 {
        self.amps.iter().enumerate().map(|(n, z)| n as f64 * z.norm_sqr()).sum()
    }
}

/// Dense square operator matrix in the number basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    entries: Array2<C64>,
}

impl ComplexMatrix {
    pub fn from_array(entries: Array2<C64>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows == 0 {
            return Err(Error::ZeroDimension);
        }
        if rows != cols {
            return Err(Error::DimensionMismatch { expected: rows, found: cols });
        }
        if rows > DIM_CAP {
            return Err(Error::DimensionCap { dim: rows, cap: DIM_CAP });
        }
        Ok(Self { entries })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::from_array(Array2::zeros((dim, dim)))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_array(Array2::eye(dim))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self { entries: self.entries.t().mapv(|z| z.conj()) }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs.dim())?;
        Ok(Self { entries: self.entries.dot(&rhs.entries) })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs.dim())?;
        Ok(Self { entries: &self.entries + &rhs.entries })
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { entries: self.entries.mapv(|z| z * c) }
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        self.check_dim(v.dim())?;
        let amps = self
            .entries
            .rows()
            .into_iter()
            .map(|row| row.iter().zip(v.amps()).map(|(m, x)| m * x).sum())
            .collect();
        Ok(FockVector { amps })
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        self.entries
            .columns()
            .into_iter()
            .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim() != other {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other });
        }
        Ok(())
    }
}

/// Truncated annihilation operator: entry (n − 1, n) = √n.
pub fn annihilation_matrix(dim: usize) -> Result<ComplexMatrix> {
    let mut m = ComplexMatrix::zeros(dim)?;
    for n in 1..dim {
        m.entries[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Ok(m)
}

/// exp(M)·v by scaling plus a Taylor series applied to the vector.
///
/// M is split into s steps with ‖M/s‖₁ ≤ 1 and each step sums the series
/// until the next term is below 1e−18 of the running sum. Products only visit
/// the stored nonzero entries of M, which is exact arithmetic on the dense
/// matrix.
pub fn matrix_exp_apply(m: &ComplexMatrix, v: &FockVector) -> Result<FockVector> {
    m.check_dim(v.dim())?;
    if m.entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("matrix"));
    }
    let dim = m.dim();
    let nonzero: Vec<(usize, usize, C64)> = m
        .entries
        .indexed_iter()
        .filter(|(_, z)| z.norm_sqr() > 0.0)
        .map(|((i, j), z)| (i, j, *z))
        .collect();
    let steps = m.norm_one().ceil().max(1.0) as usize;
    let inv_steps = 1.0 / steps as f64;

    let mut w = v.amps.clone();
    let mut term = vec![C64::new(0.0, 0.0); dim];
    let mut next = vec![C64::new(0.0, 0.0); dim];
    for _ in 0..steps {
        term.copy_from_slice(&w);
        for k in 1..=60 {
            next.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            for &(i, j, mij) in &nonzero {
                next[i] += mij * term[j];
            }
            let c = inv_steps / k as f64;
            let mut term_max = 0.0f64;
            for (t, n) in term.iter_mut().zip(&next) {
                *t = n * c;
                term_max = term_max.max(t.norm());
            }
            let mut w_max = 0.0f64;
            for (x, t) in w.iter_mut().zip(&term) {
                *x += t;
                w_max = w_max.max(x.norm());
            }
            if term_max <= 1e-18 * w_max.max(f64::MIN_POSITIVE) {
                break;
            }
        }
    }
    FockVector::new(w)
}

/// Σ_n conj(u_n)·v_n.
pub fn inner_product(u: &FockVector, v: &FockVector) -> Result<C64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: v.dim() });
    }
    Ok(u.amps.iter().zip(&v.amps).map(|(a, b)| a.conj() * b).sum())
}

/// D(α₀)·S(z)·|m⟩ built from the operator exponentials in a space of
/// dimension `dim`.
///
/// The squeeze generator (z*/2)a² − (z/2)a†² acts first, then the displacement
/// generator α₀a† − α₀*a. Choose `dim` at least twice the state's own
/// truncation so the boundary of the truncated ladder operators stays out of
/// the support.
pub fn build_sdfs_oracle(p: &SdfsParams, dim: usize) -> Result<FockVector> {
    let a = annihilation_matrix(dim)?;
    let ad = a.adjoint();
    let seed = FockVector::basis(p.m, dim)?;

    let z = p.z();
    let a2 = a.matmul(&a)?;
    let ad2 = ad.matmul(&ad)?;
    let squeeze = a2.scale(z.conj() * 0.5).add(&ad2.scale(-z * 0.5))?;
    let squeezed = matrix_exp_apply(&squeeze, &seed)?;

    let alpha = p.alpha0;
    let displace = ad.scale(alpha).add(&a.scale(-alpha.conj()))?;
    matrix_exp_apply(&displace, &squeezed)
}
