//! Exact dynamics of a two-level atom coupled to a single cavity mode that
//! starts in a squeezed displaced Fock state |α₀, z, m⟩ = D(α₀)S(z)|m⟩.
//!
//! The crate is layered bottom-up:
//!
//! * [`fock`]: truncated Fock-space vectors, ladder matrices, dense
//!   exponentials and the brute-force state oracle.
//! * [`sdfs`]: analytic Fock amplitudes, photon statistics, overlaps and
//!   truncation control for squeezed displaced Fock states.
//! * [`dynamics`]: closed-form Jaynes-Cummings evolution coefficients and the
//!   reduced field density.
//! * [`observables`]: inversion, field entropy, photon and phase
//!   distributions, Husimi Q function and the revival-time estimate.
//! * [`config`], [`runner`], [`selfcheck`]: the command-line surface.

pub mod config;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod observables;
pub mod runner;
pub mod sdfs;
pub mod selfcheck;

pub use num_complex::Complex64 as C64;

pub use crate::{
    config::{figure_preset, parse_config, Observable, RunConfig, PRESET_NAMES},
    dynamics::{density_element, evolve, field_density, rabi_freq, EvolvedState, FieldDensity, JcmConfig},
    error::{Error, Result},
    fock::{annihilation_matrix, build_sdfs_oracle, inner_product, matrix_exp_apply, ComplexMatrix, FockVector},
    observables::{
        atomic_inversion, field_entropy, gram, phase_distribution, photon_number_dist_t,
        q_function, q_grid, revival_time, uniform_etas, EntropyPoint, GramData, PhaseDistribution,
        QGrid, QGridSpec,
    },
    runner::{run, RunSummary},
    sdfs::{
        choose_truncation, mean_photon_number, photon_distribution, sdfs_amplitude, sdfs_overlap,
        sdfs_state, PhotonDistribution, SdfsParams,
    },
};

/// Largest Fock-space dimension handled by the dense routines.
pub const DIM_CAP: usize = 512;
