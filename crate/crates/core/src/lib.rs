//! Spectral Galerkin solver for the viscous variational wave equation with
//! transport noise, written in Riemann invariants `R`, `S` on the unit torus.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the bottom fix it to `f64`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod integrator;
pub mod io;
pub mod noise;
pub mod reconstruction;
pub mod scalar;
pub mod spectral;
pub mod wave_speed;

pub use dynamics::{
    chi, cutoff_q, diffusion, drift_cutoff, drift_limit, stopping_predicate, DriftForm, DriftTerms, FieldPair,
    Galerkin, SdeParams, SystemState, DEFAULT_OVERSAMPLE,
};
pub use error::{Error, Result};
pub use integrator::{simulate, SimConfig, StoppingEvent, Trajectory};
pub use noise::{BrownianPath, SigmaProfile, SigmaSpec};
pub use reconstruction::{build_u, constitutive_residual, ReconstructedField, Reconstructor};
pub use scalar::Real;
pub use spectral::{Collocation, GridField, Norm, SpectralField};
pub use wave_speed::{SpeedSpec, WaveSpeed};

pub type Field = SpectralField<f64>;
pub type Grid = GridField<f64>;
pub type Speed = WaveSpeed<f64>;
pub type Sigma = SigmaProfile<f64>;
pub type Params = SdeParams<f64>;
pub type State = SystemState<f64>;
