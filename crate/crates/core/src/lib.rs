//! Spectral Galerkin toolkit for dissipative PDEs with a large mean velocity.
//!
//! The crate covers the truncated Fourier ladders of the forced viscous
//! Burgers equation (d = 1) and the incompressible Navier-Stokes equations on
//! the 2D torus, together with the machinery needed to study them in a
//! Galilean frame moving with the mean velocity: moving-frame transforms,
//! integrating-factor time stepping that resolves the resulting rapid forcing
//! oscillation, logarithmic norms of realified Jacobians, and calculators for
//! the trapping / absorbing / averaging constants that control the response
//! amplitude as the mean velocity grows.
//!
//! The crate is `no_std` (with `alloc`); everything here is pure computation.
//! File formats, scenario drivers and the CLI live in the companion `avglab`
//! crate.

#![cfg_attr(not(test), no_std)]
// Precondition checks use `!(x > 0.0)`-style comparisons to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Index loops mirror the multi-array stepper updates.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod bounds;
pub mod error;
pub mod forcing;
pub mod integrate;
pub mod linalg;
pub mod model;
pub mod modes;
pub mod rng;
pub mod state;
pub mod sums;

pub use error::CoreError;
pub use forcing::{ForcedMode, ForcingSpec, TemporalProfile};
pub use integrate::{IntegratorConfig, Method, PairOutcome, TrajectoryRecord};
pub use linalg::Matrix;
pub use model::{Frame, Model, SimParams};
pub use modes::{ModeIndex, ModeSet};
pub use state::{EnvelopeBound, SpectralState};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex<f64>;
