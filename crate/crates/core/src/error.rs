use alloc::string::String;
use core::fmt;

use crate::modes::ModeIndex;

/// Errors raised by the numerical kernels.
#[derive(Clone, Debug, PartialEq)]
pub enum CoreError {
    /// A lattice sum was requested outside its convergence range (p <= d).
    DivergentSum { d: usize, p: f64 },
    /// A precondition of a bound formula failed.
    Precondition(String),
    /// A forced mode does not oscillate in the moving frame ((k, alpha) = 0).
    ResonantMode(ModeIndex),
    /// Dimension / component mismatch between states, forcing and parameters.
    DimensionMismatch(String),
    /// The integrator detected a blow-up (energy grew by more than 1e6).
    BlowUp { t: f64, energy: f64 },
    /// A fixed time step does not resolve the forcing oscillation.
    StepTooLarge { dt: f64, limit: f64 },
    /// Invalid input value.
    Invalid(String),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::DivergentSum { d, p } => {
                write!(f, "lattice sum diverges: p = {p} <= d = {d}")
            }
            CoreError::Precondition(msg) => write!(f, "precondition failed: {msg}"),
            CoreError::ResonantMode(k) => {
                write!(f, "forced mode {:?} is resonant: (k, alpha) = 0", k.components())
            }
            CoreError::DimensionMismatch(msg) => write!(f, "dimension mismatch: {msg}"),
            CoreError::BlowUp { t, energy } => {
                write!(f, "blow-up detected at t = {t}: energy = {energy:e}")
            }
            CoreError::StepTooLarge { dt, limit } => {
                write!(f, "dt = {dt} does not resolve the oscillation (limit {limit})")
            }
            CoreError::Invalid(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}
