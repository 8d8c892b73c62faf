//! Error types shared across the engine.

use std::fmt;

/// Errors produced by lattice wiring, state construction, and evolution.
#[derive(Debug, Clone, PartialEq)]
pub enum WalkError {
    /// A mode tried to leave the configured lattice. The lattice was sized
    /// too small for the requested walk length.
    BoundaryCrossing { site: i32, half_width: u32 },
    /// The dense verification path was asked to handle too many modes.
    CapacityExceeded { modes: usize, budget: usize },
    /// A named-state constructor produced the zero vector.
    VanishingState(&'static str),
    /// A site window holds no amplitude to analyze.
    EmptyWindow,
    /// Two distinguishable photons were placed in the same mode.
    IdenticalDistinguishableModes,
    /// Polarized and unpolarized modes were mixed, or the lattice
    /// polarization flag does not match the requested state.
    PolarizationMismatch(String),
    /// A supplied coin matrix failed the unitarity check.
    NonUnitaryCoin { defect: f64 },
    /// A state's total probability is not 1.
    NotNormalized { norm_sqr: f64 },
}

impl fmt::Display for WalkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WalkError::BoundaryCrossing { site, half_width } => write!(
                f,
                "boundary crossing: site {site} leaves the lattice bounds [-{half_width}, {half_width}]"
            ),
            WalkError::CapacityExceeded { modes, budget } => write!(
                f,
                "dense representation needs {modes} modes, exceeding the budget of {budget}"
            ),
            WalkError::VanishingState(label) => {
                write!(f, "state {label} is identically zero")
            }
            WalkError::EmptyWindow => write!(f, "no amplitude inside the requested site window"),
            WalkError::IdenticalDistinguishableModes => {
                write!(f, "distinguishable photons cannot share a single mode")
            }
            WalkError::PolarizationMismatch(msg) => write!(f, "polarization mismatch: {msg}"),
            WalkError::NonUnitaryCoin { defect } => {
                write!(f, "coin matrix is not unitary (defect {defect:.3e})")
            }
            WalkError::NotNormalized { norm_sqr } => {
                write!(f, "state norm^2 is {norm_sqr}, expected 1")
            }
        }
    }
}

impl std::error::Error for WalkError {}

pub type Result<T> = std::result::Result<T, WalkError>;
