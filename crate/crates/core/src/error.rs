//! Crate error type.

use thiserror::Error;

use crate::material::Polarization;

/// Which interacting field an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldId {
    Pump,
    Signal,
    Idler,
}

impl std::fmt::Display for FieldId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldId::Pump => write!(f, "pump"),
            FieldId::Signal => write!(f, "signal"),
            FieldId::Idler => write!(f, "idler"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("wavelength {lambda_um} um outside material validity window [{lo} um, {hi} um]")]
    OutOfWindow { lambda_um: f64, lo: f64, hi: f64 },

    #[error("invalid permittivity contrast {0} (|contrast| must be < 2)")]
    InvalidContrast(f64),

    #[error("invalid crystal specification: {0}")]
    InvalidSpec(String),

    #[error("{field} frequency {omega} rad/s lies inside the {pol} band gap")]
    InGap {
        field: FieldId,
        pol: Polarization,
        omega: f64,
    },

    #[error("design search did not converge: {0}")]
    NonConvergence(String),

    #[error("joint amplitude is identically zero; nothing to decompose")]
    ZeroAmplitude,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
