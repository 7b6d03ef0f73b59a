//! Design tools for one-dimensional nonlinear photonic crystals.
//!
//! A uniaxial birefringent crystal with a weak periodic index modulation
//! (a Bragg grating written into both polarizations) acquires photonic band
//! gaps and strongly modified dispersion near the gap edges. This crate
//! models that dispersion with two backends (an analytic coupled-mode form
//! and an exact unit-cell transfer matrix), builds the joint spectral
//! amplitude of collinear degenerate type-II parametric down-conversion in
//! such a crystal, and searches the (contrast, angle, period) parameter
//! space for simultaneous phase matching and complete group-velocity
//! matching of pump, signal and idler. Spectral factorability of the
//! resulting two-photon state is quantified by a Schmidt decomposition.
//!
//! Modules:
//! - [`material`]: bulk Sellmeier dispersion and the bilayer unit cell.
//! - [`bloch`]: Bloch wavenumber, band gaps, derivatives, Fourier envelope.
//! - [`jsa`]: pump envelope, phase matching and joint spectral amplitude.
//! - [`factorability`]: phase-mismatch Taylor series, Gaussian-model
//!   amplitudes, factorability conditions and Schmidt number.
//! - [`designer`]: three-condition design solve, contour scans, tolerance
//!   sweeps of the Schmidt number.
//! - [`export`]: plot-ready TSV and binary matrix writers.

pub mod bloch;
pub mod constants;
pub mod designer;
mod diff;
pub mod error;
pub mod export;
pub mod factorability;
pub mod jsa;
pub mod material;

pub use error::{Error, FieldId, Result};
pub use material::{CrystalSpec, MaterialModel, Polarization, Sellmeier};
