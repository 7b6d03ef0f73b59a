//! Physical constants and unit helpers.
//!
//! All library interfaces use SI units (meters, seconds, rad/s) unless a
//! name says otherwise. Wavelengths in user-facing constructors are taken
//! in nanometers because that is how crystal data sheets quote them.

/// Speed of light in vacuum (m/s).
pub const C: f64 = 299_792_458.0;

/// One femtosecond in seconds.
pub const FEMTOSECOND: f64 = 1e-15;

/// Angular frequency (rad/s) of a vacuum wavelength given in meters.
pub fn omega_from_wavelength(lambda_m: f64) -> f64 {
    2.0 * std::f64::consts::PI * C / lambda_m
}

/// Vacuum wavelength (m) of an angular frequency given in rad/s.
pub fn wavelength_from_omega(omega: f64) -> f64 {
    2.0 * std::f64::consts::PI * C / omega
}

/// Nanometers to meters.
pub fn nm(value: f64) -> f64 {
    value * 1e-9
}

/// Millimeters to meters.
pub fn mm(value: f64) -> f64 {
    value * 1e-3
}

/// Degrees to radians.
pub fn deg(value: f64) -> f64 {
    value.to_radians()
}
