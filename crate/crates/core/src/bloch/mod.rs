//! Photonic-crystal dispersion.
//!
//! Two backends compute the Bloch wavenumber of the bilayer crystal:
//!
//! - the coupled-mode form in this module,
//!   `K = m*pi/L +/- sqrt((db/2)^2 - |kappa|^2)`, valid for weak contrast
//!   near the m-th Bragg resonance and cheap enough for design scans;
//! - the exact unit-cell transfer matrix in [`transfer`], used as the
//!   validation oracle and to extract the Bloch-envelope Fourier
//!   coefficients.
//!
//! Outside a gap `K` is real and the minus (plus) branch applies below
//! (above) the gap so that `K -> k_mean` far from resonance. Inside a gap
//! the square root is imaginary and the returned `K` carries a positive
//! imaginary part (forward-decaying wave). Frequencies exactly at a gap
//! edge are treated as in-gap.

pub mod transfer;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{wavelength_from_omega, C};
use crate::diff;
use crate::error::{Error, Result};
use crate::material::{CrystalSpec, Polarization};

/// One frequency point of the dispersion relation.
#[derive(Debug, Clone, Copy)]
pub struct DispersionSample {
    pub omega: f64,
    pub pol: Polarization,
    /// Bloch wavenumber (rad/m); complex inside gaps.
    pub k: Complex64,
    /// First derivative dK/domega (s/m); `None` inside gaps.
    pub k1: Option<f64>,
    /// (1/2!) d2K/domega2 (s^2/m); `None` inside gaps.
    pub k2: Option<f64>,
    pub in_gap: bool,
    pub order_m: u32,
}

/// A photonic band gap of one polarization.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BandGap {
    pub pol: Polarization,
    pub m: u32,
    pub omega_min: f64,
    pub omega_max: f64,
    /// Wavelength at which the Bragg mismatch vanishes (m).
    pub lambda_center_m: f64,
}

impl BandGap {
    pub fn width(&self) -> f64 {
        self.omega_max - self.omega_min
    }
}

/// Cell-averaged index seen by the coupled-mode expansion.
pub fn mean_index(spec: &CrystalSpec, omega: f64, pol: Polarization) -> Result<f64> {
    let lambda = wavelength_from_omega(omega);
    Ok(spec.layer_indices(lambda, pol)?.n_mean)
}

/// Averaged material wavenumber `k_mean = n_mean * omega / c` (rad/m).
pub fn mean_wavenumber(spec: &CrystalSpec, omega: f64, pol: Polarization) -> Result<f64> {
    Ok(mean_index(spec, omega, pol)? * omega / C)
}

/// |kappa| / k_mean for the m-th resonance; zero for even orders.
fn coupling_ratio(spec: &CrystalSpec, m: u32) -> f64 {
    if m % 2 == 0 {
        0.0
    } else {
        spec.contrast.abs() / (2.0 * std::f64::consts::PI * m as f64)
    }
}

/// Coupling coefficient between forward and backward waves (rad/m),
/// `kappa = i [1 - cos(m pi)] alpha k_mean / (4 pi m)`.
pub fn coupling_coefficient(
    spec: &CrystalSpec,
    omega: f64,
    pol: Polarization,
    m: u32,
) -> Result<Complex64> {
    let k_mean = mean_wavenumber(spec, omega, pol)?;
    let one_minus_cos = 1.0 - (m as f64 * std::f64::consts::PI).cos().round();
    let mag = one_minus_cos * spec.contrast * k_mean / (4.0 * std::f64::consts::PI * m as f64);
    Ok(Complex64::new(0.0, mag))
}

/// Bragg phase mismatch `2 k_mean - 2 pi m / period` (rad/m).
pub fn bragg_mismatch(spec: &CrystalSpec, omega: f64, pol: Polarization, m: u32) -> Result<f64> {
    let k_mean = mean_wavenumber(spec, omega, pol)?;
    Ok(2.0 * k_mean - 2.0 * std::f64::consts::PI * m as f64 / spec.period_m)
}

/// Band-gap order whose Bragg resonance is nearest to the given frequency.
pub fn auto_order(spec: &CrystalSpec, omega: f64, pol: Polarization) -> Result<u32> {
    let k_mean = mean_wavenumber(spec, omega, pol)?;
    let m = (k_mean * spec.period_m / std::f64::consts::PI).round() as i64;
    Ok(m.max(1) as u32)
}

/// Square-root argument `(db/2)^2 - |kappa|^2`; non-positive inside gaps.
fn gap_argument(spec: &CrystalSpec, omega: f64, pol: Polarization, m: u32) -> Result<(f64, f64)> {
    let k_mean = mean_wavenumber(spec, omega, pol)?;
    let b = std::f64::consts::PI * m as f64 / spec.period_m;
    let u = k_mean - b;
    let g = coupling_ratio(spec, m) * k_mean;
    Ok((u, u * u - g * g))
}

/// True when the frequency lies inside (or exactly on the edge of) the
/// m-th gap of the given polarization.
pub fn in_gap(spec: &CrystalSpec, omega: f64, pol: Polarization, m: u32) -> Result<bool> {
    let (_, s) = gap_argument(spec, omega, pol, m)?;
    Ok(coupling_ratio(spec, m) > 0.0 && s <= 0.0)
}

/// Coupled-mode Bloch wavenumber near the m-th resonance (rad/m).
pub fn bloch_wavenumber(
    spec: &CrystalSpec,
    omega: f64,
    pol: Polarization,
    m: u32,
) -> Result<Complex64> {
    let b = std::f64::consts::PI * m as f64 / spec.period_m;
    let (u, s) = gap_argument(spec, omega, pol, m)?;
    if coupling_ratio(spec, m) == 0.0 {
        // No coupling: the dispersion relation is the averaged material one.
        return Ok(Complex64::new(b + u, 0.0));
    }
    if s > 0.0 {
        Ok(Complex64::new(b + u.signum() * s.sqrt(), 0.0))
    } else {
        Ok(Complex64::new(b, (-s).sqrt()))
    }
}

/// Real Bloch wavenumber with the order chosen automatically; error if the
/// frequency falls inside the relevant gap.
pub fn propagating_wavenumber(spec: &CrystalSpec, omega: f64, pol: Polarization) -> Result<f64> {
    let m = auto_order(spec, omega, pol)?;
    if in_gap(spec, omega, pol, m)? {
        return Err(Error::InGap {
            field: crate::error::FieldId::Signal,
            pol,
            omega,
        });
    }
    Ok(bloch_wavenumber(spec, omega, pol, m)?.re)
}

/// Derivatives of the averaged index by Richardson-extrapolated central
/// differences, assembled into wavenumber derivatives
/// `k_mean^(j) = d^j k_mean / domega^j` for j = 0..=4 (no factorials).
fn mean_wavenumber_derivatives(
    spec: &CrystalSpec,
    omega: f64,
    pol: Polarization,
) -> Result<[f64; 5]> {
    // The widest stencil probes omega * (1 +/- 8e-3); require some margin
    // inside the material window so the closure below cannot fail.
    let lambda_probe_lo = wavelength_from_omega(omega * 1.02);
    let lambda_probe_hi = wavelength_from_omega(omega * 0.98);
    spec.layer_indices(lambda_probe_lo, pol)?;
    spec.layer_indices(lambda_probe_hi, pol)?;

    let nbar = |w: f64| {
        spec.layer_indices(wavelength_from_omega(w), pol)
            .expect("probe frequency inside validity window")
            .n_mean
    };
    let n0 = nbar(omega);
    let n1 = diff::derivative(nbar, omega, 1);
    let n2 = diff::derivative(nbar, omega, 2);
    let n3 = diff::derivative(nbar, omega, 3);
    let n4 = diff::derivative(nbar, omega, 4);
    Ok([
        n0 * omega / C,
        (n0 + omega * n1) / C,
        (2.0 * n1 + omega * n2) / C,
        (3.0 * n2 + omega * n3) / C,
        (4.0 * n3 + omega * n4) / C,
    ])
}

/// Derivatives `K^(j) = (1/j!) d^j K / domega^j` for j = 1..=j_max.
///
/// The square-root composition is differentiated analytically; only the
/// smooth material index is differenced numerically.
pub fn dispersion_derivatives(
    spec: &CrystalSpec,
    omega: f64,
    pol: Polarization,
    m: u32,
    j_max: usize,
) -> Result<Vec<f64>> {
    assert!((1..=4).contains(&j_max), "j_max must be 1..=4");
    let kd = mean_wavenumber_derivatives(spec, omega, pol)?;
    let (k0, k1, k2, k3, k4) = (kd[0], kd[1], kd[2], kd[3], kd[4]);

    let c = coupling_ratio(spec, m);
    let factorials = [1.0, 2.0, 6.0, 24.0];
    if c == 0.0 {
        let plain = [k1, k2, k3, k4];
        return Ok((0..j_max).map(|i| plain[i] / factorials[i]).collect());
    }

    let b = std::f64::consts::PI * m as f64 / spec.period_m;
    let u = k0 - b;
    let h = (1.0 - c * c) * k0 * k0 - 2.0 * b * k0 + b * b;
    if h <= 0.0 {
        return Err(Error::InGap {
            field: crate::error::FieldId::Signal,
            pol,
            omega,
        });
    }
    let sign = u.signum();
    // q(k) = sqrt(h(k)) with h quadratic in k; successive derivatives of
    // the defining relation q^2 = h.
    let q = h.sqrt();
    let hp = 2.0 * (1.0 - c * c) * k0 - 2.0 * b;
    let hpp = 2.0 * (1.0 - c * c);
    let q1 = hp / (2.0 * q);
    let q2 = (hpp - 2.0 * q1 * q1) / (2.0 * q);
    let q3 = -6.0 * q1 * q2 / (2.0 * q);
    let q4 = (-6.0 * q2 * q2 - 8.0 * q1 * q3) / (2.0 * q);

    // Chain rule (Faa di Bruno) for K(omega) = b + sign * q(k_mean(omega)).
    let d1 = sign * (q1 * k1);
    let d2 = sign * (q2 * k1 * k1 + q1 * k2);
    let d3 = sign * (q3 * k1.powi(3) + 3.0 * q2 * k1 * k2 + q1 * k3);
    let d4 = sign
        * (q4 * k1.powi(4)
            + 6.0 * q3 * k1 * k1 * k2
            + 3.0 * q2 * k2 * k2
            + 4.0 * q2 * k1 * k3
            + q1 * k4);
    let plain = [d1, d2, d3, d4];
    Ok((0..j_max).map(|i| plain[i] / factorials[i]).collect())
}

/// Full dispersion record at one frequency.
pub fn dispersion_sample(
    spec: &CrystalSpec,
    omega: f64,
    pol: Polarization,
    m: u32,
) -> Result<DispersionSample> {
    let k = bloch_wavenumber(spec, omega, pol, m)?;
    let gap = in_gap(spec, omega, pol, m)?;
    let (k1, k2) = if gap {
        (None, None)
    } else {
        let d = dispersion_derivatives(spec, omega, pol, m, 2)?;
        (Some(d[0]), Some(d[1]))
    };
    Ok(DispersionSample {
        omega,
        pol,
        k,
        k1,
        k2,
        in_gap: gap,
        order_m: m,
    })
}

/// Frequency window (rad/s) inside which the material model may be
/// evaluated, inset slightly so difference stencils stay in range.
pub fn frequency_window(spec: &CrystalSpec) -> (f64, f64) {
    let (lo_um, hi_um) = spec.material.window_um;
    let omega_lo = crate::constants::omega_from_wavelength(hi_um * 0.98e-6);
    let omega_hi = crate::constants::omega_from_wavelength(lo_um * 1.02e-6);
    (omega_lo, omega_hi)
}

/// Solve `k_mean(omega) = target` by bisection; `None` if the target lies
/// outside the reachable range.
fn solve_mean_wavenumber(
    spec: &CrystalSpec,
    pol: Polarization,
    target: f64,
) -> Result<Option<f64>> {
    let (mut lo, mut hi) = frequency_window(spec);
    let f = |w: f64| -> Result<f64> { Ok(mean_wavenumber(spec, w, pol)? - target) };
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if flo > 0.0 || fhi < 0.0 {
        return Ok(None);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) / hi < 1e-15 {
            break;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Locate the m-th band gap of one polarization, if it exists within the
/// material window. Even orders and zero contrast have no gap.
pub fn band_gap(spec: &CrystalSpec, pol: Polarization, m: u32) -> Result<Option<BandGap>> {
    let c = coupling_ratio(spec, m);
    if c == 0.0 {
        return Ok(None);
    }
    let b = std::f64::consts::PI * m as f64 / spec.period_m;
    // Edges satisfy k_mean = b / (1 +/- c); the center has k_mean = b.
    let omega_min = solve_mean_wavenumber(spec, pol, b / (1.0 + c))?;
    let omega_max = solve_mean_wavenumber(spec, pol, b / (1.0 - c))?;
    let center = solve_mean_wavenumber(spec, pol, b)?;
    match (omega_min, omega_max, center) {
        (Some(omega_min), Some(omega_max), Some(omega_c)) => Ok(Some(BandGap {
            pol,
            m,
            omega_min,
            omega_max,
            lambda_center_m: wavelength_from_omega(omega_c),
        })),
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{deg, nm, omega_from_wavelength};
    use crate::material::MaterialModel;
    use approx::assert_relative_eq;

    fn fig2_spec(alpha: f64) -> CrystalSpec {
        CrystalSpec::new(
            MaterialModel::bbo_kato_1986(),
            279.1,
            0.5,
            alpha,
            deg(41.8),
            4.0,
        )
        .unwrap()
    }

    #[test]
    fn coupling_vanishes_for_even_orders_and_zero_contrast() {
        let spec = fig2_spec(0.027);
        let w = omega_from_wavelength(nm(850.0));
        let k2 = coupling_coefficient(&spec, w, Polarization::Ordinary, 2).unwrap();
        assert_eq!(k2.norm(), 0.0);
        let spec0 = fig2_spec(0.0);
        let k1 = coupling_coefficient(&spec0, w, Polarization::Ordinary, 1).unwrap();
        assert_eq!(k1.norm(), 0.0);
    }

    #[test]
    fn coupling_magnitude_first_order() {
        let spec = fig2_spec(0.027);
        let w = omega_from_wavelength(nm(850.0));
        let kappa = coupling_coefficient(&spec, w, Polarization::Ordinary, 1).unwrap();
        let k_mean = mean_wavenumber(&spec, w, Polarization::Ordinary).unwrap();
        assert_relative_eq!(
            kappa.norm(),
            0.027 * k_mean / (2.0 * std::f64::consts::PI),
            max_relative = 1e-14
        );
        // Purely imaginary by construction.
        assert_eq!(kappa.re, 0.0);
    }

    #[test]
    fn bragg_mismatch_vanishes_at_gap_center() {
        let spec = fig2_spec(0.027);
        let gap = band_gap(&spec, Polarization::Ordinary, 1).unwrap().unwrap();
        let w_c = omega_from_wavelength(gap.lambda_center_m);
        let db = bragg_mismatch(&spec, w_c, Polarization::Ordinary, 1).unwrap();
        let k_scale = 2.0 * std::f64::consts::PI / spec.period_m;
        assert!(db.abs() / k_scale < 1e-10, "db = {db}");
    }

    #[test]
    fn bragg_mismatch_long_period_limit() {
        let mut spec = fig2_spec(0.027);
        spec.period_m = 1.0;
        let w = omega_from_wavelength(nm(850.0));
        let db = bragg_mismatch(&spec, w, Polarization::Ordinary, 1).unwrap();
        let k_mean = mean_wavenumber(&spec, w, Polarization::Ordinary).unwrap();
        assert_relative_eq!(db, 2.0 * k_mean, max_relative = 1e-6);
    }

    #[test]
    fn gap_center_near_919_nm_for_fig2_crystal() {
        // Bisection root of the Bragg mismatch with the bundled Kato data;
        // the quoted design value of 904.9 nm depends on unpublished
        // dispersion data and is matched only loosely (see acceptance).
        let spec = fig2_spec(0.027);
        let gap = band_gap(&spec, Polarization::Ordinary, 1).unwrap().unwrap();
        assert_relative_eq!(gap.lambda_center_m * 1e9, 919.0, epsilon = 1.0);
    }

    #[test]
    fn zero_contrast_reduces_to_material_dispersion() {
        let spec = fig2_spec(0.0);
        for lam in [700.0, 850.0, 931.0, 1100.0] {
            let w = omega_from_wavelength(nm(lam));
            for pol in [Polarization::Ordinary, Polarization::Extraordinary] {
                let k = bloch_wavenumber(&spec, w, pol, 1).unwrap();
                let k_mean = mean_wavenumber(&spec, w, pol).unwrap();
                assert_relative_eq!(k.re, k_mean, max_relative = 1e-13);
                assert_eq!(k.im, 0.0);
            }
        }
        assert!(band_gap(&spec, Polarization::Ordinary, 1).unwrap().is_none());
    }

    #[test]
    fn wavenumber_is_exactly_pi_over_period_at_edges() {
        let spec = fig2_spec(0.027);
        let gap = band_gap(&spec, Polarization::Ordinary, 1).unwrap().unwrap();
        let b = std::f64::consts::PI / spec.period_m;
        for w in [gap.omega_min, gap.omega_max] {
            let k = bloch_wavenumber(&spec, w, Polarization::Ordinary, 1).unwrap();
            assert_relative_eq!(k.re, b, max_relative = 1e-7);
            assert!(k.im.abs() / b < 1e-3);
        }
    }

    #[test]
    fn gaps_exist_for_both_polarizations() {
        let spec = fig2_spec(0.027);
        let go = band_gap(&spec, Polarization::Ordinary, 1).unwrap().unwrap();
        let ge = band_gap(&spec, Polarization::Extraordinary, 1)
            .unwrap()
            .unwrap();
        assert!(go.omega_min < go.omega_max);
        assert!(ge.omega_min < ge.omega_max);
        // Ordinary gap sits at longer wavelength than the extraordinary one.
        assert!(go.lambda_center_m > ge.lambda_center_m);
        // Inside: complex K and the in-gap flag.
        let w_mid = 0.5 * (go.omega_min + go.omega_max);
        assert!(in_gap(&spec, w_mid, Polarization::Ordinary, 1).unwrap());
        let k = bloch_wavenumber(&spec, w_mid, Polarization::Ordinary, 1).unwrap();
        assert!(k.im > 0.0);
    }

    #[test]
    fn even_order_gap_absent() {
        let spec = fig2_spec(0.027);
        assert!(band_gap(&spec, Polarization::Ordinary, 2).unwrap().is_none());
    }

    #[test]
    fn group_velocity_collapses_at_gap_edges() {
        let spec = fig2_spec(0.027);
        let gap = band_gap(&spec, Polarization::Ordinary, 1).unwrap().unwrap();
        let width = gap.width();
        let mut prev_vg = f64::INFINITY;
        // Approach the lower edge from below: group velocity must fall.
        for steps in [8.0, 4.0, 2.0, 1.0, 0.5, 0.25] {
            let w = gap.omega_min - steps * width;
            let d = dispersion_derivatives(&spec, w, Polarization::Ordinary, 1, 1).unwrap();
            let vg = 1.0 / d[0];
            assert!(vg < prev_vg, "vg not decreasing toward edge");
            prev_vg = vg;
        }
        assert!(prev_vg < 0.45 * C);
    }

    #[test]
    fn derivatives_reduce_to_material_for_zero_contrast() {
        let spec = fig2_spec(0.0);
        let w = omega_from_wavelength(nm(850.0));
        let d = dispersion_derivatives(&spec, w, Polarization::Ordinary, 1, 2).unwrap();
        let kd = mean_wavenumber_derivatives(&spec, w, Polarization::Ordinary).unwrap();
        assert_relative_eq!(d[0], kd[1], max_relative = 1e-12);
        assert_relative_eq!(d[1], kd[2] / 2.0, max_relative = 1e-8);
        // Bulk group index of BBO at 850 nm is about 1.68.
        assert_relative_eq!(C * d[0], 1.6815, epsilon = 2e-3);
    }

    #[test]
    fn in_gap_derivatives_are_domain_errors() {
        let spec = fig2_spec(0.027);
        let gap = band_gap(&spec, Polarization::Ordinary, 1).unwrap().unwrap();
        let w_mid = 0.5 * (gap.omega_min + gap.omega_max);
        assert!(matches!(
            dispersion_derivatives(&spec, w_mid, Polarization::Ordinary, 1, 2),
            Err(Error::InGap { .. })
        ));
    }

    #[test]
    fn wavenumber_monotone_on_each_side_of_gap() {
        let spec = fig2_spec(0.027);
        let gap = band_gap(&spec, Polarization::Extraordinary, 1)
            .unwrap()
            .unwrap();
        let width = gap.width();
        let mut prev = 0.0;
        for i in 0..40 {
            let w = gap.omega_min - (40 - i) as f64 * width * 0.5;
            let k = bloch_wavenumber(&spec, w, Polarization::Extraordinary, 1)
                .unwrap()
                .re;
            assert!(k > prev);
            prev = k;
        }
        let mut prev = 0.0;
        for i in 0..40 {
            let w = gap.omega_max + (i + 1) as f64 * width * 0.5;
            let k = bloch_wavenumber(&spec, w, Polarization::Extraordinary, 1)
                .unwrap()
                .re;
            assert!(k > prev);
            prev = k;
        }
    }

    #[test]
    fn auto_order_selects_nearest_resonance() {
        let spec = fig2_spec(0.027);
        let w_s = omega_from_wavelength(nm(850.0));
        let w_p = omega_from_wavelength(nm(425.0));
        assert_eq!(auto_order(&spec, w_s, Polarization::Extraordinary).unwrap(), 1);
        assert_eq!(auto_order(&spec, w_p, Polarization::Extraordinary).unwrap(), 2);
    }
}
