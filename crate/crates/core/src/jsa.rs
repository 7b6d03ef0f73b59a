//! Joint spectral amplitude of collinear degenerate type-II parametric
//! down-conversion in the photonic crystal.
//!
//! The two-photon amplitude factors into a pump spectral envelope and a
//! phase-matching function,
//!
//! `f_lmn(ws, wi) = pump(ws + wi) * phi_lmn(ws, wi)`,
//!
//! where `phi` carries a sinc of the accumulated phase mismatch, the
//! Bloch-envelope Fourier prefactors of the three fields, and per-photon
//! spectral weights `sqrt(w K' / (2 n_mean^2))`. The pump is extraordinary
//! at `ws + wi`, the signal extraordinary at `ws`, and the idler ordinary
//! at `wi`. The grating adds `2 pi (l - m - n) / period` to the bulk
//! mismatch; the fundamental triple (0, 0, 0) dominates because any other
//! combination is far off resonance for submicron periods.
//!
//! Absolute normalization (transverse area, hbar) is fixed to one: only
//! the spectral shape matters for factorability.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{self, transfer};
use crate::constants::omega_from_wavelength;
use crate::error::{Error, FieldId, Result};
use crate::material::{CrystalSpec, Polarization};

/// Gaussian pump pulse, amplitude form `exp[-(w - wp)^2 / sigma^2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpSpec {
    /// Central pump wavelength (m); equals half the degenerate emission
    /// wavelength.
    pub center_wavelength_m: f64,
    /// Bandwidth parameter sigma (rad/s) of the amplitude envelope.
    pub sigma_rad_s: f64,
}

impl PumpSpec {
    /// Build from the full width at half maximum of the amplitude
    /// envelope, quoted in nanometers: `fwhm_omega = 2 sqrt(ln 2) sigma`.
    /// The wavelength width is mapped to frequency exactly (two-sided).
    pub fn from_fwhm_nm(center_nm: f64, fwhm_nm: f64) -> Self {
        let lo = omega_from_wavelength((center_nm + 0.5 * fwhm_nm) * 1e-9);
        let hi = omega_from_wavelength((center_nm - 0.5 * fwhm_nm) * 1e-9);
        let fwhm_omega = hi - lo;
        PumpSpec {
            center_wavelength_m: center_nm * 1e-9,
            sigma_rad_s: fwhm_omega / (2.0 * (2.0f64.ln()).sqrt()),
        }
    }

    /// Central pump frequency (rad/s); twice the degenerate frequency.
    pub fn omega_pump(&self) -> f64 {
        omega_from_wavelength(self.center_wavelength_m)
    }

    /// Degenerate emission frequency (rad/s).
    pub fn omega_degenerate(&self) -> f64 {
        0.5 * self.omega_pump()
    }
}

/// Pump spectral envelope at the sum frequency.
pub fn pump_envelope(pump: &PumpSpec, omega_s: f64, omega_i: f64) -> f64 {
    let detuning = omega_s + omega_i - pump.omega_pump();
    (-(detuning / pump.sigma_rad_s).powi(2)).exp()
}

/// Harmonic triple (l, m, n) for pump, signal and idler envelopes.
pub type HarmonicTriple = (i32, i32, i32);

/// Phase mismatch including the grating momentum,
/// `dK = K_p - K_s - K_i + 2 pi (l - m - n) / period` (rad/m).
pub fn phase_mismatch(
    spec: &CrystalSpec,
    omega_s: f64,
    omega_i: f64,
    triple: HarmonicTriple,
) -> Result<f64> {
    let k_p = field_wavenumber(spec, omega_s + omega_i, FieldId::Pump)?;
    let k_s = field_wavenumber(spec, omega_s, FieldId::Signal)?;
    let k_i = field_wavenumber(spec, omega_i, FieldId::Idler)?;
    let (l, m, n) = triple;
    let grating = 2.0 * std::f64::consts::PI * f64::from(l - m - n) / spec.period_m;
    Ok(k_p - k_s - k_i + grating)
}

/// Polarization assignment of the type-II interaction.
pub fn field_polarization(field: FieldId) -> Polarization {
    match field {
        FieldId::Pump | FieldId::Signal => Polarization::Extraordinary,
        FieldId::Idler => Polarization::Ordinary,
    }
}

fn field_wavenumber(spec: &CrystalSpec, omega: f64, field: FieldId) -> Result<f64> {
    let pol = field_polarization(field);
    let m = bloch::auto_order(spec, omega, pol)?;
    if bloch::in_gap(spec, omega, pol, m)? {
        return Err(Error::InGap { field, pol, omega });
    }
    Ok(bloch::bloch_wavenumber(spec, omega, pol, m)?.re)
}

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Spectral weight `sqrt(w K' / (2 eps))` with the permittivity taken as
/// the squared cell-mean index (transverse area and hbar set to one).
fn spectral_weight(spec: &CrystalSpec, omega: f64, field: FieldId) -> Result<f64> {
    let pol = field_polarization(field);
    let m = bloch::auto_order(spec, omega, pol)?;
    if bloch::in_gap(spec, omega, pol, m)? {
        return Err(Error::InGap { field, pol, omega });
    }
    let k1 = bloch::dispersion_derivatives(spec, omega, pol, m, 1)?[0];
    let n_mean = bloch::mean_index(spec, omega, pol)?;
    Ok((omega * k1 / (2.0 * n_mean * n_mean)).sqrt())
}

fn envelope_coefficient(
    spec: &CrystalSpec,
    omega: f64,
    field: FieldId,
    l: i32,
) -> Result<Complex64> {
    let pol = field_polarization(field);
    let (_, four) = transfer::translation_matrix_bloch(spec, omega, pol)?;
    Ok(four.amp(l))
}

/// Full phase-matching function for one harmonic triple.
pub fn phasematching_function(
    spec: &CrystalSpec,
    omega_s: f64,
    omega_i: f64,
    triple: HarmonicTriple,
) -> Result<Complex64> {
    let dk = phase_mismatch(spec, omega_s, omega_i, triple)?;
    let (l, m, n) = triple;
    let eps_p = envelope_coefficient(spec, omega_s + omega_i, FieldId::Pump, l)?;
    let eps_s = envelope_coefficient(spec, omega_s, FieldId::Signal, m)?;
    let eps_i = envelope_coefficient(spec, omega_i, FieldId::Idler, n)?;
    let ell_s = spectral_weight(spec, omega_s, FieldId::Signal)?;
    let ell_i = spectral_weight(spec, omega_i, FieldId::Idler)?;
    let arg = 0.5 * spec.length_m * dk;
    let phase = Complex64::from_polar(1.0, arg);
    Ok(eps_p * eps_s.conj() * eps_i.conj() * ell_s * ell_i * sinc(arg) * phase)
}

/// Rectangular signal/idler frequency grid, uniform and symmetric about
/// the degenerate frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub omega_o: f64,
    /// Half-span of each axis (rad/s).
    pub half_span: f64,
    /// Points per axis.
    pub n: usize,
}

impl GridSpec {
    pub fn axis(&self) -> Vec<f64> {
        let n = self.n;
        assert!(n >= 2, "grid needs at least two points per axis");
        (0..n)
            .map(|j| self.omega_o - self.half_span + 2.0 * self.half_span * j as f64 / (n - 1) as f64)
            .collect()
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_span / (self.n - 1) as f64
    }
}

/// Choose the default grid half-span: a given number of phase-matching
/// bandwidths, clipped so every axis point stays clear of the band gaps.
///
/// `tau_s2_fs2` and `tau_i2_fs2` are the second-order mismatch
/// coefficients at the crystal length (fs^2); the single-axis
/// phase-matching bandwidth of the Gaussian model is
/// `(4/gamma)^(1/4) / sqrt(tau2)`.
pub fn auto_grid(
    spec: &CrystalSpec,
    omega_o: f64,
    tau_s2_fs2: f64,
    tau_i2_fs2: f64,
    n: usize,
    span_bandwidths: f64,
    gap_margin_gap_widths: f64,
    gamma: f64,
) -> Result<GridSpec> {
    let bw = |tau2_fs2: f64| -> f64 {
        let tau2_si = tau2_fs2.abs() * 1e-30;
        (4.0 / gamma).powf(0.25) / tau2_si.sqrt()
    };
    let mut half = span_bandwidths * bw(tau_s2_fs2).max(bw(tau_i2_fs2));
    for (pol, field) in [
        (Polarization::Extraordinary, FieldId::Signal),
        (Polarization::Ordinary, FieldId::Idler),
    ] {
        if let Some(gap) = bloch::band_gap(spec, pol, 1)? {
            let margin = gap_margin_gap_widths * gap.width();
            let clearance = if omega_o > gap.omega_max {
                omega_o - gap.omega_max - margin
            } else {
                gap.omega_min - omega_o - margin
            };
            if clearance <= 0.0 {
                return Err(Error::InGap {
                    field,
                    pol,
                    omega: omega_o,
                });
            }
            half = half.min(clearance);
        }
    }
    // Stay inside the material validity window on both axes and on the sum.
    let (w_lo, w_hi) = bloch::frequency_window(spec);
    half = half.min(omega_o - w_lo).min((w_hi - 2.0 * omega_o) / 2.0);
    if half <= 0.0 {
        return Err(Error::Numerical(
            "no admissible grid span at this degenerate frequency".into(),
        ));
    }
    Ok(GridSpec {
        omega_o,
        half_span: half,
        n,
    })
}

/// A grid column or row zeroed because its frequency fell inside a gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapClip {
    pub field: FieldId,
    pub index: usize,
    pub omega: f64,
}

/// Complex joint spectral amplitude on a rectangular grid.
///
/// `amplitude[(j, k)] = f(omega_s[j], omega_i[k])`.
#[derive(Debug, Clone)]
pub struct JointSpectrum {
    pub omega_s: Vec<f64>,
    pub omega_i: Vec<f64>,
    pub amplitude: DMatrix<Complex64>,
    pub triples: Vec<HarmonicTriple>,
    /// Rows/columns zeroed because they touched a band gap.
    pub clipped: Vec<GapClip>,
}

impl JointSpectrum {
    pub fn n_s(&self) -> usize {
        self.omega_s.len()
    }

    pub fn n_i(&self) -> usize {
        self.omega_i.len()
    }
}

struct AxisTables {
    k: Vec<f64>,
    ell: Vec<f64>,
    eps: Vec<Complex64>,
    in_gap: Vec<bool>,
}

fn axis_tables(spec: &CrystalSpec, axis: &[f64], field: FieldId, l: i32) -> Result<AxisTables> {
    let entries: Vec<Result<(f64, f64, Complex64, bool)>> = axis
        .par_iter()
        .map(|&w| {
            let pol = field_polarization(field);
            let m = bloch::auto_order(spec, w, pol)?;
            if bloch::in_gap(spec, w, pol, m)? {
                return Ok((f64::NAN, f64::NAN, Complex64::new(0.0, 0.0), true));
            }
            let k = bloch::bloch_wavenumber(spec, w, pol, m)?.re;
            let ell = spectral_weight(spec, w, field)?;
            let eps = envelope_coefficient(spec, w, field, l)?;
            Ok((k, ell, eps, false))
        })
        .collect();
    let mut t = AxisTables {
        k: Vec::with_capacity(axis.len()),
        ell: Vec::with_capacity(axis.len()),
        eps: Vec::with_capacity(axis.len()),
        in_gap: Vec::with_capacity(axis.len()),
    };
    for e in entries {
        let (k, ell, eps, gap) = e?;
        t.k.push(k);
        t.ell.push(ell);
        t.eps.push(eps);
        t.in_gap.push(gap);
    }
    Ok(t)
}

/// Joint spectral amplitude summed over the given harmonic triples.
///
/// Grid points whose signal or idler frequency falls inside a gap are set
/// to zero and recorded in `clipped`; an in-gap pump frequency is a
/// domain error (it cannot happen on sensible grids since the pump is far
/// from any odd-order gap).
pub fn joint_spectrum_sum(
    spec: &CrystalSpec,
    pump: &PumpSpec,
    grid: &GridSpec,
    triples: &[HarmonicTriple],
) -> Result<JointSpectrum> {
    let omega_s = grid.axis();
    let omega_i = grid.axis();
    let n = grid.n;
    let mut amplitude = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    let mut clipped = Vec::new();

    for &triple in triples {
        let (l, m_h, n_h) = triple;
        let sig = axis_tables(spec, &omega_s, FieldId::Signal, m_h)?;
        let idl = axis_tables(spec, &omega_i, FieldId::Idler, n_h)?;
        for (j, (&w, &gap)) in omega_s.iter().zip(&sig.in_gap).enumerate() {
            if gap {
                clipped.push(GapClip {
                    field: FieldId::Signal,
                    index: j,
                    omega: w,
                });
            }
        }
        for (k, (&w, &gap)) in omega_i.iter().zip(&idl.in_gap).enumerate() {
            if gap {
                clipped.push(GapClip {
                    field: FieldId::Idler,
                    index: k,
                    omega: w,
                });
            }
        }

        let grating =
            2.0 * std::f64::consts::PI * f64::from(l - m_h - n_h) / spec.period_m;
        let half_l = 0.5 * spec.length_m;
        let rows: Vec<Result<Vec<Complex64>>> = (0..n)
            .into_par_iter()
            .map(|j| {
                let mut row = vec![Complex64::new(0.0, 0.0); n];
                if sig.in_gap[j] {
                    return Ok(row);
                }
                let ws = omega_s[j];
                for (k, slot) in row.iter_mut().enumerate() {
                    if idl.in_gap[k] {
                        continue;
                    }
                    let wi = omega_i[k];
                    let w_sum = ws + wi;
                    let k_p = field_wavenumber(spec, w_sum, FieldId::Pump)?;
                    let eps_p = envelope_coefficient(spec, w_sum, FieldId::Pump, l)?;
                    let dk = k_p - sig.k[j] - idl.k[k] + grating;
                    let arg = half_l * dk;
                    let phi = eps_p
                        * sig.eps[j].conj()
                        * idl.eps[k].conj()
                        * (sig.ell[j] * idl.ell[k] * sinc(arg))
                        * Complex64::from_polar(1.0, arg);
                    *slot = phi * pump_envelope(pump, ws, wi);
                }
                Ok(row)
            })
            .collect();
        for (j, row) in rows.into_iter().enumerate() {
            for (k, v) in row?.into_iter().enumerate() {
                amplitude[(j, k)] += v;
            }
        }
    }

    let rank = |f: FieldId| match f {
        FieldId::Pump => 0u8,
        FieldId::Signal => 1,
        FieldId::Idler => 2,
    };
    clipped.sort_by_key(|c| (rank(c.field), c.index));
    clipped.dedup_by(|a, b| a.index == b.index && a.field == b.field);

    Ok(JointSpectrum {
        omega_s,
        omega_i,
        amplitude,
        triples: triples.to_vec(),
        clipped,
    })
}

/// Joint spectral amplitude for a single harmonic triple (the fundamental
/// (0, 0, 0) unless stated otherwise).
pub fn joint_spectrum(
    spec: &CrystalSpec,
    pump: &PumpSpec,
    grid: &GridSpec,
    triple: HarmonicTriple,
) -> Result<JointSpectrum> {
    joint_spectrum_sum(spec, pump, grid, &[triple])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{deg, nm};
    use crate::material::MaterialModel;
    use approx::assert_relative_eq;

    fn test_spec() -> CrystalSpec {
        CrystalSpec::new(
            MaterialModel::bbo_kato_1986(),
            275.0,
            0.5,
            0.05,
            deg(41.8),
            4.0,
        )
        .unwrap()
    }

    #[test]
    fn pump_envelope_peak_and_width() {
        let pump = PumpSpec::from_fwhm_nm(425.0, 10.0);
        let w_o = pump.omega_degenerate();
        assert_relative_eq!(pump_envelope(&pump, w_o, w_o), 1.0, epsilon = 1e-14);
        let e = pump_envelope(&pump, w_o + pump.sigma_rad_s, w_o);
        assert_relative_eq!(e, (-1.0f64).exp(), max_relative = 1e-12);
        // Symmetric under signal/idler exchange.
        let (a, b) = (w_o + 3e12, w_o - 7e12);
        assert_eq!(
            pump_envelope(&pump, a, b),
            pump_envelope(&pump, b, a)
        );
    }

    #[test]
    fn fwhm_conversion_matches_exact_two_sided_width() {
        let pump = PumpSpec::from_fwhm_nm(425.0, 10.0);
        // Two-sided frequency width of a 10 nm window at 425 nm.
        let w1 = omega_from_wavelength(nm(420.0));
        let w2 = omega_from_wavelength(nm(430.0));
        let sigma = (w1 - w2) / (2.0 * (2.0f64.ln()).sqrt());
        assert_relative_eq!(pump.sigma_rad_s, sigma, max_relative = 1e-12);
        assert_relative_eq!(sigma, 6.264e13, max_relative = 1e-3);
        // Amplitude really is 1/2 at the half-width point.
        let w_o = pump.omega_degenerate();
        let at_half_width = pump_envelope(&pump, w_o, w_o + 0.5 * (w1 - w2));
        assert_relative_eq!(at_half_width, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn mismatch_depends_only_on_harmonic_difference() {
        let spec = test_spec();
        let ws = omega_from_wavelength(nm(848.0));
        let wi = omega_from_wavelength(nm(852.0));
        let d000 = phase_mismatch(&spec, ws, wi, (0, 0, 0)).unwrap();
        let d110 = phase_mismatch(&spec, ws, wi, (1, 1, 0)).unwrap();
        assert_eq!(d000, d110);
        let d100 = phase_mismatch(&spec, ws, wi, (1, 0, 0)).unwrap();
        let offset = 2.0 * std::f64::consts::PI / spec.period_m;
        assert_relative_eq!(d100 - d000, offset, max_relative = 1e-12);
        assert_relative_eq!(offset, 2.285e7, max_relative = 1e-3);
    }

    #[test]
    fn in_gap_frequency_reports_offending_field() {
        let spec = test_spec();
        let gap = bloch::band_gap(&spec, Polarization::Ordinary, 1)
            .unwrap()
            .unwrap();
        let w_mid = 0.5 * (gap.omega_min + gap.omega_max);
        let ws = omega_from_wavelength(nm(850.0));
        match phase_mismatch(&spec, ws, w_mid, (0, 0, 0)) {
            Err(Error::InGap { field, .. }) => assert_eq!(field, FieldId::Idler),
            other => panic!("expected idler in-gap error, got {other:?}"),
        }
    }

    #[test]
    fn sinc_behaviour() {
        assert_eq!(sinc(0.0), 1.0);
        assert!(sinc(std::f64::consts::PI).abs() < 1e-15);
        assert_relative_eq!(sinc(1.3), 1.3f64.sin() / 1.3, max_relative = 1e-15);
    }

    #[test]
    fn factorization_identity() {
        // The gridded amplitude equals pump envelope times the
        // phase-matching function computed independently, point by point.
        let spec = test_spec();
        let pump = PumpSpec::from_fwhm_nm(425.0, 10.0);
        let grid = GridSpec {
            omega_o: pump.omega_degenerate(),
            half_span: 2.0e13,
            n: 7,
        };
        let js = joint_spectrum(&spec, &pump, &grid, (0, 0, 0)).unwrap();
        for j in [0usize, 3, 6] {
            for k in [1usize, 4, 5] {
                let ws = js.omega_s[j];
                let wi = js.omega_i[k];
                let expect = phasematching_function(&spec, ws, wi, (0, 0, 0)).unwrap()
                    * pump_envelope(&pump, ws, wi);
                let got = js.amplitude[(j, k)];
                assert_relative_eq!(got.re, expect.re, max_relative = 1e-12);
                assert_relative_eq!(got.im, expect.im, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn type_ii_amplitude_is_asymmetric() {
        let spec = test_spec();
        let w1 = omega_from_wavelength(nm(846.0));
        let w2 = omega_from_wavelength(nm(854.0));
        let a = phasematching_function(&spec, w1, w2, (0, 0, 0)).unwrap();
        let b = phasematching_function(&spec, w2, w1, (0, 0, 0)).unwrap();
        assert!(
            (a.norm() - b.norm()).abs() > 1e-3 * a.norm().max(b.norm()),
            "signal/idler exchange left |phi| unchanged: {} vs {}",
            a.norm(),
            b.norm()
        );
    }

    #[test]
    fn zero_length_phase_matching_is_flat() {
        let mut spec = test_spec();
        spec.length_m = 0.0;
        // Ratio of phi to its separable per-axis factors depends only on
        // the sum frequency once the sinc is identically one.
        let w_o = omega_from_wavelength(nm(850.0));
        let d = 1.5e12;
        let pairs = [(w_o + d, w_o - d), (w_o - d, w_o + d), (w_o, w_o)];
        let mut ratios = Vec::new();
        for (ws, wi) in pairs {
            let phi = phasematching_function(&spec, ws, wi, (0, 0, 0)).unwrap();
            let per_axis = spectral_weight(&spec, ws, FieldId::Signal).unwrap()
                * spectral_weight(&spec, wi, FieldId::Idler).unwrap()
                * envelope_coefficient(&spec, ws, FieldId::Signal, 0)
                    .unwrap()
                    .conj()
                * envelope_coefficient(&spec, wi, FieldId::Idler, 0)
                    .unwrap()
                    .conj();
            ratios.push(phi / per_axis);
        }
        assert_relative_eq!(ratios[0].re, ratios[1].re, max_relative = 1e-10);
        assert_relative_eq!(ratios[0].im, ratios[1].im, epsilon = 1e-12);
    }

    #[test]
    fn off_resonance_triples_are_negligible() {
        let spec = test_spec();
        let pump = PumpSpec::from_fwhm_nm(425.0, 10.0);
        let grid = GridSpec {
            omega_o: pump.omega_degenerate(),
            half_span: 1.5e13,
            n: 5,
        };
        let base = joint_spectrum(&spec, &pump, &grid, (0, 0, 0)).unwrap();
        let summed = joint_spectrum_sum(&spec, &pump, &grid, &[(0, 0, 0), (0, 1, 0)]).unwrap();
        let mut max_base: f64 = 0.0;
        let mut max_diff: f64 = 0.0;
        for j in 0..grid.n {
            for k in 0..grid.n {
                max_base = max_base.max(base.amplitude[(j, k)].norm());
                max_diff =
                    max_diff.max((summed.amplitude[(j, k)] - base.amplitude[(j, k)]).norm());
            }
        }
        assert!(
            max_diff < 2e-3 * max_base,
            "off-resonance triple contributes {max_diff} vs {max_base}"
        );
    }

    #[test]
    fn grid_touching_gap_is_zeroed_and_flagged() {
        let spec = test_spec();
        let pump = PumpSpec::from_fwhm_nm(425.0, 10.0);
        let gap = bloch::band_gap(&spec, Polarization::Extraordinary, 1)
            .unwrap()
            .unwrap();
        // Center the grid just above the signal gap edge so the lower rows
        // dip inside.
        let grid = GridSpec {
            omega_o: gap.omega_max + 1.0e12,
            half_span: 3.0e12,
            n: 9,
        };
        let js = joint_spectrum(&spec, &pump, &grid, (0, 0, 0)).unwrap();
        assert!(!js.clipped.is_empty());
        let clip = js.clipped[0];
        assert_eq!(clip.field, FieldId::Signal);
        for k in 0..grid.n {
            assert_eq!(js.amplitude[(clip.index, k)].norm(), 0.0);
        }
    }
}
