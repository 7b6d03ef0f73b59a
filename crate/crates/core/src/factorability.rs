//! Factorability analysis of the two-photon state.
//!
//! The accumulated phase mismatch `L dK` is expanded to quartic order in
//! the detunings `nu = omega - omega_o` around the degenerate frequency.
//! With a Gaussian pump and the Gaussian sinc substitution
//! `sinc(x) ~ exp(-gamma x^2)`, `gamma = 0.193`, the joint amplitude has
//! closed Gaussian forms at several levels of approximation. Three
//! conditions control how close the state is to factorable:
//!
//! 1. complete group-velocity matching, `tau_s1 = tau_i1 = 0`;
//! 2. weak pump dispersion, `|tau_p_j| << |tau_s_j|, |tau_i_j|`;
//! 3. a pump bandwidth well above
//!    `2 (4/gamma)^(1/4) (tau_s2 + tau_i2)^(-1/2)`.
//!
//! The Schmidt number of a joint amplitude is computed from its singular
//! values; `K = 1` if and only if the state is separable.
//!
//! Internally this module works in femtosecond units: `tau^(j)` in fs^j
//! and detunings in rad/fs, which keeps every quantity near unity.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch;
use crate::constants::FEMTOSECOND;
use crate::error::{Error, FieldId, Result};
use crate::jsa::{field_polarization, JointSpectrum, PumpSpec};
use crate::material::CrystalSpec;

/// Gaussian sinc-substitution constant.
pub const DEFAULT_GAMMA: f64 = 0.193;

/// Mismatch Taylor coefficients `tau_mu^(j) = L (K_p^(j) - K_mu^(j))` and
/// pump coefficients `tau_p^(j) = L K_p^(j)`, with the 1/j! convention
/// inside `K^(j)`. Entry `j - 1` holds order j, in fs^j.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TaylorCoefficients {
    pub tau_s_fs: [f64; 4],
    pub tau_i_fs: [f64; 4],
    pub tau_p_fs: [f64; 4],
    /// Collinear phase mismatch at degeneracy,
    /// `K_s(w_o) + K_i(w_o) - K_p(2 w_o)` (rad/m).
    pub dk0_rad_m: f64,
    pub omega_o: f64,
    pub length_m: f64,
}

impl TaylorCoefficients {
    pub fn tau_s(&self, j: usize) -> f64 {
        self.tau_s_fs[j - 1]
    }
    pub fn tau_i(&self, j: usize) -> f64 {
        self.tau_i_fs[j - 1]
    }
    pub fn tau_p(&self, j: usize) -> f64 {
        self.tau_p_fs[j - 1]
    }

    /// Same coefficients rescaled to a different crystal length.
    pub fn at_length(&self, length_m: f64) -> TaylorCoefficients {
        let r = length_m / self.length_m;
        let scale = |a: [f64; 4]| [a[0] * r, a[1] * r, a[2] * r, a[3] * r];
        TaylorCoefficients {
            tau_s_fs: scale(self.tau_s_fs),
            tau_i_fs: scale(self.tau_i_fs),
            tau_p_fs: scale(self.tau_p_fs),
            length_m,
            ..*self
        }
    }
}

fn field_derivatives(spec: &CrystalSpec, omega: f64, field: FieldId) -> Result<Vec<f64>> {
    let pol = field_polarization(field);
    let m = bloch::auto_order(spec, omega, pol)?;
    if bloch::in_gap(spec, omega, pol, m)? {
        return Err(Error::InGap { field, pol, omega });
    }
    bloch::dispersion_derivatives(spec, omega, pol, m, 4)
}

/// Build the mismatch Taylor coefficients at the crystal's length.
///
/// Pump derivatives are evaluated at `2 omega_o`, signal and idler at
/// `omega_o`; both frequencies must propagate.
pub fn taylor_coefficients(spec: &CrystalSpec, omega_o: f64) -> Result<TaylorCoefficients> {
    let dp = field_derivatives(spec, 2.0 * omega_o, FieldId::Pump)?;
    let ds = field_derivatives(spec, omega_o, FieldId::Signal)?;
    let di = field_derivatives(spec, omega_o, FieldId::Idler)?;
    let length = spec.length_m;

    let mut tau_s_fs = [0.0; 4];
    let mut tau_i_fs = [0.0; 4];
    let mut tau_p_fs = [0.0; 4];
    for j in 1..=4 {
        let to_fs = length / FEMTOSECOND.powi(j as i32);
        tau_s_fs[j - 1] = (dp[j - 1] - ds[j - 1]) * to_fs;
        tau_i_fs[j - 1] = (dp[j - 1] - di[j - 1]) * to_fs;
        tau_p_fs[j - 1] = dp[j - 1] * to_fs;
    }

    let k_p = bloch::bloch_wavenumber(
        spec,
        2.0 * omega_o,
        field_polarization(FieldId::Pump),
        bloch::auto_order(spec, 2.0 * omega_o, field_polarization(FieldId::Pump))?,
    )?
    .re;
    let k_s = bloch::bloch_wavenumber(
        spec,
        omega_o,
        field_polarization(FieldId::Signal),
        bloch::auto_order(spec, omega_o, field_polarization(FieldId::Signal))?,
    )?
    .re;
    let k_i = bloch::bloch_wavenumber(
        spec,
        omega_o,
        field_polarization(FieldId::Idler),
        bloch::auto_order(spec, omega_o, field_polarization(FieldId::Idler))?,
    )?
    .re;

    Ok(TaylorCoefficients {
        tau_s_fs,
        tau_i_fs,
        tau_p_fs,
        dk0_rad_m: k_s + k_i - k_p,
        omega_o,
        length_m: length,
    })
}

/// Pass/fail thresholds for the three factorability conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionThresholds {
    /// Maximum |tau^(1)| (fs) for group-velocity matching.
    pub gvm_fs: f64,
    /// Maximum |tau_p^(2)| / min(|tau_s^(2)|, |tau_i^(2)|).
    pub weak_pump_ratio: f64,
    /// Minimum sigma / sigma_threshold for the broadband condition.
    pub bandwidth_factor: f64,
}

impl Default for ConditionThresholds {
    fn default() -> Self {
        ConditionThresholds {
            gvm_fs: 0.5,
            weak_pump_ratio: 0.25,
            bandwidth_factor: 3.0,
        }
    }
}

/// Numeric margins of the three conditions plus pass/fail flags.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionReport {
    pub gvm_signal_fs: f64,
    pub gvm_idler_fs: f64,
    /// |tau_p^(j)| / min(|tau_s^(j)|, |tau_i^(j)|) for j = 2, 3, 4.
    pub weak_pump_ratios: [f64; 3],
    /// Pump sigma divided by the broadband threshold.
    pub bandwidth_factor: f64,
    /// Threshold bandwidth itself (rad/s).
    pub sigma_threshold_rad_s: f64,
    pub gvm_pass: bool,
    pub weak_pump_pass: bool,
    pub bandwidth_pass: bool,
}

/// Minimum pump sigma for the broadband condition (rad/fs inputs).
fn sigma_threshold_rad_fs(tc: &TaylorCoefficients, gamma: f64) -> f64 {
    let sum = (tc.tau_s(2) + tc.tau_i(2)).abs();
    2.0 * (4.0 / gamma).powf(0.25) / sum.sqrt()
}

/// Evaluate the three factorability conditions.
pub fn check_conditions(
    tc: &TaylorCoefficients,
    pump: &PumpSpec,
    thresholds: &ConditionThresholds,
    gamma: f64,
) -> ConditionReport {
    let gvm_signal_fs = tc.tau_s(1).abs();
    let gvm_idler_fs = tc.tau_i(1).abs();
    let mut weak = [0.0; 3];
    for j in 2..=4 {
        let denom = tc.tau_s(j).abs().min(tc.tau_i(j).abs());
        weak[j - 2] = if denom > 0.0 {
            tc.tau_p(j).abs() / denom
        } else {
            f64::INFINITY
        };
    }
    let sigma_fs = pump.sigma_rad_s * FEMTOSECOND;
    let threshold_fs = sigma_threshold_rad_fs(tc, gamma);
    let factor = sigma_fs / threshold_fs;
    ConditionReport {
        gvm_signal_fs,
        gvm_idler_fs,
        weak_pump_ratios: weak,
        bandwidth_factor: factor,
        sigma_threshold_rad_s: threshold_fs / FEMTOSECOND,
        gvm_pass: gvm_signal_fs < thresholds.gvm_fs && gvm_idler_fs < thresholds.gvm_fs,
        weak_pump_pass: weak[0] < thresholds.weak_pump_ratio,
        bandwidth_pass: factor > thresholds.bandwidth_factor,
    }
}

/// Closed-form level at which the Gaussian-model amplitude is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ApproximationLevel {
    /// All quartic-order terms of the expanded `exp(-gamma (L dK / 2)^2)`.
    FullQuartic,
    /// Group-velocity-matched simplification (`tau^(1)` dropped).
    GvmSimplified,
    /// Additionally drops pump-dispersion mixed terms.
    WeakPump,
    /// Additionally drops the pump-envelope factor (broadband limit).
    Broadband,
}

/// Warnings when a level assumes a condition the coefficients do not meet.
/// These are approximations, not domain errors; evaluation proceeds.
pub fn approximation_warnings(
    tc: &TaylorCoefficients,
    pump: &PumpSpec,
    level: ApproximationLevel,
    thresholds: &ConditionThresholds,
    gamma: f64,
) -> Vec<String> {
    let report = check_conditions(tc, pump, thresholds, gamma);
    let mut warnings = Vec::new();
    let needs_gvm = level != ApproximationLevel::FullQuartic;
    let needs_weak = matches!(
        level,
        ApproximationLevel::WeakPump | ApproximationLevel::Broadband
    );
    let needs_broadband = level == ApproximationLevel::Broadband;
    if needs_gvm && !report.gvm_pass {
        warnings.push(format!(
            "group-velocity matching assumed but |tau1| = ({:.3}, {:.3}) fs",
            report.gvm_signal_fs, report.gvm_idler_fs
        ));
    }
    if needs_weak && !report.weak_pump_pass {
        warnings.push(format!(
            "weak pump dispersion assumed but |tau_p2|/min|tau2| = {:.3}",
            report.weak_pump_ratios[0]
        ));
    }
    if needs_broadband && !report.bandwidth_pass {
        warnings.push(format!(
            "broadband pump assumed but sigma is only {:.2}x the threshold",
            report.bandwidth_factor
        ));
    }
    warnings
}

/// Quartic Taylor polynomial of `L dK` in the detunings (fs units).
fn mismatch_polynomial(tc: &TaylorCoefficients, nu_s: f64, nu_i: f64) -> f64 {
    let mut t = 0.0;
    for j in 1..=4 {
        t += tc.tau_s(j) * nu_s.powi(j as i32) + tc.tau_i(j) * nu_i.powi(j as i32);
    }
    let bracket = 2.0 * tc.tau_p(2)
        + 3.0 * tc.tau_p(3) * (nu_s + nu_i)
        + 2.0 * tc.tau_p(4) * (2.0 * nu_i * nu_i + 3.0 * nu_s * nu_i + 2.0 * nu_s * nu_s);
    t + bracket * nu_s * nu_i
}

fn gaussian_from_coefficients(
    tc: &TaylorCoefficients,
    sigma_fs: Option<f64>,
    nu_s: f64,
    nu_i: f64,
    gamma: f64,
) -> Complex64 {
    let (s1, s2, s3) = (tc.tau_s(1), tc.tau_s(2), tc.tau_s(3));
    let (i1, i2, i3) = (tc.tau_i(1), tc.tau_i(2), tc.tau_i(3));
    let (p2, p3) = (tc.tau_p(2), tc.tau_p(3));

    // Single-axis quartic envelopes.
    let phi_single = |t1: f64, t2: f64, t3: f64, nu: f64| -> f64 {
        (t1 * t1) * nu * nu
            + 2.0 * t1 * t2 * nu.powi(3)
            + (t2 * t2 + 2.0 * t1 * t3) * nu.powi(4)
    };
    // Mixed terms of the truncated square of the mismatch polynomial.
    let phi_mixed = 2.0
        * nu_s
        * nu_i
        * (s1 * i1
            + (2.0 * p2 * s1 + s2 * i1) * nu_s
            + (2.0 * p2 * i1 + s1 * i2) * nu_i
            + (2.0 * p2 * s2 + 3.0 * p3 * s1 + s3 * i1) * nu_s * nu_s
            + (2.0 * p2 * i2 + 3.0 * p3 * i1 + s1 * i3) * nu_i * nu_i
            + (2.0 * p2 * p2 + s2 * i2 + 3.0 * p3 * (s1 + i1)) * nu_s * nu_i);

    let mut exponent_re = -0.25
        * gamma
        * (phi_single(s1, s2, s3, nu_s) + phi_single(i1, i2, i3, nu_i) + phi_mixed);
    if let Some(sigma) = sigma_fs {
        let sum = nu_s + nu_i;
        exponent_re -= (sum / sigma) * (sum / sigma);
    }
    let exponent_im = 0.5 * mismatch_polynomial(tc, nu_s, nu_i);
    Complex64::new(exponent_re, exponent_im).exp()
}

/// Gaussian-model joint amplitude at one detuning pair.
///
/// Detunings are in rad/s. Perfect phase matching at degeneracy is
/// assumed (`dk0` does not enter). Use [`approximation_warnings`] to
/// check whether the chosen level's assumptions actually hold.
pub fn gaussian_jsa(
    tc: &TaylorCoefficients,
    pump: &PumpSpec,
    nu_s_rad_s: f64,
    nu_i_rad_s: f64,
    level: ApproximationLevel,
    gamma: f64,
) -> Complex64 {
    let nu_s = nu_s_rad_s * FEMTOSECOND;
    let nu_i = nu_i_rad_s * FEMTOSECOND;
    let sigma_fs = pump.sigma_rad_s * FEMTOSECOND;
    let mut eff = *tc;
    let mut sigma = Some(sigma_fs);
    match level {
        ApproximationLevel::FullQuartic => {}
        ApproximationLevel::GvmSimplified => {
            eff.tau_s_fs[0] = 0.0;
            eff.tau_i_fs[0] = 0.0;
        }
        ApproximationLevel::WeakPump => {
            eff.tau_s_fs[0] = 0.0;
            eff.tau_i_fs[0] = 0.0;
            eff.tau_p_fs = [0.0; 4];
        }
        ApproximationLevel::Broadband => {
            eff.tau_s_fs[0] = 0.0;
            eff.tau_i_fs[0] = 0.0;
            eff.tau_p_fs = [0.0; 4];
            sigma = None;
        }
    }
    gaussian_from_coefficients(&eff, sigma, nu_s, nu_i, gamma)
}

/// Schmidt decomposition result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchmidtResult {
    /// `K = 1 / sum(lambda_n^2)`, >= 1, equal to 1 only for rank one.
    pub schmidt_number: f64,
    /// Normalized mode weights, descending.
    pub eigenvalues: Vec<f64>,
    pub modes_retained: usize,
}

/// Relative singular-value cutoff below which modes are discarded.
const SCHMIDT_TRUNCATION: f64 = 1e-12;

/// Schmidt decomposition of an arbitrary complex amplitude matrix.
pub fn schmidt_of_matrix(amplitude: &DMatrix<Complex64>) -> Result<SchmidtResult> {
    let max_abs = amplitude.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if max_abs == 0.0 || !max_abs.is_finite() {
        return Err(Error::ZeroAmplitude);
    }
    // Uniform grids carry a constant integration measure, which cancels in
    // the normalized weights; rescale only for numerical headroom.
    let scaled = amplitude.map(|c| c / max_abs);
    let svd = scaled.svd(false, false);
    let mut singular: Vec<f64> = svd.singular_values.iter().copied().collect();
    singular.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let cutoff = singular[0] * SCHMIDT_TRUNCATION;
    singular.retain(|&s| s >= cutoff);
    let total: f64 = singular.iter().map(|s| s * s).sum();
    let eigenvalues: Vec<f64> = singular.iter().map(|s| s * s / total).collect();
    let purity: f64 = eigenvalues.iter().map(|l| l * l).sum();
    Ok(SchmidtResult {
        schmidt_number: 1.0 / purity,
        modes_retained: eigenvalues.len(),
        eigenvalues,
    })
}

/// Schmidt decomposition of a gridded joint spectral amplitude.
pub fn schmidt_decompose(js: &JointSpectrum) -> Result<SchmidtResult> {
    schmidt_of_matrix(&js.amplitude)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn synthetic_tc(
        tau_s: [f64; 4],
        tau_i: [f64; 4],
        tau_p: [f64; 4],
    ) -> TaylorCoefficients {
        TaylorCoefficients {
            tau_s_fs: tau_s,
            tau_i_fs: tau_i,
            tau_p_fs: tau_p,
            dk0_rad_m: 0.0,
            omega_o: 2.216e15,
            length_m: 4e-3,
        }
    }

    fn test_pump() -> PumpSpec {
        PumpSpec::from_fwhm_nm(425.0, 10.0)
    }

    #[test]
    fn gvm_margin_zero_when_matched() {
        let tc = synthetic_tc([0.0, 6.0, 0.1, 0.01], [0.0, 0.9, 0.05, 0.01], [1e7, 0.16, 0.01, 0.001]);
        let report = check_conditions(&tc, &test_pump(), &ConditionThresholds::default(), DEFAULT_GAMMA);
        assert_eq!(report.gvm_signal_fs, 0.0);
        assert_eq!(report.gvm_idler_fs, 0.0);
        assert!(report.gvm_pass);
    }

    #[test]
    fn bandwidth_factor_one_fails_at_threshold() {
        let tc = synthetic_tc([0.0, 6.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0; 4]);
        let threshold = sigma_threshold_rad_fs(&tc, DEFAULT_GAMMA) / FEMTOSECOND;
        let pump = PumpSpec {
            center_wavelength_m: 425e-9,
            sigma_rad_s: threshold,
        };
        let report = check_conditions(&tc, &pump, &ConditionThresholds::default(), DEFAULT_GAMMA);
        assert_relative_eq!(report.bandwidth_factor, 1.0, max_relative = 1e-12);
        assert!(!report.bandwidth_pass);
    }

    #[test]
    fn separable_when_mixed_terms_vanish() {
        // tau1 = 0 and tau_p = 0 with a flat pump: the amplitude factors
        // exactly, so f(a,b) f(0,0) = f(a,0) f(0,b).
        let tc = synthetic_tc([0.0, 6.12, 0.3, 0.02], [0.0, 0.87, 0.1, 0.01], [0.0; 4]);
        let pump = test_pump();
        let f = |a: f64, b: f64| {
            gaussian_jsa(&tc, &pump, a, b, ApproximationLevel::Broadband, DEFAULT_GAMMA)
        };
        let (a, b) = (2.1e13, -1.4e13);
        let lhs = f(a, b) * f(0.0, 0.0);
        let rhs = f(a, 0.0) * f(0.0, b);
        assert_relative_eq!(lhs.re, rhs.re, max_relative = 1e-12);
        assert_relative_eq!(lhs.im, rhs.im, epsilon = 1e-14);
    }

    #[test]
    fn broadband_modulus_matches_closed_form() {
        let tc = synthetic_tc([0.3, 6.12, 0.3, 0.02], [0.2, 0.87, 0.1, 0.01], [1e6, 0.16, 0.01, 0.0]);
        let pump = test_pump();
        let (nu_s, nu_i) = (1.7e13, -2.4e13);
        let f = gaussian_jsa(&tc, &pump, nu_s, nu_i, ApproximationLevel::Broadband, DEFAULT_GAMMA);
        let (xs, xi) = (nu_s * FEMTOSECOND, nu_i * FEMTOSECOND);
        let expect = (-(DEFAULT_GAMMA / 4.0)
            * (tc.tau_s(2) * xs * xs + tc.tau_i(2) * xi * xi).powi(2))
        .exp();
        assert_relative_eq!(f.norm(), expect, max_relative = 1e-12);
    }

    #[test]
    fn weak_pump_argument_has_no_mixed_terms() {
        let tc = synthetic_tc([0.5, 6.12, 0.3, 0.02], [0.4, 0.87, 0.1, 0.01], [1e6, 0.16, 0.01, 0.001]);
        let pump = test_pump();
        let f = |a: f64, b: f64| {
            gaussian_jsa(&tc, &pump, a, b, ApproximationLevel::WeakPump, DEFAULT_GAMMA)
        };
        let (a, b) = (2.0e13, 1.5e13);
        let arg_sum = f(a, b).arg();
        let arg_parts = f(a, 0.0).arg() + f(0.0, b).arg();
        assert_relative_eq!(arg_sum, arg_parts, epsilon = 1e-12);
    }

    #[test]
    fn taylor_rescaling_is_linear_in_length() {
        let tc = synthetic_tc([0.1, 6.0, 0.2, 0.02], [0.1, 0.9, 0.1, 0.01], [1e7, 0.2, 0.01, 0.001]);
        let half = tc.at_length(2e-3);
        assert_relative_eq!(half.tau_s(2), 3.0, max_relative = 1e-14);
        assert_relative_eq!(half.tau_p(1), 5e6, max_relative = 1e-14);
    }

    #[test]
    fn schmidt_of_separable_matrix_is_one() {
        let n = 64;
        let g: Vec<f64> = (0..n).map(|j| (-((j as f64 - 30.0) / 9.0).powi(2)).exp()).collect();
        let h: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar((-((k as f64 - 28.0) / 14.0).powi(2)).exp(), 0.3 * k as f64))
            .collect();
        let m = DMatrix::from_fn(n, n, |j, k| g[j] * h[k]);
        let r = schmidt_of_matrix(&m).unwrap();
        assert!((r.schmidt_number - 1.0).abs() < 1e-9, "K = {}", r.schmidt_number);
    }

    #[test]
    fn schmidt_number_at_least_one_and_weights_normalized() {
        // Deterministic pseudo-random matrices.
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..5 {
            let m = DMatrix::from_fn(24, 24, |_, _| Complex64::new(next(), next()));
            let r = schmidt_of_matrix(&m).unwrap();
            assert!(r.schmidt_number >= 1.0);
            let sum: f64 = r.eigenvalues.iter().sum();
            assert_relative_eq!(sum, 1.0, epsilon = 1e-9);
            for w in r.eigenvalues.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn schmidt_invariant_under_scaling_phase_and_axis_reversal() {
        let n = 48;
        let m = DMatrix::from_fn(n, n, |j, k| {
            let x = (j as f64 - 24.0) / 8.0;
            let y = (k as f64 - 24.0) / 10.0;
            Complex64::new((-(x * x + y * y + 0.8 * x * y)).exp(), 0.0)
        });
        let k0 = schmidt_of_matrix(&m).unwrap().schmidt_number;
        let scaled = m.map(|c| c * Complex64::from_polar(137.0, 1.1));
        let k1 = schmidt_of_matrix(&scaled).unwrap().schmidt_number;
        assert_relative_eq!(k0, k1, max_relative = 1e-10);
        let reversed = DMatrix::from_fn(n, n, |j, k| m[(n - 1 - j, k)]);
        let k2 = schmidt_of_matrix(&reversed).unwrap().schmidt_number;
        assert_relative_eq!(k0, k2, max_relative = 1e-10);
    }

    #[test]
    fn zero_amplitude_is_an_error() {
        let m = DMatrix::from_element(8, 8, Complex64::new(0.0, 0.0));
        assert!(matches!(schmidt_of_matrix(&m), Err(Error::ZeroAmplitude)));
    }

    #[test]
    fn warnings_flag_unmet_assumptions() {
        let tc = synthetic_tc([5.0, 6.0, 0.3, 0.02], [4.0, 0.9, 0.1, 0.01], [1e7, 0.5, 0.05, 0.01]);
        let w = approximation_warnings(
            &tc,
            &test_pump(),
            ApproximationLevel::Broadband,
            &ConditionThresholds::default(),
            DEFAULT_GAMMA,
        );
        assert!(w.iter().any(|s| s.contains("group-velocity")));
        assert!(w.iter().any(|s| s.contains("weak pump")));
        assert!(approximation_warnings(
            &tc,
            &test_pump(),
            ApproximationLevel::FullQuartic,
            &ConditionThresholds::default(),
            DEFAULT_GAMMA,
        )
        .is_empty());
    }
}
