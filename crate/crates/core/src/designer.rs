//! Design search: simultaneous phase matching and complete group-velocity
//! matching.
//!
//! For a chosen degenerate emission frequency there are three free crystal
//! parameters (permittivity contrast, propagation angle, Bragg period) and
//! three conditions:
//!
//! 1. `dK0 = K_s(w_o) + K_i(w_o) - K_p(2 w_o) = 0`,
//! 2. `K_p' = K_s'`,
//! 3. `K_p' = K_i'`.
//!
//! A coarse grid scan locates the triple intersection of the three zero
//! contours, then a damped Newton iteration with a forward-difference
//! Jacobian polishes it. Points where any field falls into a band gap are
//! rejected. Tolerance sweeps recompute the full joint spectrum and its
//! Schmidt number while one parameter moves off its nominal value.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch;
use crate::constants::{omega_from_wavelength, FEMTOSECOND};
use crate::error::{Error, Result};
use crate::factorability::{self, TaylorCoefficients, DEFAULT_GAMMA};
use crate::jsa::{self, field_polarization, PumpSpec};
use crate::material::{CrystalSpec, MaterialModel};

/// Residual scaling: phase mismatch in rad/mm, group mismatches in fs
/// accumulated over one millimeter. Both are O(1)-comparable near a
/// solution, which keeps the Newton system well conditioned.
const METER_TO_MM: f64 = 1e-3;

/// Rectangular search region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub alpha: (f64, f64),
    pub theta_rad: (f64, f64),
    pub period_nm: (f64, f64),
}

impl SearchBox {
    fn clamp(&self, p: [f64; 3]) -> [f64; 3] {
        [
            p[0].clamp(self.alpha.0, self.alpha.1),
            p[1].clamp(self.theta_rad.0, self.theta_rad.1),
            p[2].clamp(self.period_nm.0, self.period_nm.1),
        ]
    }

    pub fn contains(&self, p: [f64; 3]) -> bool {
        p[0] >= self.alpha.0
            && p[0] <= self.alpha.1
            && p[1] >= self.theta_rad.0
            && p[1] <= self.theta_rad.1
            && p[2] >= self.period_nm.0
            && p[2] <= self.period_nm.1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignerOptions {
    pub search_box: SearchBox,
    /// Coarse-scan resolution (alpha, theta, period).
    pub coarse: (usize, usize, usize),
    pub max_newton_iterations: usize,
    pub duty_cycle: f64,
    /// Crystal length used for the reported Taylor coefficients and the
    /// group-mismatch convergence thresholds.
    pub report_length_m: f64,
}

impl Default for DesignerOptions {
    fn default() -> Self {
        DesignerOptions {
            search_box: SearchBox {
                alpha: (0.02, 0.08),
                theta_rad: (35f64.to_radians(), 48f64.to_radians()),
                period_nm: (268.0, 286.0),
            },
            coarse: (64, 64, 32),
            max_newton_iterations: 40,
            duty_cycle: 0.5,
            report_length_m: 4e-3,
        }
    }
}

/// Converged (or best-effort) design point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DesignSolution {
    pub alpha: f64,
    pub theta_rad: f64,
    pub period_nm: f64,
    /// Phase mismatch at degeneracy (rad/m).
    pub residual_dk0_rad_m: f64,
    /// Group mismatches over the report length (fs).
    pub residual_tau_s_fs: f64,
    pub residual_tau_i_fs: f64,
    pub converged: bool,
    pub iterations: usize,
    pub lambda_o_m: f64,
    pub taylor: TaylorCoefficients,
}

impl DesignSolution {
    pub fn theta_deg(&self) -> f64 {
        self.theta_rad.to_degrees()
    }

    /// Crystal specification at this point with the given length.
    pub fn crystal_spec(&self, material: MaterialModel, length_m: f64) -> Result<CrystalSpec> {
        CrystalSpec::new(
            material,
            self.period_nm,
            0.5,
            self.alpha,
            self.theta_rad,
            length_m * 1e3,
        )
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// The three scaled design residuals at one parameter point, or an error
/// if any field is evanescent there.
pub fn design_residuals(
    material: &MaterialModel,
    lambda_o_m: f64,
    alpha: f64,
    theta_rad: f64,
    period_nm: f64,
    duty_cycle: f64,
) -> Result<[f64; 3]> {
    let spec = CrystalSpec::new(material.clone(), period_nm, duty_cycle, alpha, theta_rad, 1.0)?;
    let omega_o = omega_from_wavelength(lambda_o_m);
    let fields = [
        (crate::error::FieldId::Pump, 2.0 * omega_o),
        (crate::error::FieldId::Signal, omega_o),
        (crate::error::FieldId::Idler, omega_o),
    ];
    let mut k = [0.0; 3];
    let mut k1 = [0.0; 3];
    for (idx, &(field, w)) in fields.iter().enumerate() {
        let pol = field_polarization(field);
        let m = bloch::auto_order(&spec, w, pol)?;
        if bloch::in_gap(&spec, w, pol, m)? {
            return Err(Error::InGap { field, pol, omega: w });
        }
        k[idx] = bloch::bloch_wavenumber(&spec, w, pol, m)?.re;
        k1[idx] = bloch::dispersion_derivatives(&spec, w, pol, m, 1)?[0];
    }
    let dk0 = k[1] + k[2] - k[0];
    Ok([
        dk0 * METER_TO_MM,
        (k1[0] - k1[1]) * METER_TO_MM / FEMTOSECOND,
        (k1[0] - k1[2]) * METER_TO_MM / FEMTOSECOND,
    ])
}

fn norm2(r: [f64; 3]) -> f64 {
    r[0] * r[0] + r[1] * r[1] + r[2] * r[2]
}

fn coarse_scan(
    material: &MaterialModel,
    lambda_o_m: f64,
    opts: &DesignerOptions,
) -> Option<[f64; 3]> {
    let (na, nt, np) = opts.coarse;
    let alphas = linspace(opts.search_box.alpha.0, opts.search_box.alpha.1, na);
    let thetas = linspace(opts.search_box.theta_rad.0, opts.search_box.theta_rad.1, nt);
    let periods = linspace(opts.search_box.period_nm.0, opts.search_box.period_nm.1, np);

    let best = periods
        .par_iter()
        .enumerate()
        .map(|(ip, &period)| {
            let mut local: Option<(f64, usize, [f64; 3])> = None;
            for (ia, &a) in alphas.iter().enumerate() {
                for (it, &t) in thetas.iter().enumerate() {
                    if let Ok(r) =
                        design_residuals(material, lambda_o_m, a, t, period, opts.duty_cycle)
                    {
                        let n = norm2(r);
                        let idx = (ip * na + ia) * nt + it;
                        if local.map(|(bn, bi, _)| (n, idx) < (bn, bi)).unwrap_or(true) {
                            local = Some((n, idx, [a, t, period]));
                        }
                    }
                }
            }
            local
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (None, x) | (x, None) => x,
                (Some(x), Some(y)) => Some(if (x.0, x.1) <= (y.0, y.1) { x } else { y }),
            },
        );
    best.map(|(_, _, p)| p)
}

struct NewtonOutcome {
    point: [f64; 3],
    residual: [f64; 3],
    iterations: usize,
    converged: bool,
}

fn converged(residual: [f64; 3], report_length_m: f64) -> bool {
    let dk0_rad_m = residual[0] / METER_TO_MM;
    let scale = report_length_m / 1e-3;
    dk0_rad_m.abs() < 1.0
        && (residual[1] * scale).abs() < 0.01
        && (residual[2] * scale).abs() < 0.01
}

fn newton_polish(
    material: &MaterialModel,
    lambda_o_m: f64,
    seed: [f64; 3],
    opts: &DesignerOptions,
) -> Result<NewtonOutcome> {
    let mut point = opts.search_box.clamp(seed);
    let mut residual = design_residuals(
        material,
        lambda_o_m,
        point[0],
        point[1],
        point[2],
        opts.duty_cycle,
    )?;

    for iteration in 0..opts.max_newton_iterations {
        if converged(residual, opts.report_length_m) {
            return Ok(NewtonOutcome {
                point,
                residual,
                iterations: iteration,
                converged: true,
            });
        }
        // Forward-difference Jacobian with per-coordinate relative steps.
        let mut jac = nalgebra::Matrix3::<f64>::zeros();
        for j in 0..3 {
            let h = point[j].abs().max(1e-3) * 1e-6;
            let mut shifted = point;
            shifted[j] += h;
            let r = match design_residuals(
                material,
                lambda_o_m,
                shifted[0],
                shifted[1],
                shifted[2],
                opts.duty_cycle,
            ) {
                Ok(r) => r,
                Err(_) => {
                    shifted[j] = point[j] - h;
                    design_residuals(
                        material,
                        lambda_o_m,
                        shifted[0],
                        shifted[1],
                        shifted[2],
                        opts.duty_cycle,
                    )?
                }
            };
            let sign = if shifted[j] > point[j] { 1.0 } else { -1.0 };
            for i in 0..3 {
                jac[(i, j)] = sign * (r[i] - residual[i]) / h;
            }
        }
        let rhs = nalgebra::Vector3::new(residual[0], residual[1], residual[2]);
        let step = match jac.lu().solve(&rhs) {
            Some(s) => s,
            None => break,
        };

        // Backtracking: accept the longest step that reduces the residual
        // and stays at a valid propagating point.
        let mut accepted = false;
        let mut damping = 1.0;
        for _ in 0..10 {
            let cand = opts.search_box.clamp([
                point[0] - damping * step[0],
                point[1] - damping * step[1],
                point[2] - damping * step[2],
            ]);
            if let Ok(r) = design_residuals(
                material,
                lambda_o_m,
                cand[0],
                cand[1],
                cand[2],
                opts.duty_cycle,
            ) {
                if norm2(r) < norm2(residual) {
                    point = cand;
                    residual = r;
                    accepted = true;
                    break;
                }
            }
            damping *= 0.5;
        }
        if !accepted {
            return Ok(NewtonOutcome {
                point,
                residual,
                iterations: iteration + 1,
                converged: converged(residual, opts.report_length_m),
            });
        }
    }
    let done = converged(residual, opts.report_length_m);
    Ok(NewtonOutcome {
        point,
        residual,
        iterations: opts.max_newton_iterations,
        converged: done,
    })
}

fn outcome_to_solution(
    material: &MaterialModel,
    lambda_o_m: f64,
    outcome: NewtonOutcome,
    opts: &DesignerOptions,
) -> Result<DesignSolution> {
    let [alpha, theta, period] = outcome.point;
    let spec = CrystalSpec::new(
        material.clone(),
        period,
        opts.duty_cycle,
        alpha,
        theta,
        opts.report_length_m * 1e3,
    )?;
    let taylor = factorability::taylor_coefficients(&spec, omega_from_wavelength(lambda_o_m))?;
    let scale = opts.report_length_m / 1e-3;
    Ok(DesignSolution {
        alpha,
        theta_rad: theta,
        period_nm: period,
        residual_dk0_rad_m: outcome.residual[0] / METER_TO_MM,
        residual_tau_s_fs: outcome.residual[1] * scale,
        residual_tau_i_fs: outcome.residual[2] * scale,
        converged: outcome.converged,
        iterations: outcome.iterations,
        lambda_o_m,
        taylor,
    })
}

/// Solve the three-condition design problem inside the search box.
///
/// Never fails outright on a poor search region: a non-converged result
/// carries the best residuals found. Errors indicate that no valid
/// propagating point exists in the box at all.
pub fn solve_design(
    material: &MaterialModel,
    lambda_o_m: f64,
    opts: &DesignerOptions,
) -> Result<DesignSolution> {
    let seed = coarse_scan(material, lambda_o_m, opts).ok_or_else(|| {
        Error::NonConvergence("no propagating parameter point in the search box".into())
    })?;
    let outcome = newton_polish(material, lambda_o_m, seed, opts)?;
    outcome_to_solution(material, lambda_o_m, outcome, opts)
}

/// Newton polish from an explicit seed; falls back to the coarse scan if
/// the iteration stalls away from a solution.
pub fn solve_from(
    material: &MaterialModel,
    lambda_o_m: f64,
    seed: [f64; 3],
    opts: &DesignerOptions,
) -> Result<DesignSolution> {
    let outcome = match newton_polish(material, lambda_o_m, seed, opts) {
        Ok(o) if o.converged => o,
        _ => {
            let seed = coarse_scan(material, lambda_o_m, opts).ok_or_else(|| {
                Error::NonConvergence("no propagating parameter point in the search box".into())
            })?;
            newton_polish(material, lambda_o_m, seed, opts)?
        }
    };
    outcome_to_solution(material, lambda_o_m, outcome, opts)
}

/// Signed residual fields of the three conditions on an (alpha, theta)
/// grid at fixed period, for external contour plotting. Row-major with
/// the alpha index as the row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContourData {
    pub period_nm: f64,
    pub alphas: Vec<f64>,
    pub thetas_rad: Vec<f64>,
    pub dk0_rad_mm: Vec<f64>,
    pub dvg_s_fs_mm: Vec<f64>,
    pub dvg_i_fs_mm: Vec<f64>,
    /// False where the point was rejected (a field inside a gap).
    pub valid: Vec<bool>,
}

pub fn contour_scan(
    material: &MaterialModel,
    lambda_o_m: f64,
    period_nm: f64,
    alpha_range: (f64, f64),
    theta_range_rad: (f64, f64),
    n_alpha: usize,
    n_theta: usize,
    duty_cycle: f64,
) -> ContourData {
    let alphas = linspace(alpha_range.0, alpha_range.1, n_alpha);
    let thetas = linspace(theta_range_rad.0, theta_range_rad.1, n_theta);
    let rows: Vec<Vec<(f64, f64, f64, bool)>> = alphas
        .par_iter()
        .map(|&a| {
            thetas
                .iter()
                .map(|&t| {
                    match design_residuals(material, lambda_o_m, a, t, period_nm, duty_cycle) {
                        Ok(r) => (r[0], r[1], r[2], true),
                        Err(_) => (f64::NAN, f64::NAN, f64::NAN, false),
                    }
                })
                .collect()
        })
        .collect();
    let mut data = ContourData {
        period_nm,
        alphas,
        thetas_rad: thetas,
        dk0_rad_mm: Vec::with_capacity(n_alpha * n_theta),
        dvg_s_fs_mm: Vec::with_capacity(n_alpha * n_theta),
        dvg_i_fs_mm: Vec::with_capacity(n_alpha * n_theta),
        valid: Vec::with_capacity(n_alpha * n_theta),
    };
    for row in rows {
        for (dk0, dvs, dvi, ok) in row {
            data.dk0_rad_mm.push(dk0);
            data.dvg_s_fs_mm.push(dvs);
            data.dvg_i_fs_mm.push(dvi);
            data.valid.push(ok);
        }
    }
    data
}

/// Parameter varied in a tolerance sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParameter {
    PeriodNm,
    Contrast,
    ThetaRad,
}

impl std::fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepParameter::PeriodNm => write!(f, "period_nm"),
            SweepParameter::Contrast => write!(f, "contrast"),
            SweepParameter::ThetaRad => write!(f, "theta_rad"),
        }
    }
}

/// Schmidt number versus one crystal parameter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToleranceCurve {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    pub schmidt: Vec<f64>,
    pub k_min: f64,
    pub k_min_value: f64,
    /// Parameter values where K crosses sqrt(2) * k_min, by linear
    /// interpolation; `None` when the crossing lies outside the range.
    pub lower_crossing: Option<f64>,
    pub upper_crossing: Option<f64>,
}

impl ToleranceCurve {
    /// Tolerance width between the two crossings, when both exist.
    pub fn width(&self) -> Option<f64> {
        match (self.lower_crossing, self.upper_crossing) {
            (Some(lo), Some(hi)) => Some(hi - lo),
            _ => None,
        }
    }
}

/// Sweep one parameter around the nominal solution, recomputing the full
/// joint spectrum and its Schmidt number at every sample.
///
/// The frequency grid is fixed to the nominal crystal's grid so the
/// Schmidt numbers are comparable across the sweep.
#[allow(clippy::too_many_arguments)]
pub fn tolerance_sweep(
    material: &MaterialModel,
    nominal: &DesignSolution,
    parameter: SweepParameter,
    half_span: f64,
    points: usize,
    pump: &PumpSpec,
    length_m: f64,
    grid_n: usize,
    span_bandwidths: f64,
    gap_margin: f64,
) -> Result<ToleranceCurve> {
    let nominal_spec = nominal.crystal_spec(material.clone(), length_m)?;
    let tc = nominal.taylor.at_length(length_m);
    let grid = jsa::auto_grid(
        &nominal_spec,
        pump.omega_degenerate(),
        tc.tau_s(2),
        tc.tau_i(2),
        grid_n,
        span_bandwidths,
        gap_margin,
        DEFAULT_GAMMA,
    )?;

    let centre = match parameter {
        SweepParameter::PeriodNm => nominal.period_nm,
        SweepParameter::Contrast => nominal.alpha,
        SweepParameter::ThetaRad => nominal.theta_rad,
    };
    let values = linspace(centre - half_span, centre + half_span, points);
    let schmidt: Vec<f64> = values
        .par_iter()
        .map(|&x| -> Result<f64> {
            let mut spec = nominal_spec.clone();
            match parameter {
                SweepParameter::PeriodNm => spec.period_m = x * 1e-9,
                SweepParameter::Contrast => spec.contrast = x,
                SweepParameter::ThetaRad => spec.theta_pm_rad = x,
            }
            let js = jsa::joint_spectrum(&spec, pump, &grid, (0, 0, 0))?;
            Ok(factorability::schmidt_decompose(&js)?.schmidt_number)
        })
        .collect::<Result<Vec<f64>>>()?;

    let (min_idx, &k_min) = schmidt
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    let target = std::f64::consts::SQRT_2 * k_min;

    let interpolate = |j0: usize, j1: usize| -> f64 {
        let (k0, k1) = (schmidt[j0], schmidt[j1]);
        let t = (target - k0) / (k1 - k0);
        values[j0] + t * (values[j1] - values[j0])
    };
    let mut upper_crossing = None;
    for j in min_idx..schmidt.len() - 1 {
        if schmidt[j] < target && schmidt[j + 1] >= target {
            upper_crossing = Some(interpolate(j, j + 1));
            break;
        }
    }
    let mut lower_crossing = None;
    for j in (1..=min_idx).rev() {
        if schmidt[j] < target && schmidt[j - 1] >= target {
            lower_crossing = Some(interpolate(j, j - 1));
            break;
        }
    }

    Ok(ToleranceCurve {
        parameter,
        k_min,
        k_min_value: values[min_idx],
        values,
        schmidt,
        lower_crossing,
        upper_crossing,
    })
}
