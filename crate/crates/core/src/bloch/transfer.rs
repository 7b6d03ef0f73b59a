//! Exact unit-cell transfer matrix of the bilayer crystal.
//!
//! At normal incidence the field in each layer is a pair of counter-
//! propagating plane waves; matching E and dE/dz across the two interfaces
//! of one period gives a unimodular 2x2 translation matrix M with
//! `cos(K Lambda) = tr(M) / 2`. The eigenvector of M yields the Bloch
//! envelope, whose Fourier coefficients feed the phase-matching function.
//!
//! The half trace is also evaluated in the algebraically equivalent form
//!
//! `tr/2 = cos(p1 + p2) - eta * sin(p1) * sin(p2)`,
//! `eta = (k1 - k2)^2 / (2 k1 k2)`,
//!
//! which stays accurate when `|tr/2| - 1` is many orders of magnitude
//! below one. That matters when measuring the residual width of the
//! nominally suppressed even-order gaps.

use num_complex::Complex64;

use crate::constants::{wavelength_from_omega, C};
use crate::error::{Error, Result};
use crate::material::{CrystalSpec, Polarization};

use super::BandGap;

/// 2x2 complex matrix in row-major order.
#[derive(Debug, Clone, Copy)]
pub struct Matrix2c {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Matrix2c {
    fn mul(self, o: Matrix2c) -> Matrix2c {
        Matrix2c {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn trace(self) -> Complex64 {
        self.a + self.d
    }

    pub fn det(self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }
}

fn layer_wavenumbers(spec: &CrystalSpec, omega: f64, pol: Polarization) -> Result<(f64, f64)> {
    let li = spec.layer_indices(wavelength_from_omega(omega), pol)?;
    Ok((li.n1 * omega / C, li.n2 * omega / C))
}

/// Translation matrix over one period, mapping the plane-wave amplitudes
/// at the start of cell n to those at the start of cell n+1.
pub fn unit_cell_matrix(spec: &CrystalSpec, omega: f64, pol: Polarization) -> Result<Matrix2c> {
    let (k1, k2) = layer_wavenumbers(spec, omega, pol)?;
    let a = spec.duty_cycle * spec.period_m;
    let b = spec.period_m - a;
    let prop = |k: f64, d: f64| Matrix2c {
        a: Complex64::from_polar(1.0, k * d),
        b: Complex64::new(0.0, 0.0),
        c: Complex64::new(0.0, 0.0),
        d: Complex64::from_polar(1.0, -k * d),
    };
    let iface = |k_from: f64, k_to: f64| {
        let r = k_from / k_to;
        Matrix2c {
            a: Complex64::new(0.5 * (1.0 + r), 0.0),
            b: Complex64::new(0.5 * (1.0 - r), 0.0),
            c: Complex64::new(0.5 * (1.0 - r), 0.0),
            d: Complex64::new(0.5 * (1.0 + r), 0.0),
        }
    };
    Ok(iface(k2, k1)
        .mul(prop(k2, b))
        .mul(iface(k1, k2))
        .mul(prop(k1, a)))
}

/// Half trace of the translation matrix, in cancellation-safe pieces:
/// returns (tr/2, tr/2 - 1, tr/2 + 1).
pub fn half_trace_parts(spec: &CrystalSpec, omega: f64, pol: Polarization) -> Result<(f64, f64, f64)> {
    let (k1, k2) = layer_wavenumbers(spec, omega, pol)?;
    let a = spec.duty_cycle * spec.period_m;
    let b = spec.period_m - a;
    let p1 = k1 * a;
    let p2 = k2 * b;
    let eta = (k1 - k2) * (k1 - k2) / (2.0 * k1 * k2);
    let cross = eta * p1.sin() * p2.sin();
    let half = 0.5 * (p1 + p2);
    let t = (p1 + p2).cos() - cross;
    let t_minus_1 = -2.0 * half.sin().powi(2) - cross;
    let t_plus_1 = 2.0 * half.cos().powi(2) - cross;
    Ok((t, t_minus_1, t_plus_1))
}

/// Exact dispersion at one frequency.
#[derive(Debug, Clone, Copy)]
pub struct ExactDispersion {
    /// Bloch wavenumber unwrapped to the branch nearest the averaged
    /// material wavenumber; complex inside gaps (positive imaginary part).
    pub k: Complex64,
    pub in_gap: bool,
    pub half_trace: f64,
}

/// Exact Bloch wavenumber from the translation-matrix eigenvalue phase.
pub fn bloch_exact(spec: &CrystalSpec, omega: f64, pol: Polarization) -> Result<ExactDispersion> {
    let (t, tm1, tp1) = half_trace_parts(spec, omega, pol)?;
    let lam = spec.period_m;
    let k_mean = super::mean_wavenumber(spec, omega, pol)?;
    let in_gap = tm1 * tp1 >= 0.0;
    if !in_gap {
        let theta = t.clamp(-1.0, 1.0).acos();
        // cos is even and 2pi-periodic: candidates 2 pi j +/- theta.
        let two_pi = 2.0 * std::f64::consts::PI;
        let jbase = (k_mean * lam / two_pi).round();
        let mut best = f64::INFINITY;
        let mut k_best = 0.0;
        for j in -1..=1 {
            let centre = (jbase + j as f64) * two_pi;
            for cand in [centre + theta, centre - theta] {
                if cand > 0.0 && (cand / lam - k_mean).abs() < best {
                    best = (cand / lam - k_mean).abs();
                    k_best = cand / lam;
                }
            }
        }
        Ok(ExactDispersion {
            k: Complex64::new(k_best, 0.0),
            in_gap: false,
            half_trace: t,
        })
    } else {
        // |t| >= 1: evanescent. |t| - 1 from the stable pieces.
        let e = if t >= 0.0 { tm1.max(0.0) } else { (-tp1).max(0.0) };
        let y = (e + (e * (e + 2.0)).sqrt()).ln_1p();
        // Re(K Lambda) is a multiple of pi with parity fixed by sign(t).
        let ratio = k_mean * lam / std::f64::consts::PI;
        let mut m_re = ratio.round();
        let want_even = t >= 0.0;
        if (m_re as i64 % 2 == 0) != want_even {
            m_re += if ratio >= m_re { 1.0 } else { -1.0 };
        }
        Ok(ExactDispersion {
            k: Complex64::new(m_re * std::f64::consts::PI / lam, y / lam),
            in_gap: true,
            half_trace: t,
        })
    }
}

/// Normalized Fourier coefficients of the Bloch envelope.
#[derive(Debug, Clone)]
pub struct BlochFourier {
    pub omega: f64,
    pub pol: Polarization,
    l_min: i32,
    amps: Vec<Complex64>,
}

impl BlochFourier {
    /// Coefficient for harmonic `l`; zero outside the stored range.
    pub fn amp(&self, l: i32) -> Complex64 {
        let idx = l - self.l_min;
        if idx < 0 || idx as usize >= self.amps.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.amps[idx as usize]
        }
    }

    pub fn harmonics(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.amps
            .iter()
            .enumerate()
            .map(move |(i, &a)| (self.l_min + i as i32, a))
    }
}

/// Harmonics retained in the envelope expansion.
pub const HARMONIC_RANGE: std::ops::RangeInclusive<i32> = -3..=3;

/// Quadrature points per period for the envelope Fourier integrals.
pub const FOURIER_QUADRATURE_POINTS: usize = 1024;

/// Exact Bloch wavenumber plus envelope Fourier coefficients.
///
/// The envelope comes from the forward eigenvector of the translation
/// matrix (positive energy flux outside gaps, decaying inside). The
/// coefficients are normalized to unit maximum modulus and gauged so the
/// l = 0 term is real and non-negative.
pub fn translation_matrix_bloch(
    spec: &CrystalSpec,
    omega: f64,
    pol: Polarization,
) -> Result<(ExactDispersion, BlochFourier)> {
    let disp = bloch_exact(spec, omega, pol)?;
    let m = unit_cell_matrix(spec, omega, pol)?;
    let t = 0.5 * m.trace();
    let disc = (t * t - Complex64::new(1.0, 0.0)).sqrt();
    let eigenvalues = [t + disc, t - disc];

    let eigenvector = |lam: Complex64| -> (Complex64, Complex64) {
        let v1 = (m.b, lam - m.a);
        let v2 = (lam - m.d, m.c);
        let n1 = v1.0.norm_sqr() + v1.1.norm_sqr();
        let n2 = v2.0.norm_sqr() + v2.1.norm_sqr();
        if n1 >= n2 {
            v1
        } else {
            v2
        }
    };

    let (va, vb) = if disp.in_gap {
        // Forward-decaying: eigenvalue of modulus < 1.
        let lam = if eigenvalues[0].norm() <= eigenvalues[1].norm() {
            eigenvalues[0]
        } else {
            eigenvalues[1]
        };
        eigenvector(lam)
    } else {
        // Positive flux in layer 1: |forward amplitude| > |backward|.
        let c0 = eigenvector(eigenvalues[0]);
        if c0.0.norm() >= c0.1.norm() {
            c0
        } else {
            eigenvector(eigenvalues[1])
        }
    };

    let (k1, k2) = layer_wavenumbers(spec, omega, pol)?;
    let a_len = spec.duty_cycle * spec.period_m;
    // Amplitudes at the start of layer 2 from interface continuity.
    let r = k1 / k2;
    let ea = Complex64::from_polar(1.0, k1 * a_len);
    let fa = va * ea;
    let fb = vb * ea.conj();
    let vc = 0.5 * ((1.0 + r) * fa + (1.0 - r) * fb);
    let vd = 0.5 * ((1.0 - r) * fa + (1.0 + r) * fb);

    let field = |z: f64| -> Complex64 {
        if z < a_len {
            va * Complex64::from_polar(1.0, k1 * z) + vb * Complex64::from_polar(1.0, -k1 * z)
        } else {
            let zeta = z - a_len;
            vc * Complex64::from_polar(1.0, k2 * zeta) + vd * Complex64::from_polar(1.0, -k2 * zeta)
        }
    };

    let lam_per = spec.period_m;
    let kb = disp.k;
    let n = FOURIER_QUADRATURE_POINTS;
    let l_min = *HARMONIC_RANGE.start();
    let l_max = *HARMONIC_RANGE.end();
    let mut amps = vec![Complex64::new(0.0, 0.0); (l_max - l_min + 1) as usize];
    for j in 0..n {
        let z = lam_per * j as f64 / n as f64;
        // Envelope: strip the Bloch phase from the microscopic field.
        let phase = (-Complex64::i() * kb * z).exp();
        let u = field(z) * phase;
        for l in l_min..=l_max {
            let g = 2.0 * std::f64::consts::PI * l as f64 / lam_per;
            amps[(l - l_min) as usize] += u * Complex64::from_polar(1.0, -g * z);
        }
    }
    for a in &mut amps {
        *a /= n as f64;
    }

    let max_mod = amps.iter().map(|a| a.norm()).fold(0.0f64, f64::max);
    if max_mod == 0.0 {
        return Err(Error::Numerical(
            "degenerate Bloch envelope (zero eigenvector)".into(),
        ));
    }
    for a in &mut amps {
        *a /= max_mod;
    }
    let e0 = amps[(-l_min) as usize];
    if e0.norm() > 0.0 {
        let gauge = e0.conj() / e0.norm();
        for a in &mut amps {
            *a *= gauge;
        }
    }

    Ok((
        disp,
        BlochFourier {
            omega,
            pol,
            l_min,
            amps,
        },
    ))
}

/// Gap edges measured from the exact half trace by bisecting
/// `|tr/2| = 1`, seeded around the coupled-mode resonance.
pub fn band_gap_exact(spec: &CrystalSpec, pol: Polarization, m: u32) -> Result<Option<BandGap>> {
    let b = std::f64::consts::PI * m as f64 / spec.period_m;
    let centre = match super::solve_mean_wavenumber(spec, pol, b)? {
        Some(w) => w,
        None => return Ok(None),
    };
    let gap_metric = |w: f64| -> Result<f64> {
        let (_, tm1, tp1) = half_trace_parts(spec, w, pol)?;
        Ok(tm1 * tp1)
    };

    // Find a frequency inside the gap. The resonance itself is inside up
    // to a tiny second-order shift, so a short scan suffices.
    let scale = centre * spec.contrast.abs().max(1e-8);
    let mut inside = None;
    'scan: for frac in [0.0, 0.02, -0.02, 0.05, -0.05, 0.1, -0.1, 0.2, -0.2] {
        let w = centre + frac * scale;
        if gap_metric(w)? > 0.0 {
            inside = Some(w);
            break 'scan;
        }
    }
    let inside = match inside {
        Some(w) => w,
        None => return Ok(None),
    };

    // Expand outward until the metric turns negative, then bisect.
    let edge = |dir: f64| -> Result<f64> {
        let mut step = scale * 1e-3;
        let mut out = inside + dir * step;
        for _ in 0..200 {
            if gap_metric(out)? < 0.0 {
                break;
            }
            step *= 2.0;
            out = inside + dir * step;
        }
        let (mut lo, mut hi) = (inside, out);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if gap_metric(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if (hi - lo).abs() / centre < 1e-16 {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    };
    let omega_min = edge(-1.0)?;
    let omega_max = edge(1.0)?;
    Ok(Some(BandGap {
        pol,
        m,
        omega_min,
        omega_max,
        lambda_center_m: wavelength_from_omega(centre),
    }))
}
