//! Bulk material dispersion and the bilayer unit cell of the photonic
//! crystal.
//!
//! The underlying crystal is uniaxial and birefringent. Its ordinary and
//! principal extraordinary indices follow a Sellmeier form
//! `n^2 = A + B/(lambda^2 - C) - D*lambda^2` with the wavelength in
//! micrometers. The bundled default is beta-barium borate with the
//! coefficients of Kato, IEEE J. Quantum Electron. 22, 1013 (1986); an
//! alternative set (Eimerl et al., J. Appl. Phys. 62, 1968 (1987)) is
//! included because design results are sensitive to the dispersion data.
//! Either can be replaced through the run configuration.
//!
//! One grating period consists of zone A (the crystal in its natural
//! state, thickness `duty_cycle * period`) and zone B, whose permittivity
//! is offset so that the relative permittivity contrast
//! `alpha = (n1^2 - n2^2) / n_mean^2` is the same for both polarizations
//! and independent of frequency. Positive `alpha` therefore means zone B
//! has the lower index, and the cell-averaged index is pulled below the
//! natural one: `n_mean = n1 * sqrt(2 / (2 + alpha))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Field polarization in the uniaxial crystal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    #[serde(rename = "o", alias = "ordinary")]
    Ordinary,
    #[serde(rename = "e", alias = "extraordinary")]
    Extraordinary,
}

impl std::fmt::Display for Polarization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Polarization::Ordinary => write!(f, "o"),
            Polarization::Extraordinary => write!(f, "e"),
        }
    }
}

/// Sellmeier coefficient set: `n^2 = a + b/(l^2 - c) - d*l^2`, `l` in um.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sellmeier {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Sellmeier {
    pub fn index_squared(&self, lambda_um: f64) -> f64 {
        self.a + self.b / (lambda_um * lambda_um - self.c) - self.d * lambda_um * lambda_um
    }

    pub fn index(&self, lambda_um: f64) -> f64 {
        self.index_squared(lambda_um).sqrt()
    }
}

/// Frequency-dependent indices of the unmodulated bulk crystal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialModel {
    pub name: String,
    pub sellmeier_o: Sellmeier,
    pub sellmeier_e: Sellmeier,
    /// Validity window (um); evaluations outside are domain errors.
    pub window_um: (f64, f64),
}

impl MaterialModel {
    /// Beta-barium borate, Kato (1986) coefficients. Default model.
    pub fn bbo_kato_1986() -> Self {
        MaterialModel {
            name: "bbo-kato-1986".into(),
            sellmeier_o: Sellmeier {
                a: 2.7359,
                b: 0.01878,
                c: 0.01822,
                d: 0.01354,
            },
            sellmeier_e: Sellmeier {
                a: 2.3753,
                b: 0.01224,
                c: 0.01667,
                d: 0.01516,
            },
            window_um: (0.3, 1.5),
        }
    }

    /// Beta-barium borate, Eimerl (1987) coefficients.
    pub fn bbo_eimerl_1987() -> Self {
        MaterialModel {
            name: "bbo-eimerl-1987".into(),
            sellmeier_o: Sellmeier {
                a: 2.7405,
                b: 0.0184,
                c: 0.0179,
                d: 0.0155,
            },
            sellmeier_e: Sellmeier {
                a: 2.3730,
                b: 0.0128,
                c: 0.0156,
                d: 0.0044,
            },
            window_um: (0.3, 1.5),
        }
    }

    /// Look up a bundled model by name.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "bbo-kato-1986" => Some(Self::bbo_kato_1986()),
            "bbo-eimerl-1987" => Some(Self::bbo_eimerl_1987()),
            _ => None,
        }
    }

    fn check_window(&self, lambda_m: f64) -> Result<f64> {
        let lambda_um = lambda_m * 1e6;
        let (lo, hi) = self.window_um;
        if !(lambda_um >= lo && lambda_um <= hi) {
            return Err(Error::OutOfWindow { lambda_um, lo, hi });
        }
        Ok(lambda_um)
    }

    /// Ordinary index n_o(lambda).
    pub fn index_ordinary(&self, lambda_m: f64) -> Result<f64> {
        let l = self.check_window(lambda_m)?;
        Ok(self.sellmeier_o.index(l))
    }

    /// Principal extraordinary index n_e(lambda) (propagation normal to
    /// the optic axis).
    pub fn index_extraordinary_principal(&self, lambda_m: f64) -> Result<f64> {
        let l = self.check_window(lambda_m)?;
        Ok(self.sellmeier_e.index(l))
    }

    /// Angle-tuned extraordinary index for propagation at `theta_rad` to
    /// the optic axis: `1/n^2 = cos^2(t)/n_o^2 + sin^2(t)/n_e^2`.
    pub fn index_extraordinary(&self, lambda_m: f64, theta_rad: f64) -> Result<f64> {
        let l = self.check_window(lambda_m)?;
        let no2 = self.sellmeier_o.index_squared(l);
        let ne2 = self.sellmeier_e.index_squared(l);
        let (s, c) = theta_rad.sin_cos();
        let inv = c * c / no2 + s * s / ne2;
        Ok((1.0 / inv).sqrt())
    }

    /// Index seen by a wave of the given polarization propagating at
    /// `theta_rad` to the optic axis.
    pub fn natural_index(&self, pol: Polarization, lambda_m: f64, theta_rad: f64) -> Result<f64> {
        match pol {
            Polarization::Ordinary => self.index_ordinary(lambda_m),
            Polarization::Extraordinary => self.index_extraordinary(lambda_m, theta_rad),
        }
    }
}

/// Full description of a one-dimensional nonlinear photonic crystal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrystalSpec {
    pub material: MaterialModel,
    /// Bragg period (m).
    pub period_m: f64,
    /// Fraction of the period left in the natural state (zone A).
    pub duty_cycle: f64,
    /// Relative permittivity contrast between zones A and B.
    pub contrast: f64,
    /// Angle between propagation direction and optic axis (rad).
    pub theta_pm_rad: f64,
    /// Crystal length (m).
    pub length_m: f64,
}

impl CrystalSpec {
    pub fn new(
        material: MaterialModel,
        period_nm: f64,
        duty_cycle: f64,
        contrast: f64,
        theta_pm_rad: f64,
        length_mm: f64,
    ) -> Result<Self> {
        let spec = CrystalSpec {
            material,
            period_m: period_nm * 1e-9,
            duty_cycle,
            contrast,
            theta_pm_rad,
            length_m: length_mm * 1e-3,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.period_m > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "period must be positive, got {} m",
                self.period_m
            )));
        }
        if !(self.length_m > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "length must be positive, got {} m",
                self.length_m
            )));
        }
        if !(self.duty_cycle > 0.0 && self.duty_cycle < 1.0) {
            return Err(Error::InvalidSpec(format!(
                "duty cycle must lie in (0, 1), got {}",
                self.duty_cycle
            )));
        }
        if !(self.contrast.abs() < 2.0) {
            return Err(Error::InvalidContrast(self.contrast));
        }
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&self.theta_pm_rad) {
            return Err(Error::InvalidSpec(format!(
                "propagation angle must lie in [0, pi/2], got {} rad",
                self.theta_pm_rad
            )));
        }
        Ok(())
    }

    pub fn period_nm(&self) -> f64 {
        self.period_m * 1e9
    }

    pub fn length_mm(&self) -> f64 {
        self.length_m * 1e3
    }

    /// Per-layer indices at one wavelength and polarization.
    pub fn layer_indices(&self, lambda_m: f64, pol: Polarization) -> Result<LayerIndices> {
        if !(self.contrast.abs() < 2.0) {
            return Err(Error::InvalidContrast(self.contrast));
        }
        let n1 = self
            .material
            .natural_index(pol, lambda_m, self.theta_pm_rad)?;
        let a = self.contrast;
        let n2 = n1 * ((2.0 - a) / (2.0 + a)).sqrt();
        let n_mean = n1 * (2.0 / (2.0 + a)).sqrt();
        Ok(LayerIndices { n1, n2, n_mean })
    }
}

/// Indices of the two layers plus the cell mean used by coupled-mode
/// theory (`n_mean^2` is the average of the squared layer indices).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerIndices {
    /// Natural index (zone A).
    pub n1: f64,
    /// Modified index (zone B).
    pub n2: f64,
    /// Root-mean-square cell index.
    pub n_mean: f64,
}
