//! Physical configuration and nondimensionalization.
//!
//! A bubble (rho_b, kappa) sits in an unbounded linear elastic solid
//! (rho_e, lambda_t, mu_t), driven at angular frequency omega with
//! characteristic diameter l_d. The working parameter set is the
//! dimensionless (k, tau, delta, lambda, mu, k_p, k_s).

use crate::error::{Error, Result};
use serde::Serialize;

/// Dimensional bubble/elastic parameters (SI units).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PhysicalMedium {
    /// bubble density (kg/m^3)
    pub rho_b: f64,
    /// bubble bulk modulus (Pa)
    pub kappa: f64,
    /// elastic background density (kg/m^3)
    pub rho_e: f64,
    /// first Lame parameter of the background (Pa)
    pub lambda_t: f64,
    /// shear modulus of the background (Pa)
    pub mu_t: f64,
    /// angular frequency (rad/s)
    pub omega: f64,
    /// characteristic diameter (m)
    pub l_d: f64,
}

impl PhysicalMedium {
    /// The soft-polymer configuration used throughout the test suite:
    /// PDMS background with an air-like bubble, driven at omega = 0.1.
    pub fn pdms_bubble() -> Self {
        PhysicalMedium {
            rho_b: 1.2,
            kappa: 1.412e5,
            rho_e: 1042.0,
            lambda_t: 1.083e9,
            mu_t: 6.5e5,
            omega: 0.1,
            l_d: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = [
            ("rho_b", self.rho_b),
            ("kappa", self.kappa),
            ("rho_e", self.rho_e),
            ("mu_t", self.mu_t),
            ("omega", self.omega),
            ("l_d", self.l_d),
        ];
        for (name, v) in pos {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        if !self.lambda_t.is_finite() {
            return Err(Error::Domain("lambda_t must be finite".into()));
        }
        // strong convexity
        if !(3.0 * self.lambda_t + 2.0 * self.mu_t > 0.0) {
            return Err(Error::Domain(format!(
                "strong convexity 3*lambda_t + 2*mu_t > 0 violated: {}",
                3.0 * self.lambda_t + 2.0 * self.mu_t
            )));
        }
        Ok(())
    }

    /// Acoustic wave speed inside the bubble, sqrt(kappa/rho_b).
    pub fn c_b(&self) -> f64 {
        (self.kappa / self.rho_b).sqrt()
    }

    /// Compressional wave speed of the background.
    pub fn c_p(&self) -> f64 {
        ((self.lambda_t + 2.0 * self.mu_t) / self.rho_e).sqrt()
    }
}

/// Dimensionless working parameters.
///
/// lambda + 2 mu = 1 holds exactly by the normalization
/// mu = mu_t/(lambda_t + 2 mu_t), lambda = lambda_t/(lambda_t + 2 mu_t).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NondimensionalMedium {
    /// dimensionless acoustic wavenumber k = omega l_d / c_b
    pub k: f64,
    /// wave-speed contrast tau = c_b / c_p
    pub tau: f64,
    /// density contrast delta = rho_b / rho_e
    pub delta: f64,
    /// normalized Lame parameters (lambda + 2 mu = 1)
    pub lambda: f64,
    pub mu: f64,
    /// compressional wavenumber k tau / sqrt(lambda + 2 mu)
    pub k_p: f64,
    /// shear wavenumber k tau / sqrt(mu): the wavenumber of the
    /// divergence-free solutions of the nondimensional operator
    /// mu lap + (lambda + mu) grad div + k^2 tau^2
    pub k_s: f64,
}

impl NondimensionalMedium {
    /// Construct directly from dimensionless parameters (lambda + 2 mu is
    /// renormalized to 1 to keep the invariant exact).
    pub fn from_parts(k: f64, tau: f64, delta: f64, lambda_raw: f64, mu_raw: f64) -> Result<Self> {
        let s = lambda_raw + 2.0 * mu_raw;
        if !(s > 0.0) {
            return Err(Error::Domain("lambda + 2 mu must be positive".into()));
        }
        if !(k > 0.0 && tau > 0.0 && delta > 0.0) {
            return Err(Error::Domain("k, tau, delta must be positive".into()));
        }
        let lambda = lambda_raw / s;
        let mu = mu_raw / s;
        Ok(NondimensionalMedium {
            k,
            tau,
            delta,
            lambda,
            mu,
            k_p: k * tau / (lambda + 2.0 * mu).sqrt(),
            k_s: k * tau / mu.abs().sqrt(),
        })
    }

    /// Shear wavenumber computed with the 2*mu normalization that some
    /// references quote for this configuration; reported for comparison.
    /// All wave physics in this crate uses [`Self::k_s`].
    pub fn k_s_2mu_convention(&self) -> f64 {
        self.k * self.tau / (2.0 * self.mu).sqrt()
    }

    pub fn lambda_plus_2mu(&self) -> f64 {
        self.lambda + 2.0 * self.mu
    }
}

/// Regime warnings for the sub-wavelength, high-contrast assumptions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RegimeWarning {
    KNotSmall,
    DeltaNotSmall,
    TauNotSubunit,
}

impl std::fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RegimeWarning::KNotSmall => "K_NOT_SMALL",
            RegimeWarning::DeltaNotSmall => "DELTA_NOT_SMALL",
            RegimeWarning::TauNotSubunit => "TAU_NOT_SUBUNIT",
        };
        f.write_str(s)
    }
}

/// Thresholds for [`check_regime`]; overridable from configuration.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RegimeThresholds {
    pub k_max: f64,
    pub delta_max: f64,
    pub tau_max: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        RegimeThresholds {
            k_max: 0.1,
            delta_max: 0.1,
            tau_max: 1.0,
        }
    }
}

pub fn nondimensionalize(pm: &PhysicalMedium) -> Result<NondimensionalMedium> {
    pm.validate()?;
    let c_b = pm.c_b();
    let k = pm.omega * pm.l_d / c_b;
    let tau = c_b / pm.c_p();
    let delta = pm.rho_b / pm.rho_e;
    NondimensionalMedium::from_parts(k, tau, delta, pm.lambda_t, pm.mu_t)
}

pub fn check_regime(
    nm: &NondimensionalMedium,
    thresholds: &RegimeThresholds,
) -> Vec<RegimeWarning> {
    let mut out = Vec::new();
    if nm.k >= thresholds.k_max {
        out.push(RegimeWarning::KNotSmall);
    }
    if nm.delta >= thresholds.delta_max {
        out.push(RegimeWarning::DeltaNotSmall);
    }
    if nm.tau >= thresholds.tau_max {
        out.push(RegimeWarning::TauNotSubunit);
    }
    out
}
