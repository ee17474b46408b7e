//! Physical constants and the unit conversions used across the crate.
//!
//! Frequencies are carried in eV and distances in µm internally; the
//! conversion factors here are the only place SI values enter.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// CODATA 2018 reduced Planck constant (J·s).
pub const HBAR_CODATA: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum (m/s), exact.
pub const C_CODATA: f64 = 299_792_458.0;
/// Elementary charge (C), exact since the 2019 SI redefinition.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

#[derive(Debug, Error, PartialEq)]
pub enum ConstantsError {
    #[error("constant `{name}` must be finite and strictly positive (got {value})")]
    NonPositive { name: &'static str, value: f64 },
    #[error("ev_to_radps = {ev_to_radps} is inconsistent with e/hbar = {expected} (relative deviation {rel:.3e})")]
    Inconsistent {
        ev_to_radps: f64,
        expected: f64,
        rel: f64,
    },
}

/// The set of constants every conversion in the pipeline goes through.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant (J·s).
    pub hbar: f64,
    /// Speed of light (m/s).
    pub c: f64,
    /// Angular frequency of one eV (rad/s per eV), i.e. e/ħ.
    pub ev_to_radps: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata()
    }
}

impl PhysicalConstants {
    pub fn codata() -> Self {
        Self {
            hbar: HBAR_CODATA,
            c: C_CODATA,
            ev_to_radps: ELEMENTARY_CHARGE / HBAR_CODATA,
        }
    }

    /// Validates a user-supplied set. `ev_to_radps` must agree with e/ħ to
    /// ten significant digits.
    pub fn new(hbar: f64, c: f64, ev_to_radps: f64) -> Result<Self, ConstantsError> {
        for (name, value) in [("hbar", hbar), ("c", c), ("ev_to_radps", ev_to_radps)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ConstantsError::NonPositive { name, value });
            }
        }
        let expected = ELEMENTARY_CHARGE / hbar;
        let rel = (ev_to_radps - expected).abs() / expected;
        if rel > 5e-10 {
            return Err(ConstantsError::Inconsistent {
                ev_to_radps,
                expected,
                rel,
            });
        }
        Ok(Self {
            hbar,
            c,
            ev_to_radps,
        })
    }

    /// One eV expressed in joules, recovered as ħ·(e/ħ).
    pub fn ev_in_joule(&self) -> f64 {
        self.hbar * self.ev_to_radps
    }

    /// ħc in eV·µm (≈ 0.19732698).
    pub fn hbar_c_ev_um(&self) -> f64 {
        self.c / self.ev_to_radps * 1e6
    }

    /// ħc in J·m.
    pub fn hbar_c_si(&self) -> f64 {
        self.hbar * self.c
    }

    /// hc in eV·µm (≈ 1.23984198), the photon energy–wavelength product.
    pub fn hc_ev_um(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.hbar_c_ev_um()
    }

    pub fn radps_to_ev(&self, omega: f64) -> f64 {
        omega / self.ev_to_radps
    }

    pub fn wavelength_um_to_ev(&self, lambda_um: f64) -> f64 {
        self.hc_ev_um() / lambda_um
    }

    /// Ideal-mirror Casimir energy per unit area, −π²ħc/(720 L³), in J/m².
    pub fn perfect_energy(&self, distance_um: f64) -> f64 {
        let l = distance_um * 1e-6;
        -std::f64::consts::PI.powi(2) * self.hbar_c_si() / (720.0 * l.powi(3))
    }

    /// Ideal-mirror Casimir pressure, −π²ħc/(240 L⁴), in N/m².
    pub fn perfect_force(&self, distance_um: f64) -> f64 {
        let l = distance_um * 1e-6;
        -std::f64::consts::PI.powi(2) * self.hbar_c_si() / (240.0 * l.powi(4))
    }
}
