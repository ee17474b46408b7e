//! Reflection amplitudes of a bulk mirror at imaginary frequency.
//!
//! With ξ and κ both expressed as energies (eV), the field inside the
//! medium decays with κ_m = sqrt(κ² + (ε − 1)ξ²) and
//!
//! ```text
//! r_TE = (κ − κ_m) / (κ + κ_m)        r_TM = (εκ − κ_m) / (εκ + κ_m)
//! ```
//!
//! Sign convention: r_TE ≤ 0 and r_TM ≥ 0 whenever ε ≥ 1.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReflectionError {
    #[error("eps(i xi) = {eps} < 1 is unphysical on the imaginary axis")]
    InvalidEps { eps: f64 },
    #[error("invalid point xi = {xi}, kappa = {kappa} (need xi > 0, kappa >= xi)")]
    InvalidPoint { xi: f64, kappa: f64 },
    #[error("loop argument {product} >= 1 (ln(1 - x) undefined)")]
    DomainError { product: f64 },
    #[error("distance must be > 0 (got {0} um)")]
    InvalidDistance(f64),
}

/// Imaginary frequency ξ and vacuum decay constant κ, both in eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImagFreqPoint {
    xi: f64,
    kappa: f64,
}

impl ImagFreqPoint {
    pub fn new(xi: f64, kappa: f64) -> Result<Self, ReflectionError> {
        if !(xi > 0.0 && xi.is_finite() && kappa.is_finite() && kappa >= xi) {
            return Err(ReflectionError::InvalidPoint { xi, kappa });
        }
        Ok(Self { xi, kappa })
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub r_te: f64,
    pub r_tm: f64,
}

impl ReflectionPair {
    /// Ideal mirror: r_TE = −1, r_TM = +1.
    pub const PERFECT: ReflectionPair = ReflectionPair {
        r_te: -1.0,
        r_tm: 1.0,
    };
}

/// Fresnel amplitudes for a bulk medium with ε(iξ) = `eps`.
pub fn fresnel(eps: f64, point: ImagFreqPoint) -> Result<ReflectionPair, ReflectionError> {
    if !(eps >= 1.0 && eps.is_finite()) {
        return Err(ReflectionError::InvalidEps { eps });
    }
    Ok(fresnel_unchecked(eps, point.xi, point.kappa))
}

/// Hot-path variant for callers that have already validated their inputs.
#[inline]
pub(crate) fn fresnel_unchecked(eps: f64, xi: f64, kappa: f64) -> ReflectionPair {
    let km = (kappa * kappa + (eps - 1.0) * xi * xi).sqrt();
    let ek = eps * kappa;
    ReflectionPair {
        r_te: (kappa - km) / (kappa + km),
        r_tm: (ek - km) / (ek + km),
    }
}

/// Per-polarization loop factors ln(1 − r_p^A r_p^B e^{−2κL/ħc}).
///
/// `kappa` in eV, `distance_um` in µm, `hbar_c_ev_um` converts between them.
pub fn loop_function(
    a: ReflectionPair,
    b: ReflectionPair,
    kappa: f64,
    distance_um: f64,
    hbar_c_ev_um: f64,
) -> Result<(f64, f64), ReflectionError> {
    if !(distance_um > 0.0 && distance_um.is_finite()) {
        return Err(ReflectionError::InvalidDistance(distance_um));
    }
    let decay = (-2.0 * kappa * distance_um / hbar_c_ev_um).exp();
    let x_te = a.r_te * b.r_te * decay;
    let x_tm = a.r_tm * b.r_tm * decay;
    for x in [x_te, x_tm] {
        if x >= 1.0 {
            return Err(ReflectionError::DomainError { product: x });
        }
    }
    Ok(((-x_te).ln_1p(), (-x_tm).ln_1p()))
}
