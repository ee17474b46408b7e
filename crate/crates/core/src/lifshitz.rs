//! Zero-temperature Casimir energy and pressure between two plane mirrors,
//! their reduction factors relative to perfect mirrors, and the
//! proximity-force mapping to the sphere–plane geometry.
//!
//! The energy per unit area is
//!
//! ```text
//! E(L) = ħ/(2π) ∫₀^∞ dξ ∫_{κ ≥ ξ/c} κ dκ/(2π) Σ_p ln(1 − r_p^A r_p^B e^{−2κL})
//! ```
//!
//! Both integration variables are made dimensionless with the distance:
//! τ = ξL/ħc on `[0, ∞)` and y = 2κL/ħc on `[2τ, ∞)`, each mapped to the
//! unit interval by x ↦ x/(1 − x). The Fresnel amplitudes are homogeneous
//! of degree zero in (ξ, κ), so only ε(iξ) needs the physical frequency.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::PhysicalConstants;
use crate::dispersion::{build_eps_cache, DispersionError, EpsImagAxis};
use crate::optical_data::DielectricModel;
use crate::quadrature::{adaptive, GaussLegendre};
use crate::reflection::{fresnel_unchecked, ReflectionPair};

/// Outer nodes with 2τ above this contribute below f64 resolution.
const MAX_EXPONENT: f64 = 700.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LifshitzError {
    #[error("distance must be finite and > 0 (got {0} um)")]
    InvalidDistance(f64),
    #[error("sphere radius must be finite and > 0 (got {0} cm)")]
    InvalidRadius(f64),
    #[error("invalid quadrature spec: {0}")]
    InvalidQuadrature(String),
    #[error("invalid distance grid: {0}")]
    InvalidGrid(String),
    #[error("quadrature at L = {distance_um} um stopped at estimated relative error {achieved:.2e} (target {target:.1e})")]
    ToleranceNotReached {
        distance_um: f64,
        achieved: f64,
        target: f64,
    },
    #[error("xi = {xi} eV outside the eps cache [{min}, {max}] eV")]
    CacheRangeExceeded { xi: f64, min: f64, max: f64 },
    #[error(transparent)]
    Dispersion(DispersionError),
    #[error("every entry of the curve failed; first failure: {0}")]
    AllEntriesFailed(String),
}

impl From<DispersionError> for LifshitzError {
    fn from(e: DispersionError) -> Self {
        match e {
            DispersionError::CacheRangeExceeded { xi, min, max } => {
                LifshitzError::CacheRangeExceeded { xi, min, max }
            }
            other => LifshitzError::Dispersion(other),
        }
    }
}

type Result<T> = std::result::Result<T, LifshitzError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Tensor-product Gauss–Legendre on the mapped unit square.
    #[default]
    GaussLegendreMapped,
    /// Nested adaptive Gauss–Kronrod on the same mapped variables.
    Adaptive,
}

/// Node counts and accuracy target for the double integral.
///
/// The result at `(xi_nodes, kappa_nodes)·2^k` is compared with level
/// `k − 1`; doubling continues until the relative change is below
/// `target_rel_tol` or `max_doublings` is reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub xi_nodes: usize,
    pub kappa_nodes: usize,
    pub target_rel_tol: f64,
    pub scheme: Scheme,
    pub max_doublings: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            xi_nodes: 32,
            kappa_nodes: 32,
            target_rel_tol: 1e-6,
            scheme: Scheme::GaussLegendreMapped,
            max_doublings: 5,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.xi_nodes < 8 || self.kappa_nodes < 8 {
            return Err(LifshitzError::InvalidQuadrature(format!(
                "node counts must be >= 8 (got {} x {})",
                self.xi_nodes, self.kappa_nodes
            )));
        }
        if !(1e-10..=1e-3).contains(&self.target_rel_tol) {
            return Err(LifshitzError::InvalidQuadrature(format!(
                "target_rel_tol {} outside [1e-10, 1e-3]",
                self.target_rel_tol
            )));
        }
        if self.max_doublings == 0 || self.max_doublings > 8 {
            return Err(LifshitzError::InvalidQuadrature(
                "max_doublings must be in 1..=8".into(),
            ));
        }
        Ok(())
    }

    /// Same spec with both node counts doubled.
    pub fn doubled(&self) -> Self {
        Self {
            xi_nodes: self.xi_nodes * 2,
            kappa_nodes: self.kappa_nodes * 2,
            ..*self
        }
    }

    /// Imaginary-frequency span (eV) the quadrature may touch for
    /// distances in `[l_min, l_max]` µm.
    pub fn xi_span(&self, l_min: f64, l_max: f64, constants: &PhysicalConstants) -> (f64, f64) {
        let hc = constants.hbar_c_ev_um();
        let tau_min = match self.scheme {
            Scheme::GaussLegendreMapped => {
                let n = self.xi_nodes as f64 * 2f64.powi(self.max_doublings as i32);
                0.5 / (n * n)
            }
            Scheme::Adaptive => 1e-13,
        };
        (hc / l_max * tau_min, hc / l_min * MAX_EXPONENT)
    }
}

/// One side of the cavity.
#[derive(Debug, Clone)]
pub enum Mirror {
    /// r_TE = −1, r_TM = +1 at every frequency.
    Perfect,
    /// Bulk medium described by a cached ε(iξ).
    Dielectric {
        label: String,
        cache: Arc<EpsImagAxis>,
    },
    /// Mutation-testing aid: the wrapped mirror with the sign of r_TM
    /// flipped. Used to check that the certification suite catches a
    /// transcription error in the TM amplitude.
    #[doc(hidden)]
    TmSignFlipped(Box<Mirror>),
}

impl Mirror {
    /// Builds the ε(iξ) cache for `model` over `xi_span`.
    pub fn from_model(
        label: impl Into<String>,
        model: &DielectricModel,
        xi_span: (f64, f64),
        points_per_decade: usize,
        tol: f64,
    ) -> Result<Self> {
        let cache = build_eps_cache(model, xi_span.0, xi_span.1, points_per_decade, tol)?;
        Ok(Mirror::Dielectric {
            label: label.into(),
            cache: Arc::new(cache),
        })
    }

    pub fn label(&self) -> String {
        match self {
            Mirror::Perfect => "perfect".into(),
            Mirror::Dielectric { label, .. } => label.clone(),
            Mirror::TmSignFlipped(inner) => format!("{}(tm-flipped)", inner.label()),
        }
    }

    /// ε(iξ) for the outer node, `None` for a perfect mirror.
    fn eps(&self, xi: f64) -> Result<Option<f64>> {
        match self {
            Mirror::Perfect => Ok(None),
            Mirror::Dielectric { cache, .. } => Ok(Some(cache.eval(xi)?)),
            Mirror::TmSignFlipped(inner) => inner.eps(xi),
        }
    }

    fn flips_tm(&self) -> bool {
        matches!(self, Mirror::TmSignFlipped(_))
    }

    fn same_as(&self, other: &Mirror) -> bool {
        match (self, other) {
            (Mirror::Perfect, Mirror::Perfect) => true,
            (Mirror::Dielectric { cache: a, .. }, Mirror::Dielectric { cache: b, .. }) => {
                Arc::ptr_eq(a, b)
            }
            _ => false,
        }
    }
}

/// Two mirrors facing each other, with the constants used for unit
/// conversion.
#[derive(Debug, Clone)]
pub struct MirrorPair {
    a: Mirror,
    b: Mirror,
    constants: PhysicalConstants,
}

impl MirrorPair {
    pub fn new(a: Mirror, b: Mirror, constants: PhysicalConstants) -> Self {
        Self { a, b, constants }
    }

    pub fn identical(mirror: Mirror, constants: PhysicalConstants) -> Self {
        Self::new(mirror.clone(), mirror, constants)
    }

    pub fn perfect(constants: PhysicalConstants) -> Self {
        Self::new(Mirror::Perfect, Mirror::Perfect, constants)
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    pub fn mirrors(&self) -> (&Mirror, &Mirror) {
        (&self.a, &self.b)
    }

    pub fn label(&self) -> String {
        format!("{}/{}", self.a.label(), self.b.label())
    }

    fn is_symmetric(&self) -> bool {
        self.a.same_as(&self.b)
    }

    /// Amplitudes of both mirrors at dimensionless (ξ', κ') with given ε.
    #[inline]
    fn products(&self, eps_a: Option<f64>, eps_b: Option<f64>, xi: f64, kappa: f64) -> (f64, f64) {
        let ra = eps_a.map_or(ReflectionPair::PERFECT, |e| fresnel_unchecked(e, xi, kappa));
        let rb = if self.is_symmetric() {
            ra
        } else {
            eps_b.map_or(ReflectionPair::PERFECT, |e| fresnel_unchecked(e, xi, kappa))
        };
        let mut tm = ra.r_tm * rb.r_tm;
        if self.a.flips_tm() != self.b.flips_tm() {
            tm = -tm;
        }
        (ra.r_te * rb.r_te, tm)
    }
}

/// A converged quadrature value with its doubling-based error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Converged {
    pub value: f64,
    pub est_rel_error: f64,
    pub xi_nodes: usize,
    pub kappa_nodes: usize,
}

/// Dimensionless energy (J) and force (K) integrals.
#[derive(Debug, Clone, Copy)]
struct Integrals {
    energy: f64,
    force: f64,
}

/// Inner integral over y at fixed τ, for one outer node.
struct OuterNode {
    tau: f64,
    eps_a: Option<f64>,
    eps_b: Option<f64>,
}

impl OuterNode {
    fn new(pair: &MirrorPair, tau: f64, distance_um: f64) -> Result<Self> {
        let xi_ev = pair.constants.hbar_c_ev_um() / distance_um * tau;
        let eps_a = pair.a.eps(xi_ev)?;
        let eps_b = if pair.is_symmetric() {
            eps_a
        } else {
            pair.b.eps(xi_ev)?
        };
        Ok(Self { tau, eps_a, eps_b })
    }

    /// (y·Σ ln(1 − x_p), y²·Σ x_p/(1 − x_p)) at inner variable s.
    #[inline]
    fn integrand(&self, pair: &MirrorPair, s: f64) -> (f64, f64) {
        let xi = 2.0 * self.tau;
        let y = xi + s / (1.0 - s);
        let jac = 1.0 / ((1.0 - s) * (1.0 - s));
        if y == 0.0 {
            return (0.0, 0.0);
        }
        let (p_te, p_tm) = pair.products(self.eps_a, self.eps_b, xi, y);
        let decay = (-y).exp();
        let (x_te, x_tm) = (p_te * decay, p_tm * decay);
        let log_sum = (-x_te).ln_1p() + (-x_tm).ln_1p();
        let frac_sum = x_te / (1.0 - x_te) + x_tm / (1.0 - x_tm);
        (jac * y * log_sum, jac * y * y * frac_sum)
    }
}

fn integrate_gl(
    pair: &MirrorPair,
    distance_um: f64,
    n_xi: usize,
    n_kappa: usize,
) -> Result<Integrals> {
    let outer = GaussLegendre::unit(n_xi);
    let inner = GaussLegendre::unit(n_kappa);
    let mut energy = 0.0;
    let mut force = 0.0;
    for (&t, &wt) in outer.nodes.iter().zip(&outer.weights) {
        let tau = t / (1.0 - t);
        if 2.0 * tau > MAX_EXPONENT {
            continue;
        }
        let node = OuterNode::new(pair, tau, distance_um)?;
        let (mut ge, mut gf) = (0.0, 0.0);
        for (&s, &ws) in inner.nodes.iter().zip(&inner.weights) {
            let (e, f) = node.integrand(pair, s);
            ge += ws * e;
            gf += ws * f;
        }
        let jac = wt / ((1.0 - t) * (1.0 - t));
        energy += jac * ge;
        force += jac * gf;
    }
    Ok(Integrals { energy, force })
}

#[derive(Clone, Copy)]
enum Quantity {
    Energy,
    Force,
}

fn integrate_adaptive(
    pair: &MirrorPair,
    distance_um: f64,
    rel_tol: f64,
    quantity: Quantity,
) -> Result<f64> {
    let pick = |v: (f64, f64)| match quantity {
        Quantity::Energy => v.0,
        Quantity::Force => v.1,
    };
    let failure = std::cell::RefCell::new(None::<LifshitzError>);
    let outer = |t: f64| -> f64 {
        let tau = t / (1.0 - t);
        if 2.0 * tau > MAX_EXPONENT || failure.borrow().is_some() {
            return 0.0;
        }
        let node = match OuterNode::new(pair, tau, distance_um) {
            Ok(n) => n,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                return 0.0;
            }
        };
        let g = |s: f64| pick(node.integrand(pair, s));
        let inner = match adaptive(&g, &[0.0, 0.5, 1.0], 0.25 * rel_tol, 0.0, 2000) {
            Ok(r) => r.value,
            Err(nc) => nc.value,
        };
        inner / ((1.0 - t) * (1.0 - t))
    };
    let result = adaptive(&outer, &[0.0, 0.25, 0.5, 0.75, 1.0], rel_tol, 0.0, 4000);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    result
        .map(|r| r.value)
        .map_err(|nc| LifshitzError::ToleranceNotReached {
            distance_um,
            achieved: nc.error / nc.value.abs(),
            target: rel_tol,
        })
}

fn check_distance(distance_um: f64) -> Result<()> {
    if distance_um.is_finite() && distance_um > 0.0 {
        Ok(())
    } else {
        Err(LifshitzError::InvalidDistance(distance_um))
    }
}

/// Runs the doubling ladder and returns the finest value of `quantity`.
fn converge(
    pair: &MirrorPair,
    distance_um: f64,
    quad: &QuadratureSpec,
    quantity: Quantity,
) -> Result<Converged> {
    check_distance(distance_um)?;
    quad.validate()?;
    let pick = |i: Integrals| match quantity {
        Quantity::Energy => i.energy,
        Quantity::Force => i.force,
    };
    let level = |k: u32| -> Result<(f64, usize, usize)> {
        let scale = 1usize << k;
        let (nx, nk) = (quad.xi_nodes * scale, quad.kappa_nodes * scale);
        let v = match quad.scheme {
            Scheme::GaussLegendreMapped => pick(integrate_gl(pair, distance_um, nx, nk)?),
            Scheme::Adaptive => {
                let tol = quad.target_rel_tol * 0.25f64.powi(k as i32 + 1);
                integrate_adaptive(pair, distance_um, tol, quantity)?
            }
        };
        Ok((v, nx, nk))
    };
    let (mut prev, _, _) = level(0)?;
    let mut est = f64::INFINITY;
    for k in 1..=quad.max_doublings {
        let (v, nx, nk) = level(k)?;
        est = if v == 0.0 && prev == 0.0 {
            0.0
        } else {
            (v - prev).abs() / v.abs()
        };
        if est <= quad.target_rel_tol {
            return Ok(Converged {
                value: v,
                est_rel_error: est,
                xi_nodes: nx,
                kappa_nodes: nk,
            });
        }
        prev = v;
    }
    Err(LifshitzError::ToleranceNotReached {
        distance_um,
        achieved: est,
        target: quad.target_rel_tol,
    })
}

/// Prefactors turning the dimensionless integrals into SI values.
fn energy_scale(c: &PhysicalConstants, distance_um: f64) -> f64 {
    // E = e(ħc/L)³ J / (16π² (ħc)²), ħc in eV·m, L and ħc/L in consistent units.
    let hc_m = c.hbar_c_ev_um() * 1e-6;
    let l_m = distance_um * 1e-6;
    c.ev_in_joule() * hc_m / (16.0 * PI * PI * l_m.powi(3))
}

fn force_scale(c: &PhysicalConstants, distance_um: f64) -> f64 {
    energy_scale(c, distance_um) / (distance_um * 1e-6)
}

/// Casimir energy per unit area (J/m², negative).
pub fn energy_plane_plane(
    pair: &MirrorPair,
    distance_um: f64,
    quad: &QuadratureSpec,
) -> Result<Converged> {
    let c = converge(pair, distance_um, quad, Quantity::Energy)?;
    Ok(Converged {
        value: energy_scale(&pair.constants, distance_um) * c.value,
        ..c
    })
}

/// Casimir pressure −dE/dL (N/m², negative for attraction), from the
/// analytic L-derivative of the integrand.
pub fn force_plane_plane(
    pair: &MirrorPair,
    distance_um: f64,
    quad: &QuadratureSpec,
) -> Result<Converged> {
    let c = converge(pair, distance_um, quad, Quantity::Force)?;
    Ok(Converged {
        value: -force_scale(&pair.constants, distance_um) * c.value,
        ..c
    })
}

/// η_E from an already converged energy.
pub fn eta_from_energy(pair: &MirrorPair, distance_um: f64, energy: f64) -> f64 {
    energy / pair.constants.perfect_energy(distance_um)
}

/// η_F from an already converged pressure.
pub fn eta_from_force(pair: &MirrorPair, distance_um: f64, force: f64) -> f64 {
    force / pair.constants.perfect_force(distance_um)
}

/// Energy reduction factor η_E = E / E_perfect.
pub fn eta_energy(pair: &MirrorPair, distance_um: f64, quad: &QuadratureSpec) -> Result<f64> {
    let e = energy_plane_plane(pair, distance_um, quad)?;
    Ok(eta_from_energy(pair, distance_um, e.value))
}

/// Pressure reduction factor η_F = F / F_perfect.
pub fn eta_force(pair: &MirrorPair, distance_um: f64, quad: &QuadratureSpec) -> Result<f64> {
    let f = force_plane_plane(pair, distance_um, quad)?;
    Ok(eta_from_force(pair, distance_um, f.value))
}

/// Proximity-force approximation is only sensible for R ≫ L.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryWarning {
    pub radius_over_distance: f64,
}

impl std::fmt::Display for GeometryWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "R/L = {:.3} < 100: proximity-force approximation is questionable",
            self.radius_over_distance
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePlaneForce {
    /// Force on the sphere (N, negative for attraction).
    pub force: f64,
    /// Plane–plane energy per area it was derived from (J/m²).
    pub energy_pp: f64,
    /// Equals η_E at the same distance.
    pub reduction_factor: f64,
    pub est_rel_error: f64,
    pub warning: Option<GeometryWarning>,
}

/// F = 2πR·E_pp(L), with the sphere radius in cm.
pub fn force_sphere_plane(
    pair: &MirrorPair,
    distance_um: f64,
    radius_cm: f64,
    quad: &QuadratureSpec,
) -> Result<SpherePlaneForce> {
    if !(radius_cm.is_finite() && radius_cm > 0.0) {
        return Err(LifshitzError::InvalidRadius(radius_cm));
    }
    let e = energy_plane_plane(pair, distance_um, quad)?;
    Ok(sphere_plane_from_energy(pair, distance_um, radius_cm, e))
}

pub fn sphere_plane_from_energy(
    pair: &MirrorPair,
    distance_um: f64,
    radius_cm: f64,
    energy: Converged,
) -> SpherePlaneForce {
    let radius_m = radius_cm * 1e-2;
    let ratio = radius_cm * 1e4 / distance_um;
    SpherePlaneForce {
        force: 2.0 * PI * radius_m * energy.value,
        energy_pp: energy.value,
        reduction_factor: eta_from_energy(pair, distance_um, energy.value),
        est_rel_error: energy.est_rel_error,
        warning: (ratio < 100.0).then_some(GeometryWarning {
            radius_over_distance: ratio,
        }),
    }
}

/// One converged row of an η curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaEntry {
    pub distance_um: f64,
    pub energy_pp: f64,
    pub eta_e: f64,
    pub force_pp: f64,
    pub eta_f: f64,
    pub est_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub distance_um: f64,
    pub outcome: std::result::Result<EtaEntry, String>,
}

/// η_E and η_F over a distance grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaCurve {
    pub mirrors: String,
    pub points: Vec<CurvePoint>,
    /// Non-fatal diagnostics, e.g. η_E decreasing with L by more than the
    /// quadrature tolerance.
    pub warnings: Vec<String>,
}

impl EtaCurve {
    pub fn entries(&self) -> impl Iterator<Item = &EtaEntry> {
        self.points.iter().filter_map(|p| p.outcome.as_ref().ok())
    }

    pub fn failures(&self) -> impl Iterator<Item = (f64, &str)> {
        self.points.iter().filter_map(|p| {
            p.outcome
                .as_ref()
                .err()
                .map(|e| (p.distance_um, e.as_str()))
        })
    }

    /// Delimited export, 9 significant digits. Failed points are written
    /// as NaN rows preceded by a `# FAILED` comment.
    pub fn to_delimited(&self) -> String {
        let mut out = String::from("L_um,E_pp_J_per_m2,eta_E,F_pp_N_per_m2,eta_F,est_rel_error\n");
        for p in &self.points {
            match &p.outcome {
                Ok(e) => out.push_str(&format!(
                    "{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e}\n",
                    e.distance_um, e.energy_pp, e.eta_e, e.force_pp, e.eta_f, e.est_error
                )),
                Err(msg) => {
                    out.push_str(&format!("# FAILED L_um={:.8e}: {msg}\n", p.distance_um));
                    out.push_str(&format!("{:.8e},NaN,NaN,NaN,NaN,NaN\n", p.distance_um));
                }
            }
        }
        out
    }
}

/// Evaluates one curve entry: energy, pressure and both reduction factors.
pub fn eta_entry(pair: &MirrorPair, distance_um: f64, quad: &QuadratureSpec) -> Result<EtaEntry> {
    let e = energy_plane_plane(pair, distance_um, quad)?;
    let f = force_plane_plane(pair, distance_um, quad)?;
    Ok(EtaEntry {
        distance_um,
        energy_pp: e.value,
        eta_e: eta_from_energy(pair, distance_um, e.value),
        force_pp: f.value,
        eta_f: eta_from_force(pair, distance_um, f.value),
        est_error: e.est_rel_error.max(f.est_rel_error),
    })
}

/// Batch driver over an ascending distance grid; entries are computed in
/// parallel and returned in grid order.
pub fn eta_curve(pair: &MirrorPair, grid_um: &[f64], quad: &QuadratureSpec) -> Result<EtaCurve> {
    quad.validate()?;
    if grid_um.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(LifshitzError::InvalidGrid(
            "distances must be finite and > 0".into(),
        ));
    }
    if grid_um.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LifshitzError::InvalidGrid(
            "distances must be strictly ascending".into(),
        ));
    }
    let points: Vec<CurvePoint> = grid_um
        .par_iter()
        .map(|&l| CurvePoint {
            distance_um: l,
            outcome: eta_entry(pair, l, quad).map_err(|e| e.to_string()),
        })
        .collect();
    if !points.is_empty() && points.iter().all(|p| p.outcome.is_err()) {
        let first = points[0].outcome.clone().unwrap_err();
        return Err(LifshitzError::AllEntriesFailed(first));
    }
    let mut warnings = Vec::new();
    let ok: Vec<&EtaEntry> = points
        .iter()
        .filter_map(|p| p.outcome.as_ref().ok())
        .collect();
    for w in ok.windows(2) {
        if w[1].eta_e < w[0].eta_e * (1.0 - quad.target_rel_tol) {
            warnings.push(format!(
                "eta_E decreases from {:.6} at L = {} um to {:.6} at L = {} um",
                w[0].eta_e, w[0].distance_um, w[1].eta_e, w[1].distance_um
            ));
        }
    }
    Ok(EtaCurve {
        mirrors: pair.label(),
        points,
        warnings,
    })
}

/// `count` log-spaced distances from `l_min` to `l_max` inclusive.
pub fn log_grid(l_min: f64, l_max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![l_min],
        _ => {
            let (a, b) = (l_min.ln(), l_max.ln());
            (0..count)
                .map(|i| {
                    if i == 0 {
                        l_min
                    } else if i == count - 1 {
                        l_max
                    } else {
                        (a + (b - a) * i as f64 / (count - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}
