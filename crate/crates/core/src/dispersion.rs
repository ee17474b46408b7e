//! Dielectric function on the imaginary frequency axis.
//!
//! ε(iξ) = 1 + (2/π) ∫₀^∞ ω ε″(ω) / (ω² + ξ²) dω
//!
//! The integral is split into three parts with different treatment:
//! the Drude region below the first tabulated frequency is done in closed
//! form, the tabulated region by adaptive Gauss–Kronrod in ln ω with a panel
//! break at every sample, and the high-frequency closure by adaptive
//! quadrature after the substitution u = ω/(ω + ξ).

use std::f64::consts::FRAC_2_PI;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::optical_data::{DielectricModel, HighFreqClosure};
use crate::quadrature::{adaptive, NotConverged};
use crate::spline::CubicSpline;

/// Default relative accuracy of one ε(iξ) evaluation.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default cap on adaptive panels per integral segment.
pub const DEFAULT_MAX_PANELS: usize = 4000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DispersionError {
    #[error("imaginary frequency must be > 0 (got {xi} eV)")]
    InvalidXi { xi: f64 },
    #[error("tolerance {tol} outside [1e-12, 1e-3]")]
    InvalidTolerance { tol: f64 },
    #[error("dispersion integral at xi = {xi} eV stopped at estimated relative error {achieved:.2e} (refinement cap)")]
    ToleranceNotReached { xi: f64, achieved: f64 },
    #[error("invalid cache grid: {0}")]
    InvalidGrid(String),
    #[error("xi = {xi} eV outside cached range [{min}, {max}] eV")]
    CacheRangeExceeded { xi: f64, min: f64, max: f64 },
    #[error("eps(i xi) not strictly decreasing / above 1 near xi = {xi} eV")]
    NotMonotone { xi: f64 },
}

type Result<T> = std::result::Result<T, DispersionError>;

/// ε(iξ) for a single imaginary frequency (eV), to relative accuracy `tol`.
pub fn eps_imag_axis(model: &DielectricModel, xi: f64, tol: f64) -> Result<f64> {
    eps_imag_axis_capped(model, xi, tol, DEFAULT_MAX_PANELS)
}

/// As [`eps_imag_axis`] with an explicit adaptive refinement cap.
pub fn eps_imag_axis_capped(
    model: &DielectricModel,
    xi: f64,
    tol: f64,
    max_panels: usize,
) -> Result<f64> {
    if !(xi.is_finite() && xi > 0.0) {
        return Err(DispersionError::InvalidXi { xi });
    }
    if !(1e-12..=1e-3).contains(&tol) {
        return Err(DispersionError::InvalidTolerance { tol });
    }
    // Each positive part to tol/4 of itself keeps the sum within tol of ε.
    let part_tol = 0.25 * tol;
    let fail = |e: NotConverged| DispersionError::ToleranceNotReached {
        xi,
        achieved: e.error / e.value.abs().max(f64::MIN_POSITIVE),
    };

    let integral = if model.is_pure_drude() {
        drude_numeric(model, xi, part_tol, max_panels).map_err(fail)?
    } else {
        let drude = drude_below(model, xi, part_tol, max_panels).map_err(fail)?;
        let table = table_part(model, xi, part_tol, max_panels).map_err(fail)?;
        let tail = tail_part(model, xi, part_tol, max_panels).map_err(fail)?;
        drude + table + tail
    };
    Ok(1.0 + FRAC_2_PI * integral)
}

/// Whole-axis Drude integral through u = ω/(ω+ξ).
fn drude_numeric(
    model: &DielectricModel,
    xi: f64,
    tol: f64,
    max_panels: usize,
) -> std::result::Result<f64, NotConverged> {
    let d = model.drude();
    let wp2g = d.omega_p * d.omega_p * d.gamma;
    let g2 = d.gamma * d.gamma;
    let f = |u: f64| {
        let w = xi * u / (1.0 - u);
        let jac = xi / ((1.0 - u) * (1.0 - u));
        wp2g / ((w * w + g2) * (w * w + xi * xi)) * jac
    };
    let ug = d.gamma / (d.gamma + xi);
    let mut br = vec![0.0, ug, 0.5, 1.0];
    br.sort_by(f64::total_cmp);
    br.dedup();
    adaptive(&f, &br, tol, 0.0, max_panels).map(|r| r.value)
}

/// ∫₀^{ω_min} ω_p²γ / ((ω²+γ²)(ω²+ξ²)) dω by partial fractions.
fn drude_below(
    model: &DielectricModel,
    xi: f64,
    tol: f64,
    max_panels: usize,
) -> std::result::Result<f64, NotConverged> {
    let d = model.drude();
    let a = model.omega_min();
    let g = d.gamma;
    let wp2g = d.omega_p * d.omega_p * g;
    if (xi - g).abs() > 1e-3 * g {
        let f = |s: f64| (a / s).atan() / s;
        Ok(wp2g * (f(g) - f(xi)) / ((xi - g) * (xi + g)))
    } else {
        let h = |w: f64| wp2g / ((w * w + g * g) * (w * w + xi * xi));
        let mut br = vec![0.0, g.min(a), a];
        br.dedup();
        adaptive(&h, &br, tol, 0.0, max_panels).map(|r| r.value)
    }
}

fn table_part(
    model: &DielectricModel,
    xi: f64,
    tol: f64,
    max_panels: usize,
) -> std::result::Result<f64, NotConverged> {
    let table = model.table().expect("tabulated model");
    let mut br: Vec<f64> = table.samples().iter().map(|s| s.omega.ln()).collect();
    let lx = xi.ln();
    if lx > br[0] && lx < br[br.len() - 1] {
        let pos = br.partition_point(|&v| v < lx);
        if br[pos] != lx {
            br.insert(pos, lx);
        }
    }
    let xi2 = xi * xi;
    let f = |v: f64| {
        let w = v.exp();
        let w2 = w * w;
        w2 * model.eps2(w) / (w2 + xi2)
    };
    let cap = max_panels.max(br.len() + 1);
    adaptive(&f, &br, tol, 0.0, cap).map(|r| r.value)
}

fn tail_part(
    model: &DielectricModel,
    xi: f64,
    tol: f64,
    max_panels: usize,
) -> std::result::Result<f64, NotConverged> {
    if model.closure() == HighFreqClosure::Truncate {
        return Ok(0.0);
    }
    // ω = ω_max/v maps [ω_max, ∞) onto (0, 1] and stays well conditioned
    // for ξ far below or above ω_max.
    let w_max = model.omega_max();
    let f = |v: f64| {
        let w = w_max / v;
        w * model.eps2(w) / (w * w + xi * xi) * w_max / (v * v)
    };
    let mut br = vec![0.0, 1.0];
    let knee = w_max / xi;
    if knee < 0.5 {
        br.insert(1, knee);
    }
    adaptive(&f, &br, tol, 0.0, max_panels).map(|r| r.value)
}

/// Cached ε(iξ) on a log grid with cubic interpolation in (ln ξ, ln(ε − 1)).
#[derive(Debug, Clone)]
pub struct EpsImagAxis {
    xi_grid: Vec<f64>,
    eps_values: Vec<f64>,
    tol: f64,
    source_model: Arc<DielectricModel>,
    spline: CubicSpline,
}

/// Maximum number of interval-bisection passes when refining the cache.
const CACHE_REFINE_ROUNDS: usize = 8;

/// Tabulates ε(iξ) on `[xi_min, xi_max]` with at least `points_per_decade`
/// log-spaced nodes. Intervals whose midpoint is not reproduced to `2·tol`
/// by the interpolant are bisected until it is.
pub fn build_eps_cache(
    model: &DielectricModel,
    xi_min: f64,
    xi_max: f64,
    points_per_decade: usize,
    tol: f64,
) -> Result<EpsImagAxis> {
    if !(xi_min > 0.0 && xi_max > xi_min && xi_max.is_finite()) {
        return Err(DispersionError::InvalidGrid(format!(
            "need 0 < xi_min < xi_max (got {xi_min}, {xi_max})"
        )));
    }
    if points_per_decade < 8 {
        return Err(DispersionError::InvalidGrid(format!(
            "points_per_decade must be >= 8 (got {points_per_decade})"
        )));
    }
    let decades = (xi_max / xi_min).log10();
    let n = ((decades * points_per_decade as f64).ceil() as usize).max(1) + 1;
    let (l0, l1) = (xi_min.ln(), xi_max.ln());
    let mut grid: Vec<f64> = (0..n)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp())
        .collect();
    grid[0] = xi_min;
    grid[n - 1] = xi_max;
    let mut values = evaluate_many(model, &grid, tol)?;

    for _ in 0..CACHE_REFINE_ROUNDS {
        let spline = log_spline(&grid, &values)?;
        let mids: Vec<f64> = grid.windows(2).map(|w| (w[0] * w[1]).sqrt()).collect();
        let direct = evaluate_many(model, &mids, tol)?;
        let bad: Vec<bool> = mids
            .iter()
            .zip(&direct)
            .map(|(&m, &d)| {
                let interp = 1.0 + spline.eval(m.ln()).exp();
                (interp - d).abs() / d > 2.0 * tol
            })
            .collect();
        if !bad.iter().any(|&b| b) {
            break;
        }
        let mut g2 = Vec::with_capacity(grid.len() * 2);
        let mut v2 = Vec::with_capacity(grid.len() * 2);
        for i in 0..grid.len() {
            g2.push(grid[i]);
            v2.push(values[i]);
            if i < mids.len() && bad[i] {
                g2.push(mids[i]);
                v2.push(direct[i]);
            }
        }
        grid = g2;
        values = v2;
    }
    let spline = log_spline(&grid, &values)?;
    Ok(EpsImagAxis {
        xi_grid: grid,
        eps_values: values,
        tol,
        source_model: Arc::new(model.clone()),
        spline,
    })
}

fn evaluate_many(model: &DielectricModel, xs: &[f64], tol: f64) -> Result<Vec<f64>> {
    xs.par_iter()
        .map(|&x| eps_imag_axis(model, x, tol))
        .collect()
}

fn log_spline(grid: &[f64], values: &[f64]) -> Result<CubicSpline> {
    for (i, &v) in values.iter().enumerate() {
        if v <= 1.0 || (i > 0 && v >= values[i - 1]) {
            return Err(DispersionError::NotMonotone { xi: grid[i] });
        }
    }
    Ok(CubicSpline::natural(
        grid.iter().map(|x| x.ln()).collect(),
        values.iter().map(|v| (v - 1.0).ln()).collect(),
    ))
}

impl EpsImagAxis {
    pub fn xi_grid(&self) -> &[f64] {
        &self.xi_grid
    }

    pub fn eps_values(&self) -> &[f64] {
        &self.eps_values
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn source_model(&self) -> &DielectricModel {
        &self.source_model
    }

    pub fn xi_range(&self) -> (f64, f64) {
        (self.xi_grid[0], self.xi_grid[self.xi_grid.len() - 1])
    }

    /// Interpolated ε(iξ).
    pub fn eval(&self, xi: f64) -> Result<f64> {
        let (min, max) = self.xi_range();
        if !(xi >= min && xi <= max) {
            return Err(DispersionError::CacheRangeExceeded { xi, min, max });
        }
        Ok(1.0 + self.spline.eval(xi.ln()).exp())
    }

    /// `xi_eV,eps` table, 9 significant digits.
    pub fn to_delimited(&self) -> String {
        let mut out = String::from("xi_eV,eps\n");
        for (x, e) in self.xi_grid.iter().zip(&self.eps_values) {
            out.push_str(&format!("{x:.8e},{e:.8e}\n"));
        }
        out
    }
}
