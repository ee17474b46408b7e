//! Reference computations for certifying the production pipeline.
//!
//! Nothing here calls into `quadrature`, `dispersion`, `reflection` or the
//! integrators of `lifshitz`: the imaginary-axis transform is a dense
//! trapezoid sum in ln ω, the Fresnel amplitudes are written out again,
//! and the double integral is a plain trapezoid on its own variable map.
//! A transcription error in the production path therefore cannot
//! validate itself.

use std::f64::consts::PI;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::lifshitz::{
    energy_plane_plane, eta_from_energy, force_plane_plane, Mirror, MirrorPair, QuadratureSpec,
};
use crate::materials::{Material, CACHE_POINTS_PER_DECADE, CACHE_TOL};
use crate::optical_data::{DielectricModel, DrudeParams};

/// ε(iξ) = 1 + ω_p²/(ξ(ξ + γ)) for the Drude spectral density.
pub fn drude_dispersion_closed_form(params: DrudeParams, xi: f64) -> f64 {
    1.0 + params.omega_p * params.omega_p / (xi * (xi + params.gamma))
}

/// The Drude transform integral by an `n`-node trapezoid in u = ω/(ω+ξ).
pub fn drude_dispersion_trapezoid(params: DrudeParams, xi: f64, n: usize) -> f64 {
    let DrudeParams { omega_p, gamma } = params;
    let f = |u: f64| {
        if u >= 1.0 {
            return 0.0;
        }
        let w = xi * u / (1.0 - u);
        let dw = xi / ((1.0 - u) * (1.0 - u));
        omega_p * omega_p * gamma / ((w * w + gamma * gamma) * (w * w + xi * xi)) * dw
    };
    let h = 1.0 / n as f64;
    let mut sum = 0.5 * (f(0.0) + f(1.0));
    for i in 1..n {
        sum += f(i as f64 * h);
    }
    1.0 + 2.0 / PI * sum * h
}

/// ε(iξ) from a precomputed dense trapezoid grid in ln ω.
///
/// Grid nodes sit on every table frequency so the kinks of the
/// interpolated spectrum never fall inside a trapezoid panel.
#[derive(Debug, Clone)]
pub struct DenseDispersion {
    /// Trapezoid weight × ω² ε″(ω), paired with ω².
    terms: Vec<(f64, f64)>,
    xi_floor: f64,
}

const LN_STEP_OUTSIDE: f64 = 0.01;
const LN_STEP_TABLE: f64 = 0.004;

impl DenseDispersion {
    /// Valid for ξ ≥ `xi_floor` (eV).
    pub fn new(model: &DielectricModel, xi_floor: f64) -> Self {
        let lo = (xi_floor.min(model.drude().gamma)).ln() - 30.0;
        let mut knots: Vec<(f64, f64)> = Vec::new();
        match model.table() {
            None => {
                let hi = (1e4 * model.drude().omega_p).ln();
                knots.push((lo, LN_STEP_OUTSIDE));
                knots.push((hi, 0.0));
            }
            Some(t) => {
                let nodes: Vec<f64> = t.samples().iter().map(|s| s.omega.ln()).collect();
                knots.push((lo.min(nodes[0] - 1.0), LN_STEP_OUTSIDE));
                for &v in &nodes[..nodes.len() - 1] {
                    knots.push((v, LN_STEP_TABLE));
                }
                let last = nodes[nodes.len() - 1];
                if model.closure() == crate::optical_data::HighFreqClosure::Truncate {
                    knots.push((last, 0.0));
                } else {
                    knots.push((last, LN_STEP_OUTSIDE));
                    knots.push((last + 40.0, 0.0));
                }
            }
        }
        let mut terms = Vec::new();
        for seg in knots.windows(2) {
            let (a, step) = seg[0];
            let b = seg[1].0;
            let m = ((b - a) / step).ceil().max(1.0) as usize;
            let h = (b - a) / m as f64;
            for i in 0..=m {
                let v = a + i as f64 * h;
                let w = v.exp();
                let weight = if i == 0 || i == m { 0.5 * h } else { h };
                terms.push((weight * w * w * model.eps2(w), w * w));
            }
        }
        Self { terms, xi_floor }
    }

    pub fn eval(&self, xi: f64) -> f64 {
        assert!(
            xi >= self.xi_floor,
            "xi {xi} below oracle floor {}",
            self.xi_floor
        );
        let xi2 = xi * xi;
        let s: f64 = self.terms.iter().map(|&(g, w2)| g / (w2 + xi2)).sum();
        1.0 + 2.0 / PI * s
    }
}

/// A mirror as the oracle sees it.
#[derive(Debug, Clone)]
pub enum OracleMirror {
    Perfect,
    Medium(DenseDispersion),
}

impl OracleMirror {
    pub fn from_model(model: Option<&DielectricModel>, xi_floor: f64) -> Self {
        match model {
            None => OracleMirror::Perfect,
            Some(m) => OracleMirror::Medium(DenseDispersion::new(m, xi_floor)),
        }
    }

    /// (r_TE, r_TM) at dimensionless (ξ', κ'), ε supplied by the caller.
    fn amplitudes(&self, eps: f64, xi: f64, kappa: f64) -> (f64, f64) {
        match self {
            OracleMirror::Perfect => (-1.0, 1.0),
            OracleMirror::Medium(_) if xi == 0.0 => (0.0, 1.0),
            OracleMirror::Medium(_) => {
                let inside = (kappa * kappa + (eps - 1.0) * xi * xi).sqrt();
                let te = (kappa - inside) / (kappa + inside);
                let tm = (eps * kappa - inside) / (eps * kappa + inside);
                (te, tm)
            }
        }
    }

    fn eps(&self, xi_ev: f64) -> f64 {
        match self {
            OracleMirror::Medium(d) if xi_ev > 0.0 => d.eval(xi_ev),
            _ => f64::INFINITY,
        }
    }
}

/// Smallest ξ (eV) a brute-force run with `n_xi` nodes asks for at `L`.
pub fn brute_force_xi_floor(distance_um: f64, n_xi: usize, reference: &PhysicalConstants) -> f64 {
    let h = 1.0 / n_xi as f64;
    let t = h / (1.0 - h);
    reference.hbar_c_ev_um() / distance_um * t * t * 0.5
}

/// Energy per area (J/m²) by an `n_xi × n_kappa` composite trapezoid.
///
/// Variables: τ = ξL/ħc = (t/(1−t))², y = 2κL/ħc = 2τ + v/(1−v), with
/// t, v ∈ [0, 1]. The integrand is y·Σ_p ln(1 − r_p^A r_p^B e^{−y}).
pub fn brute_force_energy(
    a: &OracleMirror,
    b: &OracleMirror,
    distance_um: f64,
    n_xi: usize,
    n_kappa: usize,
    reference: &PhysicalConstants,
) -> f64 {
    let hc = reference.hbar_c_ev_um();
    let ht = 1.0 / n_xi as f64;
    let hv = 1.0 / n_kappa as f64;
    let mut total = 0.0;
    for i in 0..n_xi {
        let t = i as f64 * ht;
        let r = t / (1.0 - t);
        let tau = r * r;
        if 2.0 * tau > 700.0 {
            break;
        }
        let dtau = 2.0 * t / (1.0 - t).powi(3);
        let xi_ev = hc / distance_um * tau;
        let (ea, eb) = (a.eps(xi_ev), b.eps(xi_ev));
        let x = 2.0 * tau;
        let mut inner = 0.0;
        for j in 0..n_kappa {
            let v = j as f64 * hv;
            let y = x + v / (1.0 - v);
            if y == 0.0 {
                continue;
            }
            let (ta, ma) = a.amplitudes(ea, x, y);
            let (tb, mb) = b.amplitudes(eb, x, y);
            let decay = (-y).exp();
            let g = y * ((1.0 - ta * tb * decay).ln() + (1.0 - ma * mb * decay).ln())
                / ((1.0 - v) * (1.0 - v));
            inner += if j == 0 { 0.5 * g } else { g };
        }
        // v = 1 and t = 1 endpoints carry zero integrand.
        let w = if i == 0 { 0.5 } else { 1.0 };
        total += w * dtau * inner * hv;
    }
    let j = total * ht;
    let l_m = distance_um * 1e-6;
    reference.hbar_c_si() * j / (16.0 * PI * PI * l_m.powi(3))
}

/// Result of running [`brute_force_energy`] at n/4, n/2 and n nodes per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCheck {
    pub nodes: usize,
    pub values: [f64; 3],
    /// log₂ of the ratio of successive differences.
    pub observed_order: f64,
    /// |E(n) − E(n/2)| predicted from the coarse pair at second order.
    pub predicted_error: f64,
    /// |E(n) − E(n/2)| divided by the predicted n-grid error.
    pub change_over_error: f64,
    pub passed: bool,
}

/// Doubling check: the last refinement must change the value by less than
/// four times the error the coarser pair predicts for the finest grid.
pub fn brute_force_convergence(
    a: &OracleMirror,
    b: &OracleMirror,
    distance_um: f64,
    nodes: usize,
    reference: &PhysicalConstants,
) -> ConvergenceCheck {
    let e = |n: usize| brute_force_energy(a, b, distance_um, n, n, reference);
    let values = [e(nodes / 4), e(nodes / 2), e(nodes)];
    let d1 = (values[1] - values[0]).abs();
    let d2 = (values[2] - values[1]).abs();
    // Second order: err(n) ≈ d2/3 ≈ d1/12.
    let predicted_error = d1 / 12.0;
    let tiny = 1e-14 * values[2].abs();
    let observed_order = if d2 <= tiny {
        f64::INFINITY
    } else {
        (d1 / d2).log2()
    };
    let change_over_error = if predicted_error <= tiny {
        0.0
    } else {
        d2 / predicted_error
    };
    ConvergenceCheck {
        nodes,
        values,
        observed_order,
        predicted_error,
        change_over_error,
        passed: d2 <= tiny || (change_over_error < 4.0 && observed_order >= 1.8),
    }
}

/// One certification case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub name: String,
    pub production_value: f64,
    pub oracle_value: f64,
    pub rel_diff: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Wall time spent on the case (s).
    pub budget: f64,
}

impl OracleReport {
    pub fn compare(
        name: impl Into<String>,
        production: f64,
        oracle: f64,
        tolerance: f64,
        budget: f64,
    ) -> Self {
        let rel_diff = rel_diff(production, oracle);
        Self {
            name: name.into(),
            production_value: production,
            oracle_value: oracle,
            rel_diff,
            tolerance,
            passed: rel_diff < tolerance,
            budget,
        }
    }

    fn failed(name: impl Into<String>, reason: &str, budget: f64) -> Self {
        Self {
            name: format!("{} [{reason}]", name.into()),
            production_value: f64::NAN,
            oracle_value: f64::NAN,
            rel_diff: f64::INFINITY,
            tolerance: 0.0,
            passed: false,
            budget,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        return 0.0;
    }
    d / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Faults that can be injected into the production side of the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// Flip the sign of r_TM on the first mirror of every pair.
    FlipTmSign,
}

#[derive(Debug, Clone)]
pub struct CertifyConfig {
    /// Constants used by the production side; the oracle side always uses
    /// CODATA values.
    pub constants: PhysicalConstants,
    pub quad: QuadratureSpec,
    pub brute_nodes: usize,
    pub fault: Option<Fault>,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            constants: PhysicalConstants::codata(),
            quad: QuadratureSpec::default(),
            brute_nodes: 4000,
            fault: None,
        }
    }
}

pub const TOL_PERFECT: f64 = 1e-6;
pub const TOL_DRUDE_DISPERSION: f64 = 1e-8;
pub const TOL_TABLE_DISPERSION: f64 = 1e-5;
pub const TOL_BRUTE_FORCE: f64 = 1e-4;
pub const TOL_FINITE_DIFFERENCE: f64 = 1e-3;

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed().as_secs_f64())
}

/// Runs every oracle comparison for each probe distance: perfect-mirror
/// energy and pressure, the imaginary-axis transform, brute-force η_E and
/// the finite-difference pressure. Failures are reported, never thrown.
pub fn run_certification_suite(
    materials: &[Material],
    l_probes: &[f64],
    config: &CertifyConfig,
) -> Vec<OracleReport> {
    let mut reports = Vec::new();
    if l_probes.is_empty() {
        return reports;
    }
    let reference = PhysicalConstants::codata();
    let production = config.constants;
    let quad = config.quad;
    let l_min = l_probes.iter().cloned().fold(f64::INFINITY, f64::min) / (1.0 + 2e-3);
    let l_max = l_probes.iter().cloned().fold(0.0, f64::max) * (1.0 + 2e-3);
    let inject = |m: Mirror| match config.fault {
        Some(Fault::FlipTmSign) => Mirror::TmSignFlipped(Box::new(m)),
        None => m,
    };
    let pair_of = |m: Mirror| MirrorPair::new(inject(m.clone()), m, production);

    let perfect = pair_of(Mirror::Perfect);
    for &l in l_probes {
        let (e, t) = timed(|| energy_plane_plane(&perfect, l, &quad));
        reports.push(match e {
            Ok(e) => OracleReport::compare(
                format!("perfect/energy L={l}"),
                e.value,
                reference.perfect_energy(l),
                TOL_PERFECT,
                t,
            ),
            Err(err) => OracleReport::failed(format!("perfect/energy L={l}"), &err.to_string(), t),
        });
        let (f, t) = timed(|| force_plane_plane(&perfect, l, &quad));
        reports.push(match f {
            Ok(f) => OracleReport::compare(
                format!("perfect/force L={l}"),
                f.value,
                reference.perfect_force(l),
                TOL_PERFECT,
                t,
            ),
            Err(err) => OracleReport::failed(format!("perfect/force L={l}"), &err.to_string(), t),
        });
    }

    for material in materials {
        let name = material.name();
        let Some(model) = material.model() else {
            continue;
        };
        let span = quad.xi_span(l_min, l_max, &production);
        let mirror = match timed(|| {
            Mirror::from_model(name, &model, span, CACHE_POINTS_PER_DECADE, CACHE_TOL)
        }) {
            (Ok(m), _) => m,
            (Err(e), t) => {
                reports.push(OracleReport::failed(
                    format!("{name}/cache"),
                    &e.to_string(),
                    t,
                ));
                continue;
            }
        };
        let cache = match &mirror {
            Mirror::Dielectric { cache, .. } => cache.clone(),
            _ => unreachable!("material with a model builds a dielectric mirror"),
        };
        let pair = pair_of(mirror);
        let floor = l_probes
            .iter()
            .map(|&l| brute_force_xi_floor(l, config.brute_nodes, &reference))
            .fold(f64::INFINITY, f64::min);
        let dense = DenseDispersion::new(&model, floor);
        let oracle_mirror = OracleMirror::Medium(dense.clone());

        for &l in l_probes {
            // Imaginary-axis transform at the frequency scale of this distance.
            for factor in [0.1, 1.0, 10.0] {
                let xi = reference.hbar_c_ev_um() / l * factor;
                let (v, t) = timed(|| cache.eval(xi));
                let case = format!("{name}/dispersion xi={xi:.6e}");
                let (oracle, tol) = if model.is_pure_drude() {
                    (
                        drude_dispersion_closed_form(model.drude(), xi),
                        TOL_DRUDE_DISPERSION,
                    )
                } else {
                    (dense.eval(xi), TOL_TABLE_DISPERSION)
                };
                reports.push(match v {
                    Ok(v) => OracleReport::compare(case, v, oracle, tol, t),
                    Err(e) => OracleReport::failed(case, &e.to_string(), t),
                });
            }

            let case = format!("{name}/eta_E brute-force L={l}");
            let start = Instant::now();
            let prod = energy_plane_plane(&pair, l, &quad);
            let brute = brute_force_energy(
                &oracle_mirror,
                &oracle_mirror,
                l,
                config.brute_nodes,
                config.brute_nodes,
                &reference,
            );
            let t = start.elapsed().as_secs_f64();
            reports.push(match prod {
                Ok(e) => OracleReport::compare(
                    case,
                    eta_from_energy(&pair, l, e.value),
                    brute / reference.perfect_energy(l),
                    TOL_BRUTE_FORCE,
                    t,
                ),
                Err(e) => OracleReport::failed(case, &e.to_string(), t),
            });

            let case = format!("{name}/force finite-difference L={l}");
            let start = Instant::now();
            let h = 1e-3 * l;
            let fd = (|| -> Result<(f64, f64), crate::lifshitz::LifshitzError> {
                let f = force_plane_plane(&pair, l, &quad)?.value;
                let ep = energy_plane_plane(&pair, l + h, &quad)?.value;
                let em = energy_plane_plane(&pair, l - h, &quad)?.value;
                Ok((f, -(ep - em) / (2.0 * h * 1e-6)))
            })();
            let t = start.elapsed().as_secs_f64();
            reports.push(match fd {
                Ok((f, d)) => OracleReport::compare(case, f, d, TOL_FINITE_DIFFERENCE, t),
                Err(e) => OracleReport::failed(case, &e.to_string(), t),
            });
        }
    }
    reports
}
