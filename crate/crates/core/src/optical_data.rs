//! Tabulated optical data for a metal: ingestion, validation, unit
//! conversion, the low-frequency Drude extrapolation and the composite
//! absorption spectrum ε″(ω) that feeds the dispersion integral.
//!
//! Frequencies are stored in eV. Conversions from rad/s or vacuum
//! wavelength happen once, at parse time.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::PhysicalConstants;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OpticalDataError {
    #[error("line {line}: duplicate frequency {omega_ev} eV (rows must be strictly monotonic)")]
    NonMonotonic { line: usize, omega_ev: f64 },
    #[error("line {line}: column `{column}` has invalid value {value} (must be {requirement})")]
    NegativeValue {
        line: usize,
        column: String,
        value: f64,
        requirement: &'static str,
    },
    #[error("line {line}: malformed row: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("header: {0}")]
    Header(String),
    #[error("table needs at least 2 data rows, found {rows}")]
    EmptyTable { rows: usize },
    #[error(
        "Drude fit window [{lo}, {hi}] eV holds {found} usable samples; at least 4 are required"
    )]
    TooFewSamples { found: usize, lo: f64, hi: f64 },
    #[error("invalid fit window [{lo}, {hi}] eV: {reason}")]
    InvalidWindow {
        lo: f64,
        hi: f64,
        reason: &'static str,
    },
    #[error("Drude fit did not converge after {iterations} iterations")]
    FitDiverged { iterations: usize },
    #[error("invalid Drude parameters omega_p = {omega_p} eV, gamma = {gamma} eV: {reason}")]
    InvalidDrude {
        omega_p: f64,
        gamma: f64,
        reason: &'static str,
    },
    #[error("Drude extrapolation differs from the table by {relative_jump:.1}% at omega_min = {omega_min} eV (limit 20%)")]
    DrudeMismatch { omega_min: f64, relative_jump: f64 },
}

type Result<T> = std::result::Result<T, OpticalDataError>;

/// Frequency column convention of an input table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyUnit {
    #[serde(rename = "eV")]
    ElectronVolt,
    #[serde(rename = "rad/s")]
    RadPerSecond,
    #[serde(rename = "micrometers_wavelength")]
    WavelengthMicrometer,
}

impl FrequencyUnit {
    pub fn column_name(self) -> &'static str {
        match self {
            FrequencyUnit::ElectronVolt => "omega_eV",
            FrequencyUnit::RadPerSecond => "omega_radps",
            FrequencyUnit::WavelengthMicrometer => "lambda_um",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "eV" | "ev" | "omega_eV" => Some(Self::ElectronVolt),
            "rad/s" | "radps" | "omega_radps" => Some(Self::RadPerSecond),
            "micrometers_wavelength" | "um" | "lambda_um" => Some(Self::WavelengthMicrometer),
            _ => None,
        }
    }
}

/// Which optical quantities the data columns carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnLayout {
    OmegaEps2,
    OmegaNK,
    OmegaEps1Eps2,
}

impl ColumnLayout {
    fn required(self) -> &'static [&'static str] {
        match self {
            ColumnLayout::OmegaEps2 => &["eps2"],
            ColumnLayout::OmegaNK => &["n", "k"],
            ColumnLayout::OmegaEps1Eps2 => &["eps1", "eps2"],
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "omega_eps2" => Some(Self::OmegaEps2),
            "omega_n_k" => Some(Self::OmegaNK),
            "omega_eps1_eps2" => Some(Self::OmegaEps1Eps2),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableFormat {
    pub units: FrequencyUnit,
    pub columns: ColumnLayout,
}

impl TableFormat {
    pub const CANONICAL: TableFormat = TableFormat {
        units: FrequencyUnit::ElectronVolt,
        columns: ColumnLayout::OmegaEps2,
    };
}

const KNOWN_COLUMNS: [&str; 7] = [
    "omega_eV",
    "omega_radps",
    "lambda_um",
    "n",
    "k",
    "eps1",
    "eps2",
];

/// One absorption sample: angular frequency in eV and ε″ at that frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticalSample {
    pub omega: f64,
    pub eps2: f64,
}

/// Validated ε″(ω) table for one material, ascending in ω.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpticalTable {
    material: String,
    samples: Vec<OpticalSample>,
    source: String,
}

impl OpticalTable {
    pub fn new(
        material: impl Into<String>,
        samples: Vec<OpticalSample>,
        source: impl Into<String>,
    ) -> Result<Self> {
        if samples.len() < 2 {
            return Err(OpticalDataError::EmptyTable {
                rows: samples.len(),
            });
        }
        for (i, s) in samples.iter().enumerate() {
            if !(s.omega.is_finite() && s.omega > 0.0) {
                return Err(OpticalDataError::NegativeValue {
                    line: i + 1,
                    column: "omega".into(),
                    value: s.omega,
                    requirement: "finite and > 0",
                });
            }
            if !(s.eps2.is_finite() && s.eps2 >= 0.0) {
                return Err(OpticalDataError::NegativeValue {
                    line: i + 1,
                    column: "eps2".into(),
                    value: s.eps2,
                    requirement: "finite and >= 0",
                });
            }
        }
        if let Some(i) = samples.windows(2).position(|w| w[1].omega <= w[0].omega) {
            return Err(OpticalDataError::NonMonotonic {
                line: i + 2,
                omega_ev: samples[i + 1].omega,
            });
        }
        Ok(Self {
            material: single_line(material.into()),
            samples,
            source: single_line(source.into()),
        })
    }

    pub fn material(&self) -> &str {
        &self.material
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn samples(&self) -> &[OpticalSample] {
        &self.samples
    }

    pub fn with_material(mut self, material: impl Into<String>) -> Self {
        self.material = single_line(material.into());
        self
    }

    pub fn omega_min(&self) -> f64 {
        self.samples[0].omega
    }

    pub fn omega_max(&self) -> f64 {
        self.samples[self.samples.len() - 1].omega
    }

    /// Canonical text form: `omega_eV,eps2` with 17 significant digits,
    /// material and provenance carried as `# key = value` comments.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# material = {}", self.material);
        let _ = writeln!(out, "# source = {}", self.source);
        out.push_str("omega_eV,eps2\n");
        for s in &self.samples {
            let _ = writeln!(out, "{:.16e},{:.16e}", s.omega, s.eps2);
        }
        out
    }
}

fn single_line(s: String) -> String {
    if s.contains(['\n', '\r']) {
        s.replace(['\n', '\r'], " ")
    } else {
        s
    }
}

/// ε = (n + ik)²  →  (ε′, ε″) = (n² − k², 2nk).
pub fn nk_to_eps(n: f64, k: f64) -> (f64, f64) {
    (n * n - k * k, 2.0 * n * k)
}

fn split_fields(line: &str) -> Vec<&str> {
    line.split(|c: char| c == ',' || c == ';' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect()
}

fn header_format(header: &[&str]) -> Result<TableFormat> {
    let units: Vec<FrequencyUnit> = [
        FrequencyUnit::ElectronVolt,
        FrequencyUnit::RadPerSecond,
        FrequencyUnit::WavelengthMicrometer,
    ]
    .into_iter()
    .filter(|u| header.contains(&u.column_name()))
    .collect();
    let units = match units.as_slice() {
        [u] => *u,
        [] => {
            return Err(OpticalDataError::Header(
                "no frequency column (omega_eV, omega_radps or lambda_um)".into(),
            ))
        }
        _ => {
            return Err(OpticalDataError::Header(
                "more than one frequency column".into(),
            ))
        }
    };
    let has = |c: &str| header.contains(&c);
    let columns = if has("n") && has("k") {
        ColumnLayout::OmegaNK
    } else if has("eps1") && has("eps2") {
        ColumnLayout::OmegaEps1Eps2
    } else if has("eps2") {
        ColumnLayout::OmegaEps2
    } else {
        return Err(OpticalDataError::Header(
            "no optical columns (need n,k or eps2)".into(),
        ));
    };
    Ok(TableFormat { units, columns })
}

/// Parses with the format inferred from the header row.
pub fn parse_table_auto(text: &str, constants: &PhysicalConstants) -> Result<OpticalTable> {
    parse_inner(text, None, constants)
}

/// Parses a delimited table whose header must provide the columns named by
/// `format`. Rows are converted to eV, sorted ascending, and duplicate
/// frequencies are rejected.
pub fn parse_table(
    text: &str,
    format: TableFormat,
    constants: &PhysicalConstants,
) -> Result<OpticalTable> {
    parse_inner(text, Some(format), constants)
}

fn parse_inner(
    text: &str,
    format: Option<TableFormat>,
    constants: &PhysicalConstants,
) -> Result<OpticalTable> {
    let mut material = String::from("unknown");
    let mut source = String::new();
    let mut header: Option<(Vec<String>, TableFormat)> = None;
    // (line, omega_eV, eps2)
    let mut rows: Vec<(usize, f64, f64)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                match key.trim() {
                    "material" => material = value.trim().to_string(),
                    "source" => source = value.trim().to_string(),
                    _ => {}
                }
            }
            continue;
        }
        let fields = split_fields(line);
        let Some((names, fmt)) = &header else {
            for name in &fields {
                if !KNOWN_COLUMNS.contains(name) {
                    return Err(OpticalDataError::Header(format!("unknown column `{name}`")));
                }
            }
            let detected = header_format(&fields)?;
            let fmt = match format {
                Some(declared) => {
                    let missing: Vec<&str> = std::iter::once(declared.units.column_name())
                        .chain(declared.columns.required().iter().copied())
                        .filter(|c| !fields.contains(c))
                        .collect();
                    if !missing.is_empty() {
                        return Err(OpticalDataError::Header(format!(
                            "declared format needs column(s) {}",
                            missing.join(", ")
                        )));
                    }
                    declared
                }
                None => detected,
            };
            header = Some((fields.iter().map(|s| s.to_string()).collect(), fmt));
            continue;
        };
        if fields.len() != names.len() {
            return Err(OpticalDataError::MalformedRow {
                line: line_no,
                reason: format!("expected {} fields, found {}", names.len(), fields.len()),
            });
        }
        let value = |column: &str| -> Result<f64> {
            let pos = names
                .iter()
                .position(|n| n == column)
                .expect("column checked");
            let v: f64 = fields[pos]
                .parse()
                .map_err(|_| OpticalDataError::MalformedRow {
                    line: line_no,
                    reason: format!("`{}` is not a number ({column})", fields[pos]),
                })?;
            if !v.is_finite() {
                return Err(OpticalDataError::MalformedRow {
                    line: line_no,
                    reason: format!("non-finite {column}"),
                });
            }
            Ok(v)
        };
        let nonneg = |column: &str, v: f64, strict: bool| -> Result<f64> {
            if v < 0.0 || (strict && v == 0.0) {
                Err(OpticalDataError::NegativeValue {
                    line: line_no,
                    column: column.to_string(),
                    value: v,
                    requirement: if strict { "> 0" } else { ">= 0" },
                })
            } else {
                Ok(v)
            }
        };
        let freq_col = fmt.units.column_name();
        let freq = nonneg(freq_col, value(freq_col)?, true)?;
        let omega = match fmt.units {
            FrequencyUnit::ElectronVolt => freq,
            FrequencyUnit::RadPerSecond => constants.radps_to_ev(freq),
            FrequencyUnit::WavelengthMicrometer => constants.wavelength_um_to_ev(freq),
        };
        let eps2 = match fmt.columns {
            ColumnLayout::OmegaNK => {
                let n = nonneg("n", value("n")?, false)?;
                let k = nonneg("k", value("k")?, false)?;
                nk_to_eps(n, k).1
            }
            ColumnLayout::OmegaEps2 | ColumnLayout::OmegaEps1Eps2 => {
                nonneg("eps2", value("eps2")?, false)?
            }
        };
        rows.push((line_no, omega, eps2));
    }
    if header.is_none() {
        return Err(OpticalDataError::EmptyTable { rows: 0 });
    }
    if rows.len() < 2 {
        return Err(OpticalDataError::EmptyTable { rows: rows.len() });
    }
    rows.sort_by(|a, b| a.1.total_cmp(&b.1));
    if let Some(w) = rows.windows(2).find(|w| w[1].1 == w[0].1) {
        return Err(OpticalDataError::NonMonotonic {
            line: w[1].0.max(w[0].0),
            omega_ev: w[1].1,
        });
    }
    let samples = rows
        .into_iter()
        .map(|(_, omega, eps2)| OpticalSample { omega, eps2 })
        .collect();
    OpticalTable::new(material, samples, source)
}

/// Drude parameters, both in eV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrudeParams {
    pub omega_p: f64,
    pub gamma: f64,
}

impl DrudeParams {
    pub fn new(omega_p: f64, gamma: f64) -> Result<Self> {
        let bad = |reason| OpticalDataError::InvalidDrude {
            omega_p,
            gamma,
            reason,
        };
        if !(omega_p.is_finite() && omega_p > 0.0) {
            return Err(bad("omega_p must be > 0"));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(bad("gamma must be > 0"));
        }
        if gamma >= omega_p {
            return Err(bad("gamma must be below omega_p"));
        }
        Ok(Self { omega_p, gamma })
    }

    /// ε″(ω) = ω_p²γ / (ω(ω² + γ²)).
    pub fn eps2(&self, omega: f64) -> f64 {
        self.omega_p * self.omega_p * self.gamma
            / (omega * (omega * omega + self.gamma * self.gamma))
    }
}

/// Frequency interval (eV) used for the Drude fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitWindow {
    pub lo: f64,
    pub hi: f64,
}

impl Default for FitWindow {
    fn default() -> Self {
        Self { lo: 0.1, hi: 1.0 }
    }
}

/// Result of [`fit_drude`], with residual diagnostics in ln ε″.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrudeFit {
    pub params: DrudeParams,
    pub window: FitWindow,
    pub samples_used: usize,
    pub rms_log_residual: f64,
    pub max_log_residual: f64,
    /// Residual at the lowest-frequency sample in the window.
    pub edge_log_residual: f64,
    pub iterations: usize,
}

const FIT_MAX_ITERATIONS: usize = 500;

/// Least-squares Drude fit in log space over the samples inside `window`.
///
/// Minimizes Σ [ln ε″_Drude(ωᵢ) − ln ε″ᵢ]² over (ln ω_p, ln γ) with a
/// Levenberg–Marquardt iteration seeded by a profile scan over γ.
pub fn fit_drude(table: &OpticalTable, window: FitWindow) -> Result<DrudeFit> {
    let FitWindow { lo, hi } = window;
    if !(lo > 0.0 && hi > lo && lo.is_finite() && hi.is_finite()) {
        return Err(OpticalDataError::InvalidWindow {
            lo,
            hi,
            reason: "need 0 < lo < hi",
        });
    }
    if hi > 2.0 {
        return Err(OpticalDataError::InvalidWindow {
            lo,
            hi,
            reason: "upper bound must stay in the Drude regime (<= 2 eV)",
        });
    }
    let pts: Vec<(f64, f64)> = table
        .samples()
        .iter()
        .filter(|s| s.omega >= lo && s.omega <= hi && s.eps2 > 0.0)
        .map(|s| (s.omega, s.eps2.ln()))
        .collect();
    if pts.len() < 4 {
        return Err(OpticalDataError::TooFewSamples {
            found: pts.len(),
            lo,
            hi,
        });
    }

    let residuals = |p: f64, q: f64, out: &mut Vec<f64>| {
        out.clear();
        let g2 = (2.0 * q).exp();
        out.extend(
            pts.iter()
                .map(|&(w, ln_e)| 2.0 * p + q - w.ln() - (w * w + g2).ln() - ln_e),
        );
    };
    let sse = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();

    // Profile scan: for fixed q the optimal p is closed form.
    let profile_p = |q: f64| {
        let g2 = (2.0 * q).exp();
        pts.iter()
            .map(|&(w, ln_e)| w.ln() + (w * w + g2).ln() + ln_e - q)
            .sum::<f64>()
            / (2.0 * pts.len() as f64)
    };
    let mut r = Vec::with_capacity(pts.len());
    let (q_lo, q_hi) = ((1e-5f64).ln(), hi.ln());
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=240 {
        let q = q_lo + (q_hi - q_lo) * i as f64 / 240.0;
        let p = profile_p(q);
        residuals(p, q, &mut r);
        let s = sse(&r);
        if s < best.0 {
            best = (s, p, q);
        }
    }
    let (mut cost, mut p, mut q) = best;

    let mut lambda = 1e-3;
    let mut iterations = 0;
    let mut converged = false;
    let mut trial = Vec::with_capacity(pts.len());
    while iterations < FIT_MAX_ITERATIONS {
        iterations += 1;
        residuals(p, q, &mut r);
        let g2 = (2.0 * q).exp();
        // Normal equations for J = [2, 1 - 2γ²/(ω²+γ²)].
        let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (&(w, _), &ri) in pts.iter().zip(&r) {
            let jq = 1.0 - 2.0 * g2 / (w * w + g2);
            a11 += 4.0;
            a12 += 2.0 * jq;
            a22 += jq * jq;
            b1 += 2.0 * ri;
            b2 += jq * ri;
        }
        let grad = (b1 * b1 + b2 * b2).sqrt();
        if grad < 1e-15 * (1.0 + cost.sqrt()) {
            converged = true;
            break;
        }
        let mut accepted = false;
        while lambda < 1e20 {
            let m11 = a11 * (1.0 + lambda);
            let m22 = a22 * (1.0 + lambda);
            let det = m11 * m22 - a12 * a12;
            let dp = -(m22 * b1 - a12 * b2) / det;
            let dq = -(m11 * b2 - a12 * b1) / det;
            residuals(p + dp, q + dq, &mut trial);
            let new_cost = sse(&trial);
            if new_cost.is_finite() && new_cost <= cost {
                let step = dp.abs().max(dq.abs());
                let gain = cost - new_cost;
                p += dp;
                q += dq;
                cost = new_cost;
                lambda = (lambda * 0.1).max(1e-12);
                accepted = true;
                if step < 1e-13 || gain <= 1e-15 * cost.max(1e-300) {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            // No descent direction left at machine precision: we are at the minimum.
            converged = true;
        }
        if converged {
            break;
        }
    }
    if !converged {
        return Err(OpticalDataError::FitDiverged { iterations });
    }
    let params = DrudeParams::new(p.exp(), q.exp())
        .map_err(|_| OpticalDataError::FitDiverged { iterations })?;
    residuals(p, q, &mut r);
    let n = r.len() as f64;
    Ok(DrudeFit {
        params,
        window,
        samples_used: pts.len(),
        rms_log_residual: (sse(&r) / n).sqrt(),
        max_log_residual: r.iter().fold(0.0f64, |m, v| m.max(v.abs())),
        edge_log_residual: r[0],
        iterations,
    })
}

/// What ε″ does above the last tabulated frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HighFreqClosure {
    /// ε″ = 0 beyond ω_max.
    Truncate,
    /// ε″ continues as ε″(ω_max)·(ω_max/ω)³.
    #[default]
    PowerLawDecay,
}

/// Composite absorption spectrum: Drude below the table, log-log
/// interpolation across it, and a closure above it.
#[derive(Debug, Clone)]
pub struct DielectricModel {
    table: Option<OpticalTable>,
    drude: DrudeParams,
    closure: HighFreqClosure,
    log_omega: Vec<f64>,
}

impl DielectricModel {
    /// Builds the composite model. The Drude value at the first table
    /// frequency must be within 20% of the tabulated one.
    pub fn new(table: OpticalTable, drude: DrudeParams, closure: HighFreqClosure) -> Result<Self> {
        let first = table.samples()[0];
        let relative_jump = if first.eps2 > 0.0 {
            (drude.eps2(first.omega) - first.eps2).abs() / first.eps2
        } else {
            f64::INFINITY
        };
        if relative_jump > 0.2 {
            return Err(OpticalDataError::DrudeMismatch {
                omega_min: first.omega,
                relative_jump: relative_jump * 100.0,
            });
        }
        let log_omega = table.samples().iter().map(|s| s.omega.ln()).collect();
        Ok(Self {
            table: Some(table),
            drude,
            closure,
            log_omega,
        })
    }

    /// ε″ given by the Drude formula at every frequency.
    pub fn pure_drude(drude: DrudeParams) -> Self {
        Self {
            table: None,
            drude,
            closure: HighFreqClosure::PowerLawDecay,
            log_omega: Vec::new(),
        }
    }

    pub fn table(&self) -> Option<&OpticalTable> {
        self.table.as_ref()
    }

    pub fn drude(&self) -> DrudeParams {
        self.drude
    }

    pub fn closure(&self) -> HighFreqClosure {
        self.closure
    }

    pub fn is_pure_drude(&self) -> bool {
        self.table.is_none()
    }

    /// First tabulated frequency; `+∞` for a pure Drude model.
    pub fn omega_min(&self) -> f64 {
        self.table.as_ref().map_or(f64::INFINITY, |t| t.omega_min())
    }

    /// Last tabulated frequency; `+∞` for a pure Drude model.
    pub fn omega_max(&self) -> f64 {
        self.table.as_ref().map_or(f64::INFINITY, |t| t.omega_max())
    }

    /// Relative mismatch between Drude and table at `omega_min`.
    pub fn matching_jump(&self) -> f64 {
        match &self.table {
            Some(t) => {
                let s = t.samples()[0];
                (self.drude.eps2(s.omega) - s.eps2).abs() / s.eps2
            }
            None => 0.0,
        }
    }

    /// ε″(ω) for ω > 0 (returns 0 for ω ≤ 0).
    pub fn eps2(&self, omega: f64) -> f64 {
        if omega <= 0.0 || omega.is_nan() {
            return 0.0;
        }
        let Some(table) = &self.table else {
            return self.drude.eps2(omega);
        };
        let samples = table.samples();
        let first = samples[0];
        let last = samples[samples.len() - 1];
        if omega < first.omega {
            return self.drude.eps2(omega);
        }
        if omega >= last.omega {
            if omega == last.omega {
                return last.eps2;
            }
            return match self.closure {
                HighFreqClosure::Truncate => 0.0,
                HighFreqClosure::PowerLawDecay => last.eps2 * (last.omega / omega).powi(3),
            };
        }
        let i = samples.partition_point(|s| s.omega <= omega) - 1;
        let (a, b) = (samples[i], samples[i + 1]);
        if omega == a.omega {
            return a.eps2;
        }
        if a.eps2 > 0.0 && b.eps2 > 0.0 {
            let la = self.log_omega[i];
            let lb = self.log_omega[i + 1];
            let t = (omega.ln() - la) / (lb - la);
            (a.eps2.ln() + t * (b.eps2 / a.eps2).ln()).exp()
        } else {
            a.eps2 + (omega - a.omega) / (b.omega - a.omega) * (b.eps2 - a.eps2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k() -> PhysicalConstants {
        PhysicalConstants::codata()
    }

    fn drude_table(omega_p: f64, gamma: f64, n: usize) -> OpticalTable {
        let d = DrudeParams::new(omega_p, gamma).unwrap();
        let samples = (0..n)
            .map(|i| {
                let w = 0.1 * 10f64.powf(i as f64 / (n - 1) as f64);
                OpticalSample {
                    omega: w,
                    eps2: d.eps2(w),
                }
            })
            .collect();
        OpticalTable::new("synthetic", samples, "Drude generator").unwrap()
    }

    #[test]
    fn nk_conversion_examples() {
        assert_eq!(nk_to_eps(1.0, 0.0), (1.0, 0.0));
        assert_eq!(nk_to_eps(0.0, 1.0), (-1.0, 0.0));
        let (e1, e2) = nk_to_eps(0.2, 3.0);
        assert!((e1 + 8.96).abs() < 1e-12 && (e2 - 1.2).abs() < 1e-12);
    }

    #[test]
    fn parses_nk_rows() {
        let text = "omega_eV,n,k\n1.0,0.2,3.0\n2.0,0.5,1.0\n";
        let t = parse_table(
            text,
            TableFormat {
                units: FrequencyUnit::ElectronVolt,
                columns: ColumnLayout::OmegaNK,
            },
            &k(),
        )
        .unwrap();
        assert_eq!(t.samples()[0].omega, 1.0);
        assert!((t.samples()[0].eps2 - 1.2).abs() < 1e-15);
    }

    #[test]
    fn eps2_passthrough_is_identity() {
        let text = "# material = X\nomega_eV eps2\n1.0 0.5\n2.0 0.3\n";
        let t = parse_table(text, TableFormat::CANONICAL, &k()).unwrap();
        assert_eq!(
            t.samples(),
            &[
                OpticalSample {
                    omega: 1.0,
                    eps2: 0.5
                },
                OpticalSample {
                    omega: 2.0,
                    eps2: 0.3
                }
            ]
        );
        assert_eq!(t.material(), "X");
    }

    #[test]
    fn wavelength_rows_are_converted_and_sorted() {
        let text = "lambda_um,eps1,eps2\n0.6198,-10,1.0\n1.2396,-40,2.0\n";
        let t = parse_table_auto(text, &k()).unwrap();
        assert!((t.samples()[1].omega - 2.0).abs() < 1e-3);
        assert!(t.samples()[0].omega < t.samples()[1].omega);
        assert_eq!(t.samples()[0].eps2, 2.0);
    }

    #[test]
    fn radps_rows_are_converted() {
        let w = k().ev_to_radps;
        let text = format!("omega_radps,eps2\n{},1\n{},2\n", w, 3.0 * w);
        let t = parse_table_auto(&text, &k()).unwrap();
        assert!((t.samples()[0].omega - 1.0).abs() < 1e-14);
        assert!((t.samples()[1].omega - 3.0).abs() < 1e-14);
    }

    #[test]
    fn error_paths() {
        let neg = "omega_eV,eps2\n1.0,0.5\n2.0,-0.3\n";
        match parse_table_auto(neg, &k()) {
            Err(OpticalDataError::NegativeValue { line, column, .. }) => {
                assert_eq!((line, column.as_str()), (3, "eps2"));
            }
            other => panic!("{other:?}"),
        }
        let zero_omega = "omega_eV,eps2\n0.0,0.5\n2.0,0.3\n";
        assert!(matches!(
            parse_table_auto(zero_omega, &k()),
            Err(OpticalDataError::NegativeValue { line: 2, .. })
        ));
        let dup = "omega_eV,eps2\n1.0,0.5\n2.0,0.3\n1.0,0.4\n";
        assert!(matches!(
            parse_table_auto(dup, &k()),
            Err(OpticalDataError::NonMonotonic { line: 4, .. })
        ));
        let short = "omega_eV,eps2\n1.0\n";
        assert!(matches!(
            parse_table_auto(short, &k()),
            Err(OpticalDataError::MalformedRow { line: 2, .. })
        ));
        let junk = "omega_eV,eps2\n1.0,abc\n2.0,1.0\n";
        assert!(matches!(
            parse_table_auto(junk, &k()),
            Err(OpticalDataError::MalformedRow { line: 2, .. })
        ));
        assert!(matches!(
            parse_table_auto("# nothing\n", &k()),
            Err(OpticalDataError::EmptyTable { rows: 0 })
        ));
        assert!(matches!(
            parse_table_auto("omega_eV,eps2\n1,1\n", &k()),
            Err(OpticalDataError::EmptyTable { rows: 1 })
        ));
        let declared = TableFormat {
            units: FrequencyUnit::WavelengthMicrometer,
            columns: ColumnLayout::OmegaNK,
        };
        assert!(matches!(
            parse_table("omega_eV,eps2\n1,1\n2,1\n", declared, &k()),
            Err(OpticalDataError::Header(_))
        ));
    }

    #[test]
    fn fit_recovers_exact_drude() {
        let t = drude_table(9.0, 0.035, 25);
        let fit = fit_drude(&t, FitWindow::default()).unwrap();
        assert!((fit.params.omega_p / 9.0 - 1.0).abs() < 1e-3);
        assert!((fit.params.gamma / 0.035 - 1.0).abs() < 1e-3);
        assert!(fit.rms_log_residual < 1e-8);
    }

    #[test]
    fn fit_error_paths() {
        let t = drude_table(9.0, 0.035, 25);
        assert!(matches!(
            fit_drude(&t, FitWindow { lo: 0.1, hi: 3.0 }),
            Err(OpticalDataError::InvalidWindow { .. })
        ));
        assert!(matches!(
            fit_drude(&t, FitWindow { lo: 0.1, hi: 0.12 }),
            Err(OpticalDataError::TooFewSamples { .. })
        ));
    }

    #[test]
    fn model_interpolates_through_nodes_and_extrapolates() {
        let t = drude_table(9.0, 0.035, 12);
        let d = DrudeParams::new(9.0, 0.035).unwrap();
        let m = DielectricModel::new(t.clone(), d, HighFreqClosure::Truncate).unwrap();
        for s in t.samples() {
            assert_eq!(m.eps2(s.omega), s.eps2);
        }
        let low = m.eps2(0.001);
        let expected = 81.0 * 0.035 / (0.001 * (1e-6 + 0.035 * 0.035));
        assert!((low - expected).abs() / expected < 1e-14);
        assert!((low - 2.31e6).abs() / 2.31e6 < 2e-3);
        assert_eq!(m.eps2(1.5), 0.0);
        let p = DielectricModel::new(t, d, HighFreqClosure::PowerLawDecay).unwrap();
        assert!((p.eps2(2.0) - d.eps2(1.0) / 8.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_drude_is_rejected() {
        let t = drude_table(9.0, 0.035, 12);
        let wrong = DrudeParams::new(12.0, 0.035).unwrap();
        assert!(matches!(
            DielectricModel::new(t, wrong, HighFreqClosure::PowerLawDecay),
            Err(OpticalDataError::DrudeMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn serialize_parse_roundtrip(
            omegas in proptest::collection::btree_set(1u64..1_000_000_000u64, 2..40),
            scale in 1e-6f64..1e6,
            eps in proptest::collection::vec(0.0f64..1e7, 40),
        ) {
            let samples: Vec<OpticalSample> = omegas
                .iter()
                .zip(&eps)
                .map(|(&w, &e)| OpticalSample { omega: w as f64 * scale * 1e-6, eps2: e })
                .collect();
            let t = OpticalTable::new("Au", samples, "roundtrip, test").unwrap();
            let back = parse_table(&t.serialize(), TableFormat::CANONICAL, &k()).unwrap();
            prop_assert_eq!(back, t);
        }

        #[test]
        fn fit_recovers_any_exact_drude(omega_p in 5.0f64..15.0, gamma in 0.01f64..0.1) {
            let t = drude_table(omega_p, gamma, 20);
            let fit = fit_drude(&t, FitWindow::default()).unwrap();
            prop_assert!((fit.params.omega_p / omega_p - 1.0).abs() < 1e-3);
            prop_assert!((fit.params.gamma / gamma - 1.0).abs() < 1e-3);
        }

        #[test]
        fn model_is_nonnegative(w in -3.0f64..6.0) {
            let t = drude_table(9.0, 0.035, 12);
            let m = DielectricModel::new(t, DrudeParams::new(9.0, 0.035).unwrap(),
                HighFreqClosure::PowerLawDecay).unwrap();
            let v = m.eps2(10f64.powf(w));
            prop_assert!(v >= 0.0);
            if 10f64.powf(w) < m.omega_min() { prop_assert!(v > 0.0); }
        }
    }
}
