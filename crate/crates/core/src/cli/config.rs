//! Run configuration: a flat TOML file whose keys can each be overridden
//! on the command line.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::CliError;
use crate::constants::PhysicalConstants;
use crate::lifshitz::{log_grid, QuadratureSpec, Scheme};
use crate::materials::{builtin_table_text, Material, BUILTIN_FIT_WINDOW};
use crate::optical_data::{
    fit_drude, parse_table, ColumnLayout, DielectricModel, DrudeParams, FitWindow, FrequencyUnit,
    HighFreqClosure, TableFormat,
};
use crate::oracles::Fault;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    #[default]
    PlanePlane,
    SpherePlane,
}

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub materials: Option<Vec<String>>,
    pub units: Option<String>,
    pub columns: Option<String>,
    pub fit_lo: Option<f64>,
    pub fit_hi: Option<f64>,
    pub closure: Option<HighFreqClosure>,
    pub xi_nodes: Option<usize>,
    pub kappa_nodes: Option<usize>,
    pub tol: Option<f64>,
    pub scheme: Option<Scheme>,
    pub max_doublings: Option<u32>,
    pub lmin: Option<f64>,
    pub lmax: Option<f64>,
    pub lpoints: Option<usize>,
    pub spacing: Option<Spacing>,
    pub geometry: Option<Geometry>,
    pub radius_cm: Option<f64>,
    pub out: Option<PathBuf>,
    pub hbar: Option<f64>,
    pub c: Option<f64>,
    pub ev_to_radps: Option<f64>,
    pub probes: Option<Vec<f64>>,
    pub brute_nodes: Option<usize>,
    pub reference_eta: Option<f64>,
    pub reference_material: Option<String>,
    pub reference_distance_um: Option<f64>,
    pub xi_min: Option<f64>,
    pub xi_max: Option<f64>,
    pub xi_points_per_decade: Option<usize>,
    pub fault: Option<Fault>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let mut cfg: FileConfig = toml::from_str(&text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        // Material files are relative to the config file.
        if let (Some(list), Some(dir)) = (cfg.materials.as_mut(), path.parent()) {
            for entry in list.iter_mut() {
                *entry = rebase_material(entry, dir);
            }
        }
        if let (Some(out), Some(dir)) = (cfg.out.as_mut(), path.parent()) {
            if out.is_relative() {
                *out = dir.join(&*out);
            }
        }
        Ok(cfg)
    }
}

fn rebase_material(entry: &str, dir: &Path) -> String {
    match MaterialSpec::parse(entry) {
        Ok(MaterialSpec {
            name,
            source: MaterialSource::File { path: p },
        }) if p.is_relative() => format!("{name}={}", dir.join(p).display()),
        _ => entry.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MaterialSource {
    Builtin { table: String },
    Perfect,
    Drude { omega_p: f64, gamma: f64 },
    File { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaterialSpec {
    pub name: String,
    pub source: MaterialSource,
}

impl MaterialSpec {
    /// `NAME=FILE`, `NAME=builtin:au`, `NAME=perfect`, `NAME=drude:WP,GAMMA`,
    /// or a bare built-in name such as `au`.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::Input(format!("--material `{s}`: {why}"));
        let (name, spec) = match s.split_once('=') {
            Some((n, v)) => (n.trim(), v.trim()),
            None => (s.trim(), ""),
        };
        if name.is_empty() || name.contains(['/', '\\']) {
            return Err(bad("expected NAME=FILE"));
        }
        let source = if spec.is_empty() {
            match name.to_ascii_lowercase().as_str() {
                "perfect" => MaterialSource::Perfect,
                other => {
                    builtin_table_text(other).map_err(|e| bad(&e.to_string()))?;
                    MaterialSource::Builtin {
                        table: other.to_string(),
                    }
                }
            }
        } else if let Some(t) = spec.strip_prefix("builtin:") {
            builtin_table_text(t).map_err(|e| bad(&e.to_string()))?;
            MaterialSource::Builtin {
                table: t.to_ascii_lowercase(),
            }
        } else if spec == "perfect" {
            MaterialSource::Perfect
        } else if let Some(p) = spec.strip_prefix("drude:") {
            let parts: Vec<&str> = p.split(',').map(str::trim).collect();
            let nums: Vec<f64> = parts.iter().filter_map(|v| v.parse().ok()).collect();
            if parts.len() != 2 || nums.len() != 2 {
                return Err(bad("drude spec must be drude:OMEGA_P,GAMMA (eV)"));
            }
            MaterialSource::Drude {
                omega_p: nums[0],
                gamma: nums[1],
            }
        } else {
            MaterialSource::File {
                path: PathBuf::from(spec),
            }
        };
        Ok(Self {
            name: name.to_string(),
            source,
        })
    }
}

/// Fully resolved configuration. Its JSON form is hashed into every
/// output header.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub materials: Vec<MaterialSpec>,
    pub units: Option<String>,
    pub columns: Option<String>,
    /// `None` picks the per-material default.
    pub fit_window: Option<FitWindow>,
    pub closure: HighFreqClosure,
    pub quad: QuadratureSpec,
    pub lmin: f64,
    pub lmax: f64,
    pub lpoints: usize,
    pub spacing: Spacing,
    pub geometry: Geometry,
    pub radius_cm: f64,
    #[serde(skip)]
    pub out: PathBuf,
    pub constants: PhysicalConstants,
    pub probes: Vec<f64>,
    pub brute_nodes: usize,
    pub reference_eta: f64,
    pub reference_material: String,
    pub reference_distance_um: f64,
    pub xi_min: f64,
    pub xi_max: f64,
    pub xi_points_per_decade: usize,
    pub fault: Option<Fault>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub materials: Vec<String>,
    pub lmin: Option<f64>,
    pub lmax: Option<f64>,
    pub lpoints: Option<usize>,
    pub radius_cm: Option<f64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
}

/// Default fit window for tabulated files that do not set one.
pub const FILE_FIT_WINDOW: FitWindow = FitWindow { lo: 0.1, hi: 1.0 };

impl RunConfig {
    pub fn resolve(file: FileConfig, cli: Overrides) -> Result<Self, CliError> {
        let material_strings = if !cli.materials.is_empty() {
            cli.materials
        } else {
            file.materials
                .unwrap_or_else(|| vec!["au=builtin:au".into(), "cu=builtin:cu".into()])
        };
        let materials = material_strings
            .iter()
            .map(|s| MaterialSpec::parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        let mut names: Vec<&str> = materials.iter().map(|m| m.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(CliError::Input("material names must be unique".into()));
        }

        let fit_window = match (file.fit_lo, file.fit_hi) {
            (None, None) => None,
            (lo, hi) => Some(FitWindow {
                lo: lo.unwrap_or(FILE_FIT_WINDOW.lo),
                hi: hi.unwrap_or(FILE_FIT_WINDOW.hi),
            }),
        };

        let defaults = QuadratureSpec::default();
        let quad = QuadratureSpec {
            xi_nodes: file.xi_nodes.unwrap_or(defaults.xi_nodes),
            kappa_nodes: file.kappa_nodes.unwrap_or(defaults.kappa_nodes),
            target_rel_tol: cli.tol.or(file.tol).unwrap_or(defaults.target_rel_tol),
            scheme: file.scheme.unwrap_or(defaults.scheme),
            max_doublings: file.max_doublings.unwrap_or(defaults.max_doublings),
        };
        quad.validate()
            .map_err(|e| CliError::Input(e.to_string()))?;

        let codata = PhysicalConstants::codata();
        let constants = PhysicalConstants::new(
            file.hbar.unwrap_or(codata.hbar),
            file.c.unwrap_or(codata.c),
            file.ev_to_radps.unwrap_or(codata.ev_to_radps),
        )
        .map_err(|e| CliError::Validation(format!("constants: {e}")))?;

        let cfg = RunConfig {
            materials,
            units: file.units,
            columns: file.columns,
            fit_window,
            closure: file.closure.unwrap_or_default(),
            quad,
            lmin: cli.lmin.or(file.lmin).unwrap_or(0.6),
            lmax: cli.lmax.or(file.lmax).unwrap_or(6.0),
            lpoints: cli.lpoints.or(file.lpoints).unwrap_or(20),
            spacing: file.spacing.unwrap_or_default(),
            geometry: file.geometry.unwrap_or_default(),
            radius_cm: cli.radius_cm.or(file.radius_cm).unwrap_or(10.0),
            out: cli.out.or(file.out).unwrap_or_else(|| PathBuf::from("out")),
            constants,
            probes: file.probes.unwrap_or_else(|| vec![0.6, 2.0, 6.0]),
            brute_nodes: file.brute_nodes.unwrap_or(4000),
            reference_eta: file.reference_eta.unwrap_or(0.78),
            reference_material: file.reference_material.unwrap_or_else(|| "au".into()),
            reference_distance_um: file.reference_distance_um.unwrap_or(0.6),
            xi_min: file.xi_min.unwrap_or(1e-3),
            xi_max: file.xi_max.unwrap_or(1e3),
            xi_points_per_decade: file.xi_points_per_decade.unwrap_or(16),
            fault: file.fault,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Input(m));
        if !(self.lmin > 0.0 && self.lmax >= self.lmin && self.lmax.is_finite()) {
            return bad(format!(
                "invalid distance range [{}, {}] um",
                self.lmin, self.lmax
            ));
        }
        if self.lpoints == 0 || (self.lpoints > 1 && self.lmax == self.lmin) {
            return bad(format!(
                "invalid lpoints {} for [{}, {}] um",
                self.lpoints, self.lmin, self.lmax
            ));
        }
        if !(self.radius_cm > 0.0 && self.radius_cm.is_finite()) {
            return bad(format!("radius_cm must be > 0 (got {})", self.radius_cm));
        }
        if self.probes.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
            return bad("probe distances must be > 0".into());
        }
        if self.brute_nodes < 1000 {
            return bad(format!(
                "brute_nodes must be >= 1000 (got {})",
                self.brute_nodes
            ));
        }
        if !(self.xi_min > 0.0 && self.xi_max > self.xi_min) || self.xi_points_per_decade < 8 {
            return bad("xi grid needs 0 < xi_min < xi_max and >= 8 points per decade".into());
        }
        if !(self.reference_eta > 0.0 && self.reference_distance_um > 0.0) {
            return bad("reference_eta and reference_distance_um must be > 0".into());
        }
        if let Some(w) = self.fit_window {
            if !(w.lo > 0.0 && w.hi > w.lo) {
                return bad(format!("invalid fit window [{}, {}] eV", w.lo, w.hi));
            }
        }
        self.table_format()?;
        Ok(())
    }

    pub fn table_format(&self) -> Result<Option<TableFormat>, CliError> {
        match (&self.units, &self.columns) {
            (None, None) => Ok(None),
            (u, c) => {
                let units = match u.as_deref() {
                    None => FrequencyUnit::ElectronVolt,
                    Some(s) => FrequencyUnit::parse(s)
                        .ok_or_else(|| CliError::Input(format!("unknown units `{s}`")))?,
                };
                let columns = match c.as_deref() {
                    None => ColumnLayout::OmegaEps2,
                    Some(s) => ColumnLayout::parse(s)
                        .ok_or_else(|| CliError::Input(format!("unknown columns `{s}`")))?,
                };
                Ok(Some(TableFormat { units, columns }))
            }
        }
    }

    pub fn distance_grid(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Log => log_grid(self.lmin, self.lmax, self.lpoints),
            Spacing::Linear if self.lpoints == 1 => vec![self.lmin],
            Spacing::Linear => (0..self.lpoints)
                .map(|i| self.lmin + (self.lmax - self.lmin) * i as f64 / (self.lpoints - 1) as f64)
                .collect(),
        }
    }

    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }

    pub fn load_materials(&self) -> Result<Vec<LoadedMaterial>, CliError> {
        self.materials
            .iter()
            .map(|m| self.load_material(m))
            .collect()
    }

    fn load_material(&self, spec: &MaterialSpec) -> Result<LoadedMaterial, CliError> {
        let name = spec.name.clone();
        let (text, window, origin) = match &spec.source {
            MaterialSource::Perfect => {
                return Ok(LoadedMaterial {
                    material: Material::Perfect { name },
                    provenance: "perfect mirror (r_TE = -1, r_TM = +1)".into(),
                    dataset_sha256: None,
                })
            }
            MaterialSource::Drude { omega_p, gamma } => {
                let params = DrudeParams::new(*omega_p, *gamma)
                    .map_err(|e| CliError::Input(format!("{name}: {e}")))?;
                return Ok(LoadedMaterial {
                    material: Material::Drude { name, params },
                    provenance: format!("pure Drude omega_p = {omega_p} eV, gamma = {gamma} eV"),
                    dataset_sha256: None,
                });
            }
            MaterialSource::Builtin { table } => (
                builtin_table_text(table)
                    .map_err(|e| CliError::Input(e.to_string()))?
                    .to_string(),
                self.fit_window.unwrap_or(BUILTIN_FIT_WINDOW),
                format!("builtin:{table}"),
            ),
            MaterialSource::File { path } => (
                std::fs::read_to_string(path)
                    .map_err(|e| CliError::Input(format!("{name}: {}: {e}", path.display())))?,
                self.fit_window.unwrap_or(FILE_FIT_WINDOW),
                path.display().to_string(),
            ),
        };
        let ctx = |e: crate::optical_data::OpticalDataError| {
            CliError::Input(format!("{name} ({origin}): {e}"))
        };
        let table = match self.table_format()? {
            Some(f) => parse_table(&text, f, &self.constants),
            None => crate::optical_data::parse_table_auto(&text, &self.constants),
        }
        .map_err(ctx)?;
        let source = table.source().to_string();
        let fit = fit_drude(&table, window).map_err(ctx)?;
        let model = DielectricModel::new(table, fit.params, self.closure).map_err(ctx)?;
        Ok(LoadedMaterial {
            material: Material::Tabulated {
                name,
                fit,
                model: std::sync::Arc::new(model),
            },
            provenance: if source.is_empty() {
                origin
            } else {
                format!("{origin}: {source}")
            },
            dataset_sha256: Some(hex::encode(Sha256::digest(text.as_bytes()))),
        })
    }
}

#[derive(Debug, Clone)]
pub struct LoadedMaterial {
    pub material: Material,
    pub provenance: String,
    pub dataset_sha256: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn material_specs() {
        let m = MaterialSpec::parse("au").unwrap();
        assert_eq!(m.source, MaterialSource::Builtin { table: "au".into() });
        let m = MaterialSpec::parse("x=drude:9,0.035").unwrap();
        assert_eq!(
            m.source,
            MaterialSource::Drude {
                omega_p: 9.0,
                gamma: 0.035
            }
        );
        let m = MaterialSpec::parse("ideal=perfect").unwrap();
        assert_eq!(m.source, MaterialSource::Perfect);
        let m = MaterialSpec::parse("g=data/g.csv").unwrap();
        assert_eq!(
            m.source,
            MaterialSource::File {
                path: "data/g.csv".into()
            }
        );
        assert!(MaterialSpec::parse("ag").is_err());
        assert!(MaterialSpec::parse("x=drude:9").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file: FileConfig = toml::from_str("lmin = 1.0\nlpoints = 5\ntol = 1e-5").unwrap();
        let cli = Overrides {
            lpoints: Some(3),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(file, cli).unwrap();
        assert_eq!((cfg.lmin, cfg.lpoints), (1.0, 3));
        assert_eq!(cfg.quad.target_rel_tol, 1e-5);
        assert!(toml::from_str::<FileConfig>("bogus = 1").is_err());
    }

    #[test]
    fn hash_tracks_content_not_output_dir() {
        let a = RunConfig::resolve(FileConfig::default(), Overrides::default()).unwrap();
        let b = RunConfig::resolve(
            FileConfig::default(),
            Overrides {
                out: Some("elsewhere".into()),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(a.hash(), b.hash());
        let c = RunConfig::resolve(
            FileConfig::default(),
            Overrides {
                lpoints: Some(7),
                ..Default::default()
            },
        )
        .unwrap();
        assert_ne!(a.hash(), c.hash());
    }
}
