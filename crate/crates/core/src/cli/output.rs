//! Output files: provenance header, fixed float format, deterministic names.

use std::path::{Path, PathBuf};

use super::config::{LoadedMaterial, RunConfig};
use super::CliError;

/// Nine significant digits, scientific notation.
pub fn sci(v: f64) -> String {
    format!("{v:.8e}")
}

pub fn header(command: &str, cfg: &RunConfig, material: Option<&LoadedMaterial>) -> String {
    let mut h = format!("# casimir {command}\n# config_sha256 = {}\n", cfg.hash());
    if let Some(m) = material {
        h.push_str(&format!("# material = {}\n", m.material.name()));
        h.push_str(&format!("# dataset = {}\n", m.provenance));
        if let Some(sha) = &m.dataset_sha256 {
            h.push_str(&format!("# dataset_sha256 = {sha}\n"));
        }
        if let Some(p) = m.material.drude() {
            h.push_str(&format!(
                "# drude omega_p_eV = {} gamma_eV = {}\n",
                sci(p.omega_p),
                sci(p.gamma)
            ));
        }
    }
    h
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(path)
}
