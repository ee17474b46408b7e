//! Built-in optical tables and the table → fit → model preparation step.

use std::sync::Arc;

use thiserror::Error;

use crate::constants::PhysicalConstants;
use crate::dispersion::DispersionError;
use crate::lifshitz::{LifshitzError, Mirror, QuadratureSpec};
use crate::optical_data::{
    fit_drude, parse_table_auto, DielectricModel, DrudeFit, DrudeParams, FitWindow,
    HighFreqClosure, OpticalDataError, OpticalTable,
};

/// Gold, far infrared to X-ray, Hagemann, Gudat & Kunz compilation.
pub const AU_TABLE: &str = include_str!("../data/au_hagemann.csv");
/// Copper, same compilation and coverage as [`AU_TABLE`].
pub const CU_TABLE: &str = include_str!("../data/cu_hagemann.csv");

/// The built-in tables have no samples between 0.1 and 0.5 eV, so the
/// fit reaches down to the far-infrared points.
pub const BUILTIN_FIT_WINDOW: FitWindow = FitWindow { lo: 0.004, hi: 1.0 };

/// Cache density and accuracy used when turning a model into a mirror.
pub const CACHE_POINTS_PER_DECADE: usize = 12;
pub const CACHE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum MaterialError {
    #[error("unknown built-in material `{0}` (available: au, cu)")]
    UnknownBuiltin(String),
    #[error("{name}: {source}")]
    Optical {
        name: String,
        #[source]
        source: OpticalDataError,
    },
    #[error("{name}: {source}")]
    Dispersion {
        name: String,
        #[source]
        source: DispersionError,
    },
    #[error("{name}: {source}")]
    Lifshitz {
        name: String,
        #[source]
        source: LifshitzError,
    },
}

pub fn builtin_table_text(name: &str) -> Result<&'static str, MaterialError> {
    match name.to_ascii_lowercase().as_str() {
        "au" | "gold" => Ok(AU_TABLE),
        "cu" | "copper" => Ok(CU_TABLE),
        other => Err(MaterialError::UnknownBuiltin(other.to_string())),
    }
}

/// A material ready for the Lifshitz layer.
#[derive(Debug, Clone)]
pub enum Material {
    Perfect {
        name: String,
    },
    Drude {
        name: String,
        params: DrudeParams,
    },
    Tabulated {
        name: String,
        fit: DrudeFit,
        model: Arc<DielectricModel>,
    },
}

impl Material {
    pub fn name(&self) -> &str {
        match self {
            Material::Perfect { name }
            | Material::Drude { name, .. }
            | Material::Tabulated { name, .. } => name,
        }
    }

    pub fn model(&self) -> Option<Arc<DielectricModel>> {
        match self {
            Material::Perfect { .. } => None,
            Material::Drude { params, .. } => Some(Arc::new(DielectricModel::pure_drude(*params))),
            Material::Tabulated { model, .. } => Some(model.clone()),
        }
    }

    pub fn drude(&self) -> Option<DrudeParams> {
        match self {
            Material::Perfect { .. } => None,
            Material::Drude { params, .. } => Some(*params),
            Material::Tabulated { fit, .. } => Some(fit.params),
        }
    }

    pub fn fit(&self) -> Option<&DrudeFit> {
        match self {
            Material::Tabulated { fit, .. } => Some(fit),
            _ => None,
        }
    }

    pub fn table(&self) -> Option<&OpticalTable> {
        match self {
            Material::Tabulated { model, .. } => model.table(),
            _ => None,
        }
    }

    /// Builds a mirror whose ε cache covers every frequency `quad` can
    /// request for distances in `[l_min, l_max]` µm.
    pub fn mirror(
        &self,
        quad: &QuadratureSpec,
        l_min: f64,
        l_max: f64,
        constants: &PhysicalConstants,
    ) -> Result<Mirror, MaterialError> {
        let Some(model) = self.model() else {
            return Ok(Mirror::Perfect);
        };
        let span = quad.xi_span(l_min, l_max, constants);
        Mirror::from_model(
            self.name(),
            &model,
            span,
            CACHE_POINTS_PER_DECADE,
            CACHE_TOL,
        )
        .map_err(|source| MaterialError::Lifshitz {
            name: self.name().to_string(),
            source,
        })
    }
}

/// Parses `text`, fits the Drude extrapolation in `window` and assembles
/// the composite model.
pub fn prepare_tabulated(
    name: &str,
    text: &str,
    window: FitWindow,
    closure: HighFreqClosure,
    constants: &PhysicalConstants,
) -> Result<Material, MaterialError> {
    let wrap = |source| MaterialError::Optical {
        name: name.to_string(),
        source,
    };
    let table = parse_table_auto(text, constants).map_err(wrap)?;
    let fit = fit_drude(&table, window).map_err(wrap)?;
    let model = DielectricModel::new(table, fit.params, closure).map_err(wrap)?;
    Ok(Material::Tabulated {
        name: name.to_string(),
        fit,
        model: Arc::new(model),
    })
}

/// Built-in gold or copper with the default fit window and closure.
pub fn builtin(name: &str, constants: &PhysicalConstants) -> Result<Material, MaterialError> {
    let text = builtin_table_text(name)?;
    prepare_tabulated(
        &name.to_ascii_lowercase(),
        text,
        BUILTIN_FIT_WINDOW,
        HighFreqClosure::default(),
        constants,
    )
}
