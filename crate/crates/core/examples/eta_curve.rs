//! η_E and η_F for a pure Drude metal, written in the CLI's delimited form.

use casimir_core::lifshitz::{eta_curve, log_grid, Mirror, MirrorPair, QuadratureSpec};
use casimir_core::optical_data::{DielectricModel, DrudeParams};
use casimir_core::PhysicalConstants;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = PhysicalConstants::codata();
    let quad = QuadratureSpec::default();
    let model = DielectricModel::pure_drude(DrudeParams::new(9.0, 0.035)?);
    let mirror = Mirror::from_model("drude", &model, quad.xi_span(0.1, 10.0, &k), 12, 1e-9)?;
    let curve = eta_curve(
        &MirrorPair::identical(mirror, k),
        &log_grid(0.1, 10.0, 9),
        &quad,
    )?;
    print!("{}", curve.to_delimited());
    for w in &curve.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}
