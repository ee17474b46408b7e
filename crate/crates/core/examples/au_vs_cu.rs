//! Gold versus copper: energy reduction factors over 0.6–6 µm and their
//! relative difference.

use casimir_core::lifshitz::{eta_curve, log_grid, MirrorPair, QuadratureSpec};
use casimir_core::materials::builtin;
use casimir_core::PhysicalConstants;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = PhysicalConstants::codata();
    let quad = QuadratureSpec::default();
    let grid = log_grid(0.6, 6.0, 11);
    let mut curves = Vec::new();
    for name in ["au", "cu"] {
        let material = builtin(name, &k)?;
        let p = material.drude().unwrap();
        println!(
            "{name}: omega_p = {:.4} eV, gamma = {:.4} eV",
            p.omega_p, p.gamma
        );
        let mirror = material.mirror(&quad, 0.6, 6.0, &k)?;
        curves.push(eta_curve(&MirrorPair::identical(mirror, k), &grid, &quad)?);
    }
    println!(
        "{:>8} {:>9} {:>9} {:>9} {:>9}",
        "L_um", "eta_Au", "eta_Cu", "diff_%", "est_err"
    );
    for (a, c) in curves[0].entries().zip(curves[1].entries()) {
        println!(
            "{:>8.4} {:>9.5} {:>9.5} {:>9.3} {:>9.1e}",
            a.distance_um,
            a.eta_e,
            c.eta_e,
            100.0 * (a.eta_e - c.eta_e).abs() / a.eta_e,
            a.est_error.max(c.est_error)
        );
    }
    Ok(())
}
