//! Sphere-plane force on a 10 cm gold lens, in the proximity-force
//! approximation.

use casimir_core::lifshitz::{force_sphere_plane, MirrorPair, QuadratureSpec};
use casimir_core::materials::builtin;
use casimir_core::PhysicalConstants;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = PhysicalConstants::codata();
    let quad = QuadratureSpec::default();
    let radius_cm = 10.0;
    let mirror = builtin("au", &k)?.mirror(&quad, 0.5, 5.0, &k)?;
    let pair = MirrorPair::identical(mirror, k);
    println!(
        "{:>6} {:>12} {:>12} {:>8}",
        "L_um", "F_N", "F_perfect_N", "eta_E"
    );
    for l in [0.5, 1.0, 2.0, 5.0] {
        let f = force_sphere_plane(&pair, l, radius_cm, &quad)?;
        let ideal = 2.0 * std::f64::consts::PI * radius_cm * 1e-2 * k.perfect_energy(l);
        println!(
            "{l:>6.2} {:>12.4e} {ideal:>12.4e} {:>8.5}",
            f.force, f.reduction_factor
        );
        if let Some(w) = f.warning {
            println!("  {w}");
        }
    }
    Ok(())
}
