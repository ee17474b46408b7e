//! ε(iξ) for gold from the tabulated spectrum, next to the pure Drude model
//! with the fitted parameters.

use casimir_core::dispersion::build_eps_cache;
use casimir_core::materials::builtin;
use casimir_core::oracles::drude_dispersion_closed_form;
use casimir_core::PhysicalConstants;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = PhysicalConstants::codata();
    let au = builtin("au", &k)?;
    let model = au.model().unwrap();
    let drude = au.drude().unwrap();
    let cache = build_eps_cache(&model, 1e-3, 1e2, 8, 1e-9)?;
    println!("{:>10} {:>14} {:>14}", "xi_eV", "eps_table", "eps_drude");
    for i in 0..=10 {
        let xi = 10f64.powf(-3.0 + 0.5 * i as f64);
        println!(
            "{xi:>10.3e} {:>14.6e} {:>14.6e}",
            cache.eval(xi)?,
            drude_dispersion_closed_form(drude, xi)
        );
    }
    Ok(())
}
