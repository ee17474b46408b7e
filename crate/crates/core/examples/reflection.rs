//! Fresnel amplitudes and loop factors for gold at L = 1 µm.

use casimir_core::dispersion::eps_imag_axis;
use casimir_core::materials::builtin;
use casimir_core::reflection::{fresnel, loop_function, ImagFreqPoint, ReflectionPair};
use casimir_core::PhysicalConstants;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = PhysicalConstants::codata();
    let model = builtin("au", &k)?.model().unwrap();
    let hc = k.hbar_c_ev_um();
    println!(
        "{:>8} {:>8} {:>9} {:>9} {:>11} {:>11}",
        "xi_eV", "kappa_eV", "r_TE", "r_TM", "ln_TE", "ln_TM"
    );
    for xi in [0.01, 0.1, 1.0] {
        let eps = eps_imag_axis(&model, xi, 1e-9)?;
        for kappa in [xi, 2.0 * xi, 0.5] {
            if kappa < xi {
                continue;
            }
            let r = fresnel(eps, ImagFreqPoint::new(xi, kappa)?)?;
            let (te, tm) = loop_function(r, r, kappa, 1.0, hc)?;
            println!(
                "{xi:>8.2} {kappa:>8.2} {:>9.5} {:>9.5} {te:>11.3e} {tm:>11.3e}",
                r.r_te, r.r_tm
            );
        }
    }
    let p = ReflectionPair::PERFECT;
    println!("perfect mirror: r_TE = {}, r_TM = {}", p.r_te, p.r_tm);
    Ok(())
}
