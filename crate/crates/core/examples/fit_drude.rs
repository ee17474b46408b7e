//! Drude fit of the bundled gold table over two low-frequency windows.

use casimir_core::materials::builtin_table_text;
use casimir_core::optical_data::{fit_drude, parse_table_auto, FitWindow};
use casimir_core::PhysicalConstants;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = PhysicalConstants::codata();
    let table = parse_table_auto(builtin_table_text("au")?, &k)?;
    println!(
        "{}: {} samples, {:.4}..{:.1} eV",
        table.material(),
        table.samples().len(),
        table.omega_min(),
        table.omega_max()
    );
    for window in [
        FitWindow { lo: 0.004, hi: 1.0 },
        FitWindow { lo: 0.004, hi: 0.3 },
    ] {
        let fit = fit_drude(&table, window)?;
        println!(
            "[{}, {}] eV: omega_p = {:.4} eV, gamma = {:.4} eV, {} samples, rms ln residual {:.3}",
            window.lo,
            window.hi,
            fit.params.omega_p,
            fit.params.gamma,
            fit.samples_used,
            fit.rms_log_residual
        );
    }
    Ok(())
}
