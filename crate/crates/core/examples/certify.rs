//! Runs the certification suite on gold, copper and a pure Drude metal,
//! then again with a sign error injected into r_TM to show it is caught.

use casimir_core::materials::{builtin, Material};
use casimir_core::optical_data::DrudeParams;
use casimir_core::oracles::{run_certification_suite, CertifyConfig, Fault};
use casimir_core::PhysicalConstants;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = PhysicalConstants::codata();
    let materials = vec![
        builtin("au", &k)?,
        builtin("cu", &k)?,
        Material::Drude {
            name: "drude".into(),
            params: DrudeParams::new(9.0, 0.035)?,
        },
    ];
    let probes = [0.6, 6.0];
    for fault in [None, Some(Fault::FlipTmSign)] {
        let config = CertifyConfig {
            fault,
            ..Default::default()
        };
        let reports = run_certification_suite(&materials, &probes, &config);
        println!("fault = {fault:?}");
        for r in &reports {
            println!(
                "  {:<4} {:<45} rel_diff = {:.2e} (tol {:.0e}, {:.2} s)",
                if r.passed { "PASS" } else { "FAIL" },
                r.name,
                r.rel_diff,
                r.tolerance,
                r.budget
            );
        }
        let failed = reports.iter().filter(|r| !r.passed).count();
        println!("  {failed} of {} cases failed\n", reports.len());
    }
    Ok(())
}
