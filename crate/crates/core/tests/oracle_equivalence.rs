//! Production quadrature against the brute-force trapezoid oracle.

use casimir_core::lifshitz::{
    energy_plane_plane, eta_curve, eta_from_energy, force_plane_plane, log_grid, Mirror,
    MirrorPair, QuadratureSpec,
};
use casimir_core::materials::builtin;
use casimir_core::optical_data::{DielectricModel, DrudeParams};
use casimir_core::oracles::{
    brute_force_convergence, brute_force_energy, brute_force_xi_floor, rel_diff, DenseDispersion,
    OracleMirror,
};
use casimir_core::PhysicalConstants;
use serde::Deserialize;

const N: usize = 4000;

fn k() -> PhysicalConstants {
    PhysicalConstants::codata()
}

fn drude_model() -> DielectricModel {
    DielectricModel::pure_drude(DrudeParams::new(9.0, 0.035).unwrap())
}

fn production_pair(model: &DielectricModel, l_lo: f64, l_hi: f64) -> MirrorPair {
    let span = QuadratureSpec::default().xi_span(l_lo, l_hi, &k());
    MirrorPair::identical(Mirror::from_model("m", model, span, 12, 1e-9).unwrap(), k())
}

/// Oracle mirror valid for every distance up to `l_max`.
fn oracle_mirror(model: &DielectricModel, l_max: f64) -> OracleMirror {
    OracleMirror::Medium(DenseDispersion::new(
        model,
        brute_force_xi_floor(l_max, N, &k()),
    ))
}

#[test]
fn perfect_mirrors_brute_force_4000() {
    let p = OracleMirror::Perfect;
    let e = brute_force_energy(&p, &p, 1.0, N, N, &k());
    assert!(rel_diff(e, k().perfect_energy(1.0)) < 1e-5, "{e}");
}

#[test]
fn drude_energy_matches_brute_force() {
    let model = drude_model();
    let pair = production_pair(&model, 0.6, 0.6);
    let prod = energy_plane_plane(&pair, 0.6, &QuadratureSpec::default()).unwrap();
    let m = oracle_mirror(&model, 0.6);
    let brute = brute_force_energy(&m, &m, 0.6, N, N, &k());
    assert!(
        rel_diff(prod.value, brute) < 1e-4,
        "{} vs {brute}",
        prod.value
    );
}

#[derive(Deserialize)]
struct Golden {
    omega_p_ev: f64,
    gamma_ev: f64,
    distance_um: f64,
    nodes: usize,
    energy_j_per_m2: f64,
}

#[test]
fn drude_brute_force_golden_value() {
    let g: Golden = serde_json::from_str(include_str!("golden/brute_force_drude.json")).unwrap();
    let model = DielectricModel::pure_drude(DrudeParams::new(g.omega_p_ev, g.gamma_ev).unwrap());
    let m = oracle_mirror(&model, g.distance_um);
    let e = brute_force_energy(&m, &m, g.distance_um, g.nodes, g.nodes, &k());
    assert!(
        rel_diff(e, g.energy_j_per_m2) < 1e-12,
        "{e:e} vs golden {:e}",
        g.energy_j_per_m2
    );
}

#[test]
fn brute_force_converges_at_second_order() {
    let model = drude_model();
    let m = oracle_mirror(&model, 0.6);
    let c = brute_force_convergence(&m, &m, 0.6, N, &k());
    assert!(c.passed, "{c:?}");
    assert!(c.observed_order >= 1.8, "{c:?}");
    // 2000 → 4000 changes the result by less than 4x the predicted error
    assert!(c.change_over_error < 4.0, "{c:?}");
}

#[test]
fn five_material_distance_probes() {
    let au = builtin("au", &k()).unwrap();
    let cu = builtin("cu", &k()).unwrap();
    let drude = drude_model();
    let au_model = au.model().unwrap();
    let cu_model = cu.model().unwrap();
    let probes: [(&DielectricModel, f64); 5] = [
        (&au_model, 0.6),
        (&au_model, 2.0),
        (&au_model, 6.0),
        (&cu_model, 0.6),
        (&drude, 1.0),
    ];
    for (model, l) in probes {
        let pair = production_pair(model, l, l);
        let e = energy_plane_plane(&pair, l, &QuadratureSpec::default()).unwrap();
        let eta_prod = eta_from_energy(&pair, l, e.value);
        let m = oracle_mirror(model, l);
        let eta_brute = brute_force_energy(&m, &m, l, N, N, &k()) / k().perfect_energy(l);
        assert!(
            rel_diff(eta_prod, eta_brute) < 1e-4,
            "L={l}: {eta_prod} vs {eta_brute}"
        );
    }
}

#[test]
fn eta_monotone_on_brute_force_points() {
    // The production curve is checked for monotonicity as a diagnostic;
    // confirm the property itself on five oracle points first.
    let au = builtin("au", &k()).unwrap().model().unwrap();
    let grid = log_grid(0.6, 6.0, 5);
    let m = oracle_mirror(&au, 6.0);
    let etas: Vec<f64> = grid
        .iter()
        .map(|&l| brute_force_energy(&m, &m, l, 2000, 2000, &k()) / k().perfect_energy(l))
        .collect();
    assert!(etas.windows(2).all(|w| w[1] > w[0]), "{etas:?}");

    let pair = production_pair(&au, 0.6, 6.0);
    let curve = eta_curve(&pair, &log_grid(0.6, 6.0, 20), &QuadratureSpec::default()).unwrap();
    assert!(curve.warnings.is_empty(), "{:?}", curve.warnings);
}

#[test]
fn force_reduction_below_energy_reduction_at_short_distance() {
    let model = drude_model();
    let m = oracle_mirror(&model, 0.7);
    let k = k();
    for l in [0.1, 0.6] {
        let h = 1e-3 * l;
        let e = |x: f64| brute_force_energy(&m, &m, x, 2000, 2000, &k);
        let eta_e = e(l) / k.perfect_energy(l);
        let f = -(e(l + h) - e(l - h)) / (2.0 * h * 1e-6);
        let eta_f = f / k.perfect_force(l);
        assert!(eta_f < eta_e, "L={l}: eta_F {eta_f} vs eta_E {eta_e}");

        let pair = production_pair(&model, l, l);
        let q = QuadratureSpec::default();
        let pf = force_plane_plane(&pair, l, &q).unwrap().value / k.perfect_force(l);
        assert!(rel_diff(pf, eta_f) < 1e-3, "L={l}: {pf} vs {eta_f}");
    }
}
