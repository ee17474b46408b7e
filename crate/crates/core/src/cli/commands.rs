use rayon::prelude::*;
use serde_json::json;

use super::config::{Geometry, LoadedMaterial, RunConfig};
use super::output::{header, sci, write};
use super::CliError;
use crate::dispersion::{build_eps_cache, DEFAULT_TOL};
use crate::lifshitz::{eta_curve, eta_entry, force_sphere_plane, EtaCurve, MirrorPair};
use crate::materials::Material;
use crate::optical_data::DielectricModel;
use crate::oracles::{run_certification_suite, CertifyConfig};

pub fn fit(cfg: &RunConfig) -> Result<i32, CliError> {
    for m in cfg.load_materials()? {
        let name = m.material.name().to_string();
        match &m.material {
            Material::Perfect { .. } => println!("{name}: perfect mirror, nothing to fit"),
            Material::Drude { params, .. } => println!(
                "{name}: pure Drude, omega_p = {} eV, gamma = {} eV (given)",
                sci(params.omega_p),
                sci(params.gamma)
            ),
            Material::Tabulated { fit, .. } => {
                println!(
                    "{name}: omega_p = {} eV, gamma = {} eV",
                    sci(fit.params.omega_p),
                    sci(fit.params.gamma)
                );
                println!(
                    "  window [{}, {}] eV, {} samples, {} iterations",
                    fit.window.lo, fit.window.hi, fit.samples_used, fit.iterations
                );
                println!(
                    "  ln eps2 residuals: rms {}, max {}, at window edge {}",
                    sci(fit.rms_log_residual),
                    sci(fit.max_log_residual),
                    sci(fit.edge_log_residual)
                );
                let doc = json!({
                    "config_sha256": cfg.hash(),
                    "material": name,
                    "dataset": m.provenance,
                    "dataset_sha256": m.dataset_sha256,
                    "fit": fit,
                });
                let text = serde_json::to_string_pretty(&doc).expect("json") + "\n";
                write(&cfg.out, &format!("{name}_fit.json"), &text)?;
            }
        }
    }
    Ok(0)
}

/// ε″ sample frequencies: a Drude stretch below the table, the table nodes,
/// and a stretch of the closure above it.
fn eps2_frequencies(model: &DielectricModel, cfg: &RunConfig) -> Vec<f64> {
    let ppd = cfg.xi_points_per_decade as f64;
    let span = |lo: f64, hi: f64, include_hi: bool| -> Vec<f64> {
        let n = ((hi / lo).log10() * ppd).ceil().max(1.0) as usize;
        let last = if include_hi { n + 1 } else { n };
        (0..last)
            .map(|i| lo * (hi / lo).powf(i as f64 / n as f64))
            .collect()
    };
    match model.table() {
        None => span(cfg.xi_min, cfg.xi_max, true),
        Some(t) => {
            let mut w = span(t.omega_min() * 1e-3, t.omega_min(), false);
            w.extend(t.samples().iter().map(|s| s.omega));
            w.extend(
                span(t.omega_max(), t.omega_max() * 1e3, true)
                    .into_iter()
                    .skip(1),
            );
            w
        }
    }
}

pub fn epsilon(cfg: &RunConfig) -> Result<i32, CliError> {
    for m in cfg.load_materials()? {
        let name = m.material.name().to_string();
        let Some(model) = m.material.model() else {
            eprintln!("{name}: perfect mirror has no dielectric function, skipped");
            continue;
        };
        let cache = build_eps_cache(
            &model,
            cfg.xi_min,
            cfg.xi_max,
            cfg.xi_points_per_decade,
            DEFAULT_TOL,
        )
        .map_err(|e| CliError::Validation(format!("{name}: {e}")))?;
        let mut text = header("epsilon", cfg, Some(&m));
        text.push_str("# axis eps2_real = eps''(omega) on the real axis; eps_imag = eps(i xi)\n");
        text.push_str("axis,freq_eV,value\n");
        for w in eps2_frequencies(&model, cfg) {
            text.push_str(&format!("eps2_real,{},{}\n", sci(w), sci(model.eps2(w))));
        }
        for (xi, eps) in cache.xi_grid().iter().zip(cache.eps_values()) {
            text.push_str(&format!("eps_imag,{},{}\n", sci(*xi), sci(*eps)));
        }
        let path = write(&cfg.out, &format!("{name}_eps.csv"), &text)?;
        println!("{name}: wrote {}", path.display());
    }
    Ok(0)
}

fn pair_for(
    m: &LoadedMaterial,
    cfg: &RunConfig,
    l_lo: f64,
    l_hi: f64,
) -> Result<MirrorPair, CliError> {
    let mirror = m
        .material
        .mirror(&cfg.quad, l_lo, l_hi, &cfg.constants)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let mirror = match cfg.fault {
        Some(crate::oracles::Fault::FlipTmSign) => {
            crate::lifshitz::Mirror::TmSignFlipped(Box::new(mirror))
        }
        None => mirror,
    };
    Ok(MirrorPair::identical(mirror, cfg.constants))
}

fn metadata(cfg: &RunConfig, m: &LoadedMaterial, curve: &EtaCurve) -> String {
    let failures: Vec<_> = curve
        .failures()
        .map(|(l, e)| json!({"L_um": l, "error": e}))
        .collect();
    let doc = json!({
        "config_sha256": cfg.hash(),
        "mirrors": curve.mirrors,
        "material": m.material.name(),
        "dataset": m.provenance,
        "dataset_sha256": m.dataset_sha256,
        "drude": m.material.drude(),
        "fit": m.material.fit(),
        "closure": cfg.closure,
        "quadrature": cfg.quad,
        "constants": cfg.constants,
        "warnings": curve.warnings,
        "failures": failures,
    });
    serde_json::to_string_pretty(&doc).expect("json") + "\n"
}

pub fn eta(cfg: &RunConfig) -> Result<i32, CliError> {
    let materials = cfg.load_materials()?;
    let grid = cfg.distance_grid();
    let reference = materials
        .iter()
        .position(|m| m.material.name() == cfg.reference_material);
    let mut l_lo = cfg.lmin;
    let mut l_hi = cfg.lmax;
    if reference.is_some() {
        l_lo = l_lo.min(cfg.reference_distance_um);
        l_hi = l_hi.max(cfg.reference_distance_um);
    }

    let mut exit = 0;
    let mut curves = Vec::new();
    let mut pairs = Vec::new();
    for m in &materials {
        let name = m.material.name();
        let pair = pair_for(m, cfg, l_lo, l_hi)?;
        let curve = match eta_curve(&pair, &grid, &cfg.quad) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("{name}: {e}");
                exit = 1;
                continue;
            }
        };
        for w in &curve.warnings {
            eprintln!("{name}: warning: {w}");
        }
        for (l, e) in curve.failures() {
            eprintln!("{name}: L = {l} um failed: {e}");
            exit = 1;
        }
        let mut text = header("eta", cfg, Some(m));
        text.push_str(&curve.to_delimited());
        write(&cfg.out, &format!("{name}_eta.csv"), &text)?;
        write(
            &cfg.out,
            &format!("{name}_eta.json"),
            &metadata(cfg, m, &curve),
        )?;
        curves.push((name.to_string(), curve));
        pairs.push(pair);
    }

    print_curves(&curves);
    if curves.len() >= 2 {
        let text = comparison(cfg, &curves);
        write(&cfg.out, "comparison.csv", &text)?;
    }
    if let Some(idx) = reference {
        let m = &materials[idx];
        if let Some(pos) = curves.iter().position(|(n, _)| n == m.material.name()) {
            let l = cfg.reference_distance_um;
            match eta_entry(&pairs[pos], l, &cfg.quad) {
                Ok(e) => {
                    let excess_e = 100.0 * (e.eta_e / cfg.reference_eta - 1.0);
                    let excess_f = 100.0 * (e.eta_f / cfg.reference_eta - 1.0);
                    let mut text = header("eta reference comparison", cfg, Some(m));
                    text.push_str("material,L_um,eta_E,eta_F,reference_eta,excess_E_percent,excess_F_percent\n");
                    text.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        m.material.name(),
                        sci(l),
                        sci(e.eta_e),
                        sci(e.eta_f),
                        sci(cfg.reference_eta),
                        sci(excess_e),
                        sci(excess_f)
                    ));
                    write(&cfg.out, "reference_comparison.csv", &text)?;
                    println!(
                        "{} at {l} um: eta_E = {:.4} ({:+.1}% vs {}), eta_F = {:.4} ({:+.1}%)",
                        m.material.name(),
                        e.eta_e,
                        excess_e,
                        cfg.reference_eta,
                        e.eta_f,
                        excess_f
                    );
                }
                Err(e) => {
                    eprintln!("reference comparison failed: {e}");
                    exit = 1;
                }
            }
        }
    }
    if cfg.geometry == Geometry::SpherePlane {
        exit = exit.max(force(cfg)?);
    }
    Ok(exit)
}

fn print_curves(curves: &[(String, EtaCurve)]) {
    let Some((_, first)) = curves.first() else {
        return;
    };
    print!("{:>10}", "L_um");
    for (name, _) in curves {
        print!(
            " {:>12} {:>12}",
            format!("eta_E[{name}]"),
            format!("eta_F[{name}]")
        );
    }
    println!();
    for (i, p) in first.points.iter().enumerate() {
        print!("{:>10.4}", p.distance_um);
        for (_, c) in curves {
            match &c.points[i].outcome {
                Ok(e) => print!(" {:>12.6} {:>12.6}", e.eta_e, e.eta_f),
                Err(_) => print!(" {:>12} {:>12}", "FAILED", "FAILED"),
            }
        }
        println!();
    }
}

/// Per-L relative differences of every material against the first.
fn comparison(cfg: &RunConfig, curves: &[(String, EtaCurve)]) -> String {
    let (base_name, base) = &curves[0];
    let others = &curves[1..];
    let mut max_diff = vec![0.0f64; others.len()];
    let mut rows = String::new();
    for (i, p) in base.points.iter().enumerate() {
        let mut row = sci(p.distance_um);
        let a = p.outcome.as_ref().ok().map(|e| e.eta_e);
        row.push(',');
        row.push_str(&a.map_or("NaN".into(), sci));
        for (k, (_, c)) in others.iter().enumerate() {
            let b = c.points[i].outcome.as_ref().ok().map(|e| e.eta_e);
            let d = match (a, b) {
                (Some(a), Some(b)) => {
                    let d = (a - b).abs() / a;
                    max_diff[k] = max_diff[k].max(d);
                    Some(d)
                }
                _ => None,
            };
            row.push_str(&format!(
                ",{},{}",
                b.map_or("NaN".into(), sci),
                d.map_or("NaN".into(), sci)
            ));
        }
        rows.push_str(&row);
        rows.push('\n');
    }
    let mut text = header("eta comparison", cfg, None);
    let mut cols = format!("L_um,eta_E_{base_name}");
    for ((name, _), m) in others.iter().zip(&max_diff) {
        text.push_str(&format!("# max rel_diff_E_{name} = {}\n", sci(*m)));
        cols.push_str(&format!(",eta_E_{name},rel_diff_E_{name}"));
        println!(
            "max |eta_E[{base_name}] - eta_E[{name}]| / eta_E[{base_name}] = {:.3}%",
            100.0 * m
        );
    }
    text.push_str(&cols);
    text.push('\n');
    text.push_str(&rows);
    text
}

pub fn force(cfg: &RunConfig) -> Result<i32, CliError> {
    let materials = cfg.load_materials()?;
    let grid = cfg.distance_grid();
    let mut exit = 0;
    for m in &materials {
        let name = m.material.name();
        let pair = pair_for(m, cfg, cfg.lmin, cfg.lmax)?;
        let results: Vec<_> = grid
            .par_iter()
            .map(|&l| (l, force_sphere_plane(&pair, l, cfg.radius_cm, &cfg.quad)))
            .collect();
        let mut text = header("force", cfg, Some(m));
        text.push_str(&format!("# sphere radius_cm = {}\n", sci(cfg.radius_cm)));
        text.push_str("L_um,F_sp_N,E_pp_J_per_m2,reduction_factor,est_rel_error,pfa_warning\n");
        let mut warned = false;
        for (l, r) in results {
            match r {
                Ok(s) => {
                    if let (Some(w), false) = (s.warning, warned) {
                        eprintln!("{name}: warning: {w}");
                        warned = true;
                    }
                    text.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        sci(l),
                        sci(s.force),
                        sci(s.energy_pp),
                        sci(s.reduction_factor),
                        sci(s.est_rel_error),
                        u8::from(s.warning.is_some())
                    ));
                    println!(
                        "{name} L = {l:.4} um: F = {:.6e} N (reduction {:.6})",
                        s.force, s.reduction_factor
                    );
                }
                Err(e) => {
                    eprintln!("{name}: L = {l} um failed: {e}");
                    text.push_str(&format!("# FAILED L_um={}: {e}\n", sci(l)));
                    text.push_str(&format!("{},NaN,NaN,NaN,NaN,NaN\n", sci(l)));
                    exit = 1;
                }
            }
        }
        write(&cfg.out, &format!("{name}_force.csv"), &text)?;
    }
    Ok(exit)
}

pub fn certify(cfg: &RunConfig) -> Result<i32, CliError> {
    let materials: Vec<Material> = cfg
        .load_materials()?
        .into_iter()
        .map(|m| m.material)
        .collect();
    let config = CertifyConfig {
        constants: cfg.constants,
        quad: cfg.quad,
        brute_nodes: cfg.brute_nodes,
        fault: cfg.fault,
    };
    let reports = run_certification_suite(&materials, &cfg.probes, &config);
    let mut text = header("certify", cfg, None);
    for r in &reports {
        let line = r.to_json_line();
        println!("{line}");
        text.push_str(&line);
        text.push('\n');
    }
    write(&cfg.out, "certify_report.jsonl", &text)?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    eprintln!("certify: {} cases, {failed} failed", reports.len());
    Ok(if failed > 0 { 1 } else { 0 })
}
