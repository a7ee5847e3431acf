//! One function per subcommand. Each returns a finished report or the error
//! that decides the exit code.

use serde_json::{json, Value};
use wcop::moebius::{classify as classify_map, elliptic_period};
use wcop::operators::{check_bounded as bounded_verdict, check_invertible as invertibility, taylor_truncation};
use wcop::spectra::{
    conjecture_probe, elliptic_root_cloud, predict_spectrum_from, spectral_radius_estimate, truncation_eigenvalues,
    MAX_PERIOD,
};
use wcop::{AutomorphismKind, Complex64, DiscGrid, SpectrumShape};

use crate::config::ExperimentConfig;
use crate::report::{Record, Report};
use crate::CliError;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn modulus_range(points: &[Complex64]) -> (f64, f64) {
    points.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), p| (lo.min(p.norm()), hi.max(p.norm())))
}

fn kind_label(kind: AutomorphismKind) -> &'static str {
    match kind {
        AutomorphismKind::Identity => "identity",
        AutomorphismKind::Elliptic => "elliptic",
        AutomorphismKind::Parabolic => "parabolic",
        AutomorphismKind::Hyperbolic => "hyperbolic",
    }
}

pub fn classify(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let phi = cfg.automorphism()?;
    let class = classify_map(&phi)?;
    let mut report = Report::new("classify", cfg);
    for (i, fp) in class.fixed_points.iter().enumerate() {
        let moved = (phi.eval(fp.location) - fp.location).norm();
        report.push(Record::at_most(&format!("fixed_point_{i}"), "fixed_point_residual", 0.0, moved, cfg.tolerances.fixed_point));
    }
    let period = match class.kind {
        AutomorphismKind::Elliptic => elliptic_period(&phi, &class, MAX_PERIOD),
        _ => None,
    };
    report.data = json!({
        "kind": kind_label(class.kind),
        "classification": to_value(&class),
        "period": period,
        "coefficients": to_value(&phi.coefficients()),
    });
    Ok(report)
}

pub fn predict(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let op = cfg.operator()?;
    cfg.automorphism()?;
    let inv = invertibility(&op, &cfg.verdict)?;
    let prediction = predict_spectrum_from(&op, &inv, &cfg.verdict)?;
    let mut report = Report::new("predict", cfg);
    let mut value = to_value(&prediction);
    if let SpectrumShape::RootSetClosure { points, .. } = &prediction.shape {
        let (lo, hi) = modulus_range(points);
        value["shape"]["points"] = json!({ "count": points.len(), "min_modulus": lo, "max_modulus": hi, "file": "spectrum_points.csv" });
        report.attach("spectrum_points.csv", points.clone());
    }
    value["inf_modulus"] = json!(inv.inf_modulus);
    report.data = value;
    Ok(report)
}

pub fn estimate_radius(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let op = cfg.operator()?;
    let grid = DiscGrid::new(cfg.grid)?;
    let est = spectral_radius_estimate(&op, &cfg.schedule, &grid)?;
    let mut report = Report::new("estimate-radius", cfg);
    report.push(Record::at_most("relative_gap", "spectral_radius_limit", 0.0, est.relative_gap, cfg.tolerances.radius)
        .with_note(format!("n = {}: estimate {} vs predicted {}", est.schedule.last().unwrap_or(&0), est.last(), est.predicted)));
    report.data = json!({ "estimate": to_value(&est), "grid": to_value(&grid.descriptor()) });
    Ok(report)
}

pub fn check_bounded(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let op = cfg.operator()?;
    let verdict = bounded_verdict(&op, &cfg.verdict)?;
    let mut report = Report::new("check-bounded", cfg);
    report.data = to_value(&verdict);
    Ok(report)
}

pub fn check_invertible(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let op = cfg.operator()?;
    let inv = invertibility(&op, &cfg.verdict)?;
    let mut report = Report::new("check-invertible", cfg);
    report.data = json!({
        "invertible": inv.invertible,
        "automorphism": inv.automorphism,
        "inf_modulus": inv.inf_modulus,
        "multiplier": to_value(&inv.multiplier),
        "failure": inv.failure(),
        "inverse_weight": inv.inverse.as_ref().map(|w| to_value(w.weight())),
    });
    Ok(report)
}

pub fn root_cloud(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let op = cfg.operator()?;
    let grid = DiscGrid::new(cfg.grid)?;
    let cloud = elliptic_root_cloud(&op, &grid)?;
    let (lo, hi) = modulus_range(&cloud.points);
    let mut report = Report::new("root-cloud", cfg);
    report.data = json!({
        "period": cloud.m,
        "count": cloud.points.len(),
        "min_modulus": lo,
        "max_modulus": hi,
        "coverage": cloud.coverage,
        "grid": to_value(&grid.descriptor()),
    });
    report.attach("root_cloud.csv", cloud.points);
    Ok(report)
}

pub fn truncate_eigs(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let op = cfg.operator()?;
    let mut report = Report::new("truncate-eigs", cfg);
    let mut sizes = Vec::new();
    for &n in &cfg.truncation_sizes {
        let eigs = truncation_eigenvalues(&taylor_truncation(&op, n)?)?;
        let (lo, hi) = modulus_range(&eigs);
        let file = format!("eigenvalues_{n}.csv");
        sizes.push(json!({ "size": n, "min_modulus": lo, "max_modulus": hi, "eigenvalues": to_value(&eigs), "file": file }));
        report.attach(&file, eigs);
    }
    report.data = json!({ "exploratory": true, "truncations": sizes });
    Ok(report)
}

pub fn probe_conjecture(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let op = cfg.operator()?;
    let probe = conjecture_probe(&op, cfg.probe.lambda_samples, &cfg.truncation_sizes, &cfg.probe.extra)?;
    let mut report = Report::new("probe-conjecture", cfg);
    report.data = to_value(&probe);
    Ok(report)
}
