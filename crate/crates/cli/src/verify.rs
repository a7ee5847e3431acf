//! The reproduction suite behind `wcop verify`: every check is seeded from
//! the config and judged against the config tolerances.

use std::collections::HashSet;

use rand::Rng;
use serde_json::json;
use wcop::moebius::dw_limit_sequence;
use wcop::norms::{bloch_norm, dirichlet_norm, log_growth_ratio, log_weight_sup, weighted_sup_norm};
use wcop::operators::{
    check_bounded, check_invertible, composition_norm_bound, composition_norm_lower_bound,
    holomorphic_multiplier_verdict, TestFamily,
};
use wcop::spectra::{elliptic_root_cloud, predict_spectrum, predict_spectrum_from, spectral_radius_estimate};
use wcop::symbols::{blaschke_k, FnHolomorphic, Holomorphic};
use wcop::{
    BlaschkeProduct, Complex64, DiscGrid, GridParams, LogWeightFunction, MoebiusTransform, Polynomial,
    QuadratureRule, RationalSymbol, Space, SpectrumShape, Verdict, WeightedCompositionOp,
};

use crate::config::ExperimentConfig;
use crate::report::{Record, Report};
use crate::sample::{self, Rng64};
use crate::CliError;

type Checks = Result<Vec<Record>, Box<dyn std::error::Error>>;
type Group<'c> = (&'static str, &'static str, fn(&Suite<'c>) -> Checks);

fn two_plus_z() -> RationalSymbol {
    RationalSymbol::polynomial(Polynomial::from_real(&[2.0, 1.0]))
}

fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Bounded => "bounded",
        Verdict::UnboundedEvidence => "unbounded_evidence",
        Verdict::Inconclusive => "inconclusive",
    }
}

struct Suite<'a> {
    cfg: &'a ExperimentConfig,
}

impl Suite<'_> {
    fn rng(&self, stream: u64) -> Rng64 {
        sample::rng(self.cfg.seed, stream)
    }

    fn denjoy_wolff(&self) -> Checks {
        let tol = &self.cfg.tolerances;
        let mut out = Vec::new();
        for mu in [0.3, 0.5, 0.7] {
            let term = dw_limit_sequence(&MoebiusTransform::canonical_hyperbolic(mu)?, 200)?[199];
            out.push(Record::within(&format!("dw_limit_hyperbolic_mu_{mu}"), "denjoy_wolff_limit", mu, term, tol.dw_hyperbolic));
        }
        let term = dw_limit_sequence(&MoebiusTransform::parabolic_cayley(-1.0)?, 400)?[399];
        out.push(Record::within("dw_limit_parabolic", "denjoy_wolff_limit", 1.0, term, tol.dw_parabolic));
        Ok(out)
    }

    fn radius(&self, name: &str, tag: &str, phi: MoebiusTransform, tol: f64) -> Result<Record, Box<dyn std::error::Error>> {
        let grid = DiscGrid::new(self.cfg.grid)?;
        let op = WeightedCompositionOp::new(two_plus_z(), phi, Space::Bloch)?;
        let est = spectral_radius_estimate(&op, &[100], &grid)?;
        Ok(Record::at_most(name, tag, 0.0, (est.last() - 3.0).abs() / 3.0, tol)
            .with_note(format!("n = 100 estimate {} vs 3 (relative gap)", est.last())))
    }

    fn radii(&self) -> Checks {
        let tol = &self.cfg.tolerances;
        let parabolic = MoebiusTransform::parabolic_cayley(-1.0)?;
        let mut out = vec![
            self.radius("radius_hyperbolic", "hyperbolic_spectral_radius", MoebiusTransform::canonical_hyperbolic(0.5)?, tol.radius_hyperbolic)?,
            self.radius("radius_parabolic", "parabolic_spectral_radius", parabolic, tol.radius_parabolic)?,
        ];
        let op = WeightedCompositionOp::new(two_plus_z(), parabolic, Space::Bloch)?;
        let shape = predict_spectrum(&op, &self.cfg.verdict)?.shape;
        out.push(match shape {
            SpectrumShape::Circle { radius } => Record::within("parabolic_circle", "parabolic_circle", 3.0, radius, tol.shape * 3.0),
            other => Record::equal("parabolic_circle", "parabolic_circle", "circle", &format!("{other:?}")),
        });
        Ok(out)
    }

    fn half_turn_cloud(&self) -> Checks {
        let tol = &self.cfg.tolerances;
        let grid = DiscGrid::new(self.cfg.grid)?;
        let op = WeightedCompositionOp::new(two_plus_z(), MoebiusTransform::rotation(std::f64::consts::PI), Space::Bloch)?;
        let cloud = elliptic_root_cloud(&op, &grid)?;
        let (lo, hi) = (3f64.sqrt() - tol.root_cloud, 5f64.sqrt() + tol.root_cloud);
        let outside = cloud.points.iter().filter(|l| !(lo <= l.norm() && l.norm() <= hi)).count();
        let hit = [2.0, -2.0]
            .iter()
            .map(|t| cloud.points.iter().map(|l| (l - t).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        let key = |l: Complex64| ((l.re + 0.0).to_bits(), (l.im + 0.0).to_bits());
        let keys: HashSet<(u64, u64)> = cloud.points.iter().map(|&l| key(l)).collect();
        let asymmetric = cloud.points.iter().filter(|&&l| !keys.contains(&key(-l))).count();
        Ok(vec![
            Record::within("root_cloud_period", "periodic_root_cloud", 2.0, cloud.m as f64, 0.0),
            Record::at_most("root_cloud_outside_annulus", "periodic_root_cloud", 0.0, outside as f64, 0.0)
                .with_note(format!("{} points", cloud.points.len())),
            Record::at_most("root_cloud_distance_to_pm2", "periodic_root_cloud", 0.0, hit, tol.root_cloud_hit),
            Record::at_most("root_cloud_unmatched_antipodes", "periodic_root_cloud", 0.0, asymmetric as f64, 0.0),
        ])
    }

    fn binomial(&self) -> Checks {
        let mut r = self.rng(5);
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let op = WeightedCompositionOp::new(sample::invertible_weight(&mut r), sample::automorphism(&mut r), Space::Bloch)?;
            let lambda = sample::point_in_disc(&mut r, 2.0);
            let f = sample::polynomial(&mut r, 4, 1.0);
            let z = sample::point_in_disc(&mut r, 0.99);
            worst = worst.max(op.binomial_identity_residual(lambda, 10, &f, z)?);
        }
        Ok(vec![Record::at_most("binomial_identity_residual", "binomial_identity", 0.0, worst, self.cfg.tolerances.binomial)])
    }

    fn orbit_chain(&self) -> Checks {
        let mut r = self.rng(6);
        let family = TestFamily {
            grid: DiscGrid::new(GridParams { radial_levels: 8, max_angular: 128, ..GridParams::default() })?,
            max_monomial: 4,
            ..TestFamily::default()
        };
        let (mut excess, mut below_one, mut above_bound) = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for _ in 0..50 {
            let phi = sample::automorphism(&mut r);
            let step = phi.origin_displacement();
            for n in 1..=100u64 {
                excess = excess.max(phi.iterate(n).origin_displacement() - n as f64 * step);
            }
            for n in [1, 5, 20, 50, 100] {
                let lower = composition_norm_lower_bound(&phi, n, Space::Bloch, &family)?;
                below_one = below_one.max(1.0 - lower);
                above_bound = above_bound.max(lower - composition_norm_bound(&phi, n, Space::Bloch));
            }
        }
        Ok(vec![
            Record::at_most("orbit_distance_excess", "orbit_distance_chain", 0.0, excess, self.cfg.tolerances.distance_chain),
            Record::at_most("composition_lower_bound_below_one", "composition_norm_bound", 0.0, below_one, 0.0),
            Record::at_most("composition_lower_bound_above_upper", "composition_norm_bound", 0.0, above_bound, 0.0),
        ])
    }

    fn round_trip(&self) -> Checks {
        let mut r = self.rng(7);
        let policy = &self.cfg.verdict;
        let mut worst = 0.0f64;
        let mut not_dual = 0;
        for i in 0..20 {
            let phi = match i % 3 {
                0 => sample::hyperbolic(&mut r),
                1 => sample::parabolic(&mut r),
                _ => sample::elliptic(&mut r),
            };
            let space = if i % 2 == 0 { Space::Bloch } else { Space::Dirichlet };
            let op = WeightedCompositionOp::new(sample::invertible_weight(&mut r), phi, space)?;
            let inv = check_invertible(&op, policy)?;
            let Some(inverse) = inv.inverse.clone() else {
                return Ok(vec![Record::equal("inverse_round_trip", "inverse_operator", "invertible", "not invertible")
                    .with_note(inv.failure().unwrap_or_default())]);
            };
            for _ in 0..50 {
                let f = sample::polynomial(&mut r, 5, 1.0);
                let z = sample::point_in_disc(&mut r, 0.99);
                let g = FnHolomorphic { value: |w| inverse.apply(&f, w), derivative: |_| Complex64::new(0.0, 0.0) };
                worst = worst.max(rel_err(op.apply(&g, z), f.value(z)));
            }
            let a = predict_spectrum_from(&op, &inv, policy)?.shape;
            let b = predict_spectrum(&inverse, policy)?.shape;
            let closed = matches!(a, SpectrumShape::Circle { .. } | SpectrumShape::Annulus { .. });
            if !(closed && a.reciprocal().approx_eq(&b, self.cfg.tolerances.shape)) {
                not_dual += 1;
            }
        }
        Ok(vec![
            Record::at_most("inverse_round_trip", "inverse_operator", 0.0, worst, self.cfg.tolerances.round_trip),
            Record::at_most("spectrum_duality_failures", "inverse_operator", 0.0, not_dual as f64, 0.0),
        ])
    }

    fn blaschke(&self) -> Checks {
        let mut r = self.rng(8);
        let grid = DiscGrid::new(self.cfg.grid)?;
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let b = sample::blaschke(&mut r, 5);
            let k = blaschke_k(&b);
            for p in grid.interior() {
                worst = worst.max((1.0 - b.value(p.z).norm_sqr()) / p.gap / k);
            }
        }
        Ok(vec![Record::at_most("blaschke_ratio_over_k", "blaschke_derivative_constant", 1.0, worst, 0.0)])
    }

    fn dirichlet(&self) -> Checks {
        let rule = QuadratureRule::default();
        let mut worst = 0.0f64;
        for n in 1..=20 {
            worst = worst.max((dirichlet_norm(&Polynomial::monomial(n), &rule).value - (n as f64).sqrt()).abs());
        }
        let family = TestFamily::default();
        let mut ratio = 0.0f64;
        for mu in [0.3, 0.5, 0.7] {
            let psi = MoebiusTransform::canonical_hyperbolic(mu)?;
            for j in 1..=50 {
                let lower = composition_norm_lower_bound(&psi, j, Space::Dirichlet, &family)?;
                ratio = ratio.max(lower / composition_norm_bound(&psi, j, Space::Dirichlet));
            }
        }
        Ok(vec![
            Record::at_most("dirichlet_monomial_norms", "dirichlet_monomial_norm", 0.0, worst, self.cfg.tolerances.dirichlet_monomial),
            Record::at_most("dirichlet_lower_over_bound", "dirichlet_composition_bound", 1.0, ratio, 0.0),
        ])
    }

    fn unweighted(&self) -> Checks {
        let mut r = self.rng(10);
        let grid = DiscGrid::new(GridParams { radial_levels: 8, max_angular: 512, ..GridParams::default() })?;
        let schedule = [1, 2, 3, 5, 10, 20, 50, 100];
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let phi = sample::automorphism(&mut r);
            for space in [Space::Bloch, Space::Dirichlet] {
                let op = WeightedCompositionOp::new(RationalSymbol::one(), phi, space)?;
                let est = spectral_radius_estimate(&op, &schedule, &grid)?;
                worst = est.sequence.iter().fold(worst, |w, v| w.max((v - 1.0).abs()));
            }
        }
        Ok(vec![Record::within("unweighted_radius_deviation", "unweighted_spectral_radius", 0.0, worst, 0.0)])
    }

    /// `|f(z)| ≤ α ‖f‖ log(e / (1 - |z|²))` over random polynomials and log
    /// weight functions; α is raised to the observed ratio when exceeded.
    fn log_growth(&self) -> Checks {
        let mut r = self.rng(11);
        let grid = DiscGrid::new(self.cfg.grid)?;
        let mut ratio = 0.0f64;
        let mut embedding = 0.0f64;
        let check = |f: &dyn Holomorphic, ratio: &mut f64, embedding: &mut f64| -> Result<(), wcop::Error> {
            let norm = bloch_norm(f, &grid).value;
            if norm == 0.0 {
                return Ok(());
            }
            *ratio = ratio.max(log_growth_ratio(f, &grid) / norm);
            for s in [0.5, 1.0] {
                let lhs = weighted_sup_norm(f, s, &grid)?.value;
                *embedding = embedding.max(lhs / (log_weight_sup(s, &grid) * norm));
            }
            Ok(())
        };
        for _ in 0..20 {
            let degree = r.gen_range(1..=6);
            check(&sample::polynomial(&mut r, degree, 1.0), &mut ratio, &mut embedding)?;
            let a = sample::point_in_disc(&mut r, 0.99);
            check(&LogWeightFunction::new(a)?, &mut ratio, &mut embedding)?;
        }
        let alpha = self.cfg.alpha.max(ratio);
        let mut rec = Record::at_most("log_growth_ratio", "bloch_log_growth", alpha, ratio, 0.0);
        if alpha > self.cfg.alpha {
            rec = rec.with_note(format!("alpha raised from {} to {alpha}", self.cfg.alpha));
        }
        Ok(vec![rec, Record::at_most("weighted_embedding_ratio", "bloch_log_growth", alpha, embedding, 0.0)])
    }

    /// Verdicts on the boundedness and multiplier conditions for known cases.
    fn conditions(&self) -> Checks {
        let policy = &self.cfg.verdict;
        let psi = MoebiusTransform::canonical_hyperbolic(0.5)?;
        let op = WeightedCompositionOp::new(two_plus_z(), psi, Space::Bloch)?;
        let v = check_bounded(&op, policy)?.verdict;
        let zeros = vec![Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)];
        let b = BlaschkeProduct::new(zeros, Complex64::new(1.0, 0.0))?;
        let op = WeightedCompositionOp::new(two_plus_z(), b, Space::Bloch)?;
        let w = check_bounded(&op, policy)?.verdict;
        let log = FnHolomorphic {
            value: |z: Complex64| 1.0 - (1.0 - z).ln(),
            derivative: |z: Complex64| 1.0 / (1.0 - z),
        };
        let m = holomorphic_multiplier_verdict(&log, policy)?.verdict;
        Ok(vec![
            Record::equal("bounded_moebius_weighted", "boundedness_conditions", "bounded", verdict_label(v)),
            Record::equal("bounded_blaschke_weighted", "boundedness_conditions", "bounded", verdict_label(w)),
            Record::equal("log_multiplier_unbounded", "multiplier_conditions", "unbounded_evidence", verdict_label(m)),
        ])
    }
}

pub fn verify<'c>(cfg: &'c ExperimentConfig) -> Result<Report, CliError> {
    let suite = Suite { cfg };
    let groups: [Group<'c>; 11] = [
        ("denjoy_wolff", "denjoy_wolff_limit", Suite::denjoy_wolff),
        ("radii", "spectral_radius_limit", Suite::radii),
        ("half_turn_cloud", "periodic_root_cloud", Suite::half_turn_cloud),
        ("binomial", "binomial_identity", Suite::binomial),
        ("orbit_chain", "orbit_distance_chain", Suite::orbit_chain),
        ("round_trip", "inverse_operator", Suite::round_trip),
        ("blaschke", "blaschke_derivative_constant", Suite::blaschke),
        ("dirichlet", "dirichlet_composition_bound", Suite::dirichlet),
        ("unweighted", "unweighted_spectral_radius", Suite::unweighted),
        ("log_growth", "bloch_log_growth", Suite::log_growth),
        ("conditions", "boundedness_conditions", Suite::conditions),
    ];
    let mut report = Report::new("verify", cfg);
    for (group, tag, run) in groups {
        match run(&suite) {
            Ok(records) => records.into_iter().for_each(|r| report.push(r)),
            Err(e) => report.push(Record::errored(group, tag, &e)),
        }
    }
    let failed: Vec<&str> = report.records.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    report.data = json!({ "checks": report.records.len(), "failed": failed });
    Ok(report)
}
