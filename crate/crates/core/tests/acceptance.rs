//! Acceptance run: one line per criterion, non-zero exit on any failure.

mod common;

use std::collections::HashSet;
use std::panic;
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use wcop::moebius::dw_limit_sequence;
use wcop::norms::{dirichlet_norm, GridParams};
use wcop::operators::{
    check_invertible, composition_norm_bound, composition_norm_lower_bound, TestFamily,
};
use wcop::spectra::{elliptic_root_cloud, predict_spectrum, predict_spectrum_from, spectral_radius_estimate};
use wcop::symbols::{blaschke_k, FnHolomorphic, Holomorphic};
use wcop::{
    Complex64, DiscGrid, MoebiusTransform, Polynomial, QuadratureRule, RationalSymbol, Space, SpectrumShape,
    VerdictPolicy, WeightedCompositionOp,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn two_plus_z() -> RationalSymbol {
    RationalSymbol::polynomial(Polynomial::from_real(&[2.0, 1.0]))
}

fn denjoy_wolff_limits() -> Outcome {
    let mut worst = 0.0f64;
    for mu in [0.3, 0.5, 0.7] {
        let psi = MoebiusTransform::canonical_hyperbolic(mu).unwrap();
        let term = dw_limit_sequence(&psi, 200).map_err(|e| e.to_string())?[199];
        ensure((term - mu).abs() <= 1e-2, || format!("μ = {mu}: n = 200 term {term}"))?;
        worst = worst.max((term - mu).abs());
    }
    let parabolic = MoebiusTransform::parabolic_cayley(-1.0).unwrap();
    let term = dw_limit_sequence(&parabolic, 400).map_err(|e| e.to_string())?[399];
    ensure((term - 1.0).abs() <= 5e-2, || format!("parabolic n = 400 term {term}"))?;
    Ok(format!("max |term - μ| = {worst:.2e}, parabolic term {term:.4}"))
}

fn radius_estimate(phi: MoebiusTransform, rel: f64) -> Outcome {
    let grid = DiscGrid::new(GridParams { radial_levels: 12, ..GridParams::default() }).unwrap();
    let op = WeightedCompositionOp::new(two_plus_z(), phi, Space::Bloch).unwrap();
    let est = spectral_radius_estimate(&op, &[100], &grid).map_err(|e| e.to_string())?;
    let gap = (est.last() - 3.0).abs() / 3.0;
    ensure(gap <= rel, || format!("n = 100 estimate {} vs 3", est.last()))?;
    Ok(format!("n = 100 estimate {:.6}, relative gap {gap:.2e}", est.last()))
}

fn hyperbolic_radius() -> Outcome {
    radius_estimate(MoebiusTransform::canonical_hyperbolic(0.5).unwrap(), 0.02)
}

fn parabolic_radius_and_circle() -> Outcome {
    let phi = MoebiusTransform::parabolic_cayley(-1.0).unwrap();
    let line = radius_estimate(phi, 0.05)?;
    let op = WeightedCompositionOp::new(two_plus_z(), phi, Space::Bloch).unwrap();
    let shape = predict_spectrum(&op, &VerdictPolicy::default()).map_err(|e| e.to_string())?.shape;
    ensure(shape.approx_eq(&SpectrumShape::Circle { radius: 3.0 }, 1e-12), || format!("predicted {shape:?}"))?;
    Ok(format!("{line}; predicted circle of radius 3"))
}

fn half_turn_root_cloud() -> Outcome {
    let grid = DiscGrid::new(GridParams::default()).unwrap();
    let op = WeightedCompositionOp::new(two_plus_z(), MoebiusTransform::rotation(std::f64::consts::PI), Space::Bloch)
        .unwrap();
    let cloud = elliptic_root_cloud(&op, &grid).map_err(|e| e.to_string())?;
    ensure(cloud.m == 2, || format!("period {}", cloud.m))?;
    let (lo, hi) = (3f64.sqrt() - 1e-9, 5f64.sqrt() + 1e-9);
    let bad = cloud.points.iter().filter(|l| !(lo <= l.norm() && l.norm() <= hi)).count();
    ensure(bad == 0, || format!("{bad} points outside √3 ≤ |λ| ≤ √5"))?;
    for target in [2.0, -2.0] {
        let d = cloud.points.iter().map(|l| (l - target).norm()).fold(f64::INFINITY, f64::min);
        ensure(d <= 1e-6, || format!("nearest point to {target} at distance {d}"))?;
    }
    // adding 0.0 maps -0.0 to 0.0, so equal numbers have equal keys
    let key = |l: Complex64| ((l.re + 0.0).to_bits(), (l.im + 0.0).to_bits());
    let keys: HashSet<(u64, u64)> = cloud.points.iter().map(|&l| key(l)).collect();
    let asymmetric = cloud.points.iter().filter(|&&l| !keys.contains(&key(-l))).count();
    ensure(asymmetric == 0, || format!("{asymmetric} points without an exact antipode"))?;
    Ok(format!("{} points, all in the annulus, exactly symmetric", cloud.points.len()))
}

fn binomial_identity() -> Outcome {
    let mut r = rng(1005);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let op = WeightedCompositionOp::new(invertible_weight(&mut r), automorphism(&mut r), Space::Bloch).unwrap();
        let lambda = point_in_disc(&mut r, 2.0);
        let f = test_function(polynomial(&mut r, 4, 1.0));
        let z = point_in_disc(&mut r, 0.99);
        let res = op.binomial_identity_residual(lambda, 10, &f, z).map_err(|e| e.to_string())?;
        worst = worst.max(res);
    }
    ensure(worst <= 1e-9, || format!("worst residual {worst:e}"))?;
    Ok(format!("worst residual {worst:.2e}"))
}

fn orbit_chain_and_norm_sandwich() -> Outcome {
    let mut r = rng(1006);
    let family = TestFamily {
        grid: DiscGrid::new(GridParams { radial_levels: 8, max_angular: 128, ..GridParams::default() }).unwrap(),
        max_monomial: 4,
        ..TestFamily::default()
    };
    let mut tightest = f64::INFINITY;
    for _ in 0..50 {
        let phi = automorphism(&mut r);
        let step = phi.origin_displacement();
        for n in 1..=100u64 {
            let d = phi.iterate(n).origin_displacement();
            ensure(d <= n as f64 * step + 1e-10, || format!("n = {n}: ρ = {d} > {}", n as f64 * step))?;
        }
        for n in [1, 5, 20, 50, 100] {
            let lower = composition_norm_lower_bound(&phi, n, Space::Bloch, &family).map_err(|e| e.to_string())?;
            let upper = composition_norm_bound(&phi, n, Space::Bloch);
            ensure(1.0 <= lower && lower <= upper, || format!("n = {n}: lower {lower}, upper {upper}"))?;
            tightest = tightest.min(upper - lower);
        }
    }
    Ok(format!("chain holds for 50 maps, n ≤ 100; smallest upper - lower = {tightest:.3}"))
}

fn inverse_round_trip() -> Outcome {
    let mut r = rng(1007);
    let policy = VerdictPolicy::default();
    let mut worst = 0.0f64;
    for i in 0..20 {
        let phi = match i % 3 {
            0 => hyperbolic(&mut r),
            1 => parabolic(&mut r),
            _ => {
                let t = MoebiusTransform::disc_automorphism(0.0, point_in_disc(&mut r, 0.9)).unwrap();
                t.inverse().compose(&MoebiusTransform::rotation(r.gen_range(0.5..2.5))).compose(&t)
            }
        };
        let space = if i % 2 == 0 { Space::Bloch } else { Space::Dirichlet };
        let op = WeightedCompositionOp::new(invertible_weight(&mut r), phi, space).unwrap();
        let inv = check_invertible(&op, &policy).map_err(|e| e.to_string())?;
        let inverse = inv.inverse.clone().ok_or_else(|| format!("not invertible: {:?}", inv.failure()))?;
        for _ in 0..50 {
            let f = polynomial(&mut r, 5, 1.0);
            let z = point_in_disc(&mut r, 0.99);
            let g = FnHolomorphic { value: |w| inverse.apply(&f, w), derivative: |_| Complex64::new(0.0, 0.0) };
            worst = worst.max(rel_err(op.apply(&g, z), f.value(z)));
        }
        let a = predict_spectrum_from(&op, &inv, &policy).map_err(|e| e.to_string())?.shape;
        let b = predict_spectrum(&inverse, &policy).map_err(|e| e.to_string())?.shape;
        let dual = matches!(a, SpectrumShape::Circle { .. } | SpectrumShape::Annulus { .. }) && a.reciprocal().approx_eq(&b, 1e-9);
        ensure(dual, || format!("{a:?} and {b:?} are not reciprocal"))?;
    }
    ensure(worst <= 1e-9, || format!("worst relative deviation {worst:e}"))?;
    Ok(format!("worst relative deviation {worst:.2e}; predicted shapes reciprocal"))
}

fn blaschke_constant() -> Outcome {
    let mut r = rng(1008);
    let grid = DiscGrid::new(GridParams::default()).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let b = blaschke(&mut r, 5);
        let k = blaschke_k(&b);
        for p in grid.interior() {
            let ratio = (1.0 - b.value(p.z).norm_sqr()) / p.gap;
            ensure(ratio <= k, || format!("ratio {ratio} > K = {k} at {}", p.z))?;
            worst = worst.max(ratio / k);
        }
    }
    Ok(format!("max ratio / K = {worst:.4} over {} points", grid.interior().len()))
}

fn dirichlet_norms_and_bound() -> Outcome {
    let rule = QuadratureRule::default();
    let mut worst = 0.0f64;
    for n in 1..=20 {
        let got = dirichlet_norm(&Polynomial::monomial(n), &rule).value;
        worst = worst.max((got - (n as f64).sqrt()).abs());
    }
    ensure(worst <= 1e-8, || format!("monomial norm error {worst:e}"))?;
    let family = TestFamily::default();
    let mut tightest = f64::INFINITY;
    for mu in [0.3, 0.5, 0.7] {
        let psi = MoebiusTransform::canonical_hyperbolic(mu).unwrap();
        for j in 1..=50 {
            let lower = composition_norm_lower_bound(&psi, j, Space::Dirichlet, &family).map_err(|e| e.to_string())?;
            let bound = composition_norm_bound(&psi, j, Space::Dirichlet);
            ensure(lower <= bound, || format!("μ = {mu}, j = {j}: {lower} > {bound}"))?;
            tightest = tightest.min(bound - lower);
        }
    }
    Ok(format!("monomial norm error {worst:.1e}; smallest bound - lower = {tightest:.3}"))
}

fn unweighted_radius_is_one() -> Outcome {
    let mut r = rng(1010);
    let grid = DiscGrid::new(GridParams { radial_levels: 8, max_angular: 512, ..GridParams::default() }).unwrap();
    let schedule = [1, 2, 3, 5, 10, 20, 50, 100];
    for _ in 0..20 {
        let phi = automorphism(&mut r);
        for space in [Space::Bloch, Space::Dirichlet] {
            let op = WeightedCompositionOp::new(RationalSymbol::one(), phi, space).unwrap();
            let est = spectral_radius_estimate(&op, &schedule, &grid).map_err(|e| e.to_string())?;
            ensure(est.sequence.iter().all(|&v| v == 1.0), || format!("{:?}", est.sequence))?;
        }
    }
    Ok("every entry exactly 1 for 20 maps in both spaces".into())
}

type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("Denjoy-Wolff limit of the origin orbit", 1_000, denjoy_wolff_limits),
        ("hyperbolic spectral radius estimate", 5_000, hyperbolic_radius),
        ("parabolic spectral radius and circle", 5_000, parabolic_radius_and_circle),
        ("half-turn root cloud", 2_000, half_turn_root_cloud),
        ("binomial identity", 1_000, binomial_identity),
        ("orbit distance chain and norm sandwich", 5_000, orbit_chain_and_norm_sandwich),
        ("inverse operator round trip", 2_000, inverse_round_trip),
        ("Blaschke derivative constant", 2_000, blaschke_constant),
        ("Dirichlet norms and composition bound", 5_000, dirichlet_norms_and_bound),
        ("unweighted spectral radius", 1_000, unweighted_radius_is_one),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, limit_ms, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(run).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = start.elapsed();
        let limit = Duration::from_millis(*limit_ms);
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "[{}] {:>2} {name}: {detail} ({:.3} s, limit {} s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            limit.as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
