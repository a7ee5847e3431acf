use num_complex::Complex64;

use super::Space;
use crate::error::{Error, Result};
use crate::moebius::MoebiusTransform;
use crate::norms::{DiscGrid, GridParams, QuadratureRule};
use crate::par::Exec;
use crate::symbols::{Holomorphic, LogWeightFunction};

/// Upper bound for `‖C_{φ_n}‖`.
///
/// Bloch: `1 + ρ(φ_n(0), 0)`, which is at most `1 + n ρ(φ(0), 0)`.
/// Dirichlet: `√2 (1 + n ρ(φ(0), 0))^{1/2}`.
pub fn composition_norm_bound(phi: &MoebiusTransform, n: u64, space: Space) -> f64 {
    match space {
        Space::Bloch => 1.0 + phi.iterate(n).origin_displacement(),
        Space::Dirichlet => std::f64::consts::SQRT_2 * (1.0 + phi.origin_displacement() * n as f64).sqrt(),
    }
}

/// Test functions and resolutions for [`composition_norm_lower_bound`].
#[derive(Debug, Clone)]
pub struct TestFamily {
    pub grid: DiscGrid,
    pub rule: QuadratureRule,
    /// Monomials `z^k` for `1 ≤ k ≤ max_monomial` are included.
    pub max_monomial: usize,
}

impl Default for TestFamily {
    fn default() -> Self {
        TestFamily {
            grid: DiscGrid::new(GridParams { radial_levels: 12, max_angular: 1024, ..GridParams::default() })
                .expect("default test grid"),
            rule: QuadratureRule::default(),
            max_monomial: 6,
        }
    }
}

enum TestFunction {
    Monomial(usize),
    Log(LogWeightFunction),
}

impl TestFunction {
    fn value(&self, z: Complex64) -> Complex64 {
        match self {
            TestFunction::Monomial(k) => z.powu(*k as u32),
            TestFunction::Log(f) => f.value(z),
        }
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        match self {
            TestFunction::Monomial(0) => Complex64::new(0.0, 0.0),
            TestFunction::Monomial(k) => z.powu(*k as u32 - 1) * *k as f64,
            TestFunction::Log(f) => f.derivative(z),
        }
    }

    /// Closed-form norm.
    fn norm(&self, space: Space) -> f64 {
        match (self, space) {
            (TestFunction::Monomial(0), _) => 1.0,
            (TestFunction::Monomial(1), Space::Bloch) => 1.0,
            (TestFunction::Monomial(k), Space::Bloch) => {
                // max of (1 - r²) k r^{k-1} at r² = (k-1)/(k+1)
                let k = *k as f64;
                k * 2.0 / (k + 1.0) * ((k - 1.0) / (k + 1.0)).powf((k - 1.0) / 2.0)
            }
            (TestFunction::Monomial(k), Space::Dirichlet) => (*k as f64).sqrt(),
            (TestFunction::Log(f), Space::Bloch) => {
                // sup over z of (1 - |z|²)|a| / |1 - conj(a) z|, attained on the ray through a
                let r = f.parameter().norm();
                if r == 0.0 {
                    return 1.0;
                }
                let x = (1.0 - (1.0 - r * r).sqrt()) / r;
                1.0 + r * (1.0 - x * x) / (1.0 - r * x)
            }
            (TestFunction::Log(f), Space::Dirichlet) => {
                let r2 = f.parameter().norm_sqr();
                (1.0 - (-r2).ln_1p()).sqrt()
            }
        }
    }
}

/// Largest observed `‖C_{φ_n} f‖ / ‖f‖` over constants, monomials and
/// log-weight functions peaking near `φ_n(0)`. Norms of the test functions
/// are exact. On the Bloch space the composed seminorm is a grid estimate.
/// On the Dirichlet space the composed area integral equals that of `f`
/// (φ_n is onto); quadrature of the composed integrand is not used because
/// it concentrates in a region of size `~ 1 - |φ_n(0)|` near the circle.
pub fn composition_norm_lower_bound(phi: &MoebiusTransform, n: u64, space: Space, family: &TestFamily) -> Result<f64> {
    if !phi.is_disc_automorphism() {
        return Err(Error::domain("composition norm bounds need a disc automorphism"));
    }
    let phi_n = phi.iterate(n);
    let mut tests: Vec<TestFunction> = (0..=family.max_monomial).map(TestFunction::Monomial).collect();
    let a = phi_n.eval(Complex64::new(0.0, 0.0));
    let origin_gap = phi_n.image_gap(Complex64::new(0.0, 0.0), 1.0);
    let peak = if origin_gap > 1e-10 { a } else { a / a.norm() * (1.0 - 1e-6) };
    for t in [1.0, 0.5] {
        if peak.norm() > 0.0 {
            tests.push(TestFunction::Log(LogWeightFunction::new(peak * t)?));
        }
    }

    let mut best: f64 = 0.0;
    for f in &tests {
        let at_origin = f.value(a).norm();
        let image = match space {
            Space::Bloch => {
                let levels = family.grid.max_over(Exec::default(), |p| {
                    if p.gap == 0.0 {
                        0.0
                    } else {
                        p.gap * (f.derivative(phi_n.eval(p.z)) * phi_n.derivative(p.z)).norm()
                    }
                });
                at_origin + levels[0].max(0.0)
            }
            Space::Dirichlet => {
                // automorphisms are onto, so the area formula gives D(f ∘ φ) = D(f)
                let d = f.norm(Space::Dirichlet).powi(2) - f.value(Complex64::new(0.0, 0.0)).norm_sqr();
                (at_origin * at_origin + d).sqrt()
            }
        };
        best = best.max(image / f.norm(space));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{bloch_norm, dirichlet_norm};
    use crate::symbols::Polynomial;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bound_examples() {
        let rot = MoebiusTransform::rotation(1.3);
        for n in [0, 1, 7, 100] {
            assert_eq!(composition_norm_bound(&rot, n, Space::Bloch), 1.0);
        }
        let psi = MoebiusTransform::canonical_hyperbolic(0.5).unwrap();
        let b = composition_norm_bound(&psi, 1, Space::Bloch);
        assert!((b - (1.0 + 0.5 * 2f64.ln())).abs() < 1e-14);
        assert!((composition_norm_bound(&psi, 0, Space::Dirichlet) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn closed_form_norms_match_estimators() {
        let grid = DiscGrid::new(GridParams { radial_levels: 16, ..GridParams::default() }).unwrap();
        let rule = QuadratureRule::new(64, 64).unwrap();
        for k in 1..=6 {
            let m = Polynomial::monomial(k);
            let exact = TestFunction::Monomial(k).norm(Space::Bloch);
            let est = bloch_norm(&m, &grid).value;
            assert!(est <= exact + 1e-12 && est > exact * 0.97, "k={k}: {est} vs {exact}");
            let d = dirichlet_norm(&m, &rule).value;
            assert!((d - TestFunction::Monomial(k).norm(Space::Dirichlet)).abs() < 1e-12);
        }
        for a in [c(0.3, 0.0), c(-0.5, 0.6), c(0.0, 0.9)] {
            let f = LogWeightFunction::new(a).unwrap();
            let t = TestFunction::Log(f);
            let est = bloch_norm(&f, &grid).value;
            assert!(est <= t.norm(Space::Bloch) + 1e-12 && est > t.norm(Space::Bloch) * 0.97);
            let d = dirichlet_norm(&f, &rule).value;
            let tol = 1e-6 / (1.0 - a.norm()).powi(3);
            assert!((d - t.norm(Space::Dirichlet)).abs() < tol, "{d} vs {}", t.norm(Space::Dirichlet));
        }
    }

    #[test]
    fn area_invariance_matches_quadrature_for_mild_maps() {
        let rule = QuadratureRule::new(96, 256).unwrap();
        let phi = MoebiusTransform::disc_automorphism(0.7, c(0.2, -0.3)).unwrap();
        let f = LogWeightFunction::new(c(0.4, 0.4)).unwrap();
        let composed = rule.integrate(Exec::default(), |z| (f.derivative(phi.eval(z)) * phi.derivative(z)).norm_sqr());
        let direct = TestFunction::Log(f).norm(Space::Dirichlet).powi(2) - 1.0;
        assert!((composed - direct).abs() < 1e-8, "{composed} vs {direct}");
    }

    #[test]
    fn lower_bounds_sit_under_upper_bounds() {
        let fam = TestFamily::default();
        let psi = MoebiusTransform::canonical_hyperbolic(0.5).unwrap();
        for n in [0, 1, 5, 20, 50] {
            for space in [Space::Bloch, Space::Dirichlet] {
                let lo = composition_norm_lower_bound(&psi, n, space, &fam).unwrap();
                let hi = composition_norm_bound(&psi, n, space);
                assert!(lo >= 1.0 - 1e-12 && lo <= hi, "n={n} {space:?}: {lo} vs {hi}");
            }
        }
    }
}
