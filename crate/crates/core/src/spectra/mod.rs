//! Spectrum predictions for invertible `uC_φ` with `φ` a disc automorphism,
//! and the numerical estimators that cross-check them.

mod cloud;
mod estimate;
mod probe;

pub use cloud::{elliptic_root_cloud, elliptic_root_cloud_with, hausdorff_to_subset, RootCloud};
pub use estimate::{aitken, spectral_radius_estimate, spectral_radius_estimate_with, SpectralRadiusEstimate};
pub use probe::{conjecture_probe, truncation_eigenvalues, ConjectureProbe, ProbeRegion, ProbeSample};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::{classify, elliptic_period, AutomorphismClass, AutomorphismKind, MoebiusTransform};
use crate::operators::{check_invertible, Invertibility, Space, VerdictPolicy, WeightedCompositionOp};
use crate::symbols::Holomorphic;

/// Largest period recognised by the elliptic dispatch.
pub const MAX_PERIOD: u32 = 1024;

/// Relative tolerance for treating `|u(a)|` and `|u(b)|` as equal.
const EQUAL_MODULI_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum SpectrumShape {
    Circle { radius: f64 },
    /// `exact = false`: only the inclusion of the spectrum in the annulus is
    /// known.
    Annulus { r_min: f64, r_max: f64, exact: bool },
    /// Closure of the `m`-th roots of the values of `u_(m)`, sampled.
    RootSetClosure { m: u32, points: Vec<Complex64>, coverage: Option<f64> },
}

impl SpectrumShape {
    /// The shape of `{1/λ}`; root clouds are mapped pointwise.
    pub fn reciprocal(&self) -> SpectrumShape {
        match self {
            SpectrumShape::Circle { radius } => SpectrumShape::Circle { radius: 1.0 / radius },
            SpectrumShape::Annulus { r_min, r_max, exact } => {
                SpectrumShape::Annulus { r_min: 1.0 / r_max, r_max: 1.0 / r_min, exact: *exact }
            }
            SpectrumShape::RootSetClosure { m, points, coverage } => SpectrumShape::RootSetClosure {
                m: *m,
                points: points.iter().map(|p| 1.0 / p).collect(),
                coverage: *coverage,
            },
        }
    }

    /// Largest modulus in the shape.
    pub fn radius(&self) -> f64 {
        match self {
            SpectrumShape::Circle { radius } => *radius,
            SpectrumShape::Annulus { r_max, .. } => *r_max,
            SpectrumShape::RootSetClosure { points, .. } => points.iter().map(|p| p.norm()).fold(0.0, f64::max),
        }
    }

    /// Parameter-wise comparison of circles and annuli within `rel`.
    pub fn approx_eq(&self, other: &SpectrumShape, rel: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= rel * a.abs().max(b.abs());
        match (self, other) {
            (SpectrumShape::Circle { radius: a }, SpectrumShape::Circle { radius: b }) => close(*a, *b),
            (
                SpectrumShape::Annulus { r_min: a0, r_max: a1, exact: e },
                SpectrumShape::Annulus { r_min: b0, r_max: b1, exact: f },
            ) => e == f && close(*a0, *b0) && close(*a1, *b1),
            _ => false,
        }
    }
}

/// Which result the prediction comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Multiplication operator: closure of `u(D)`.
    MultiplicationImage,
    /// Parabolic map: the circle `|λ| = |u(a)|`.
    ParabolicCircle,
    /// Hyperbolic map, Bloch space: annulus between `|u(a)|` and `|u(b)|`.
    HyperbolicAnnulus,
    /// Hyperbolic map with `|u(a)| = |u(b)|`: the circle.
    HyperbolicEqualModuli,
    /// Hyperbolic map, Dirichlet space: annulus inclusion.
    DirichletHyperbolicAnnulus,
    /// Periodic elliptic map: closure of the roots of `u_(m)`.
    EllipticPeriodicRoots,
    /// Aperiodic elliptic map: the circle `|λ| = |u(p)|`.
    EllipticAperiodicCircle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assumptions {
    pub invertible: bool,
    /// The weight is rational and pole-free on the closed disc.
    pub weight_in_class: bool,
    pub classification: AutomorphismKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPrediction {
    pub shape: SpectrumShape,
    pub provenance: Provenance,
    pub assumptions: Assumptions,
}

pub(crate) fn automorphism_of(op: &WeightedCompositionOp) -> Result<MoebiusTransform> {
    op.selfmap()
        .automorphism()
        .copied()
        .ok_or_else(|| Error::precondition("spectral predictions need a disc automorphism as the selfmap"))
}

/// `|u|` at the boundary fixed points `(a, b)` of a hyperbolic map.
pub(crate) fn hyperbolic_moduli(op: &WeightedCompositionOp, class: &AutomorphismClass) -> Result<(f64, f64)> {
    let (a, b) = class
        .attractive
        .zip(class.repulsive)
        .ok_or_else(|| Error::Internal("hyperbolic class without boundary fixed points".into()))?;
    Ok((op.weight().value(a).norm(), op.weight().value(b).norm()))
}

/// Spectrum of an invertible `uC_φ` from the dynamics of `φ` and the values
/// of `u` at its fixed points.
pub fn predict_spectrum(op: &WeightedCompositionOp, policy: &VerdictPolicy) -> Result<SpectrumPrediction> {
    automorphism_of(op)?;
    let inv = check_invertible(op, policy)?;
    predict_spectrum_from(op, &inv, policy)
}

/// [`predict_spectrum`] with the invertibility check already done.
pub fn predict_spectrum_from(
    op: &WeightedCompositionOp,
    inv: &Invertibility,
    policy: &VerdictPolicy,
) -> Result<SpectrumPrediction> {
    let phi = automorphism_of(op)?;
    let class = classify(&phi)?;
    let assumptions = Assumptions { invertible: inv.invertible, weight_in_class: true, classification: class.kind };

    if class.kind == AutomorphismKind::Identity {
        let cloud = elliptic_root_cloud_with(op, &policy.grid()?, 1, crate::par::Exec::default())?;
        return Ok(SpectrumPrediction {
            shape: cloud.into_shape(),
            provenance: Provenance::MultiplicationImage,
            assumptions,
        });
    }
    if !inv.invertible {
        return Err(Error::precondition(format!(
            "operator is not invertible: {}",
            inv.failure().unwrap_or_default()
        )));
    }
    let u = op.weight();
    let (shape, provenance) = match class.kind {
        AutomorphismKind::Parabolic => {
            let a = class.primary_point().expect("parabolic fixed point");
            (SpectrumShape::Circle { radius: u.value(a).norm() }, Provenance::ParabolicCircle)
        }
        AutomorphismKind::Hyperbolic => {
            let (ua, ub) = hyperbolic_moduli(op, &class)?;
            let (lo, hi) = (ua.min(ub), ua.max(ub));
            match op.space() {
                Space::Bloch if hi - lo <= EQUAL_MODULI_TOL * hi => {
                    (SpectrumShape::Circle { radius: hi }, Provenance::HyperbolicEqualModuli)
                }
                Space::Bloch => {
                    (SpectrumShape::Annulus { r_min: lo, r_max: hi, exact: false }, Provenance::HyperbolicAnnulus)
                }
                Space::Dirichlet => (
                    SpectrumShape::Annulus { r_min: lo, r_max: hi, exact: false },
                    Provenance::DirichletHyperbolicAnnulus,
                ),
            }
        }
        AutomorphismKind::Elliptic => match elliptic_period(&phi, &class, MAX_PERIOD) {
            Some(m) => {
                let cloud = elliptic_root_cloud_with(op, &policy.grid()?, m, crate::par::Exec::default())?;
                (cloud.into_shape(), Provenance::EllipticPeriodicRoots)
            }
            None => {
                let p = class.primary_point().expect("elliptic fixed point");
                (SpectrumShape::Circle { radius: u.value(p).norm() }, Provenance::EllipticAperiodicCircle)
            }
        },
        AutomorphismKind::Identity => unreachable!(),
    };
    Ok(SpectrumPrediction { shape, provenance, assumptions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{Polynomial, RationalSymbol};

    fn two_plus_z() -> RationalSymbol {
        RationalSymbol::polynomial(Polynomial::from_real(&[2.0, 1.0]))
    }

    fn predict(phi: MoebiusTransform, space: Space) -> Result<SpectrumPrediction> {
        let op = WeightedCompositionOp::new(two_plus_z(), phi, space)?;
        predict_spectrum(&op, &VerdictPolicy::default())
    }

    #[test]
    fn parabolic_circle() {
        let p = predict(MoebiusTransform::parabolic_cayley(-1.0).unwrap(), Space::Bloch).unwrap();
        assert_eq!(p.provenance, Provenance::ParabolicCircle);
        assert!(p.shape.approx_eq(&SpectrumShape::Circle { radius: 3.0 }, 1e-12));
        assert!(p.assumptions.invertible);
    }

    #[test]
    fn hyperbolic_annulus() {
        let psi = MoebiusTransform::canonical_hyperbolic(0.5).unwrap();
        let p = predict(psi, Space::Bloch).unwrap();
        assert_eq!(p.provenance, Provenance::HyperbolicAnnulus);
        assert!(p.shape.approx_eq(&SpectrumShape::Annulus { r_min: 1.0, r_max: 3.0, exact: false }, 1e-12));
        let d = predict(psi, Space::Dirichlet).unwrap();
        assert_eq!(d.provenance, Provenance::DirichletHyperbolicAnnulus);
    }

    #[test]
    fn equal_moduli_circle() {
        // u = 2 + z² has |u(1)| = |u(-1)| = 3
        let u = RationalSymbol::polynomial(Polynomial::from_real(&[2.0, 0.0, 1.0]));
        let op = WeightedCompositionOp::new(u, MoebiusTransform::canonical_hyperbolic(0.3).unwrap(), Space::Bloch).unwrap();
        let p = predict_spectrum(&op, &VerdictPolicy::default()).unwrap();
        assert_eq!(p.provenance, Provenance::HyperbolicEqualModuli);
        assert!(p.shape.approx_eq(&SpectrumShape::Circle { radius: 3.0 }, 1e-12));
    }

    #[test]
    fn irrational_rotation_circle() {
        let theta = (5f64.sqrt() - 1.0) / 2.0;
        let p = predict(MoebiusTransform::rotation(std::f64::consts::TAU * theta), Space::Bloch).unwrap();
        assert_eq!(p.provenance, Provenance::EllipticAperiodicCircle);
        assert!(p.shape.approx_eq(&SpectrumShape::Circle { radius: 2.0 }, 1e-12));
    }

    #[test]
    fn periodic_rotation_cloud() {
        let p = predict(MoebiusTransform::rotation(std::f64::consts::PI), Space::Bloch).unwrap();
        assert_eq!(p.provenance, Provenance::EllipticPeriodicRoots);
        let SpectrumShape::RootSetClosure { m, points, .. } = &p.shape else { panic!() };
        assert_eq!(*m, 2);
        assert!(points.iter().all(|l| l.norm() >= 3f64.sqrt() - 1e-9 && l.norm() <= 5f64.sqrt() + 1e-9));
    }

    #[test]
    fn identity_gives_image_of_weight() {
        let p = predict(MoebiusTransform::identity(), Space::Bloch).unwrap();
        assert_eq!(p.provenance, Provenance::MultiplicationImage);
        let SpectrumShape::RootSetClosure { m: 1, points, .. } = &p.shape else { panic!() };
        assert!(points.iter().all(|l| (l - 2.0).norm() <= 1.0 + 1e-12));
    }

    #[test]
    fn non_invertible_is_rejected() {
        let u = RationalSymbol::polynomial(Polynomial::from_real(&[0.5, 1.0]));
        let op = WeightedCompositionOp::new(u, MoebiusTransform::parabolic_cayley(1.0).unwrap(), Space::Bloch).unwrap();
        let err = predict_spectrum(&op, &VerdictPolicy::default()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)), "{err}");
    }

    #[test]
    fn reciprocal_shapes() {
        let a = SpectrumShape::Annulus { r_min: 0.5, r_max: 4.0, exact: false };
        assert_eq!(a.reciprocal(), SpectrumShape::Annulus { r_min: 0.25, r_max: 2.0, exact: false });
        assert_eq!(SpectrumShape::Circle { radius: 4.0 }.reciprocal(), SpectrumShape::Circle { radius: 0.25 });
    }
}
