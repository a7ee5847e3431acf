//! The operator `uC_φ f = u · (f ∘ φ)`: pointwise action and powers,
//! boundedness / multiplier / invertibility verdicts, composition-norm
//! bounds and Taylor truncations.

mod bounds;
mod truncation;
mod verdict;

pub use bounds::{composition_norm_bound, composition_norm_lower_bound, TestFamily};
pub use truncation::{taylor_truncation, taylor_truncation_with, TruncationMatrix, MAX_TRUNCATION};
pub use verdict::{
    check_bounded, check_invertible, check_multiplier, holomorphic_multiplier_verdict, BoundednessVerdict,
    Invertibility, Verdict, VerdictPolicy, Witness,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::MoebiusTransform;
use crate::norms::{ensure_selfmap, DiscGrid, GridParams};
use crate::par::Exec;
use crate::symbols::{BlaschkeProduct, Holomorphic, RationalSymbol, SelfMap};

/// Target space of the operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Bloch,
    Dirichlet,
}

/// The symbol `φ`.
#[derive(Debug, Clone, PartialEq)]
pub enum Selfmap {
    Moebius(MoebiusTransform),
    Blaschke(BlaschkeProduct),
    Rational(RationalSymbol),
}

impl Selfmap {
    /// The map as a disc automorphism, if it is one.
    pub fn automorphism(&self) -> Option<&MoebiusTransform> {
        match self {
            Selfmap::Moebius(m) if m.is_disc_automorphism() => Some(m),
            _ => None,
        }
    }

    /// Möbius maps and degree-one Blaschke products are univalent; other
    /// rational maps are only recognised when they are Möbius in disguise.
    pub fn is_univalent(&self) -> bool {
        match self {
            Selfmap::Moebius(_) => true,
            Selfmap::Blaschke(b) => b.degree() == 1,
            Selfmap::Rational(r) => {
                let (p, q) = (r.numerator(), r.denominator());
                p.degree() <= 1 && q.degree() <= 1 && {
                    let p1 = p.coeffs().get(1).copied().unwrap_or_default();
                    let q1 = q.coeffs().get(1).copied().unwrap_or_default();
                    let det = p1 * q.coeffs()[0] - p.coeffs().first().copied().unwrap_or_default() * q1;
                    det.norm() > 1e-12
                }
            }
        }
    }

    /// First `n` Taylor coefficients at 0.
    pub fn taylor(&self, n: usize) -> Result<Vec<Complex64>> {
        match self {
            Selfmap::Moebius(m) => RationalSymbol::from_moebius(m)?.taylor(n),
            Selfmap::Blaschke(b) => b.as_rational()?.taylor(n),
            Selfmap::Rational(r) => r.taylor(n),
        }
    }
}

impl Holomorphic for Selfmap {
    fn value(&self, z: Complex64) -> Complex64 {
        match self {
            Selfmap::Moebius(m) => m.eval(z),
            Selfmap::Blaschke(b) => b.value(z),
            Selfmap::Rational(r) => r.value(z),
        }
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        match self {
            Selfmap::Moebius(m) => m.derivative(z),
            Selfmap::Blaschke(b) => b.derivative(z),
            Selfmap::Rational(r) => Holomorphic::derivative(r, z),
        }
    }
}

impl SelfMap for Selfmap {
    fn image_gap(&self, z: Complex64, gap: f64) -> f64 {
        match self {
            Selfmap::Moebius(m) => m.image_gap(z, gap),
            Selfmap::Blaschke(b) => b.image_gap(z, gap),
            Selfmap::Rational(r) => r.image_gap(z, gap),
        }
    }
}

impl From<MoebiusTransform> for Selfmap {
    fn from(m: MoebiusTransform) -> Self {
        Selfmap::Moebius(m)
    }
}

impl From<RationalSymbol> for Selfmap {
    fn from(r: RationalSymbol) -> Self {
        Selfmap::Rational(r)
    }
}

impl From<BlaschkeProduct> for Selfmap {
    fn from(b: BlaschkeProduct) -> Self {
        Selfmap::Blaschke(b)
    }
}

/// `f ↦ u · (f ∘ φ)` on the Bloch or Dirichlet space.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedCompositionOp {
    u: RationalSymbol,
    phi: Selfmap,
    space: Space,
}

impl WeightedCompositionOp {
    /// Checks on a moderate grid that `φ` maps the disc into itself
    /// (automorphisms are accepted as such).
    pub fn new(u: RationalSymbol, phi: impl Into<Selfmap>, space: Space) -> Result<Self> {
        let phi = phi.into();
        if phi.automorphism().is_none() {
            let grid = DiscGrid::new(GridParams { radial_levels: 10, max_angular: 512, ..GridParams::default() })?;
            ensure_selfmap(&phi, &grid, Exec::default())?;
        }
        Ok(WeightedCompositionOp { u, phi, space })
    }

    pub fn weight(&self) -> &RationalSymbol {
        &self.u
    }

    pub fn selfmap(&self) -> &Selfmap {
        &self.phi
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn with_space(&self, space: Space) -> Self {
        WeightedCompositionOp { space, ..self.clone() }
    }

    /// `u(z) f(φ(z))`.
    pub fn apply<F: Holomorphic + ?Sized>(&self, f: &F, z: Complex64) -> Complex64 {
        self.u.value(z) * f.value(self.phi.value(z))
    }

    /// `(uC_φ)^m f (z) = u_(m)(z) f(φ_m(z))`, pushing `z` through `φ`.
    pub fn power_apply<F: Holomorphic + ?Sized>(&self, m: u64, f: &F, z: Complex64) -> Complex64 {
        let mut w = z;
        let mut acc = Complex64::new(1.0, 0.0);
        for _ in 0..m {
            acc *= self.u.value(w);
            w = self.phi.value(w);
        }
        acc * f.value(w)
    }

    /// `|A - B| / (1 + |A|)` where `A = ((λ - uC_φ)^m f)(z)` is computed by
    /// applying `λ - uC_φ` m times and
    /// `B = Σ_k C(m,k) λ^{m-k} (-1)^k u_(k)(z) f(φ_k(z))`.
    pub fn binomial_identity_residual<F: Holomorphic + ?Sized>(
        &self,
        lambda: Complex64,
        m: u32,
        f: &F,
        z: Complex64,
    ) -> Result<f64> {
        if m > 30 {
            return Err(Error::domain(format!("binomial overflow regime: m = {m} > 30")));
        }
        let m = m as usize;
        let mut orbit = Vec::with_capacity(m + 1);
        orbit.push(z);
        for j in 0..m {
            orbit.push(self.phi.value(orbit[j]));
        }
        let weights: Vec<Complex64> = orbit.iter().map(|&w| self.u.value(w)).collect();
        let values: Vec<Complex64> = orbit.iter().map(|&w| f.value(w)).collect();

        // g_k(φ_j z) for j ≤ m - k, with g_k = (λ - uC_φ) g_{k-1}
        let mut g = values.clone();
        for k in 1..=m {
            for j in 0..=(m - k) {
                g[j] = lambda * g[j] - weights[j] * g[j + 1];
            }
        }
        let a = g[0];

        let mut b = Complex64::new(0.0, 0.0);
        let mut cocycle = Complex64::new(1.0, 0.0);
        let mut binom = 1.0;
        for k in 0..=m {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            b += binom * sign * lambda.powu((m - k) as u32) * cocycle * values[k];
            cocycle *= weights[k];
            binom = binom * (m - k) as f64 / (k + 1) as f64;
        }
        Ok((a - b).norm() / (1.0 + a.norm()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{FnHolomorphic, Polynomial};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_plus_z() -> RationalSymbol {
        RationalSymbol::polynomial(Polynomial::from_real(&[2.0, 1.0]))
    }

    fn psi() -> MoebiusTransform {
        MoebiusTransform::canonical_hyperbolic(0.5).unwrap()
    }

    #[test]
    fn apply_examples() {
        let f = FnHolomorphic { value: |z: Complex64| z * z - 1.0, derivative: |z: Complex64| 2.0 * z };
        let id = WeightedCompositionOp::new(RationalSymbol::one(), MoebiusTransform::identity(), Space::Bloch).unwrap();
        assert_eq!(id.apply(&f, c(0.3, 0.1)), f.value(c(0.3, 0.1)));
        let op = WeightedCompositionOp::new(two_plus_z(), psi(), Space::Bloch).unwrap();
        assert!((op.apply(&Polynomial::monomial(1), c(0.0, 0.0)) - c(2.0 / 3.0, 0.0)).norm() < 1e-15);
        assert_eq!(op.apply(&Polynomial::one(), c(0.2, 0.2)), c(2.2, 0.2));
    }

    #[test]
    fn power_examples() {
        let op = WeightedCompositionOp::new(two_plus_z(), psi(), Space::Bloch).unwrap();
        let f = Polynomial::monomial(3);
        let z = c(-0.4, 0.25);
        assert_eq!(op.power_apply(0, &f, z), f.value(z));
        assert_eq!(op.power_apply(1, &f, z), op.apply(&f, z));
        assert!((op.power_apply(2, &Polynomial::one(), c(0.0, 0.0)) - c(14.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn binomial_examples() {
        let op = WeightedCompositionOp::new(two_plus_z(), psi(), Space::Bloch).unwrap();
        let f = Polynomial::monomial(2);
        let z = c(0.0, 0.4);
        assert_eq!(op.binomial_identity_residual(c(3.0, 0.0), 0, &f, z).unwrap(), 0.0);
        assert!(op.binomial_identity_residual(c(0.7, -2.0), 1, &f, z).unwrap() <= 1e-12);
        assert!(op.binomial_identity_residual(c(3.0, 0.0), 10, &f, z).unwrap() <= 1e-9);
        let err = op.binomial_identity_residual(c(3.0, 0.0), 31, &f, z).unwrap_err();
        assert!(err.to_string().contains("binomial overflow"));
    }

    #[test]
    fn rejects_non_selfmaps() {
        let twice = RationalSymbol::polynomial(Polynomial::from_real(&[0.0, 2.0]));
        assert!(WeightedCompositionOp::new(RationalSymbol::one(), Selfmap::Rational(twice), Space::Bloch).is_err());
        let half = RationalSymbol::polynomial(Polynomial::from_real(&[0.0, 0.5]));
        assert!(WeightedCompositionOp::new(RationalSymbol::one(), Selfmap::Rational(half), Space::Bloch).is_ok());
    }

    #[test]
    fn univalence_tags() {
        let half = RationalSymbol::polynomial(Polynomial::from_real(&[0.1, 0.5]));
        assert!(Selfmap::Rational(half).is_univalent());
        let sq = RationalSymbol::polynomial(Polynomial::from_real(&[0.0, 0.0, 0.5]));
        assert!(!Selfmap::Rational(sq).is_univalent());
        let b = BlaschkeProduct::new(vec![c(0.1, 0.0), c(0.0, 0.3)], c(1.0, 0.0)).unwrap();
        assert!(!Selfmap::Blaschke(b).is_univalent());
        assert!(Selfmap::Moebius(psi()).is_univalent());
    }
}
