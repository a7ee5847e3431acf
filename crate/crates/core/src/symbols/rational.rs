use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Holomorphic, Polynomial, SelfMap};
use crate::error::{Error, Result};
use crate::moebius::MoebiusTransform;
use crate::unit_root;

/// Denominator roots must lie outside this radius.
const POLE_MARGIN: f64 = 1.0 + 1e-9;
const BOUNDARY_SAMPLES: usize = 1024;

/// `numerator / denominator` with no pole on the closed unit disc: the
/// concrete class of disc-algebra weights used throughout the crate.
///
/// Symbols obtained by composing with Möbius maps also carry a product of
/// linear factors and are evaluated through it: the expanded coefficients of
/// `u ∘ φ` grow like `|c|^deg` for a map far from a rotation and cancel on
/// evaluation, while each factor `α z + β` is exact to a few ulps.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RationalSpec", into = "RationalSpec")]
pub struct RationalSymbol {
    numerator: Polynomial,
    denominator: Polynomial,
    boundary_sup: f64,
    factored: Option<Factored>,
}

/// Equality of coefficients; the factored form is an evaluation aid.
impl PartialEq for RationalSymbol {
    fn eq(&self, other: &Self) -> bool {
        self.numerator == other.numerator && self.denominator == other.denominator
    }
}

/// `scale · Π (α z + β)^e`.
#[derive(Debug, Clone, PartialEq)]
struct Factored {
    scale: Complex64,
    factors: Vec<(Complex64, Complex64, i32)>,
}

impl Factored {
    /// From the roots of a nonzero numerator and the denominator.
    fn of(numerator: &Polynomial, denominator: &Polynomial) -> Result<Factored> {
        let lead = |p: &Polynomial| p.coeffs()[p.degree()];
        let one = Complex64::new(1.0, 0.0);
        let mut factors: Vec<_> = numerator.roots()?.into_iter().map(|r| (one, -r, 1)).collect();
        factors.extend(denominator.roots()?.into_iter().map(|r| (one, -r, -1)));
        Ok(Factored { scale: lead(numerator) / lead(denominator), factors })
    }

    /// Each factor of `u ∘ φ` is again linear: `α φ(z) + β` is
    /// `((αa + βc) z + (αb + βd)) / (cz + d)`.
    fn compose(&self, [a, b, c, d]: [Complex64; 4]) -> Factored {
        let mut scale = self.scale;
        let mut factors = Vec::with_capacity(self.factors.len() + 1);
        let mut total = 0;
        for &(alpha, beta, e) in &self.factors {
            let (p, q) = (alpha * a + beta * c, alpha * b + beta * d);
            if p == Complex64::new(0.0, 0.0) {
                scale *= q.powi(e);
            } else {
                factors.push((p, q, e));
            }
            total += e;
        }
        if total != 0 {
            factors.push((c, d, -total));
        }
        Factored { scale, factors }
    }

    fn reciprocal(&self) -> Factored {
        Factored { scale: 1.0 / self.scale, factors: self.factors.iter().map(|&(a, b, e)| (a, b, -e)).collect() }
    }

    /// Value and `u'/u`, or `None` at a zero of a factor.
    fn eval(&self, z: Complex64) -> Option<(Complex64, Complex64)> {
        let mut value = self.scale;
        let mut log_derivative = Complex64::new(0.0, 0.0);
        for &(alpha, beta, e) in &self.factors {
            let l = alpha * z + beta;
            if l == Complex64::new(0.0, 0.0) {
                return None;
            }
            value *= l.powi(e);
            log_derivative += alpha / l * e as f64;
        }
        Some((value, log_derivative))
    }
}

/// Serialized form: ascending `[re, im]` coefficient lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalSpec {
    pub numerator: Polynomial,
    #[serde(default = "Polynomial::one")]
    pub denominator: Polynomial,
}

impl TryFrom<RationalSpec> for RationalSymbol {
    type Error = Error;

    fn try_from(spec: RationalSpec) -> Result<Self> {
        RationalSymbol::new(spec.numerator, spec.denominator)
    }
}

impl From<RationalSymbol> for RationalSpec {
    fn from(u: RationalSymbol) -> Self {
        RationalSpec { numerator: u.numerator, denominator: u.denominator }
    }
}

impl RationalSymbol {
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        if numerator.coeffs().iter().chain(denominator.coeffs()).any(|c| !c.is_finite()) {
            return Err(Error::domain("non-finite coefficient"));
        }
        if let Some(root) = denominator.roots()?.into_iter().find(|r| r.norm() <= POLE_MARGIN) {
            return Err(Error::domain(format!(
                "denominator has a root at {root} with modulus {:.12} (must exceed 1 + 1e-9)",
                root.norm()
            )));
        }
        let mut u = RationalSymbol { numerator, denominator, boundary_sup: 0.0, factored: None };
        u.update_boundary_sup();
        Ok(u)
    }

    fn update_boundary_sup(&mut self) {
        self.boundary_sup = (0..BOUNDARY_SAMPLES)
            .map(|k| self.value(unit_root(k, BOUNDARY_SAMPLES)).norm())
            .fold(0.0, f64::max);
    }

    fn with_factored(mut self, factored: Option<Factored>) -> Self {
        self.factored = factored;
        self.update_boundary_sup();
        self
    }

    pub fn polynomial(p: Polynomial) -> Self {
        // a polynomial has no poles
        Self::new(p, Polynomial::one()).expect("polynomial weight")
    }

    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(Polynomial::constant(c))
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// The Möbius map itself as a rational function.
    pub fn from_moebius(phi: &MoebiusTransform) -> Result<Self> {
        let [a, b, c, d] = phi.coefficients();
        Self::new(Polynomial::new(vec![b, a]), Polynomial::new(vec![d, c]))
    }

    /// Roots of the denominator, all outside the closed disc.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        self.denominator.roots()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    /// Max of `|u|` over 1024 equispaced boundary points, computed once.
    pub fn boundary_sup(&self) -> f64 {
        self.boundary_sup
    }

    /// Value (`order = 0`) or first derivative (`order = 1`) on the closed disc.
    pub fn eval(&self, z: Complex64, order: u32) -> Result<Complex64> {
        if !(z.norm() <= 1.0 + 1e-12) {
            return Err(Error::domain(format!("evaluation point {z} outside the closed unit disc")));
        }
        match order {
            0 => Ok(self.value(z)),
            1 => Ok(self.derivative(z)),
            _ => Err(Error::domain(format!("derivative order {order} not supported (0 or 1)"))),
        }
    }

    /// `u ∘ φ`, cleared of denominators: with `D = max(deg P, deg Q)`,
    /// `P(φ)·(cz+d)^D / Q(φ)·(cz+d)^D`.
    pub fn compose_with_moebius(&self, phi: &MoebiusTransform) -> Result<RationalSymbol> {
        let [a, b, c, d] = phi.coefficients();
        let top = Polynomial::new(vec![b, a]);
        let bottom = Polynomial::new(vec![d, c]);
        let deg = self.numerator.degree().max(self.denominator.degree());
        let mut top_pow = vec![Polynomial::one()];
        let mut bottom_pow = vec![Polynomial::one()];
        for k in 1..=deg {
            top_pow.push(top_pow[k - 1].mul(&top));
            bottom_pow.push(bottom_pow[k - 1].mul(&bottom));
        }
        let clear = |p: &Polynomial| {
            p.coeffs().iter().enumerate().fold(Polynomial::constant(Complex64::new(0.0, 0.0)), |acc, (k, &ck)| {
                acc.add(&top_pow[k].mul(&bottom_pow[deg - k]).scale(ck))
            })
        };
        let composed = RationalSymbol::new(clear(&self.numerator), clear(&self.denominator)).map_err(|e| {
            Error::Internal(format!("composition with a Möbius map produced a pole on the closed disc: {e}"))
        })?;
        let factored = match &self.factored {
            Some(f) => Some(f.compose(phi.coefficients())),
            None if self.numerator.is_zero() => None,
            None => Some(Factored::of(&self.numerator, &self.denominator)?.compose(phi.coefficients())),
        };
        Ok(composed.with_factored(factored))
    }

    /// `1/u`; fails when `u` vanishes on the closed disc.
    pub fn reciprocal(&self) -> Result<RationalSymbol> {
        let r = RationalSymbol::new(self.denominator.clone(), self.numerator.clone())?;
        Ok(r.with_factored(self.factored.as_ref().map(Factored::reciprocal)))
    }

    /// First `n` Taylor coefficients at the origin.
    pub fn taylor(&self, n: usize) -> Result<Vec<Complex64>> {
        crate::series::div(self.numerator.coeffs(), self.denominator.coeffs(), n)
    }
}

impl Holomorphic for RationalSymbol {
    fn value(&self, z: Complex64) -> Complex64 {
        if let Some((v, _)) = self.factored.as_ref().and_then(|f| f.eval(z)) {
            return v;
        }
        self.numerator.eval(z) / self.denominator.eval(z)
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        if let Some((v, ld)) = self.factored.as_ref().and_then(|f| f.eval(z)) {
            return v * ld;
        }
        let (p, dp) = self.numerator.eval_with_derivative(z);
        let (q, dq) = self.denominator.eval_with_derivative(z);
        (dp * q - p * dq) / (q * q)
    }
}

impl SelfMap for RationalSymbol {}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_plus_z() -> RationalSymbol {
        RationalSymbol::polynomial(Polynomial::from_real(&[2.0, 1.0]))
    }

    #[test]
    fn eval_examples() {
        let u = two_plus_z();
        assert_eq!(u.eval(c(0.0, 0.0), 0).unwrap(), c(2.0, 0.0));
        assert_eq!(u.eval(c(0.3, 0.4), 1).unwrap(), c(1.0, 0.0));
        let v = RationalSymbol::new(Polynomial::from_real(&[1.0]), Polynomial::from_real(&[2.0, -1.0])).unwrap();
        assert_abs_diff_eq!((v.eval(c(1.0, 0.0), 1).unwrap() - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn eval_errors() {
        let u = two_plus_z();
        assert!(matches!(u.eval(c(1.1, 0.0), 0), Err(Error::Domain(_))));
        assert!(matches!(u.eval(c(0.1, 0.0), 2), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_poles_on_closed_disc() {
        assert!(RationalSymbol::new(Polynomial::one(), Polynomial::from_real(&[1.0, -1.0])).is_err());
        assert!(RationalSymbol::new(Polynomial::one(), Polynomial::from_real(&[0.5, -1.0])).is_err());
        assert!(RationalSymbol::new(Polynomial::one(), Polynomial::from_real(&[0.0])).is_err());
        assert!(RationalSymbol::new(Polynomial::one(), Polynomial::from_real(&[1.0 + 1e-6, -1.0])).is_ok());
    }

    #[test]
    fn composition_examples() {
        let psi = MoebiusTransform::canonical_hyperbolic(0.5).unwrap();
        let comp = two_plus_z().compose_with_moebius(&psi).unwrap();
        for z in [c(0.0, 0.0), c(0.5, 0.5), c(-0.9, 0.1), c(1.0, 0.0)] {
            let expected = (5.0 * z + 7.0) / (z + 3.0);
            assert_abs_diff_eq!((comp.value(z) - expected).norm(), 0.0, epsilon = 1e-14);
        }
        let ident = RationalSymbol::polynomial(Polynomial::from_real(&[0.0, 1.0]));
        let phi = MoebiusTransform::disc_automorphism(0.4, c(0.2, -0.6)).unwrap();
        let as_map = ident.compose_with_moebius(&phi).unwrap();
        for z in [c(0.1, 0.2), c(-0.7, 0.0)] {
            assert_abs_diff_eq!((as_map.value(z) - phi.eval(z)).norm(), 0.0, epsilon = 1e-14);
        }
        let k = RationalSymbol::constant(c(3.0, -1.0));
        let kc = k.compose_with_moebius(&phi).unwrap();
        assert_abs_diff_eq!((kc.value(c(0.3, 0.3)) - c(3.0, -1.0)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn composed_weight_keeps_relative_accuracy() {
        // far from a rotation: expanded coefficients of size ~|a|^3 cancel
        let phi = MoebiusTransform::disc_automorphism(0.3, c(0.95, 0.2)).unwrap();
        let u = RationalSymbol::polynomial(Polynomial::new(vec![c(1.3, 1.3), c(0.0, 0.01), c(0.33, 0.09), c(-0.19, 0.14)]));
        let comp = u.compose_with_moebius(&phi).unwrap();
        let back = comp.compose_with_moebius(&phi.inverse()).unwrap();
        for z in [c(0.0, 0.0), c(0.9, -0.3), c(-0.99, 0.0), c(0.1, 0.98)] {
            let direct = u.value(phi.eval(z));
            assert!((comp.value(z) - direct).norm() <= 1e-13 * direct.norm(), "{z}");
            assert!((back.value(z) - u.value(z)).norm() <= 1e-13 * u.value(z).norm(), "{z}");
        }
        let r = comp.reciprocal().unwrap();
        let z = c(0.4, 0.5);
        assert!((r.value(z) * comp.value(z) - 1.0).norm() < 1e-14);
        let h = 1e-6;
        let fd = (comp.value(z + h) - comp.value(z - h)) / (2.0 * h);
        assert!((comp.derivative(z) - fd).norm() < 1e-7 * fd.norm().max(1.0));
        assert_eq!(RationalSymbol::try_from(RationalSpec::from(comp.clone())).unwrap(), comp);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let u = RationalSymbol::new(Polynomial::from_real(&[1.0, 2.0, -0.5]), Polynomial::from_real(&[3.0, 0.5, 0.25]))
            .unwrap();
        let z = c(0.2, -0.3);
        let h = 1e-6;
        let fd = (u.value(z + h) - u.value(z - h)) / (2.0 * h);
        assert_abs_diff_eq!((u.derivative(z) - fd).norm(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn reciprocal_needs_zero_free_weight() {
        assert!(two_plus_z().reciprocal().is_ok());
        let z = RationalSymbol::polynomial(Polynomial::from_real(&[0.0, 1.0]));
        assert!(z.reciprocal().is_err());
    }

    #[test]
    fn boundary_sup_is_cached() {
        assert_abs_diff_eq!(two_plus_z().boundary_sup(), 3.0, epsilon = 1e-15);
    }

    #[test]
    fn taylor_of_geometric_weight() {
        let u = RationalSymbol::new(Polynomial::one(), Polynomial::from_real(&[2.0, -1.0])).unwrap();
        let t = u.taylor(5).unwrap();
        for (k, v) in t.iter().enumerate() {
            assert_abs_diff_eq!(v.re, 0.5f64.powi(k as i32 + 1), epsilon = 1e-16);
        }
    }
}
