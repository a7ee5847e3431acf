use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Holomorphic, Polynomial, RationalSymbol, SelfMap};
use crate::error::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Finite Blaschke product `λ ∏ (z - a_j) / (1 - conj(a_j) z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    unimodular: Complex64,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>, unimodular: Complex64) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::domain("a Blaschke product needs at least one zero"));
        }
        if let Some(a) = zeros.iter().find(|a| !(a.norm() < 1.0)) {
            return Err(Error::domain(format!("Blaschke zero {a} is not inside the unit disc")));
        }
        if !((unimodular.norm() - 1.0).abs() <= 1e-12) {
            return Err(Error::domain("Blaschke unimodular factor must have modulus 1"));
        }
        Ok(BlaschkeProduct { zeros, unimodular: unimodular / unimodular.norm() })
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn unimodular_factor(&self) -> Complex64 {
        self.unimodular
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    fn factor(a: Complex64, z: Complex64) -> Complex64 {
        (z - a) / (ONE - a.conj() * z)
    }

    /// Numerator `λ ∏ (z - a_j)` over denominator `∏ (1 - conj(a_j) z)`.
    pub fn as_rational(&self) -> Result<RationalSymbol> {
        let mut num = Polynomial::constant(self.unimodular);
        let mut den = Polynomial::one();
        for &a in &self.zeros {
            num = num.mul(&Polynomial::new(vec![-a, ONE]));
            den = den.mul(&Polynomial::new(vec![ONE, -a.conj()]));
        }
        RationalSymbol::new(num, den)
    }
}

impl Holomorphic for BlaschkeProduct {
    fn value(&self, z: Complex64) -> Complex64 {
        self.zeros.iter().fold(self.unimodular, |acc, &a| acc * Self::factor(a, z))
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        let factors: Vec<Complex64> = self.zeros.iter().map(|&a| Self::factor(a, z)).collect();
        let mut total = Complex64::new(0.0, 0.0);
        for (j, &a) in self.zeros.iter().enumerate() {
            let den = ONE - a.conj() * z;
            let mut term = (1.0 - a.norm_sqr()) / (den * den);
            for (i, f) in factors.iter().enumerate() {
                if i != j {
                    term *= f;
                }
            }
            total += term;
        }
        total * self.unimodular
    }
}

impl SelfMap for BlaschkeProduct {
    /// `1 - ∏|b_j|² = Σ_j (1 - |b_j|²) ∏_{i<j} |b_i|²`, each factor gap from
    /// `1 - |b_a(z)|² = (1 - |a|²)(1 - |z|²) / |1 - conj(a) z|²`; no
    /// subtraction of nearly equal numbers near the circle.
    fn image_gap(&self, z: Complex64, gap: f64) -> f64 {
        let mut total = 0.0;
        let mut prefix = 1.0;
        for &a in &self.zeros {
            let den = (ONE - a.conj() * z).norm_sqr();
            let g = (1.0 - a.norm_sqr()) * gap / den;
            total += g * prefix;
            prefix *= (z - a).norm_sqr() / den;
        }
        total
    }
}

/// `K = Σ (1 + |a_j|) / (1 - |a_j|)`: bounds
/// `(1 - |B(z)|²) / (1 - |z|²)` on the whole disc.
pub fn blaschke_k(b: &BlaschkeProduct) -> f64 {
    b.zeros.iter().map(|a| (1.0 + a.norm()) / (1.0 - a.norm())).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn k_examples() {
        let b = BlaschkeProduct::new(vec![c(0.0, 0.0)], ONE).unwrap();
        assert_eq!(blaschke_k(&b), 1.0);
        let z = c(0.3, 0.4);
        assert_abs_diff_eq!(b.image_gap(z, 1.0 - z.norm_sqr()) / (1.0 - z.norm_sqr()), 1.0, epsilon = 1e-15);
        let b = BlaschkeProduct::new(vec![c(0.5, 0.0)], ONE).unwrap();
        assert_abs_diff_eq!(blaschke_k(&b), 3.0, epsilon = 1e-15);
        let b = BlaschkeProduct::new(vec![c(0.0, 0.0), c(0.5, 0.0)], ONE).unwrap();
        assert_abs_diff_eq!(blaschke_k(&b), 4.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(BlaschkeProduct::new(vec![], ONE).is_err());
        assert!(BlaschkeProduct::new(vec![c(1.0, 0.0)], ONE).is_err());
        assert!(BlaschkeProduct::new(vec![c(0.1, 0.0)], c(2.0, 0.0)).is_err());
    }

    #[test]
    fn unimodular_on_circle_and_gap_formula() {
        let b = BlaschkeProduct::new(vec![c(0.3, -0.2), c(-0.6, 0.5), c(0.0, 0.9)], c(0.0, 1.0)).unwrap();
        for k in 0..1024 {
            let z = crate::unit_root(k, 1024);
            assert_abs_diff_eq!(b.value(z).norm(), 1.0, epsilon = 1e-9);
        }
        let z = c(0.2, 0.55);
        let gap = 1.0 - z.norm_sqr();
        assert_abs_diff_eq!(b.image_gap(z, gap), 1.0 - b.value(z).norm_sqr(), epsilon = 1e-14);
        assert!(b.value(z).norm() < 1.0);
    }

    #[test]
    fn derivative_and_rational_form() {
        let b = BlaschkeProduct::new(vec![c(0.3, -0.2), c(-0.6, 0.5)], c(0.6, 0.8)).unwrap();
        let z = c(-0.1, 0.35);
        let h = 1e-6;
        let fd = (b.value(z + h) - b.value(z - h)) / (2.0 * h);
        assert_abs_diff_eq!((b.derivative(z) - fd).norm(), 0.0, epsilon = 1e-8);
        let r = b.as_rational().unwrap();
        assert_abs_diff_eq!((r.value(z) - b.value(z)).norm(), 0.0, epsilon = 1e-14);
    }
}
