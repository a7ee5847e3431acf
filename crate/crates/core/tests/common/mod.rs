#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use wcop::symbols::FnHolomorphic;
use wcop::{BlaschkeProduct, Complex64, MoebiusTransform, Polynomial, RationalSymbol};

pub use rand::SeedableRng;
pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Uniform in the disc of radius `r`.
pub fn point_in_disc(rng: &mut Rng64, r: f64) -> Complex64 {
    let rho = r * rng.gen::<f64>().sqrt();
    Complex64::from_polar(rho, rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn automorphism(rng: &mut Rng64) -> MoebiusTransform {
    let p = point_in_disc(rng, 0.9);
    MoebiusTransform::disc_automorphism(rng.gen_range(0.0..std::f64::consts::TAU), p).unwrap()
}

/// A random conjugate of the canonical hyperbolic map.
pub fn hyperbolic(rng: &mut Rng64) -> MoebiusTransform {
    let mu = rng.gen_range(0.1..0.9);
    let t = automorphism(rng);
    t.inverse().compose(&MoebiusTransform::canonical_hyperbolic(mu).unwrap()).compose(&t)
}

/// A random conjugate of a parabolic translation.
pub fn parabolic(rng: &mut Rng64) -> MoebiusTransform {
    let shift = rng.gen_range(0.3..2.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
    let t = automorphism(rng);
    t.inverse().compose(&MoebiusTransform::parabolic_cayley(shift).unwrap()).compose(&t)
}

pub fn polynomial(rng: &mut Rng64, degree: usize, scale: f64) -> Polynomial {
    Polynomial::new((0..=degree).map(|_| point_in_disc(rng, scale)).collect())
}

/// Pole-free weight with no zeros on the closed disc: the constant term
/// dominates the others.
pub fn invertible_weight(rng: &mut Rng64) -> RationalSymbol {
    let degree = rng.gen_range(0..4);
    let mut coeffs: Vec<Complex64> = (0..=degree).map(|_| point_in_disc(rng, 0.4)).collect();
    let tail: f64 = coeffs[1..].iter().map(|z| z.norm()).sum();
    coeffs[0] = Complex64::from_polar(tail + rng.gen_range(0.3..1.5), rng.gen_range(0.0..std::f64::consts::TAU));
    let num = Polynomial::new(coeffs);
    if rng.gen::<bool>() {
        RationalSymbol::polynomial(num)
    } else {
        // denominator 1 - q z with |q| < 0.8
        let q = point_in_disc(rng, 0.8);
        RationalSymbol::new(num, Polynomial::new(vec![c(1.0, 0.0), -q])).unwrap()
    }
}

pub fn blaschke(rng: &mut Rng64, max_degree: usize) -> BlaschkeProduct {
    let n = rng.gen_range(1..=max_degree);
    let zeros = (0..n).map(|_| point_in_disc(rng, 0.95)).collect();
    BlaschkeProduct::new(zeros, Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))).unwrap()
}

/// A polynomial test function with its derivative.
pub fn test_function(p: Polynomial) -> FnHolomorphic<impl Fn(Complex64) -> Complex64 + Sync, impl Fn(Complex64) -> Complex64 + Sync> {
    let d = p.derivative();
    FnHolomorphic { value: move |z| p.eval(z), derivative: move |z| d.eval(z) }
}

pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}
