//! Seeded random families for the verify suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wcop::{BlaschkeProduct, Complex64, MoebiusTransform, Polynomial, RationalSymbol};

pub type Rng64 = ChaCha8Rng;

/// Independent stream `stream` of the run seeded with `seed`.
pub fn rng(seed: u64, stream: u64) -> Rng64 {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Uniform in the disc of radius `r`.
pub fn point_in_disc(rng: &mut Rng64, r: f64) -> Complex64 {
    let rho = r * rng.gen::<f64>().sqrt();
    Complex64::from_polar(rho, rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn automorphism(rng: &mut Rng64) -> MoebiusTransform {
    let p = point_in_disc(rng, 0.9);
    MoebiusTransform::disc_automorphism(rng.gen_range(0.0..std::f64::consts::TAU), p).expect("|p| < 1")
}

pub fn hyperbolic(rng: &mut Rng64) -> MoebiusTransform {
    let mu = rng.gen_range(0.1..0.9);
    let t = automorphism(rng);
    t.inverse().compose(&MoebiusTransform::canonical_hyperbolic(mu).expect("μ in (0, 1)")).compose(&t)
}

pub fn parabolic(rng: &mut Rng64) -> MoebiusTransform {
    let shift = rng.gen_range(0.3..2.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
    let t = automorphism(rng);
    t.inverse().compose(&MoebiusTransform::parabolic_cayley(shift).expect("nonzero shift")).compose(&t)
}

/// Conjugate of a rotation by a map moving the fixed point at most 0.9.
pub fn elliptic(rng: &mut Rng64) -> MoebiusTransform {
    let t = MoebiusTransform::disc_automorphism(0.0, point_in_disc(rng, 0.9)).expect("|p| < 1");
    t.inverse().compose(&MoebiusTransform::rotation(rng.gen_range(0.5..2.5))).compose(&t)
}

pub fn polynomial(rng: &mut Rng64, degree: usize, scale: f64) -> Polynomial {
    Polynomial::new((0..=degree).map(|_| point_in_disc(rng, scale)).collect())
}

/// Pole-free and zero-free on the closed disc: the constant term dominates.
pub fn invertible_weight(rng: &mut Rng64) -> RationalSymbol {
    let degree = rng.gen_range(0..4);
    let mut coeffs: Vec<Complex64> = (0..=degree).map(|_| point_in_disc(rng, 0.4)).collect();
    let tail: f64 = coeffs[1..].iter().map(|z| z.norm()).sum();
    coeffs[0] = Complex64::from_polar(tail + rng.gen_range(0.3..1.5), rng.gen_range(0.0..std::f64::consts::TAU));
    let num = Polynomial::new(coeffs);
    if rng.gen::<bool>() {
        RationalSymbol::polynomial(num)
    } else {
        let q = point_in_disc(rng, 0.8);
        RationalSymbol::new(num, Polynomial::new(vec![Complex64::new(1.0, 0.0), -q])).expect("pole outside")
    }
}

pub fn blaschke(rng: &mut Rng64, max_degree: usize) -> BlaschkeProduct {
    let n = rng.gen_range(1..=max_degree);
    let zeros = (0..n).map(|_| point_in_disc(rng, 0.95)).collect();
    BlaschkeProduct::new(zeros, Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
        .expect("zeros inside")
}
