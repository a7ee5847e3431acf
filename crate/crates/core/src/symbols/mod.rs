//! Analytic weights, selfmaps and the cocycles `u_(n) = ∏_{j<n} u ∘ φ_j`.

mod blaschke;
mod polynomial;
mod rational;

pub use blaschke::{blaschke_k, BlaschkeProduct};
pub use polynomial::Polynomial;
pub use rational::{RationalSpec, RationalSymbol};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::MoebiusTransform;
use crate::norms::DiscGrid;
use crate::par::{self, Exec};

/// A function analytic on the disc with a computable first derivative.
pub trait Holomorphic: Sync {
    fn value(&self, z: Complex64) -> Complex64;
    fn derivative(&self, z: Complex64) -> Complex64;
}

/// An analytic map of the disc into itself.
pub trait SelfMap: Holomorphic {
    /// `1 - |φ(z)|²` given `gap = 1 - |z|²`. Implementors override this when
    /// a cancellation-free form exists.
    fn image_gap(&self, z: Complex64, gap: f64) -> f64 {
        let _ = gap;
        1.0 - self.value(z).norm_sqr()
    }
}

impl<T: Holomorphic + ?Sized> Holomorphic for &T {
    fn value(&self, z: Complex64) -> Complex64 {
        (**self).value(z)
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        (**self).derivative(z)
    }
}

impl<T: SelfMap + ?Sized> SelfMap for &T {
    fn image_gap(&self, z: Complex64, gap: f64) -> f64 {
        (**self).image_gap(z, gap)
    }
}

impl Holomorphic for MoebiusTransform {
    fn value(&self, z: Complex64) -> Complex64 {
        self.eval(z)
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        MoebiusTransform::derivative(self, z)
    }
}

impl SelfMap for MoebiusTransform {
    fn image_gap(&self, z: Complex64, gap: f64) -> f64 {
        MoebiusTransform::image_gap(self, z, gap)
    }
}

/// A function given by two closures: value and derivative.
pub struct FnHolomorphic<F, G> {
    pub value: F,
    pub derivative: G,
}

impl<F, G> Holomorphic for FnHolomorphic<F, G>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    G: Fn(Complex64) -> Complex64 + Sync,
{
    fn value(&self, z: Complex64) -> Complex64 {
        (self.value)(z)
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        (self.derivative)(z)
    }
}

impl Holomorphic for Polynomial {
    fn value(&self, z: Complex64) -> Complex64 {
        self.eval(z)
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        self.eval_with_derivative(z).1
    }
}

/// `f_a(z) = log(e / (1 - conj(a) z))`, the standard unbounded Bloch test
/// function peaking near `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogWeightFunction {
    a: Complex64,
}

impl LogWeightFunction {
    pub fn new(a: Complex64) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return Err(Error::domain("log weight parameter must satisfy |a| < 1"));
        }
        Ok(LogWeightFunction { a })
    }

    pub fn parameter(&self) -> Complex64 {
        self.a
    }
}

impl Holomorphic for LogWeightFunction {
    fn value(&self, z: Complex64) -> Complex64 {
        1.0 - (1.0 - self.a.conj() * z).ln()
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        self.a.conj() / (1.0 - self.a.conj() * z)
    }
}

/// `u_(n)(z) = ∏_{j<n} u(φ_j(z))`, evaluated by pushing `z` through `φ`.
pub fn cocycle_eval<U, S>(u: &U, phi: &S, n: u64, z: Complex64) -> Complex64
where
    U: Holomorphic + ?Sized,
    S: SelfMap + ?Sized,
{
    let mut w = z;
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        acc *= u.value(w);
        w = phi.value(w);
    }
    acc
}

/// `ln |u_(n)(z)|` as a sum of logs; stays finite where the product itself
/// would overflow. Compensated summation keeps `n` equal terms within a few
/// ulps of `n` times the term.
pub fn cocycle_log_modulus<U, S>(u: &U, phi: &S, n: u64, z: Complex64) -> f64
where
    U: Holomorphic + ?Sized,
    S: SelfMap + ?Sized,
{
    let mut w = z;
    let (mut acc, mut carry) = (0.0f64, 0.0f64);
    for _ in 0..n {
        let term = u.value(w).norm().ln();
        let t = acc + term;
        carry += if acc.abs() >= term.abs() { (acc - t) + term } else { (term - t) + acc };
        acc = t;
        w = phi.value(w);
    }
    acc + carry
}

/// Grid maximum of `ln |u_(n)|` over every grid point, boundary included.
pub fn cocycle_log_sup<U, S>(u: &U, phi: &S, n: u64, grid: &DiscGrid, exec: Exec) -> f64
where
    U: Holomorphic + ?Sized,
    S: SelfMap + ?Sized + Sync,
{
    par::max_by(exec, grid.points(), |p| cocycle_log_modulus(u, phi, n, p.z))
}

/// Grid maximum of `|u_(n)|`: a lower bound of `‖u_(n)‖_∞` that increases
/// under refinement. May overflow to `inf` for large `n`; see
/// [`cocycle_sup_root`].
pub fn cocycle_sup<U, S>(u: &U, phi: &S, n: u64, grid: &DiscGrid) -> f64
where
    U: Holomorphic + ?Sized,
    S: SelfMap + ?Sized + Sync,
{
    cocycle_log_sup(u, phi, n, grid, Exec::default()).exp()
}

/// `(grid max |u_(n)|)^{1/n}` for `n ≥ 1`.
pub fn cocycle_sup_root<U, S>(u: &U, phi: &S, n: u64, grid: &DiscGrid, exec: Exec) -> Result<f64>
where
    U: Holomorphic + ?Sized,
    S: SelfMap + ?Sized + Sync,
{
    if n == 0 {
        return Err(Error::domain("cocycle root needs n ≥ 1"));
    }
    Ok((cocycle_log_sup(u, phi, n, grid, exec) / n as f64).exp())
}

/// Grid minimum of `|u|` over the closed disc: an upper bound of the
/// infimum, used to decide "bounded away from zero".
pub fn inf_modulus<U: Holomorphic + ?Sized>(u: &U, grid: &DiscGrid) -> f64 {
    par::min_by(Exec::default(), grid.points(), |p| u.value(p.z).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::GridParams;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_plus_z() -> RationalSymbol {
        RationalSymbol::polynomial(Polynomial::from_real(&[2.0, 1.0]))
    }

    fn grid(levels: u32) -> DiscGrid {
        DiscGrid::new(GridParams { radial_levels: levels, ..GridParams::default() }).unwrap()
    }

    #[test]
    fn cocycle_examples() {
        let u = two_plus_z();
        let psi = MoebiusTransform::canonical_hyperbolic(0.5).unwrap();
        for z in [c(0.0, 0.0), c(0.5, -0.5), c(1.0, 0.0)] {
            assert_eq!(cocycle_eval(&u, &psi, 0, z), c(1.0, 0.0));
        }
        let v = cocycle_eval(&u, &psi, 2, c(0.0, 0.0));
        assert_abs_diff_eq!((v - c(14.0 / 3.0, 0.0)).norm(), 0.0, epsilon = 1e-14);
        // at the fixed point the product collapses to u(a)^n
        let v = cocycle_eval(&u, &psi, 7, c(1.0, 0.0));
        assert_abs_diff_eq!((v - c(3f64.powi(7), 0.0)).norm(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn constant_cocycle_sup() {
        let u = RationalSymbol::constant(c(0.0, -1.5));
        let phi = MoebiusTransform::disc_automorphism(0.7, c(0.1, 0.4)).unwrap();
        let g = grid(6);
        for n in [1u64, 5, 20] {
            let s = cocycle_sup(&u, &phi, n, &g);
            assert_abs_diff_eq!(s / 1.5f64.powi(n as i32), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn hyperbolic_cocycle_root() {
        let u = two_plus_z();
        let psi = MoebiusTransform::canonical_hyperbolic(0.5).unwrap();
        let r = cocycle_sup_root(&u, &psi, 100, &grid(12), Exec::default()).unwrap();
        assert!((r - 3.0).abs() / 3.0 < 0.02);
        let parabolic = MoebiusTransform::parabolic_cayley(-1.0).unwrap();
        let r = cocycle_sup_root(&u, &parabolic, 100, &grid(12), Exec::default()).unwrap();
        assert!((r - 3.0).abs() / 3.0 < 0.05);
        assert!(cocycle_sup_root(&u, &psi, 0, &grid(4), Exec::default()).is_err());
    }

    #[test]
    fn inf_modulus_examples() {
        let g = grid(8);
        assert_abs_diff_eq!(inf_modulus(&two_plus_z(), &g), 1.0, epsilon = 1e-15);
        let z = RationalSymbol::polynomial(Polynomial::from_real(&[0.0, 1.0]));
        assert_eq!(inf_modulus(&z, &g), 0.0);
        assert_eq!(inf_modulus(&RationalSymbol::constant(c(5.0, 0.0)), &g), 5.0);
    }

    #[test]
    fn log_weight_rejects_boundary() {
        assert!(LogWeightFunction::new(c(1.0, 0.0)).is_err());
        let f = LogWeightFunction::new(c(0.5, 0.5)).unwrap();
        assert_abs_diff_eq!((f.value(c(0.0, 0.0)) - 1.0).norm(), 0.0, epsilon = 1e-15);
    }
}
