use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::unit_root;

/// Gauss–Legendre nodes and weights on `[0, 1]`, weights summing to 1.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    let n = order;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Tricomi initial guess, then Newton on P_n
        let mut x = ((i as f64 + 0.75) / (n as f64 + 0.5) * std::f64::consts::PI).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 - x) / 2.0, w / 2.0));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Product rule for the normalized area measure: Gauss–Legendre in `t = r²`
/// times the trapezoid rule in angle, so that `∫ 1 dA = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QuadratureSpec", into = "QuadratureSpec")]
pub struct QuadratureRule {
    order: usize,
    angular: usize,
    nodes: Vec<(Complex64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    pub order: usize,
    pub angular: usize,
}

impl TryFrom<QuadratureSpec> for QuadratureRule {
    type Error = Error;
    fn try_from(s: QuadratureSpec) -> Result<Self> {
        QuadratureRule::new(s.order, s.angular)
    }
}

impl From<QuadratureRule> for QuadratureSpec {
    fn from(q: QuadratureRule) -> Self {
        QuadratureSpec { order: q.order, angular: q.angular }
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule::new(48, 128).expect("default quadrature")
    }
}

impl QuadratureRule {
    pub fn new(order: usize, angular: usize) -> Result<Self> {
        if order == 0 || order > 1000 || angular == 0 || angular > 1 << 16 {
            return Err(Error::domain(format!("quadrature sizes out of range: order {order}, angular {angular}")));
        }
        let radial = gauss_legendre(order);
        let mut nodes = Vec::with_capacity(order * angular);
        for &(t, w) in &radial {
            let r = t.sqrt();
            for j in 0..angular {
                nodes.push((unit_root(j, angular) * r, w / angular as f64));
            }
        }
        Ok(QuadratureRule { order, angular, nodes })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn angular(&self) -> usize {
        self.angular
    }

    /// `(point, weight)` pairs.
    pub fn nodes(&self) -> &[(Complex64, f64)] {
        &self.nodes
    }

    /// `∫_D f dA`, summed pairwise in node order.
    pub fn integrate<F>(&self, exec: Exec, f: F) -> f64
    where
        F: Fn(Complex64) -> f64 + Sync + Send,
    {
        let terms = par::map(exec, &self.nodes, |&(z, w)| w * f(z));
        par::pairwise_sum(&terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_weights() {
        for n in [1, 2, 5, 17, 64] {
            let q = gauss_legendre(n);
            let s: f64 = q.iter().map(|p| p.1).sum();
            assert!((s - 1.0).abs() < 1e-14, "order {n}: {s}");
            assert!(q.iter().all(|p| p.0 > 0.0 && p.0 < 1.0));
        }
        let q = gauss_legendre(2);
        let h = 0.5 / 3f64.sqrt();
        assert!((q[0].0 - (0.5 - h)).abs() < 1e-15);
    }

    #[test]
    fn radial_moments() {
        let q = QuadratureRule::new(16, 8).unwrap();
        for k in 0..=20 {
            let v = q.integrate(Exec::default(), |z| z.norm_sqr().powi(k));
            assert!((v - 1.0 / (k as f64 + 1.0)).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn angular_modes_vanish() {
        let q = QuadratureRule::new(8, 32).unwrap();
        let v = q.integrate(Exec::default(), |z| (z * z * z).re);
        assert!(v.abs() < 1e-15);
    }
}
