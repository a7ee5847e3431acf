//! Grids, area quadrature and estimators for the Bloch, Dirichlet and
//! weighted-sup norms and for the suprema in the boundedness and multiplier
//! conditions.
//!
//! Sup-type estimates are grid maxima: lower bounds of the true supremum
//! that never decrease under [`DiscGrid::refined`]. Each one reports the
//! change from the next coarser nested grid instead of an error bound.

mod grid;
mod quadrature;

pub use grid::{DiscGrid, GridDescriptor, GridParams, GridPoint, Ring};
pub use quadrature::{gauss_legendre, QuadratureRule, QuadratureSpec};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::symbols::{Holomorphic, SelfMap};

/// Constant in `|f(z)| ≤ α ‖f‖_B log(e / (1 - |z|²))`.
pub const DEFAULT_ALPHA: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateKind {
    LowerBoundOfSup,
    QuadratureValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Resolution {
    Grid(GridDescriptor),
    Quadrature { order: usize, angular: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub kind: EstimateKind,
    pub resolution: Resolution,
    /// `value` minus the same estimate on the next coarser nested grid.
    pub refinement_delta: Option<f64>,
    /// The estimate on this grid and each nested coarsening, finest first.
    pub levels: Vec<f64>,
}

impl NormEstimate {
    /// Estimate from [`DiscGrid::max_over`] output.
    pub fn from_grid_levels(levels: Vec<f64>, grid: &DiscGrid) -> Self {
        let levels: Vec<f64> = levels.into_iter().map(|v| if v.is_nan() { v } else { v.max(0.0) }).collect();
        NormEstimate {
            value: levels[0],
            kind: EstimateKind::LowerBoundOfSup,
            resolution: Resolution::Grid(grid.descriptor()),
            refinement_delta: levels.get(1).map(|p| levels[0] - p),
            levels,
        }
    }

    fn offset(mut self, by: f64) -> Self {
        self.value += by;
        for v in &mut self.levels {
            *v += by;
        }
        self
    }

    /// `|delta| / value` (0 when both vanish).
    pub fn relative_delta(&self) -> Option<f64> {
        self.refinement_delta.map(|d| if d == 0.0 { 0.0 } else { d.abs() / self.value.abs() })
    }
}

/// `log(e / g) = 1 - ln g`.
fn log_weight(gap: f64) -> f64 {
    1.0 - gap.ln()
}

/// `|f(0)| + sup (1 - |z|²) |f'(z)|`.
pub fn bloch_norm<F: Holomorphic + ?Sized>(f: &F, grid: &DiscGrid) -> NormEstimate {
    bloch_seminorm(f, grid).offset(f.value(Complex64::new(0.0, 0.0)).norm())
}

/// `sup (1 - |z|²) |f'(z)|`.
pub fn bloch_seminorm<F: Holomorphic + ?Sized>(f: &F, grid: &DiscGrid) -> NormEstimate {
    let levels = grid.max_over(Exec::default(), |p| if p.gap == 0.0 { 0.0 } else { p.gap * f.derivative(p.z).norm() });
    NormEstimate::from_grid_levels(levels, grid)
}

/// `(|f(0)|² + ∫ |f'|² dA)^{1/2}` by quadrature.
pub fn dirichlet_norm<F: Holomorphic + ?Sized>(f: &F, rule: &QuadratureRule) -> NormEstimate {
    let area = rule.integrate(Exec::default(), |z| f.derivative(z).norm_sqr());
    let value = (f.value(Complex64::new(0.0, 0.0)).norm_sqr() + area).sqrt();
    NormEstimate {
        value,
        kind: EstimateKind::QuadratureValue,
        resolution: Resolution::Quadrature { order: rule.order(), angular: rule.angular() },
        refinement_delta: None,
        levels: vec![value],
    }
}

/// `sup (1 - |z|²)^s |f(z)|`; `s = 0` is the sup-norm over the closed disc.
pub fn weighted_sup_norm<F: Holomorphic + ?Sized>(f: &F, s: f64, grid: &DiscGrid) -> Result<NormEstimate> {
    if !(s >= 0.0) {
        return Err(Error::domain(format!("weight exponent must be ≥ 0, got {s}")));
    }
    let levels = grid.max_over(Exec::default(), |p| {
        if s == 0.0 {
            f.value(p.z).norm()
        } else if p.gap == 0.0 {
            0.0
        } else {
            p.gap.powf(s) * f.value(p.z).norm()
        }
    });
    Ok(NormEstimate::from_grid_levels(levels, grid))
}

/// `sup |f(z)| / log(e / (1 - |z|²))` over the open disc.
pub fn log_growth_ratio<F: Holomorphic + ?Sized>(f: &F, grid: &DiscGrid) -> f64 {
    let m = par::max_by(Exec::default(), grid.interior(), |p| f.value(p.z).norm() / log_weight(p.gap));
    m.max(0.0)
}

/// `sup (1 - |z|²)^s log(e / (1 - |z|²))` on the grid: the constant of the
/// embedding of the Bloch space into `H∞_{v_s}` (times α).
pub fn log_weight_sup(s: f64, grid: &DiscGrid) -> f64 {
    par::max_by(Exec::default(), grid.interior(), |p| p.gap.powf(s) * log_weight(p.gap))
}

/// Grid suprema of the boundedness and multiplier conditions for `u` and a
/// selfmap `φ`:
///
/// * `c24 = sup (1-|z|²) |u'(z)| log(e / (1-|φ(z)|²))`
/// * `c25 = sup (1-|z|²) / (1-|φ(z)|²) · |u(z) φ'(z)|`
/// * `c26 = sup (1-|z|²) |u'(z)| log(e / (1-|z|²))`
/// * `sup_u = sup |u|` over the closed disc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionSuprema {
    pub c24: NormEstimate,
    pub c25: NormEstimate,
    pub c26: NormEstimate,
    pub sup_u: NormEstimate,
}

pub fn condition_suprema<U, S>(u: &U, phi: &S, grid: &DiscGrid) -> Result<ConditionSuprema>
where
    U: Holomorphic + ?Sized,
    S: SelfMap + ?Sized,
{
    condition_suprema_with(u, phi, grid, Exec::default())
}

pub fn condition_suprema_with<U, S>(u: &U, phi: &S, grid: &DiscGrid, exec: Exec) -> Result<ConditionSuprema>
where
    U: Holomorphic + ?Sized,
    S: SelfMap + ?Sized,
{
    ensure_selfmap(phi, grid, exec)?;
    let c24 = grid.max_over(exec, |p| {
        if p.gap == 0.0 {
            return 0.0;
        }
        p.gap * u.derivative(p.z).norm() * log_weight(phi.image_gap(p.z, p.gap))
    });
    let c25 = grid.max_over(exec, |p| {
        if p.gap == 0.0 {
            return 0.0;
        }
        p.gap / phi.image_gap(p.z, p.gap) * (u.value(p.z) * phi.derivative(p.z)).norm()
    });
    let c26 = grid.max_over(exec, |p| if p.gap == 0.0 { 0.0 } else { p.gap * u.derivative(p.z).norm() * log_weight(p.gap) });
    let sup_u = grid.max_over(exec, |p| u.value(p.z).norm());
    Ok(ConditionSuprema {
        c24: NormEstimate::from_grid_levels(c24, grid),
        c25: NormEstimate::from_grid_levels(c25, grid),
        c26: NormEstimate::from_grid_levels(c26, grid),
        sup_u: NormEstimate::from_grid_levels(sup_u, grid),
    })
}

/// Errors unless `1 - |φ(z)|² > 0` at every interior grid point.
pub fn ensure_selfmap<S: SelfMap + ?Sized>(phi: &S, grid: &DiscGrid, exec: Exec) -> Result<()> {
    let worst = par::min_by(exec, grid.interior(), |p| phi.image_gap(p.z, p.gap));
    if worst > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("not a selfmap of the disc: 1 - |φ(z)|² reaches {worst:e} at an interior grid point")))
    }
}
