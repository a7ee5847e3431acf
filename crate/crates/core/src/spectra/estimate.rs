use serde::{Deserialize, Serialize};

use super::{automorphism_of, elliptic_root_cloud_with, hyperbolic_moduli, MAX_PERIOD};
use crate::error::{Error, Result};
use crate::moebius::{classify, elliptic_period, AutomorphismKind};
use crate::norms::DiscGrid;
use crate::operators::WeightedCompositionOp;
use crate::par::{self, Exec};
use crate::symbols::{cocycle_sup_root, Holomorphic};

/// `(grid max |u_(n)|)^{1/n}` along a schedule, next to the radius predicted
/// from the fixed points of `φ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralRadiusEstimate {
    pub schedule: Vec<u64>,
    pub sequence: Vec<f64>,
    /// Aitken Δ² applied to the last three entries.
    pub extrapolated: Option<f64>,
    pub predicted: f64,
    /// `|last - predicted| / predicted`.
    pub relative_gap: f64,
}

impl SpectralRadiusEstimate {
    pub fn last(&self) -> f64 {
        *self.sequence.last().expect("nonempty schedule")
    }
}

/// `x₂ - (x₂ - x₁)² / ((x₂ - x₁) - (x₁ - x₀))`, or `None` when the second
/// difference vanishes.
pub fn aitken(x: &[f64]) -> Option<f64> {
    let [x0, x1, x2] = x[x.len().checked_sub(3)?..] else { return None };
    let d1 = x2 - x1;
    let d2 = d1 - (x1 - x0);
    if d2 == 0.0 || !(d2.abs() > 1e-15 * x2.abs()) {
        return None;
    }
    let v = x2 - d1 * d1 / d2;
    v.is_finite().then_some(v)
}

pub fn spectral_radius_estimate(op: &WeightedCompositionOp, schedule: &[u64], grid: &DiscGrid) -> Result<SpectralRadiusEstimate> {
    spectral_radius_estimate_with(op, schedule, grid, Exec::default())
}

pub fn spectral_radius_estimate_with(
    op: &WeightedCompositionOp,
    schedule: &[u64],
    grid: &DiscGrid,
    exec: Exec,
) -> Result<SpectralRadiusEstimate> {
    if schedule.is_empty() || schedule.contains(&0) {
        return Err(Error::domain("the schedule must be nonempty with every n ≥ 1"));
    }
    let phi = automorphism_of(op)?;
    let class = classify(&phi)?;
    let u = op.weight();
    let predicted = match class.kind {
        AutomorphismKind::Identity => par::max_by(exec, grid.points(), |p| u.value(p.z).norm()),
        AutomorphismKind::Parabolic => u.value(class.primary_point().expect("parabolic fixed point")).norm(),
        AutomorphismKind::Hyperbolic => {
            let (ua, ub) = hyperbolic_moduli(op, &class)?;
            ua.max(ub)
        }
        AutomorphismKind::Elliptic => match elliptic_period(&phi, &class, MAX_PERIOD) {
            Some(m) => elliptic_root_cloud_with(op, grid, m, exec)?.into_shape().radius(),
            None => u.value(class.primary_point().expect("elliptic fixed point")).norm(),
        },
    };
    let sequence = schedule
        .iter()
        .map(|&n| cocycle_sup_root(u, op.selfmap(), n, grid, exec))
        .collect::<Result<Vec<f64>>>()?;
    let last = *sequence.last().expect("nonempty");
    Ok(SpectralRadiusEstimate {
        schedule: schedule.to_vec(),
        extrapolated: aitken(&sequence),
        relative_gap: (last - predicted).abs() / predicted,
        predicted,
        sequence,
    })
}
