use serde::{Deserialize, Serialize};

use super::{Selfmap, Space, WeightedCompositionOp};
use crate::error::{Error, Result};
use crate::moebius::MoebiusTransform;
use crate::norms::{condition_suprema_with, ensure_selfmap, DiscGrid, GridParams, NormEstimate};
use crate::par::Exec;
use crate::symbols::{inf_modulus, Holomorphic, RationalSymbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Bounded,
    /// A witness grew at every grid doubling. Evidence, not proof.
    UnboundedEvidence,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    pub estimate: NormEstimate,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessVerdict {
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub note: Option<String>,
}

/// How grid suprema are turned into verdicts.
///
/// Every witness is evaluated on `base` refined `doublings` times; the
/// nested coarser grids give the refinement history at no extra cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerdictPolicy {
    pub base: GridParams,
    pub doublings: u32,
    /// Relative change over the last doubling below which a witness is stable.
    pub stable_rel: f64,
    /// Relative growth required at every doubling for unbounded evidence.
    pub growth_rel: f64,
    /// Grid minimum of `|u|` above which `u` counts as bounded away from zero.
    pub inf_threshold: f64,
}

impl Default for VerdictPolicy {
    fn default() -> Self {
        VerdictPolicy {
            base: GridParams { radial_levels: 4, max_angular: 256, ..GridParams::default() },
            doublings: 3,
            stable_rel: 0.01,
            growth_rel: 0.01,
            inf_threshold: 1e-6,
        }
    }
}

impl VerdictPolicy {
    /// The base grid refined `doublings` times.
    pub fn grid(&self) -> Result<DiscGrid> {
        let mut g = DiscGrid::new(self.base)?;
        for _ in 0..self.doublings {
            g = g.refined()?;
        }
        Ok(g)
    }

    /// [`VerdictPolicy::grid`] with local patches at the poles of `u`, whose
    /// peaks are narrower than the ring spacing when a pole is close to the
    /// circle.
    pub fn grid_for(&self, u: &RationalSymbol) -> Result<DiscGrid> {
        Ok(self.grid()?.with_focus(&u.poles()?))
    }

    pub fn judge(&self, levels: &[f64]) -> Verdict {
        if levels.len() < 2 || levels.iter().any(|v| v.is_nan()) {
            return Verdict::Inconclusive;
        }
        let rel = |fine: f64, coarse: f64| {
            if fine == coarse {
                0.0
            } else {
                (fine - coarse) / fine.abs().max(coarse.abs())
            }
        };
        if levels[0].is_infinite() {
            return Verdict::UnboundedEvidence;
        }
        if rel(levels[0], levels[1]).abs() < self.stable_rel {
            return Verdict::Bounded;
        }
        if levels.len() > 2 && levels.windows(2).all(|w| rel(w[0], w[1]) >= self.growth_rel) {
            return Verdict::UnboundedEvidence;
        }
        Verdict::Inconclusive
    }

    fn witness(&self, name: &str, estimate: NormEstimate) -> Witness {
        let verdict = self.judge(&estimate.levels);
        Witness { name: name.to_string(), estimate, verdict }
    }
}

fn combine(witnesses: Vec<Witness>, note: Option<String>) -> BoundednessVerdict {
    let verdict = if witnesses.iter().any(|w| w.verdict == Verdict::UnboundedEvidence) {
        Verdict::UnboundedEvidence
    } else if witnesses.iter().all(|w| w.verdict == Verdict::Bounded) {
        Verdict::Bounded
    } else {
        Verdict::Inconclusive
    };
    BoundednessVerdict { verdict, witnesses, note }
}

/// Grid estimate of `sup |u'|` over the closed disc.
fn derivative_sup<U: Holomorphic + ?Sized>(u: &U, grid: &DiscGrid) -> NormEstimate {
    NormEstimate::from_grid_levels(grid.max_over(Exec::default(), |p| u.derivative(p.z).norm()), grid)
}

/// Boundedness of `uC_φ`.
///
/// Bloch: both suprema `c24` (the log-weighted derivative of `u` at `φ`) and
/// `c25` (the weighted derivative of `φ`) must be stable. Dirichlet: weights
/// in our class are multipliers, so univalent `φ` gives a bounded operator;
/// other selfmaps are Inconclusive.
pub fn check_bounded(op: &WeightedCompositionOp, policy: &VerdictPolicy) -> Result<BoundednessVerdict> {
    let grid = policy.grid_for(&op.u)?;
    match op.space {
        Space::Bloch => {
            let s = condition_suprema_with(&op.u, &op.phi, &grid, Exec::default())?;
            Ok(combine(vec![policy.witness("c24", s.c24), policy.witness("c25", s.c25)], None))
        }
        Space::Dirichlet => {
            ensure_selfmap(&op.phi, &grid, Exec::default())?;
            let multiplier = dirichlet_multiplier(&op.u, &grid, policy);
            if op.phi.is_univalent() {
                Ok(combine(multiplier, Some("weight pole-free on the closed disc; univalent selfmap".into())))
            } else {
                let mut v = combine(multiplier, Some("non-univalent selfmap: outside the decidable class".into()));
                v.verdict = Verdict::Inconclusive;
                Ok(v)
            }
        }
    }
}

fn dirichlet_multiplier<U: Holomorphic + ?Sized>(u: &U, grid: &DiscGrid, policy: &VerdictPolicy) -> Vec<Witness> {
    let sup_u = NormEstimate::from_grid_levels(grid.max_over(Exec::default(), |p| u.value(p.z).norm()), grid);
    vec![policy.witness("sup_u", sup_u), policy.witness("sup_u_prime", derivative_sup(u, grid))]
}

/// Multiplier verdict for a general analytic `u` on the Bloch space:
/// `c26 = sup (1-|z|²)|u'| log(e/(1-|z|²))` and `sup |u|` must be stable.
pub fn holomorphic_multiplier_verdict<U: Holomorphic + ?Sized>(u: &U, policy: &VerdictPolicy) -> Result<BoundednessVerdict> {
    bloch_multiplier(u, &policy.grid()?, policy)
}

fn bloch_multiplier<U: Holomorphic + ?Sized>(u: &U, grid: &DiscGrid, policy: &VerdictPolicy) -> Result<BoundednessVerdict> {
    let s = condition_suprema_with(u, &MoebiusTransform::identity(), grid, Exec::default())?;
    Ok(combine(vec![policy.witness("c26", s.c26), policy.witness("sup_u", s.sup_u)], None))
}

/// Whether `f ↦ u f` is bounded on the space.
pub fn check_multiplier(u: &RationalSymbol, space: Space, policy: &VerdictPolicy) -> Result<BoundednessVerdict> {
    let grid = policy.grid_for(u)?;
    match space {
        Space::Bloch => bloch_multiplier(u, &grid, policy),
        Space::Dirichlet => {
            Ok(combine(
                dirichlet_multiplier(u, &grid, policy),
                Some("weight pole-free on the closed disc: u and u' bounded".into()),
            ))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Invertibility {
    pub invertible: bool,
    pub multiplier: BoundednessVerdict,
    pub inf_modulus: f64,
    pub automorphism: bool,
    /// `(1 / (u ∘ φ⁻¹)) C_{φ⁻¹}` when invertible.
    pub inverse: Option<WeightedCompositionOp>,
}

impl Invertibility {
    /// Human-readable reason for a negative answer.
    pub fn failure(&self) -> Option<String> {
        if self.invertible {
            return None;
        }
        let mut parts = Vec::new();
        if self.multiplier.verdict != Verdict::Bounded {
            parts.push(format!("weight is not a certified multiplier ({:?})", self.multiplier.verdict));
        }
        if !self.automorphism {
            parts.push("selfmap is not a disc automorphism".to_string());
        }
        parts.push(format!("min |u| on grid = {:e}", self.inf_modulus));
        Some(parts.join("; "))
    }
}

/// Invertibility of a bounded `uC_φ`: `u` a multiplier bounded away from
/// zero and `φ` an automorphism.
pub fn check_invertible(op: &WeightedCompositionOp, policy: &VerdictPolicy) -> Result<Invertibility> {
    let bounded = check_bounded(op, policy)?;
    if bounded.verdict != Verdict::Bounded {
        return Err(Error::precondition(format!(
            "operator is not certified bounded ({:?}); invertibility is not decided",
            bounded.verdict
        )));
    }
    let multiplier = check_multiplier(&op.u, op.space, policy)?;
    let grid = policy.grid()?;
    // the grid minimum only bounds the infimum from above; zeros of a
    // rational weight are located exactly
    let zero_inside = op.u.numerator().is_zero()
        || op.u.numerator().roots()?.iter().any(|r| r.norm() <= 1.0 + 1e-9);
    let inf = if zero_inside { 0.0 } else { inf_modulus(&op.u, &grid) };
    let auto = op.phi.automorphism().copied();
    let invertible = multiplier.verdict == Verdict::Bounded && inf > policy.inf_threshold && auto.is_some();
    let inverse = match (invertible, auto) {
        (true, Some(phi)) => {
            let psi = phi.inverse();
            let w = op.u.compose_with_moebius(&psi)?.reciprocal()?;
            Some(WeightedCompositionOp { u: w, phi: Selfmap::Moebius(psi), space: op.space })
        }
        _ => None,
    };
    Ok(Invertibility { invertible, multiplier, inf_modulus: inf, automorphism: auto.is_some(), inverse })
}
