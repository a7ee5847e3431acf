use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::unit_root;

/// Parameters of a [`DiscGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridParams {
    /// Number of interior rings `R`; ring `k` sits at radius `1 - 2^{-kβ}`.
    pub radial_levels: u32,
    /// Refinement exponent `β`.
    pub beta: f64,
    /// Add the unit circle as an extra ring.
    pub boundary: bool,
    /// Every angular count is multiplied by `2^angular_scale`.
    pub angular_scale: u32,
    pub min_angular: usize,
    /// Cap on the base angular count of a ring (before scaling).
    pub max_angular: usize,
}

impl Default for GridParams {
    fn default() -> Self {
        GridParams {
            radial_levels: 12,
            beta: 0.75,
            boundary: true,
            angular_scale: 0,
            min_angular: 8,
            max_angular: 4096,
        }
    }
}

/// Compact description of a grid, carried by estimates and reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDescriptor {
    pub params: GridParams,
    pub points: usize,
    pub max_radius: f64,
    /// Centres of the local patches added by [`DiscGrid::with_focus`].
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub focus: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub z: Complex64,
    /// `1 - |z|²`, computed without cancellation; 0 on the boundary ring.
    pub gap: f64,
    /// How many times this point survives [`DiscGrid::coarsened`].
    pub depth: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ring {
    pub radius: f64,
    pub gap: f64,
    pub count: usize,
}

/// Polar sampling of the closed disc: the origin, rings accumulating at the
/// circle and optionally the circle itself.
///
/// Angular counts are powers of two, so [`DiscGrid::refined`] (twice the
/// rings, twice the angles) contains every point of the original grid and
/// grid maxima never decrease under refinement.
#[derive(Debug, Clone)]
pub struct DiscGrid {
    params: GridParams,
    rings: Vec<Ring>,
    points: Vec<GridPoint>,
    focus: Vec<Complex64>,
}

/// Points with `1 - |z| = δ 2^{k/2}`, `-20 ≤ k ≤ 12`, and angles
/// `arg ζ ± δ 2^{k/2}`, `-8 ≤ k ≤ 12`, around a point `ζ` at distance
/// `δ = |ζ| - 1` outside the circle.
fn focus_patch(zeta: Complex64) -> Vec<(Complex64, f64)> {
    let delta = zeta.norm() - 1.0;
    let theta = zeta.arg();
    let mut angles = vec![theta];
    for k in -8..=12 {
        let t = delta * (k as f64 / 2.0).exp2();
        if t < std::f64::consts::PI {
            angles.extend([theta - t, theta + t]);
        }
    }
    let mut out = Vec::new();
    for k in -20..=12 {
        let h = delta * (k as f64 / 2.0).exp2();
        if !(h < 1.0 && h > 1e-15) {
            continue;
        }
        let gap = h * (2.0 - h);
        out.extend(angles.iter().map(|&a| (Complex64::from_polar(1.0 - h, a), gap)));
    }
    out
}

fn base_count(params: &GridParams, one_minus_r: f64) -> usize {
    let want = (std::f64::consts::TAU / one_minus_r).ceil() as usize;
    want.max(params.min_angular).next_power_of_two().min(params.max_angular.next_power_of_two())
}

impl DiscGrid {
    pub fn new(params: GridParams) -> Result<Self> {
        if params.radial_levels == 0 {
            return Err(Error::domain("grid needs at least one radial level"));
        }
        if !(params.beta > 0.0) || !params.beta.is_finite() {
            return Err(Error::domain("grid refinement exponent must be positive"));
        }
        if params.radial_levels as f64 * params.beta > 50.0 {
            return Err(Error::domain(format!(
                "innermost boundary distance 2^-{} is below double precision resolution",
                params.radial_levels as f64 * params.beta
            )));
        }
        if params.min_angular == 0 || params.max_angular < params.min_angular || params.angular_scale > 16 {
            return Err(Error::domain("invalid angular counts"));
        }
        let scale = 1usize << params.angular_scale;
        let mut rings = Vec::with_capacity(params.radial_levels as usize + 2);
        rings.push(Ring { radius: 0.0, gap: 1.0, count: 1 });
        let mut last = 0;
        for k in 1..=params.radial_levels {
            let h = (-(k as f64) * params.beta).exp2();
            let count = base_count(&params, h) * scale;
            last = count;
            rings.push(Ring { radius: 1.0 - h, gap: h * (2.0 - h), count });
        }
        if params.boundary {
            let count = last.max(params.max_angular.next_power_of_two() * scale);
            rings.push(Ring { radius: 1.0, gap: 0.0, count });
        }

        let max_depth = params.angular_scale.min(params.radial_levels.trailing_zeros());
        let mut points = Vec::with_capacity(rings.iter().map(|r| r.count).sum());
        for (k, ring) in rings.iter().enumerate() {
            let interior_k = k as u32;
            let ring_depth = if k == 0 || ring.gap == 0.0 {
                max_depth
            } else {
                // ring k survives i coarsenings while k ≤ R / 2^i
                (0..=max_depth)
                    .take_while(|&i| interior_k <= params.radial_levels >> i)
                    .last()
                    .unwrap_or(0)
            };
            for j in 0..ring.count {
                let depth = if k == 0 { ring_depth } else { ring_depth.min(j.trailing_zeros()).min(max_depth) };
                let z = if ring.radius == 0.0 { Complex64::new(0.0, 0.0) } else { unit_root(j, ring.count) * ring.radius };
                points.push(GridPoint { z, gap: ring.gap, depth });
            }
        }
        Ok(DiscGrid { params, rings, points, focus: Vec::new() })
    }

    /// Adds a local patch of interior points near each `ζ` with
    /// `1 < |ζ| < 2`, resolving the boundary layer of a pole at `ζ` down to a
    /// distance far below the ring spacing. Patch points belong to every
    /// nested coarsening, so refinement histories see the same peak at every
    /// level. Other centres are ignored.
    pub fn with_focus(mut self, centres: &[Complex64]) -> DiscGrid {
        let boundary_start = self.interior().len();
        let depth = self.depth();
        let mut extra = Vec::new();
        for &zeta in centres {
            let r = zeta.norm();
            if !(r > 1.0 && r < 2.0) || self.focus.contains(&zeta) {
                continue;
            }
            self.focus.push(zeta);
            extra.extend(focus_patch(zeta).into_iter().map(|(z, gap)| GridPoint { z, gap, depth }));
        }
        // the boundary ring stays last
        self.points.splice(boundary_start..boundary_start, extra);
        self
    }

    /// Centres passed to [`DiscGrid::with_focus`] that produced a patch.
    pub fn focus(&self) -> &[Complex64] {
        &self.focus
    }

    pub fn params(&self) -> &GridParams {
        &self.params
    }

    pub fn rings(&self) -> &[Ring] {
        &self.rings
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    /// Every point except the boundary ring (which is stored last).
    pub fn interior(&self) -> &[GridPoint] {
        let end = self.points.iter().rposition(|p| p.gap > 0.0).map_or(0, |i| i + 1);
        &self.points[..end]
    }

    /// Twice the rings, twice the angles; focus patches are kept.
    pub fn refined(&self) -> Result<DiscGrid> {
        Ok(DiscGrid::new(GridParams {
            radial_levels: self.params.radial_levels * 2,
            angular_scale: self.params.angular_scale + 1,
            ..self.params
        })?
        .with_focus(&self.focus))
    }

    /// The grid this one refines, if it exists.
    pub fn coarsened(&self) -> Option<DiscGrid> {
        if self.params.angular_scale == 0 || !self.params.radial_levels.is_multiple_of(2) {
            return None;
        }
        DiscGrid::new(GridParams {
            radial_levels: self.params.radial_levels / 2,
            angular_scale: self.params.angular_scale - 1,
            ..self.params
        })
        .ok()
        .map(|g| g.with_focus(&self.focus))
    }

    /// Number of nested coarser grids contained in this one.
    pub fn depth(&self) -> u32 {
        self.params.angular_scale.min(self.params.radial_levels.trailing_zeros())
    }

    pub fn descriptor(&self) -> GridDescriptor {
        GridDescriptor {
            params: self.params,
            points: self.points.len(),
            max_radius: self.rings.last().map_or(0.0, |r| r.radius),
            focus: self.focus.clone(),
        }
    }

    /// Maxima of `f` over this grid and each of its coarsenings, finest
    /// first: entry `i` is the maximum over the grid coarsened `i` times.
    /// One evaluation per point. NaN propagates.
    pub fn max_over<F>(&self, exec: Exec, f: F) -> Vec<f64>
    where
        F: Fn(&GridPoint) -> f64 + Sync + Send,
    {
        let values = par::map(exec, &self.points, |p| f(p));
        let levels = self.depth() as usize + 1;
        let mut at_depth = vec![f64::NEG_INFINITY; levels];
        for (p, v) in self.points.iter().zip(values) {
            let slot = &mut at_depth[p.depth as usize];
            if v.is_nan() || slot.is_nan() {
                *slot = f64::NAN;
            } else if v > *slot {
                *slot = v;
            }
        }
        // a point of depth d belongs to every grid coarsened ≤ d times
        for i in (0..levels - 1).rev() {
            let coarser = at_depth[i + 1];
            let slot = &mut at_depth[i];
            if coarser.is_nan() || slot.is_nan() {
                *slot = f64::NAN;
            } else if coarser > *slot {
                *slot = coarser;
            }
        }
        at_depth
    }
}
