use kdtree::distance::squared_euclidean;
use kdtree::KdTree;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{automorphism_of, SpectrumShape, MAX_PERIOD};
use crate::error::{Error, Result};
use crate::moebius::{classify, elliptic_period, AutomorphismKind};
use crate::norms::DiscGrid;
use crate::operators::WeightedCompositionOp;
use crate::par::{self, Exec};
use crate::symbols::cocycle_eval;
use crate::unit_root;

/// All `m`-th roots of the sampled values of `u_(m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootCloud {
    pub m: u32,
    pub points: Vec<Complex64>,
    /// Hausdorff distance between this cloud and the cloud of the next
    /// coarser nested grid, when the grid has one.
    pub coverage: Option<f64>,
}

impl RootCloud {
    pub fn into_shape(self) -> SpectrumShape {
        SpectrumShape::RootSetClosure { m: self.m, points: self.points, coverage: self.coverage }
    }
}

/// Root cloud of a periodic elliptic `uC_φ` with the detected minimal period.
pub fn elliptic_root_cloud(op: &WeightedCompositionOp, grid: &DiscGrid) -> Result<RootCloud> {
    let phi = automorphism_of(op)?;
    let class = classify(&phi)?;
    if class.kind != AutomorphismKind::Elliptic {
        return Err(Error::precondition(format!("root clouds need an elliptic map, got {:?}", class.kind)));
    }
    let m = elliptic_period(&phi, &class, MAX_PERIOD).ok_or_else(|| {
        Error::precondition(format!("no period ≤ {MAX_PERIOD} detected; use predict_spectrum for aperiodic maps"))
    })?;
    elliptic_root_cloud_with(op, grid, m, Exec::default())
}

/// Root cloud for a given `m` (no period check). The cloud is closed under
/// multiplication by `e^{2πi/m}` up to rounding, exactly for `m ∈ {1, 2, 4}`.
pub fn elliptic_root_cloud_with(op: &WeightedCompositionOp, grid: &DiscGrid, m: u32, exec: Exec) -> Result<RootCloud> {
    if m == 0 {
        return Err(Error::domain("period must be ≥ 1"));
    }
    let roots = par::map(exec, grid.points(), |p| {
        let v = cocycle_eval(op.weight(), op.selfmap(), m as u64, p.z);
        principal_root(v, m)
    });
    let expand = |selected: &mut dyn Iterator<Item = Complex64>| -> Vec<Complex64> {
        selected.flat_map(|r| (0..m as usize).map(move |k| r * unit_root(k, m as usize))).collect()
    };
    let points = expand(&mut roots.iter().copied());
    let coverage = if grid.depth() > 0 {
        let coarse = expand(&mut grid.points().iter().zip(&roots).filter(|(p, _)| p.depth >= 1).map(|(_, r)| *r));
        Some(hausdorff_to_subset(&points, &coarse, exec))
    } else {
        None
    };
    Ok(RootCloud { m, points, coverage })
}

fn principal_root(v: Complex64, m: u32) -> Complex64 {
    match m {
        1 => v,
        2 => v.sqrt(),
        _ => Complex64::from_polar(v.norm().powf(1.0 / m as f64), v.arg() / m as f64),
    }
}

/// `max_{p ∈ set} min_{q ∈ subset} |p - q|`: the Hausdorff distance when
/// `subset ⊆ set`. Nearest neighbours come from a k-d tree over `subset`.
pub fn hausdorff_to_subset(set: &[Complex64], subset: &[Complex64], exec: Exec) -> f64 {
    if subset.is_empty() {
        return f64::INFINITY;
    }
    // repeated points (a constant cocycle maps the whole grid to m points)
    // make the k-d tree quadratic, and add nothing to either maximum
    let (set, subset) = (distinct(set), distinct(subset));
    let mut tree = KdTree::with_capacity(2, 32);
    for q in subset.iter().filter(|q| q.is_finite()) {
        tree.add([q.re, q.im], ()).expect("finite point");
    }
    par::max_by(exec, &set, |p| match tree.nearest(&[p.re, p.im], 1, &squared_euclidean) {
        Ok(nearest) => nearest.first().map_or(f64::INFINITY, |(d2, _)| d2.sqrt()),
        Err(_) => f64::INFINITY,
    })
}

/// The points with bitwise duplicates removed, `-0.0` counted as `0.0`.
fn distinct(points: &[Complex64]) -> Vec<Complex64> {
    let key = |z: &Complex64| ((z.re + 0.0).to_bits(), (z.im + 0.0).to_bits());
    let mut v = points.to_vec();
    v.sort_unstable_by_key(key);
    v.dedup_by_key(|z| key(z));
    v
}
