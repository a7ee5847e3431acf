use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{automorphism_of, hyperbolic_moduli};
use crate::error::{Error, Result};
use crate::linalg;
use crate::moebius::{classify, AutomorphismKind};
use crate::operators::{taylor_truncation, TruncationMatrix, WeightedCompositionOp, MAX_TRUNCATION};
use crate::par::{self, Exec};

/// Eigenvalues of a Taylor truncation. Exploratory: the relation to the
/// spectrum of the operator on the Bloch or Dirichlet space is unknown.
pub fn truncation_eigenvalues(m: &TruncationMatrix) -> Result<Vec<Complex64>> {
    if m.size() > MAX_TRUNCATION {
        return Err(Error::domain(format!("truncation size {} exceeds {MAX_TRUNCATION}", m.size())));
    }
    linalg::eigenvalues(&m.entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeRegion {
    /// Strictly between the two radii.
    Inside,
    /// On the outer circle `|λ| = r_max`.
    Boundary,
    /// Outside the annulus.
    Outside,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSample {
    pub lambda: Complex64,
    pub region: ProbeRegion,
    /// `(N, ‖(λ - M_N)^{-1}‖₂)` for each truncation size.
    pub resolvent_norms: Vec<(usize, f64)>,
    /// Last resolvent norm over the first.
    pub growth: f64,
}

/// Resolvent-norm evidence on the annulus of a hyperbolic operator with
/// `|u(a)| ≠ |u(b)|`, whose full spectrum is not known. No pass/fail meaning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureProbe {
    pub r_min: f64,
    pub r_max: f64,
    pub sizes: Vec<usize>,
    pub samples: Vec<ProbeSample>,
    pub exploratory: bool,
}

fn resolvent_norm(m: &DMatrix<Complex64>, lambda: Complex64) -> Result<f64> {
    let n = m.nrows();
    let shifted = DMatrix::from_diagonal_element(n, n, lambda) - m;
    let s = linalg::min_singular_value(&shifted)?;
    Ok(if s == 0.0 { f64::INFINITY } else { 1.0 / s })
}

/// Samples `lambda_samples` points inside the annulus (golden-angle spiral),
/// one point on its outer circle, one at distance 0.5 outside, and any
/// `extra` points; `λ = 0` is rejected since the operator is invertible.
pub fn conjecture_probe(
    op: &WeightedCompositionOp,
    lambda_samples: usize,
    sizes: &[usize],
    extra: &[Complex64],
) -> Result<ConjectureProbe> {
    if extra.iter().any(|l| l.norm() == 0.0) {
        return Err(Error::domain("λ = 0 lies in the resolvent set of an invertible operator"));
    }
    if sizes.is_empty() {
        return Err(Error::domain("at least one truncation size is required"));
    }
    let phi = automorphism_of(op)?;
    let class = classify(&phi)?;
    if class.kind != AutomorphismKind::Hyperbolic {
        return Err(Error::precondition(format!("the probe needs a hyperbolic map, got {:?}", class.kind)));
    }
    let (ua, ub) = hyperbolic_moduli(op, &class)?;
    let (lo, hi) = (ua.min(ub), ua.max(ub));
    if hi - lo <= 1e-12 * hi {
        return Err(Error::precondition("|u(a)| = |u(b)|: the spectrum is already known to be a circle"));
    }

    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut lambdas: Vec<(Complex64, ProbeRegion)> = (0..lambda_samples)
        .map(|k| {
            let r = lo + (hi - lo) * (k as f64 + 0.5) / lambda_samples as f64;
            (Complex64::from_polar(r, golden * k as f64), ProbeRegion::Inside)
        })
        .collect();
    lambdas.push((Complex64::new(hi, 0.0), ProbeRegion::Boundary));
    lambdas.push((Complex64::new(hi + 0.5, 0.0), ProbeRegion::Outside));
    for &l in extra {
        let r = l.norm();
        let region = if (r - hi).abs() <= 1e-12 * hi {
            ProbeRegion::Boundary
        } else if r > lo && r < hi {
            ProbeRegion::Inside
        } else {
            ProbeRegion::Outside
        };
        lambdas.push((l, region));
    }

    let matrices = sizes.iter().map(|&n| taylor_truncation(op, n)).collect::<Result<Vec<_>>>()?;
    let rows = par::map(Exec::default(), &lambdas, |&(lambda, region)| -> Result<ProbeSample> {
        let norms = sizes
            .iter()
            .zip(&matrices)
            .map(|(&n, m)| Ok((n, resolvent_norm(&m.entries, lambda)?)))
            .collect::<Result<Vec<_>>>()?;
        let growth = norms.last().expect("sizes").1 / norms[0].1;
        Ok(ProbeSample { lambda, region, resolvent_norms: norms, growth })
    });
    Ok(ConjectureProbe {
        r_min: lo,
        r_max: hi,
        sizes: sizes.to_vec(),
        samples: rows.into_iter().collect::<Result<Vec<_>>>()?,
        exploratory: true,
    })
}
