//! Numerical toolkit for weighted composition operators `f ↦ u · (f ∘ φ)`
//! on the Bloch and Dirichlet spaces of the unit disc.
//!
//! * [`moebius`]: disc automorphisms, classification, iterates, hyperbolic metric.
//! * [`symbols`]: rational weights, Blaschke products, cocycles `u_(n)`.
//! * [`norms`]: boundary-refined disc grids, area quadrature, norm and
//!   supremum estimators.
//! * [`operators`]: the operator object, boundedness / multiplier /
//!   invertibility verdicts, norm bounds, Taylor truncations.
//! * [`spectra`]: spectrum predictions and the numerical estimators that
//!   cross-check them.

// `!(x < y)` comparisons are deliberate: they reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod linalg;
pub mod moebius;
pub mod norms;
pub mod operators;
pub mod par;
pub mod series;
pub mod spectra;
pub mod symbols;

pub use error::{Error, Result};
pub use moebius::{AutomorphismClass, AutomorphismKind, MoebiusTransform};
pub use norms::{DiscGrid, GridParams, NormEstimate, QuadratureRule};
pub use operators::{BoundednessVerdict, Selfmap, Space, Verdict, VerdictPolicy, WeightedCompositionOp};
pub use spectra::{SpectralRadiusEstimate, SpectrumPrediction, SpectrumShape};


pub use symbols::{BlaschkeProduct, Holomorphic, LogWeightFunction, Polynomial, RationalSymbol, SelfMap};

pub use num_complex::Complex64;

/// `e^{2πi k / m}`, exact at multiples of a quarter turn.
pub fn unit_root(k: usize, m: usize) -> Complex64 {
    let k = k % m;
    if (4 * k).is_multiple_of(m) {
        return match 4 * k / m {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let theta = std::f64::consts::TAU * k as f64 / m as f64;
    let (s, c) = theta.sin_cos();
    Complex64::new(c, s)
}
