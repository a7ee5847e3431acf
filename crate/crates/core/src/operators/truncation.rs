use nalgebra::DMatrix;
use num_complex::Complex64;

use super::WeightedCompositionOp;
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::series;

pub const MAX_TRUNCATION: usize = 512;

/// `N × N` section of `uC_φ` in the monomial basis: column `k` holds the
/// first `N` Taylor coefficients of `u · φ^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationMatrix {
    pub entries: DMatrix<Complex64>,
}

impl TruncationMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }
}

pub fn taylor_truncation(op: &WeightedCompositionOp, n: usize) -> Result<TruncationMatrix> {
    taylor_truncation_with(op, n, Exec::default())
}

pub fn taylor_truncation_with(op: &WeightedCompositionOp, n: usize, exec: Exec) -> Result<TruncationMatrix> {
    if n == 0 || n > MAX_TRUNCATION {
        return Err(Error::domain(format!("truncation size {n} outside 1..={MAX_TRUNCATION}")));
    }
    let u = op.weight().taylor(n)?;
    let phi = op.selfmap().taylor(n)?;
    let mut powers = Vec::with_capacity(n);
    let mut p = vec![Complex64::new(0.0, 0.0); n];
    p[0] = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        let next = series::mul(&p, &phi, n);
        powers.push(p);
        p = next;
    }
    let columns = par::map(exec, &powers, |pk| series::mul(&u, pk, n));
    let entries = DMatrix::from_fn(n, n, |i, k| columns[k][i]);
    Ok(TruncationMatrix { entries })
}
