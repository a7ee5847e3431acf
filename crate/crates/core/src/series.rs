//! Truncated power series with complex coefficients (ascending order).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// First `n` coefficients of `a · b`.
pub fn mul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// First `n` coefficients of `num / den`; `den[0]` must be nonzero.
pub fn div(num: &[Complex64], den: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
    let d0 = den.first().copied().unwrap_or_default();
    if d0.norm() == 0.0 {
        return Err(Error::domain("series division by a function vanishing at 0"));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let mut acc = num.get(k).copied().unwrap_or_default();
        for j in 1..=k.min(den.len().saturating_sub(1)) {
            acc -= den[j] * out[k - j];
        }
        out[k] = acc / d0;
    }
    Ok(out)
}
