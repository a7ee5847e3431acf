//! Dense complex eigenvalues and singular values.
//!
//! The Schur/QR iteration and SVD are nalgebra's; this module adds
//! diagonal balancing, the sweep budget and error reporting.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Parlett–Reinsch balancing by powers of two. Returns the similar matrix
/// `D⁻¹ A D`; eigenvalues are unchanged and exactly representable scaling
/// introduces no rounding.
pub fn balance(mut a: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    let radix = 2.0f64;
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in 0..n {
                if j != i {
                    col += a[(j, i)].l1_norm();
                    row += a[(i, j)].l1_norm();
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            let mut g = row / radix;
            while col < g {
                f *= radix;
                col *= radix * radix;
            }
            g = row * radix;
            while col > g {
                f /= radix;
                col /= radix * radix;
            }
            if (col + row) / f < 0.95 * total {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
    a
}

/// Eigenvalues of a square complex matrix: balancing, Hessenberg reduction
/// and shifted QR. Fails after `30·n` sweeps.
pub fn eigenvalues(a: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::domain("eigenvalues of a non-square matrix"));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical(format!("{n}x{n} matrix has non-finite entries")));
    }
    let balanced = balance(a.clone());
    let schur = nalgebra::Schur::try_new(balanced, f64::EPSILON, 30 * n).ok_or_else(|| {
        let norm = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        Error::Numerical(format!("QR iteration did not converge in {} sweeps ({n}x{n}, Frobenius norm {norm:.3e})", 30 * n))
    })?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Smallest singular value.
pub fn min_singular_value(a: &DMatrix<Complex64>) -> Result<f64> {
    let svd = nalgebra::SVD::try_new(a.clone(), false, false, f64::EPSILON, 200 * a.nrows().max(1))
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    Ok(svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Roots of the polynomial with ascending coefficients `coeffs`, from the
/// eigenvalues of its companion matrix. Trailing zero coefficients are
/// ignored; a constant has no roots.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = match coeffs.iter().rposition(|c| c.norm() != 0.0) {
        Some(d) => d,
        None => return Err(Error::domain("roots of the zero polynomial")),
    };
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    if degree == 1 {
        return Ok(vec![-coeffs[0] / lead]);
    }
    let mut m = DMatrix::<Complex64>::zeros(degree, degree);
    for i in 1..degree {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..degree {
        m[(i, degree - 1)] = -coeffs[i] / lead;
    }
    eigenvalues(&m)
}
