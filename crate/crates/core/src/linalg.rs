//! Thin wrappers over nalgebra for the small dense complex systems used by
//! the Padé construction.

use nalgebra::{DMatrix, DVector};

use crate::series::Complex;

pub(crate) fn matrix(rows: usize, cols: usize, entry: impl Fn(usize, usize) -> Complex) -> DMatrix<Complex> {
    DMatrix::from_fn(rows, cols, entry)
}

pub(crate) fn determinant(m: DMatrix<Complex>) -> Complex {
    if m.nrows() == 0 {
        return Complex::new(1.0, 0.0);
    }
    m.lu().determinant()
}

pub(crate) fn solve(m: DMatrix<Complex>, rhs: Vec<Complex>) -> Option<Vec<Complex>> {
    let b = DVector::from_vec(rhs);
    m.lu().solve(&b).map(|x| x.iter().copied().collect())
}

/// Roots of `sum coeffs[k] w^k` (in the local variable `w`), via the
/// eigenvalues of the companion matrix. Trailing zero coefficients must
/// already be trimmed.
pub(crate) fn polynomial_roots(coeffs: &[Complex]) -> Vec<Complex> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let companion = DMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            -coeffs[n - 1 - j] / lead
        } else if i == j + 1 {
            Complex::new(1.0, 0.0)
        } else {
            Complex::default()
        }
    });
    companion
        .schur()
        .eigenvalues()
        .map(|ev| ev.iter().copied().collect())
        .unwrap_or_default()
}
