//! Matrix exponential by scaling and squaring.

use super::{Complex64, ComplexMatrix};

/// exp(A) for a square matrix.
///
/// The argument is scaled by a power of two until its Frobenius norm is at
/// most 1/2, the Taylor series is summed until the next term falls below
/// machine precision relative to the partial sum, and the result is squared
/// back up. For norms in this range the series truncation error is far below
/// 1e-13 of the result norm.
pub fn matrix_exp(a: &ComplexMatrix) -> ComplexMatrix {
    assert!(a.is_square(), "matrix_exp needs a square matrix");
    let n = a.rows();
    let norm = a.frobenius_norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let t = a.scale(Complex64::new(1.0 / 2f64.powi(squarings as i32), 0.0));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=64u32 {
        term = (&term * &t).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = &sum + &term;
        if term.frobenius_norm() <= f64::EPSILON * sum.frobenius_norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}
