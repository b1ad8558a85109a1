//! Matrix exponential by scaling and squaring with a truncated Taylor series.

use num_complex::Complex64;

use super::{ComplexMatrix, NumericsError};

/// Scaled norm threshold below which the Taylor series is summed directly.
const SCALED_NORM: f64 = 0.25;
const MAX_TERMS: usize = 40;

/// `exp(a)` for a square matrix.
///
/// The input is scaled by `2^-s` until its 1-norm is at most 0.25, the series
/// is summed until terms drop below machine precision relative to the partial
/// sum, and the result is squared back `s` times.
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix, NumericsError> {
    if !a.is_square() {
        return Err(NumericsError::NotSquare {
            op: "expm",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let norm = a.norm_one();
    let squarings = if norm > SCALED_NORM {
        (norm / SCALED_NORM).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale_real(0.5f64.powi(squarings as i32));

    let mut result = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=MAX_TERMS {
        term = term.matmul(&scaled)?.scale(Complex64::new(1.0 / k as f64, 0.0));
        result.axpy(Complex64::new(1.0, 0.0), &term)?;
        if term.max_abs() <= f64::EPSILON * 1e-2 * result.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.matmul(&result)?;
    }
    Ok(result)
}
