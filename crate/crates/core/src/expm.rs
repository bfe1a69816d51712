//! Matrix exponential for small dense complex matrices.
//!
//! Scaling and squaring around a truncated Taylor series: the argument is
//! halved until its 1-norm is below 1/2, the series is summed until terms
//! stop contributing, and the result is squared back up.

use crate::C64;
use nalgebra::SMatrix;

const MAX_TERMS: usize = 30;

fn norm1<const N: usize>(a: &SMatrix<C64, N, N>) -> f64 {
    (0..N)
        .map(|j| (0..N).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(a)` for an `N×N` complex matrix.
pub fn expm<const N: usize>(a: &SMatrix<C64, N, N>) -> SMatrix<C64, N, N> {
    let norm = norm1(a);
    if norm == 0.0 {
        return SMatrix::identity();
    }
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * C64::new(0.5f64.powi(squarings), 0.0);

    let mut result = SMatrix::<C64, N, N>::identity();
    let mut term = SMatrix::<C64, N, N>::identity();
    for n in 1..=MAX_TERMS {
        term = (term * scaled) / C64::new(n as f64, 0.0);
        result += term;
        if norm1(&term) <= f64::EPSILON * norm1(&result) * 1e-2 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result * result;
    }
    result
}
