//! Flat metric, Levi-Civita symbol, and the transcription between double
//! tensor indices and the 20-component layout of the direct-sum field.
//!
//! Every public function speaks 1-based tensor indices (`4` is time) and
//! 1-based flat indices (`1..=4` vector part, `5..=20` tensor part).

use crate::error::{Error, Result};
use nalgebra::Matrix4;

/// Double-index pairs in flat order; position `i` is flat index `5 + i`.
pub const PAIR_ORDER: [(usize, usize); 16] = [
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 4),
    (1, 1),
    (2, 2),
    (3, 3),
    (4, 4),
    (2, 1),
    (3, 1),
    (4, 1),
    (3, 2),
    (4, 2),
    (4, 3),
];

// TENSOR_SLOT[a][b] = 0-based position in PAIR_ORDER of the 0-based pair (a, b).
const TENSOR_SLOT: [[usize; 4]; 4] = {
    let mut table = [[0usize; 4]; 4];
    let mut i = 0;
    while i < 16 {
        let (a, b) = PAIR_ORDER[i];
        table[a - 1][b - 1] = i;
        i += 1;
    }
    table
};

/// The flat spacetime metric `diag(+1, +1, +1, -1)`.
///
/// Upper and lower forms coincide, so a single object serves for raising
/// and lowering.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Metric;

impl Metric {
    /// Component `η(alpha, beta)` with 1-based indices.
    pub fn component(alpha: usize, beta: usize) -> Result<f64> {
        check_tensor_index(alpha)?;
        check_tensor_index(beta)?;
        Ok(eta(alpha - 1, beta - 1))
    }

    pub fn matrix() -> Matrix4<f64> {
        Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0))
    }

    /// `η_{αβ} a^α b^β`.
    pub fn dot(a: &nalgebra::Vector4<f64>, b: &nalgebra::Vector4<f64>) -> f64 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3]
    }

    /// Lowers (or raises) the index of a 4-vector.
    pub fn lower(a: &nalgebra::Vector4<f64>) -> nalgebra::Vector4<f64> {
        nalgebra::Vector4::new(a[0], a[1], a[2], -a[3])
    }
}

/// 0-based metric component.
#[inline]
pub(crate) fn eta(a: usize, b: usize) -> f64 {
    if a != b {
        0.0
    } else if a == 3 {
        -1.0
    } else {
        1.0
    }
}

/// 0-based Kronecker delta.
#[inline]
pub(crate) fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Bijection between double tensor indices and flat indices `5..=20`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IndexMap;

impl IndexMap {
    /// Flat index of the tensor component `(alpha, beta)`.
    pub fn flat_of(alpha: usize, beta: usize) -> Result<usize> {
        check_tensor_index(alpha)?;
        check_tensor_index(beta)?;
        Ok(5 + TENSOR_SLOT[alpha - 1][beta - 1])
    }

    /// Inverse of [`IndexMap::flat_of`].
    pub fn double_of(n: usize) -> Result<(usize, usize)> {
        if !(5..=20).contains(&n) {
            return Err(Error::FlatIndex(n));
        }
        Ok(PAIR_ORDER[n - 5])
    }
}

/// 0-based position within the 16-component tensor block.
#[inline]
pub(crate) fn tensor_slot(a: usize, b: usize) -> usize {
    TENSOR_SLOT[a][b]
}

/// 0-based row/column in the 20-component layout.
#[inline]
pub(crate) fn flat_slot(a: usize, b: usize) -> usize {
    4 + TENSOR_SLOT[a][b]
}

/// Levi-Civita symbol `ε_{srab}` with the convention `ε_{1234} = +1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LeviCivita;

impl LeviCivita {
    pub fn epsilon(s: usize, r: usize, a: usize, b: usize) -> Result<i32> {
        for i in [s, r, a, b] {
            check_tensor_index(i)?;
        }
        Ok(epsilon0([s - 1, r - 1, a - 1, b - 1]))
    }
}

/// 0-based Levi-Civita symbol, counting inversions.
pub(crate) fn epsilon0(idx: [usize; 4]) -> i32 {
    let mut sign = 1;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if idx[i] == idx[j] {
                return 0;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

pub(crate) fn check_tensor_index(i: usize) -> Result<()> {
    if (1..=4).contains(&i) {
        Ok(())
    } else {
        Err(Error::TensorIndex(i))
    }
}
