//! Finite transformation matrices `D(Λ, δx)` and checks of the Poincaré
//! commutation rules.

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::generators::GeneratorSet;
use crate::indexing::{check_tensor_index, eta, Metric};
use crate::{Mat20, C64};
use nalgebra::{Matrix4, Vector4};
use std::ops::Mul;

/// Antisymmetric Lorentz parameters `ω_{μν}` (both indices down).
///
/// Stored 0-based; [`Omega::component`] takes 1-based indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Omega(Matrix4<f64>);

impl Omega {
    /// Rejects any matrix that is not exactly antisymmetric.
    pub fn new(omega: Matrix4<f64>) -> Result<Self> {
        for row in 0..4 {
            for col in row..4 {
                if omega[(row, col)] != -omega[(col, row)] {
                    return Err(Error::NotAntisymmetric {
                        row: row + 1,
                        col: col + 1,
                    });
                }
            }
        }
        Ok(Self(omega))
    }

    pub fn zero() -> Self {
        Self(Matrix4::zeros())
    }

    /// Builds `ω` from the six upper-triangle entries
    /// `(ω_12, ω_13, ω_14, ω_23, ω_24, ω_34)`.
    pub fn from_upper(upper: [f64; 6]) -> Self {
        let mut m = Matrix4::zeros();
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for (&(r, c), &w) in pairs.iter().zip(upper.iter()) {
            m[(r, c)] = w;
            m[(c, r)] = -w;
        }
        Self(m)
    }

    /// Counter-clockwise rotation of the 1-2 plane by `theta`.
    ///
    /// The vector block of the resulting matrix is
    /// `[[cos θ, −sin θ], [sin θ, cos θ]]`, which needs `ω_12 = −θ`.
    pub fn rotation_z(theta: f64) -> Self {
        Self::from_upper([-theta, 0.0, 0.0, 0.0, 0.0, 0.0])
    }

    /// Boost along the 3-axis with rapidity `phi` (velocity `tanh φ`).
    pub fn boost_z(phi: f64) -> Self {
        Self::from_upper([0.0, 0.0, 0.0, 0.0, 0.0, phi])
    }

    pub fn component(&self, mu: usize, nu: usize) -> Result<f64> {
        check_tensor_index(mu)?;
        check_tensor_index(nu)?;
        Ok(self.0[(mu - 1, nu - 1)])
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn neg(&self) -> Self {
        Self(-self.0)
    }

    /// Largest absolute parameter.
    pub fn max_abs(&self) -> f64 {
        self.0.abs().max()
    }
}

/// A Poincaré transformation: Lorentz part `ω` followed by displacement `δx^μ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincareElement {
    pub omega: Omega,
    pub dx: Vector4<f64>,
}

impl PoincareElement {
    pub fn new(omega: Omega, dx: Vector4<f64>) -> Self {
        Self { omega, dx }
    }

    pub fn identity() -> Self {
        Self::new(Omega::zero(), Vector4::zeros())
    }

    pub fn translation(dx: Vector4<f64>) -> Self {
        Self::new(Omega::zero(), dx)
    }

    pub fn lorentz(omega: Omega) -> Self {
        Self::new(omega, Vector4::zeros())
    }
}

/// A 20×20 representation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RepMatrix(Mat20);

impl RepMatrix {
    pub fn identity() -> Self {
        Self(Mat20::identity())
    }

    pub fn from_matrix(m: Mat20) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Mat20 {
        &self.0
    }

    pub fn into_inner(self) -> Mat20 {
        self.0
    }

    /// Upper-left 4×4 block acting on the vector part.
    pub fn vector_block(&self) -> Matrix4<C64> {
        self.0.fixed_view::<4, 4>(0, 0).into_owned()
    }

    /// Real part of the vector block, i.e. the Lorentz matrix `Λ^μ_ν`.
    pub fn lorentz_block(&self) -> Matrix4<f64> {
        self.vector_block().map(|z| z.re)
    }

    /// Largest imaginary part of any entry; finite transformations are real.
    pub fn max_imag(&self) -> f64 {
        self.0.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Real part of every entry.
    pub fn real(&self) -> nalgebra::SMatrix<f64, 20, 20> {
        self.0.map(|z| z.re)
    }

    pub fn inverse(&self) -> Option<Self> {
        self.0.try_inverse().map(Self)
    }

    /// Largest entrywise distance to another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs(&(self.0 - other.0))
    }

    pub fn apply(&self, psi: &nalgebra::SVector<C64, 20>) -> nalgebra::SVector<C64, 20> {
        self.0 * psi
    }
}

impl Mul for &RepMatrix {
    type Output = RepMatrix;

    fn mul(self, rhs: &RepMatrix) -> RepMatrix {
        RepMatrix(self.0 * rhs.0)
    }
}

impl Mul for RepMatrix {
    type Output = RepMatrix;

    fn mul(self, rhs: RepMatrix) -> RepMatrix {
        RepMatrix(self.0 * rhs.0)
    }
}

/// `−i δx_σ P^σ` with `δx_σ = η_{σρ} δx^ρ`.
fn translation_generator(dx: &Vector4<f64>, g: &GeneratorSet) -> Mat20 {
    let lowered = Metric::lower(dx);
    let mut m = Mat20::zeros();
    for sigma in 0..4 {
        if lowered[sigma] != 0.0 {
            m += g.p0(sigma) * C64::new(0.0, -lowered[sigma]);
        }
    }
    m
}

/// `D(1, δx) = 1 − i δx_σ P^σ`; the series stops because `P^μ P^ν = 0`.
pub fn translation_matrix(dx: &Vector4<f64>, g: &GeneratorSet) -> RepMatrix {
    RepMatrix(Mat20::identity() + translation_generator(dx, g))
}

/// `D(1, δx)^{-1} = 1 + i δx_σ P^σ`, exact for the same reason.
pub fn inverse_translation_matrix(dx: &Vector4<f64>, g: &GeneratorSet) -> RepMatrix {
    RepMatrix(Mat20::identity() - translation_generator(dx, g))
}

/// `exp(i ω_{μν} J^{μν} / 2)`, summing over all ordered pairs.
pub fn lorentz_matrix(omega: &Omega, g: &GeneratorSet) -> RepMatrix {
    let w = omega.matrix();
    let mut arg = Mat20::zeros();
    for mu in 0..4 {
        for nu in 0..4 {
            if w[(mu, nu)] != 0.0 {
                arg += g.j0(mu, nu) * C64::new(0.0, 0.5 * w[(mu, nu)]);
            }
        }
    }
    RepMatrix(expm(&arg))
}

/// `D(Λ, δx) = D(1, δx) · D(Λ, 0)`.
pub fn rep_matrix(e: &PoincareElement, g: &GeneratorSet) -> RepMatrix {
    translation_matrix(&e.dx, g) * lorentz_matrix(&e.omega, g)
}

/// `max |Λ^T η Λ − η|` for the vector block of `lorentz_matrix(ω)`.
pub fn lorentz_metric_residual(omega: &Omega, g: &GeneratorSet) -> f64 {
    let lambda = lorentz_matrix(omega, g).lorentz_block();
    let eta = Metric::matrix();
    (lambda.transpose() * eta * lambda - eta).abs().max()
}

pub(crate) fn max_abs(m: &Mat20) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Residual of one commutator identity.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorCase {
    pub label: String,
    pub residual: f64,
}

/// Outcome of a commutator suite over all index combinations.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorReport {
    pub suite: &'static str,
    pub max_residual: f64,
    pub worst_case: String,
    pub cases: Vec<CommutatorCase>,
}

impl CommutatorReport {
    fn from_cases(suite: &'static str, cases: Vec<CommutatorCase>) -> Self {
        let (max_residual, worst_case) =
            cases.iter().fold((0.0, String::new()), |(best, label), c| {
                if c.residual > best || label.is_empty() {
                    (c.residual.max(best), c.label.clone())
                } else {
                    (best, label)
                }
            });
        Self {
            suite,
            max_residual,
            worst_case,
            cases,
        }
    }
}

fn commutator(a: &Mat20, b: &Mat20) -> Mat20 {
    a * b - b * a
}

/// `[J^{μν}, J^{ρσ}] − i(η^{μρ}J^{νσ} − η^{μσ}J^{νρ} − η^{νρ}J^{μσ} + η^{νσ}J^{μρ})`
/// over all 256 index combinations.
pub fn verify_jj_commutators(g: &GeneratorSet) -> CommutatorReport {
    let i = C64::new(0.0, 1.0);
    let mut cases = Vec::with_capacity(256);
    for mu in 0..4 {
        for nu in 0..4 {
            for rho in 0..4 {
                for sigma in 0..4 {
                    let lhs = commutator(g.j0(mu, nu), g.j0(rho, sigma));
                    let rhs = (g.j0(nu, sigma) * C64::from(eta(mu, rho))
                        - g.j0(nu, rho) * C64::from(eta(mu, sigma))
                        - g.j0(mu, sigma) * C64::from(eta(nu, rho))
                        + g.j0(mu, rho) * C64::from(eta(nu, sigma)))
                        * i;
                    cases.push(CommutatorCase {
                        label: format!(
                            "[J^{{{}{}}}, J^{{{}{}}}]",
                            mu + 1,
                            nu + 1,
                            rho + 1,
                            sigma + 1
                        ),
                        residual: max_abs(&(lhs - rhs)),
                    });
                }
            }
        }
    }
    CommutatorReport::from_cases("[J,J]", cases)
}

/// `[P^μ, J^{ρσ}] + i(η^{μρ}P^σ − η^{μσ}P^ρ)` over all 64 combinations.
pub fn verify_pj_commutators(g: &GeneratorSet) -> CommutatorReport {
    let i = C64::new(0.0, 1.0);
    let mut cases = Vec::with_capacity(64);
    for mu in 0..4 {
        for rho in 0..4 {
            for sigma in 0..4 {
                let lhs = commutator(g.p0(mu), g.j0(rho, sigma));
                let rhs = (g.p0(sigma) * C64::from(eta(mu, rho))
                    - g.p0(rho) * C64::from(eta(mu, sigma)))
                    * (-i);
                cases.push(CommutatorCase {
                    label: format!("[P^{}, J^{{{}{}}}]", mu + 1, rho + 1, sigma + 1),
                    residual: max_abs(&(lhs - rhs)),
                });
            }
        }
    }
    CommutatorReport::from_cases("[P,J]", cases)
}

/// `[P^μ, P^ρ]` over all 16 pairs.
pub fn verify_pp_commutators(g: &GeneratorSet) -> CommutatorReport {
    let mut cases = Vec::with_capacity(16);
    for mu in 0..4 {
        for rho in 0..4 {
            cases.push(CommutatorCase {
                label: format!("[P^{}, P^{}]", mu + 1, rho + 1),
                residual: max_abs(&commutator(g.p0(mu), g.p0(rho))),
            });
        }
    }
    CommutatorReport::from_cases("[P,P]", cases)
}

/// `P^μ P^ν` over all 16 ordered pairs.
pub fn verify_momentum_nilpotency(g: &GeneratorSet) -> CommutatorReport {
    let mut cases = Vec::with_capacity(16);
    for mu in 0..4 {
        for nu in 0..4 {
            cases.push(CommutatorCase {
                label: format!("P^{} P^{}", mu + 1, nu + 1),
                residual: max_abs(&(g.p0(mu) * g.p0(nu))),
            });
        }
    }
    CommutatorReport::from_cases("P P", cases)
}
