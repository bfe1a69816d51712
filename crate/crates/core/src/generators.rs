//! Block generators of the vector-plus-tensor representation and their
//! assembly into 20×20 angular-momentum/boost and momentum matrices.

use crate::error::Result;
use crate::indexing::{check_tensor_index, delta, epsilon0, eta, tensor_slot};
use crate::{Mat20, C64};
use nalgebra::{Matrix4, SMatrix};

/// The 4×16 upper-right block of a momentum matrix.
pub type P12Block = SMatrix<C64, 4, 16>;
/// The 16×16 tensor block of an angular-momentum/boost matrix.
pub type J22Block = SMatrix<C64, 16, 16>;

const I: C64 = C64::new(0.0, 1.0);

/// Constants `C1..C4` (inverse length) fixing the momentum matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl MomentumConstants {
    pub const fn new(c1: f64, c2: f64, c3: f64, c4: f64) -> Self {
        Self { c1, c2, c3, c4 }
    }

    /// `C2 = -C3 = k/2`, `C1 = C4 = 0`, for which `P12 = i k δ δ`.
    pub fn default_for(k: f64) -> Self {
        Self::new(0.0, 0.5 * k, -0.5 * k, 0.0)
    }

    /// Returns `k` when the constants have the `default_for(k)` form.
    pub fn default_scale(&self) -> Option<f64> {
        let k = self.c2 - self.c3;
        (self.c1 == 0.0 && self.c4 == 0.0 && self.c2 == -self.c3).then_some(k)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(
            factor * self.c1,
            factor * self.c2,
            factor * self.c3,
            factor * self.c4,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.c1 == 0.0 && self.c2 == 0.0 && self.c3 == 0.0 && self.c4 == 0.0
    }
}

/// `(J11^{ρσ})^μ_ν = i(η^{σμ}δ^ρ_ν − η^{ρμ}δ^σ_ν)`, rows `μ`, columns `ν`.
pub fn j11_block(rho: usize, sigma: usize) -> Result<Matrix4<C64>> {
    check_tensor_index(rho)?;
    check_tensor_index(sigma)?;
    Ok(j11_block0(rho - 1, sigma - 1))
}

pub(crate) fn j11_block0(r: usize, s: usize) -> Matrix4<C64> {
    Matrix4::from_fn(|mu, nu| I * (eta(s, mu) * delta(r, nu) - eta(r, mu) * delta(s, nu)))
}

/// `(J22^{ρσ})^{γδ}_{εξ}`, rows `γδ` and columns `εξ` in flat tensor order.
pub fn j22_block(rho: usize, sigma: usize) -> Result<J22Block> {
    check_tensor_index(rho)?;
    check_tensor_index(sigma)?;
    Ok(j22_block0(rho - 1, sigma - 1))
}

pub(crate) fn j22_block0(r: usize, s: usize) -> J22Block {
    let mut m = J22Block::zeros();
    for g in 0..4 {
        for d in 0..4 {
            for e in 0..4 {
                for x in 0..4 {
                    let v = eta(r, g) * delta(s, e) * delta(d, x)
                        - eta(s, g) * delta(r, e) * delta(d, x)
                        + eta(r, d) * delta(s, x) * delta(g, e)
                        - eta(s, d) * delta(r, x) * delta(g, e);
                    m[(tensor_slot(g, d), tensor_slot(e, x))] = -I * v;
                }
            }
        }
    }
    m
}

/// `(P12^μ)^ν_{αβ}` for arbitrary constants; rows `ν`, columns `αβ`.
pub fn p12_block(mu: usize, c: &MomentumConstants) -> Result<P12Block> {
    check_tensor_index(mu)?;
    Ok(p12_block0(mu - 1, c))
}

pub(crate) fn p12_block0(mu: usize, c: &MomentumConstants) -> P12Block {
    let direct = c.c1 + c.c2 - c.c3;
    let swapped = c.c1 + c.c2 + c.c3;
    let mut m = P12Block::zeros();
    for nu in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                // η is diagonal, so η^{μσ}η^{νρ}ε_{σραβ} = η^{μμ}η^{νν}ε_{μναβ}.
                let dual = eta(mu, mu) * eta(nu, nu) * f64::from(epsilon0([mu, nu, a, b]));
                let v = direct * delta(mu, a) * delta(nu, b)
                    + swapped * delta(mu, b) * delta(nu, a)
                    - 2.0 * c.c1 * eta(mu, nu) * eta(a, b)
                    + c.c4 * dual;
                m[(nu, tensor_slot(a, b))] = I * v;
            }
        }
    }
    m
}

/// The ten independent `J^{ρσ}` and four `P^μ` as dense 20×20 matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    // indexed by 4 * (ρ-1) + (σ-1), including ρ = σ (zero) and ρ > σ (negated)
    j: Vec<Mat20>,
    p: Vec<Mat20>,
    constants: MomentumConstants,
}

impl GeneratorSet {
    pub fn build(constants: MomentumConstants) -> Self {
        let mut j = Vec::with_capacity(16);
        for r in 0..4 {
            for s in 0..4 {
                let mut m = Mat20::zeros();
                m.fixed_view_mut::<4, 4>(0, 0).copy_from(&j11_block0(r, s));
                m.fixed_view_mut::<16, 16>(4, 4)
                    .copy_from(&j22_block0(r, s));
                j.push(m);
            }
        }
        let p = (0..4)
            .map(|mu| {
                let mut m = Mat20::zeros();
                m.fixed_view_mut::<4, 16>(0, 4)
                    .copy_from(&p12_block0(mu, &constants));
                m
            })
            .collect();
        Self { j, p, constants }
    }

    /// Generators for the default constants with scale `k`.
    pub fn with_scale(k: f64) -> Self {
        Self::build(MomentumConstants::default_for(k))
    }

    pub fn constants(&self) -> &MomentumConstants {
        &self.constants
    }

    /// `J^{ρσ}` with 1-based indices; `ρ = σ` gives the zero matrix.
    pub fn j(&self, rho: usize, sigma: usize) -> Result<&Mat20> {
        check_tensor_index(rho)?;
        check_tensor_index(sigma)?;
        Ok(self.j0(rho - 1, sigma - 1))
    }

    /// `P^μ` with 1-based index.
    pub fn p(&self, mu: usize) -> Result<&Mat20> {
        check_tensor_index(mu)?;
        Ok(self.p0(mu - 1))
    }

    #[inline]
    pub(crate) fn j0(&self, r: usize, s: usize) -> &Mat20 {
        &self.j[4 * r + s]
    }

    #[inline]
    pub(crate) fn p0(&self, mu: usize) -> &Mat20 {
        &self.p[mu]
    }

    /// Adds `delta` to one entry of `J^{ρσ}` (and the negated entry of
    /// `J^{σρ}`). Exists for fault-injection tests of the verifiers.
    #[doc(hidden)]
    pub fn perturb_j(
        &mut self,
        rho: usize,
        sigma: usize,
        row: usize,
        col: usize,
        delta: f64,
    ) -> Result<()> {
        check_tensor_index(rho)?;
        check_tensor_index(sigma)?;
        let (r, s) = (rho - 1, sigma - 1);
        self.j[4 * r + s][(row, col)] += C64::new(delta, 0.0);
        if r != s {
            self.j[4 * s + r][(row, col)] -= C64::new(delta, 0.0);
        }
        Ok(())
    }
}
