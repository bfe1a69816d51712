//! The direct-sum field `ψ = (v^μ, T^{αβ})`, its behaviour under
//! translations, and the connection extracted from the momentum matrices.

use crate::error::Result;
use crate::generators::{p12_block0, GeneratorSet, MomentumConstants};
use crate::group::{inverse_translation_matrix, RepMatrix};
use crate::indexing::{eta, flat_slot, Metric, PAIR_ORDER};
use crate::{Tensor2, C64};
use nalgebra::{Matrix4, SVector, Vector4};

/// One value of the 20-component field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Psi20 {
    pub v: Vector4<f64>,
    pub t: Tensor2,
}

impl Psi20 {
    pub fn new(v: Vector4<f64>, t: Tensor2) -> Self {
        Self { v, t }
    }

    pub fn zero() -> Self {
        Self::new(Vector4::zeros(), Tensor2::zeros())
    }

    /// Components in flat order: `v^1..v^4`, then `T^{αβ}` by [`PAIR_ORDER`].
    pub fn to_flat(&self) -> SVector<f64, 20> {
        let mut out = SVector::<f64, 20>::zeros();
        out.fixed_rows_mut::<4>(0).copy_from(&self.v);
        for a in 0..4 {
            for b in 0..4 {
                out[flat_slot(a, b)] = self.t[(a, b)];
            }
        }
        out
    }

    pub fn from_flat(flat: &SVector<f64, 20>) -> Self {
        let v = flat.fixed_rows::<4>(0).into_owned();
        let t = Tensor2::from_fn(|a, b| flat[flat_slot(a, b)]);
        Self::new(v, t)
    }

    pub fn to_complex(&self) -> SVector<C64, 20> {
        self.to_flat().map(C64::from)
    }

    /// Real part of a complex flat vector.
    pub fn from_complex(flat: &SVector<C64, 20>) -> Self {
        Self::from_flat(&flat.map(|z| z.re))
    }
}

/// A field `x ↦ ψ(x)` over spacetime events.
pub trait PsiField {
    fn eval(&self, x: &Vector4<f64>) -> Result<Psi20>;

    /// `∂_σ v^μ` at `x` as entry `(μ−1, σ−1)`, when known analytically.
    fn vector_jacobian(&self, _x: &Vector4<f64>) -> Option<Matrix4<f64>> {
        None
    }
}

impl PsiField for Psi20 {
    fn eval(&self, _x: &Vector4<f64>) -> Result<Psi20> {
        Ok(*self)
    }

    fn vector_jacobian(&self, _x: &Vector4<f64>) -> Option<Matrix4<f64>> {
        Some(Matrix4::zeros())
    }
}

impl<F> PsiField for F
where
    F: Fn(&Vector4<f64>) -> Psi20,
{
    fn eval(&self, x: &Vector4<f64>) -> Result<Psi20> {
        Ok(self(x))
    }
}

/// The field `x ↦ D^{-1}(1, δx) ψ(x + δx)`.
#[derive(Debug, Clone)]
pub struct Translated<'a, F: ?Sized> {
    inner: &'a F,
    dx: Vector4<f64>,
    d_inv: RepMatrix,
}

impl<F: PsiField + ?Sized> PsiField for Translated<'_, F> {
    fn eval(&self, x: &Vector4<f64>) -> Result<Psi20> {
        let shifted = self.inner.eval(&(x + self.dx))?;
        Ok(Psi20::from_complex(
            &self.d_inv.apply(&shifted.to_complex()),
        ))
    }
}

impl<F: ?Sized> Translated<'_, F> {
    pub fn displacement(&self) -> &Vector4<f64> {
        &self.dx
    }
}

/// Translates a field by `dx` using the explicit 20×20 inverse matrix.
pub fn translate_field<'a, F: PsiField + ?Sized>(
    psi: &'a F,
    dx: &Vector4<f64>,
    g: &GeneratorSet,
) -> Translated<'a, F> {
    Translated {
        inner: psi,
        dx: *dx,
        d_inv: inverse_translation_matrix(dx, g),
    }
}

/// Closed form of the translated value for default constants:
/// `v^μ − k δx_σ T^{σμ}`, tensor part unchanged.
pub fn translate_contraction(psi: &Psi20, dx: &Vector4<f64>, k: f64) -> Psi20 {
    let lowered = Metric::lower(dx);
    let shift = psi.t.transpose() * lowered * k;
    Psi20::new(psi.v - shift, psi.t)
}

fn central_difference_jacobian<F: PsiField + ?Sized>(
    field: &F,
    x: &Vector4<f64>,
) -> Result<Matrix4<f64>> {
    let h = f64::max(1e-6, 1e-6 * x.norm());
    let mut jac = Matrix4::zeros();
    for sigma in 0..4 {
        let mut step = Vector4::zeros();
        step[sigma] = h;
        let plus = field.eval(&(x + step))?.v;
        let minus = field.eval(&(x - step))?.v;
        jac.set_column(sigma, &((plus - minus) / (2.0 * h)));
    }
    Ok(jac)
}

/// First-order change `δv^ν = (∂_σ v^ν − Γ_σ^ν) δx^σ` under translation by `dx`.
///
/// `Γ` is [`connection`] of the tensor part at `x`; with default constants
/// this is `(∂_σ v^ν − k T_σ^ν) δx^σ`.
pub fn delta_v<F: PsiField + ?Sized>(
    field: &F,
    x: &Vector4<f64>,
    dx: &Vector4<f64>,
    c: &MomentumConstants,
) -> Result<Vector4<f64>> {
    let jac = match field.vector_jacobian(x) {
        Some(j) => j,
        None => central_difference_jacobian(field, x)?,
    };
    let gamma = connection(&field.eval(x)?.t, c);
    Ok(jac * dx - gamma.mixed().transpose() * dx)
}

/// Connection with first index down, entry `(σ−1, ν−1)` holding `Γ_σ^ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionTensor(Matrix4<f64>);

impl ConnectionTensor {
    pub fn mixed(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// `Γ^{μν} = η^{σμ} Γ_σ^ν`.
    pub fn raised(&self) -> Matrix4<f64> {
        Metric::matrix() * self.0
    }
}

/// `Γ_σ^ν = −i η_{μσ} (P12^μ)^ν_{αβ} T^{αβ}`.
///
/// For default constants this is `k T_σ^ν`, i.e. the returned value already
/// carries the factor `k`.
pub fn connection(t: &Tensor2, c: &MomentumConstants) -> ConnectionTensor {
    let minus_i = C64::new(0.0, -1.0);
    let mut gamma = Matrix4::zeros();
    for mu in 0..4 {
        let block = p12_block0(mu, c);
        // only σ = μ survives the diagonal metric
        let sigma = mu;
        for nu in 0..4 {
            let mut acc = C64::new(0.0, 0.0);
            for (col, &(a, b)) in PAIR_ORDER.iter().enumerate() {
                acc += block[(nu, col)] * t[(a - 1, b - 1)];
            }
            gamma[(sigma, nu)] = (minus_i * acc * eta(mu, sigma)).re;
        }
    }
    ConnectionTensor(gamma)
}

/// Symmetry of `Γ^{μν}` viewed as a linear map of arbitrary `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectionSymmetry {
    Zero,
    Symmetric,
    Antisymmetric,
    Neither,
}

/// Raised images `Γ^{μν}(e_{αβ})` of the 16 elementary tensors, in flat order.
pub fn connection_basis_images(c: &MomentumConstants) -> Vec<((usize, usize), Matrix4<f64>)> {
    PAIR_ORDER
        .iter()
        .map(|&(a, b)| {
            let mut t = Tensor2::zeros();
            t[(a - 1, b - 1)] = 1.0;
            ((a, b), connection(&t, c).raised())
        })
        .collect()
}

const CLASSIFY_TOL: f64 = 1e-12;

fn basis_scale(images: &[((usize, usize), Matrix4<f64>)]) -> f64 {
    images
        .iter()
        .map(|(_, m)| m.abs().max())
        .fold(0.0, f64::max)
}

/// Classifies `Γ^{μν}` by evaluating it on the 16-element tensor basis.
///
/// The tolerance is relative to the largest image entry, so the result does
/// not change when all constants are scaled by a common nonzero factor.
pub fn classify_connection_symmetry(c: &MomentumConstants) -> ConnectionSymmetry {
    let images = connection_basis_images(c);
    let scale = basis_scale(&images);
    if scale == 0.0 {
        return ConnectionSymmetry::Zero;
    }
    let tol = CLASSIFY_TOL * scale;
    let symmetric = images
        .iter()
        .all(|(_, m)| (m - m.transpose()).abs().max() <= tol);
    let antisymmetric = images
        .iter()
        .all(|(_, m)| (m + m.transpose()).abs().max() <= tol);
    match (symmetric, antisymmetric) {
        (true, _) => ConnectionSymmetry::Symmetric,
        (false, true) => ConnectionSymmetry::Antisymmetric,
        (false, false) => ConnectionSymmetry::Neither,
    }
}

/// Recognisable closed forms of the connection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConnectionForm {
    Zero,
    /// `Γ^{μν} = k T^{μν}`.
    ScaledTensor {
        k: f64,
    },
    /// `Γ^{μν} = λ η^{μν} T̄` with `T̄ = η_{αβ} T^{αβ}`.
    TraceForm {
        lambda: f64,
    },
    General(ConnectionSymmetry),
}

/// Identifies the closed form of `Γ` for the given constants, if any.
pub fn connection_form(c: &MomentumConstants) -> ConnectionForm {
    let images = connection_basis_images(c);
    let scale = basis_scale(&images);
    if scale == 0.0 {
        return ConnectionForm::Zero;
    }
    let tol = CLASSIFY_TOL * scale;

    let k = images[0].1[(0, 1)];
    let scaled = images.iter().all(|&((a, b), m)| {
        let mut expected = Matrix4::zeros();
        expected[(a - 1, b - 1)] = k;
        (m - expected).abs().max() <= tol
    });
    if scaled && k != 0.0 {
        return ConnectionForm::ScaledTensor { k };
    }

    // e_{11} has trace η_{11} = 1, so Γ^{11}(e_{11}) = λ.
    let lambda = images[6].1[(0, 0)];
    let trace_form = images.iter().all(|&((a, b), m)| {
        let expected = Metric::matrix() * (lambda * eta(a - 1, b - 1));
        (m - expected).abs().max() <= tol
    });
    if trace_form && lambda != 0.0 {
        return ConnectionForm::TraceForm { lambda };
    }
    ConnectionForm::General(classify_connection_symmetry(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::translation_matrix;

    fn tensor(entries: &[((usize, usize), f64)]) -> Tensor2 {
        let mut t = Tensor2::zeros();
        for &((a, b), v) in entries {
            t[(a - 1, b - 1)] = v;
        }
        t
    }

    #[test]
    fn flat_layout_matches_index_map() {
        let mut t = Tensor2::zeros();
        for a in 0..4 {
            for b in 0..4 {
                t[(a, b)] = (10 * (a + 1) + b + 1) as f64;
            }
        }
        let psi = Psi20::new(Vector4::new(1.0, 2.0, 3.0, 4.0), t);
        let flat = psi.to_flat();
        assert_eq!(flat[4], 12.0);
        assert_eq!(flat[8], 24.0);
        assert_eq!(flat[13], 44.0);
        assert_eq!(flat[19], 43.0);
        assert_eq!(Psi20::from_flat(&flat), psi);
    }

    #[test]
    fn translation_of_constant_vector_without_tensor() {
        let g = GeneratorSet::with_scale(1.0);
        let psi = Psi20::new(Vector4::new(0.2, -0.4, 0.1, 1.3), Tensor2::zeros());
        let moved = translate_field(&psi, &Vector4::new(1.0, 2.0, -3.0, 0.5), &g);
        assert_eq!(moved.eval(&Vector4::zeros()).unwrap(), psi);
    }

    #[test]
    fn zero_displacement_is_identity() {
        let g = GeneratorSet::with_scale(0.7);
        let field = |x: &Vector4<f64>| {
            Psi20::new(x.map(|c| c.sin()), tensor(&[((1, 2), x[3]), ((3, 4), 2.0)]))
        };
        let x = Vector4::new(0.3, 0.1, -0.2, 1.0);
        let moved = translate_field(&field, &Vector4::zeros(), &g);
        assert_eq!(moved.eval(&x).unwrap(), field(&x));
    }

    #[test]
    fn matrix_and_contraction_agree_on_hand_example() {
        let k = 1.0;
        let a = 0.25;
        let g = GeneratorSet::with_scale(k);
        let psi = Psi20::new(Vector4::new(1.0, 0.0, 0.0, 0.0), tensor(&[((1, 2), 1.0)]));
        let dx = Vector4::new(0.0, a, 0.0, 0.0);
        let by_matrix = translate_field(&psi, &dx, &g)
            .eval(&Vector4::zeros())
            .unwrap();
        let by_contraction = translate_contraction(&psi, &dx, k);
        // v^μ − k δx_σ T^{σμ}: only σ = 2 contributes and T^{2μ} = 0.
        assert_eq!(by_contraction.v, psi.v);
        assert!((by_matrix.v - by_contraction.v).abs().max() < 1e-15);

        let dx = Vector4::new(a, 0.0, 0.0, 0.0);
        let by_contraction = translate_contraction(&psi, &dx, k);
        assert_eq!(by_contraction.v, Vector4::new(1.0, -k * a, 0.0, 0.0));
        let by_matrix = translate_field(&psi, &dx, &g)
            .eval(&Vector4::zeros())
            .unwrap();
        assert!((by_matrix.v - by_contraction.v).abs().max() < 1e-15);
    }

    #[test]
    fn inverse_matrix_is_true_inverse() {
        let g = GeneratorSet::with_scale(1.0);
        let dx = Vector4::new(0.4, -0.3, 0.9, 2.0);
        let d = translation_matrix(&dx, &g);
        let inv = d.inverse().unwrap();
        assert!(inv.max_abs_diff(&inverse_translation_matrix(&dx, &g)) < 1e-15);
    }

    #[test]
    fn delta_v_pure_connection() {
        let k = 2.0;
        let c = MomentumConstants::default_for(k);
        let psi = Psi20::new(Vector4::new(0.0, 0.0, 0.0, 1.0), tensor(&[((1, 2), 0.5)]));
        let dx = Vector4::new(0.1, 0.0, 0.0, 0.0);
        // −k δx^σ T_σ^ν: σ = 1, ν = 2 gives −2 · 0.1 · 0.5
        let dv = delta_v(&psi, &Vector4::zeros(), &dx, &c).unwrap();
        assert!((dv - Vector4::new(0.0, -0.1, 0.0, 0.0)).abs().max() < 1e-15);

        let dx = Vector4::new(0.0, 0.3, 0.0, 0.0);
        let dv = delta_v(&psi, &Vector4::zeros(), &dx, &c).unwrap();
        assert_eq!(dv, Vector4::zeros());
    }

    #[test]
    fn delta_v_zero_for_constant_vector() {
        let c = MomentumConstants::default_for(1.0);
        let psi = Psi20::new(Vector4::new(0.1, 0.2, 0.3, 1.1), Tensor2::zeros());
        let dv = delta_v(
            &psi,
            &Vector4::zeros(),
            &Vector4::new(1.0, 1.0, 1.0, 1.0),
            &c,
        )
        .unwrap();
        assert_eq!(dv, Vector4::zeros());
    }

    #[test]
    fn delta_v_matches_translation_to_second_order() {
        let k = 0.8;
        let g = GeneratorSet::with_scale(k);
        let field = |x: &Vector4<f64>| {
            Psi20::new(
                Vector4::new(
                    x[0].sin(),
                    x[1] * x[3],
                    (x[2] + x[0]).cos(),
                    1.0 + x[3] * x[3],
                ),
                tensor(&[
                    ((1, 2), 0.3 + x[2]),
                    ((2, 1), -0.3 - x[2]),
                    ((3, 4), x[0]),
                    ((4, 3), -x[0]),
                ]),
            )
        };
        let x = Vector4::new(0.2, -0.1, 0.4, 0.3);
        let dir = Vector4::new(0.3, 0.7, -0.2, 0.5);
        let mut errors = Vec::new();
        for n in 0..4 {
            let dx = dir * 0.1 / 2f64.powi(n);
            let moved = translate_field(&field, &dx, &g).eval(&x).unwrap().v;
            let dv = delta_v(&field, &x, &dx, g.constants()).unwrap();
            errors.push((moved - field(&x).v - dv).norm());
        }
        for w in errors.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(
                order > 1.8 && order < 2.2,
                "order {order}, errors {errors:?}"
            );
        }
    }

    #[test]
    fn default_connection_is_k_t_lowered() {
        let k = 1.7;
        let c = MomentumConstants::default_for(k);
        let t = tensor(&[((1, 2), 0.4), ((4, 1), -1.2), ((3, 3), 0.9), ((4, 4), 2.0)]);
        let gamma = connection(&t, &c);
        let expected = Metric::matrix() * t * k;
        assert!((gamma.mixed() - expected).abs().max() < 1e-14);
        assert!((gamma.raised() - t * k).abs().max() < 1e-14);
        assert_eq!(connection(&Tensor2::zeros(), &c).mixed(), &Matrix4::zeros());
    }

    #[test]
    fn trace_form_connection() {
        let cval = 0.6;
        let c = MomentumConstants::new(cval, -cval, 0.0, 0.0);
        let t = tensor(&[
            ((1, 1), 0.3),
            ((2, 2), -0.5),
            ((3, 3), 1.1),
            ((4, 4), 0.7),
            ((1, 3), 2.0),
        ]);
        let trace = 0.3 - 0.5 + 1.1 - 0.7;
        let gamma = connection(&t, &c).raised();
        let expected = Metric::matrix() * (-2.0 * cval * trace);
        assert!((gamma - expected).abs().max() < 1e-14);
        assert_eq!(
            connection_form(&c),
            ConnectionForm::TraceForm {
                lambda: -2.0 * cval
            }
        );
    }

    #[test]
    fn classification_examples() {
        use ConnectionSymmetry::*;
        assert_eq!(
            classify_connection_symmetry(&MomentumConstants::new(0.4, 0.3, 0.0, 0.0)),
            Symmetric
        );
        assert_eq!(
            classify_connection_symmetry(&MomentumConstants::new(0.0, 0.0, 0.5, 0.0)),
            Antisymmetric
        );
        assert_eq!(
            classify_connection_symmetry(&MomentumConstants::new(0.0, 0.0, 0.5, -0.2)),
            Antisymmetric
        );
        assert_eq!(
            classify_connection_symmetry(&MomentumConstants::new(0.0, 0.0, 0.0, 1.0)),
            Antisymmetric
        );
        assert_eq!(
            classify_connection_symmetry(&MomentumConstants::new(0.0, 0.0, 0.0, 0.0)),
            Zero
        );
        assert_eq!(
            classify_connection_symmetry(&MomentumConstants::default_for(1.0)),
            Neither
        );
        assert_eq!(
            classify_connection_symmetry(&MomentumConstants::new(1.0, -1.0, 0.0, 0.0)),
            Symmetric
        );
    }

    #[test]
    fn default_form_detected() {
        assert_eq!(
            connection_form(&MomentumConstants::new(0.0, 0.5, -0.5, 0.0)),
            ConnectionForm::ScaledTensor { k: 1.0 }
        );
        assert_eq!(
            connection_form(&MomentumConstants::new(0.0, 0.0, 0.0, 0.0)),
            ConnectionForm::Zero
        );
    }

    #[test]
    fn default_connection_antisymmetric_for_antisymmetric_t() {
        let c = MomentumConstants::default_for(0.9);
        let t = tensor(&[((1, 2), 0.3), ((2, 1), -0.3), ((1, 4), 1.5), ((4, 1), -1.5)]);
        let raised = connection(&t, &c).raised();
        assert!((raised + raised.transpose()).abs().max() < 1e-15);
    }
}
