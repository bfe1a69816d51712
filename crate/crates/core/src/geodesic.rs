//! Parallel transport along curves and the geodesic equation
//! `d²X^μ/dτ² = k T_σ^μ dX^σ/dτ`.

use crate::error::{Error, Result};
use crate::field::Psi20;
use crate::generators::GeneratorSet;
use crate::group::inverse_translation_matrix;
use crate::indexing::Metric;
use crate::Tensor2;
use nalgebra::{DMatrix, DVector, Vector4};
use std::fmt;
use std::str::FromStr;

/// A point on a curve: event `x`, tangent `v = dX/dτ`, parameter `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub x: Vector4<f64>,
    pub v: Vector4<f64>,
    pub tau: f64,
}

impl State {
    pub fn new(x: Vector4<f64>, v: Vector4<f64>, tau: f64) -> Self {
        Self { x, v, tau }
    }

    /// `η_{αβ} V^α V^β`; `−1` for a unit timelike tangent.
    pub fn norm_sq(&self) -> f64 {
        Metric::dot(&self.v, &self.v)
    }

    fn is_finite(&self) -> bool {
        self.x.iter().chain(self.v.iter()).all(|c| c.is_finite()) && self.tau.is_finite()
    }
}

/// Connection tensor `T^{αβ}` as a function of the event.
pub trait TensorField {
    fn tensor_at(&self, x: &Vector4<f64>) -> Tensor2;
}

/// A position-independent tensor field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantTensor(pub Tensor2);

impl TensorField for ConstantTensor {
    fn tensor_at(&self, _x: &Vector4<f64>) -> Tensor2 {
        self.0
    }
}

impl<F> TensorField for F
where
    F: Fn(&Vector4<f64>) -> Tensor2,
{
    fn tensor_at(&self, x: &Vector4<f64>) -> Tensor2 {
        self(x)
    }
}

/// `k T_σ^μ V^σ = k η_{ρσ} T^{ρμ} V^σ`.
#[inline]
pub fn connection_times(t: &Tensor2, v: &Vector4<f64>, k: f64) -> Vector4<f64> {
    t.transpose() * Metric::lower(v) * k
}

/// Right-hand side of the geodesic equation: `(dX/dτ, dV/dτ)`.
pub fn geodesic_rhs(s: &State, t: &Tensor2, k: f64) -> (Vector4<f64>, Vector4<f64>) {
    (s.v, connection_times(t, &s.v, k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Integrator {
    /// Classical fourth-order Runge–Kutta.
    #[default]
    Rk4,
    /// Forward Euler; first-order transport, kept for comparison.
    Euler,
}

impl Integrator {
    pub fn name(&self) -> &'static str {
        match self {
            Integrator::Rk4 => "rk4",
            Integrator::Euler => "euler",
        }
    }
}

impl fmt::Display for Integrator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Integrator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rk4" => Ok(Integrator::Rk4),
            "euler" => Ok(Integrator::Euler),
            other => Err(Error::InvalidParameter(format!(
                "unknown integrator `{other}`"
            ))),
        }
    }
}

/// Uniformly sampled curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<State>,
    pub step: f64,
    pub integrator: Integrator,
    pub description: String,
}

impl Trajectory {
    pub fn first(&self) -> Option<&State> {
        self.samples.first()
    }

    pub fn last(&self) -> Option<&State> {
        self.samples.last()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

fn advance<F: TensorField + ?Sized>(
    s: &State,
    field: &F,
    k: f64,
    h: f64,
    integrator: Integrator,
) -> (Vector4<f64>, Vector4<f64>) {
    let f = |x: &Vector4<f64>, v: &Vector4<f64>| connection_times(&field.tensor_at(x), v, k);
    match integrator {
        Integrator::Euler => (s.x + s.v * h, s.v + f(&s.x, &s.v) * h),
        Integrator::Rk4 => {
            let (x, v) = (s.x, s.v);
            let (kx1, kv1) = (v, f(&x, &v));
            let (x2, v2) = (x + kx1 * (h / 2.0), v + kv1 * (h / 2.0));
            let (kx2, kv2) = (v2, f(&x2, &v2));
            let (x3, v3) = (x + kx2 * (h / 2.0), v + kv2 * (h / 2.0));
            let (kx3, kv3) = (v3, f(&x3, &v3));
            let (x4, v4) = (x + kx3 * h, v + kv3 * h);
            let (kx4, kv4) = (v4, f(&x4, &v4));
            (
                x + (kx1 + kx2 * 2.0 + kx3 * 2.0 + kx4) * (h / 6.0),
                v + (kv1 + kv2 * 2.0 + kv3 * 2.0 + kv4) * (h / 6.0),
            )
        }
    }
}

/// Integrates the geodesic equation for `n_steps` fixed steps.
///
/// The returned trajectory holds `n_steps + 1` samples with
/// `tau_i = s0.tau + i · step`.
pub fn integrate<F: TensorField + ?Sized>(
    s0: &State,
    field: &F,
    k: f64,
    step: f64,
    n_steps: usize,
    integrator: Integrator,
) -> Result<Trajectory> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "step must be positive and finite, got {step}"
        )));
    }
    if n_steps == 0 {
        return Err(Error::InvalidParameter("n_steps must be at least 1".into()));
    }
    if !s0.is_finite() {
        return Err(Error::NonFinite {
            step: 0,
            last_good_tau: f64::NAN,
        });
    }
    let mut samples = Vec::with_capacity(n_steps + 1);
    samples.push(*s0);
    let mut current = *s0;
    for i in 1..=n_steps {
        let (x, v) = advance(&current, field, k, step, integrator);
        let next = State::new(x, v, s0.tau + i as f64 * step);
        if !next.is_finite() {
            return Err(Error::NonFinite {
                step: i,
                last_good_tau: current.tau,
            });
        }
        samples.push(next);
        current = next;
    }
    Ok(Trajectory {
        samples,
        step,
        integrator,
        description: String::new(),
    })
}

/// First-order transport of the tangent over `dtau`:
/// `V + k T_σ^μ V^σ dτ`, the value for which the change vanishes.
pub fn parallel_transport_step<F: TensorField + ?Sized>(
    s: &State,
    field: &F,
    k: f64,
    dtau: f64,
) -> Vector4<f64> {
    s.v + connection_times(&field.tensor_at(&s.x), &s.v, k) * dtau
}

/// The same step computed with the explicit 20×20 translation matrix.
///
/// The transported value `ψ'` at `X + V dτ` is the one whose inverse
/// translation back to `X` reproduces `ψ(X) = (V, T(X))`, i.e. the solution
/// of `D^{-1}(1, V dτ) ψ' = ψ`.
pub fn parallel_transport_step_matrix<F: TensorField + ?Sized>(
    s: &State,
    field: &F,
    g: &GeneratorSet,
    dtau: f64,
) -> Result<Vector4<f64>> {
    let psi = Psi20::new(s.v, field.tensor_at(&s.x));
    let d_inv = inverse_translation_matrix(&(s.v * dtau), g);
    let solved = d_inv
        .matrix()
        .lu()
        .solve(&psi.to_complex())
        .ok_or_else(|| Error::InvalidParameter("singular translation matrix".into()))?;
    Ok(Psi20::from_complex(&solved).v)
}

/// `max_i |η V_i·V_i − η V_0·V_0|`.
pub fn norm_drift(traj: &Trajectory) -> f64 {
    let Some(first) = traj.first() else {
        return 0.0;
    };
    let n0 = first.norm_sq();
    traj.samples
        .iter()
        .map(|s| (s.norm_sq() - n0).abs())
        .fold(0.0, f64::max)
}

/// `d(η V·V)/dτ` at the first sample, from a second-order one-sided
/// difference over the first three samples.
pub fn norm_rate_at_start(traj: &Trajectory) -> Option<f64> {
    if traj.samples.len() < 3 {
        return None;
    }
    let n: Vec<f64> = traj.samples[..3].iter().map(State::norm_sq).collect();
    Some((-3.0 * n[0] + 4.0 * n[1] - n[2]) / (2.0 * traj.step))
}

/// Predicted `d(η V·V)/dτ = 2k V_ρ V_β T^{ρβ}`.
pub fn predicted_norm_rate(t: &Tensor2, v: &Vector4<f64>, k: f64) -> f64 {
    let lowered = Metric::lower(v);
    2.0 * k * (lowered.transpose() * t * lowered)[(0, 0)]
}

/// Timelike unit 4-velocities: boosts of `(0, 0, 0, 1)` with rapidities in
/// `[0, 2]` along directions spread over the sphere.
pub fn timelike_samples(n: usize) -> Vec<Vector4<f64>> {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let az = 2.0 * std::f64::consts::PI * i as f64 / golden;
            let rapidity = 2.0 * ((i as f64 * golden).fract() * 0.9 + 0.1);
            let (sh, ch) = (rapidity.sinh(), rapidity.cosh());
            Vector4::new(sh * r * az.cos(), sh * r * az.sin(), sh * z, ch)
        })
        .collect()
}

/// Outcome of [`check_antisymmetry_necessity`].
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymmetryReport {
    /// `V_ρ V_β (T^{ρβ} + T^{βρ}) / 2` per sample.
    pub contractions: Vec<f64>,
    pub all_vanish: bool,
    /// Symmetric part recovered from the contractions by least squares.
    pub recovered_symmetric: Tensor2,
    pub symmetric_part: Tensor2,
    /// `max |recovered − symmetric_part|`.
    pub recovery_error: f64,
    /// Predicted norm rates `2k V_ρ V_β T^{ρβ}` per sample.
    pub norm_rates: Vec<f64>,
}

const SYM_PAIRS: [(usize, usize); 10] = [
    (0, 0),
    (1, 1),
    (2, 2),
    (3, 3),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 2),
    (1, 3),
    (2, 3),
];

/// Evaluates the norm-conservation contraction for every sample velocity
/// and recovers the symmetric part of `T` from those contractions.
///
/// All contractions vanish over a spanning sample set exactly when the
/// symmetric part is zero. Fewer than 10 samples, or samples whose
/// quadratic monomials do not span the 10 symmetric components, are an
/// error.
pub fn check_antisymmetry_necessity(
    t: &Tensor2,
    k: f64,
    samples: &[Vector4<f64>],
) -> Result<AntisymmetryReport> {
    if samples.len() < 10 {
        return Err(Error::DegenerateSamples(format!(
            "need at least 10 sample velocities, got {}",
            samples.len()
        )));
    }
    if let Some(bad) = samples.iter().find(|v| Metric::dot(v, v) >= 0.0) {
        return Err(Error::DegenerateSamples(format!(
            "sample {bad:?} is not timelike"
        )));
    }
    let symmetric_part = (t + t.transpose()) * 0.5;
    let lowered: Vec<Vector4<f64>> = samples.iter().map(Metric::lower).collect();
    let contractions: Vec<f64> = lowered
        .iter()
        .map(|w| (w.transpose() * symmetric_part * w)[(0, 0)])
        .collect();

    let design = DMatrix::from_fn(samples.len(), 10, |i, j| {
        let (a, b) = SYM_PAIRS[j];
        let w = &lowered[i];
        if a == b {
            w[a] * w[a]
        } else {
            2.0 * w[a] * w[b]
        }
    });
    let svd = design.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smax == 0.0 || smin / smax < 1e-10 {
        return Err(Error::DegenerateSamples(format!(
            "sample velocities do not span the symmetric tensors (condition {:.3e})",
            smax / smin
        )));
    }
    let rhs = DVector::from_column_slice(&contractions);
    let coeffs = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::DegenerateSamples(e.to_string()))?;
    let mut recovered = Tensor2::zeros();
    for (j, &(a, b)) in SYM_PAIRS.iter().enumerate() {
        recovered[(a, b)] = coeffs[j];
        recovered[(b, a)] = coeffs[j];
    }

    let vmax = samples.iter().map(|v| v.amax()).fold(0.0, f64::max);
    let tol = 1e-12 * t.amax().max(f64::MIN_POSITIVE) * vmax * vmax;
    let all_vanish = contractions.iter().all(|c| c.abs() <= tol);
    let norm_rates = samples
        .iter()
        .map(|v| predicted_norm_rate(t, v, k))
        .collect();
    Ok(AntisymmetryReport {
        contractions,
        all_vanish,
        recovery_error: (recovered - symmetric_part).amax(),
        recovered_symmetric: recovered,
        symmetric_part,
        norm_rates,
    })
}

/// Affine change of curve parameter `τ = c0 + c1 s`.
///
/// In `s` the geodesic equation keeps its form with coupling `c1 k`, and
/// the tangent scales to `dX/ds = c1 dX/dτ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reparametrization {
    pub c0: f64,
    pub c1: f64,
}

pub fn reparametrize(c0: f64, c1: f64) -> Result<Reparametrization> {
    if c1 == 0.0 || !c1.is_finite() || !c0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "degenerate parametrization c0 = {c0}, c1 = {c1}"
        )));
    }
    Ok(Reparametrization { c0, c1 })
}

impl Reparametrization {
    pub fn coupling(&self, k: f64) -> f64 {
        self.c1 * k
    }

    /// Step in `s` covering the same stretch as `dtau`.
    pub fn step(&self, dtau: f64) -> f64 {
        dtau / self.c1
    }

    pub fn to_s(&self, s: &State) -> State {
        State::new(s.x, s.v * self.c1, (s.tau - self.c0) / self.c1)
    }

    pub fn to_tau(&self, s: &State) -> State {
        State::new(s.x, s.v / self.c1, self.c0 + self.c1 * s.tau)
    }

    /// Integrates the transformed problem from a state given in `τ`.
    /// Samples of the result are in the `s` parameter.
    pub fn integrate<F: TensorField + ?Sized>(
        &self,
        s0: &State,
        field: &F,
        k: f64,
        dtau: f64,
        n_steps: usize,
        integrator: Integrator,
    ) -> Result<Trajectory> {
        let step = self.step(dtau);
        if step < 0.0 {
            return Err(Error::InvalidParameter(
                "negative c1 reverses the curve; integrate with positive steps only".into(),
            ));
        }
        integrate(
            &self.to_s(s0),
            field,
            self.coupling(k),
            step,
            n_steps,
            integrator,
        )
    }
}
