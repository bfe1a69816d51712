//! Electromagnetic reading of the connection: `T^{μν} = −(q/km) F^{μν}`.
//!
//! Natural units (`c = 1`). `F` is packed from `E` and `B` as
//! `F^{12} = B³, F^{13} = −B², F^{23} = B¹, F^{i4} = −E^i`, antisymmetric,
//! so that the geodesic equation reads `m dV^μ/dτ = q F^{μσ} V_σ`.
//!
//! Also provides closed-form orbits in constant magnetic and electric
//! fields and tangent-field families whose members do not intersect.

use crate::error::{Error, Result};
use crate::field::{Psi20, PsiField};
use crate::geodesic::State;
use crate::indexing::Metric;
use crate::Tensor2;
use nalgebra::{Matrix4, Vector3, Vector4};

/// Electric and magnetic 3-vectors.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EMField {
    pub e: Vector3<f64>,
    pub b: Vector3<f64>,
}

impl EMField {
    pub fn new(e: Vector3<f64>, b: Vector3<f64>) -> Self {
        Self { e, b }
    }

    pub fn magnetic_z(b: f64) -> Self {
        Self::new(Vector3::zeros(), Vector3::new(0.0, 0.0, b))
    }

    pub fn electric_z(e: f64) -> Self {
        Self::new(Vector3::new(0.0, 0.0, e), Vector3::zeros())
    }

    /// Inverse of [`f_from_eb`]; reads the upper triangle of `f`.
    pub fn from_f(f: &Matrix4<f64>) -> Self {
        let e = Vector3::new(-f[(0, 3)], -f[(1, 3)], -f[(2, 3)]);
        let b = Vector3::new(f[(1, 2)], -f[(0, 2)], f[(0, 1)]);
        Self::new(e, b)
    }
}

/// Antisymmetric `F^{μν}` from `(E, B)`.
pub fn f_from_eb(em: &EMField) -> Matrix4<f64> {
    let (e, b) = (&em.e, &em.b);
    let mut f = Matrix4::zeros();
    let upper = [
        ((0, 1), b[2]),
        ((0, 2), -b[1]),
        ((1, 2), b[0]),
        ((0, 3), -e[0]),
        ((1, 3), -e[1]),
        ((2, 3), -e[2]),
    ];
    for ((r, c), v) in upper {
        f[(r, c)] = v;
        f[(c, r)] = -v;
    }
    f
}

fn check_scales(m: f64, k: f64) -> Result<()> {
    if m == 0.0 || !m.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "mass must be nonzero and finite, got {m}"
        )));
    }
    if k == 0.0 || !k.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "k must be nonzero and finite, got {k}"
        )));
    }
    Ok(())
}

/// `T = −(q / km) F`. Zero entries of `F` map to `+0.0`.
pub fn t_from_f(f: &Matrix4<f64>, q: f64, m: f64, k: f64) -> Result<Tensor2> {
    check_scales(m, k)?;
    let scale = -q / (k * m);
    Ok(f.map(|x| x * scale + 0.0))
}

/// `ψ = (V, −(q/km) F)` for the given fields.
pub fn pack_psi(v: &Vector4<f64>, em: &EMField, q: f64, m: f64, k: f64) -> Result<Psi20> {
    Ok(Psi20::new(*v, t_from_f(&f_from_eb(em), q, m, k)?))
}

/// A test particle: charge, mass, and initial event and 4-velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargedParticle {
    pub q: f64,
    pub m: f64,
    pub x0: Vector4<f64>,
    pub v0: Vector4<f64>,
}

impl ChargedParticle {
    /// Requires `m > 0` and `η V0·V0 = −1` within `1e-12`.
    pub fn new(q: f64, m: f64, x0: Vector4<f64>, v0: Vector4<f64>) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "mass must be positive, got {m}"
            )));
        }
        let norm = Metric::dot(&v0, &v0);
        if (norm + 1.0).abs() > 1e-12 || v0[3] <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "4-velocity must be future unit timelike, η V·V = {norm}"
            )));
        }
        Ok(Self { q, m, x0, v0 })
    }

    /// Promotes a 3-velocity `u` (`|u| < 1`) to `V = (γu, γ)`.
    pub fn with_three_velocity(q: f64, m: f64, x0: Vector4<f64>, u: Vector3<f64>) -> Result<Self> {
        Self::new(q, m, x0, four_velocity(&u)?)
    }

    pub fn initial_state(&self) -> State {
        State::new(self.x0, self.v0, 0.0)
    }
}

/// `γ (u, 1)` with `γ = 1/√(1 − |u|²)`.
pub fn four_velocity(u: &Vector3<f64>) -> Result<Vector4<f64>> {
    let u2 = u.norm_squared();
    if u2.is_nan() || u2 >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "3-velocity must satisfy |u| < 1, got |u| = {}",
            u2.sqrt()
        )));
    }
    let gamma = 1.0 / (1.0 - u2).sqrt();
    Ok(Vector4::new(
        gamma * u[0],
        gamma * u[1],
        gamma * u[2],
        gamma,
    ))
}

/// Closed-form orbit in a constant magnetic field `B ẑ`.
///
/// `(V¹, V²)` rotates clockwise at proper frequency `ω = qB/m`, `V³` and
/// `V⁴` stay constant; the projection on the 1-2 plane is a circle of radius
/// `|V⊥| m / |qB|` about [`magnetic_orbit_center`].
pub fn constant_b_orbit(p: &ChargedParticle, b: f64, tau: f64) -> Result<State> {
    let omega = p.q * b / p.m;
    if omega == 0.0 {
        return Err(Error::InvalidParameter(
            "qB = 0: the orbit is a straight line".into(),
        ));
    }
    let (v1, v2) = (p.v0[0], p.v0[1]);
    let (s, c) = (omega * tau).sin_cos();
    let v = Vector4::new(v1 * c + v2 * s, -v1 * s + v2 * c, p.v0[2], p.v0[3]);
    let x = p.x0
        + Vector4::new(
            (v1 * s + v2 * (1.0 - c)) / omega,
            (v1 * (c - 1.0) + v2 * s) / omega,
            p.v0[2] * tau,
            p.v0[3] * tau,
        );
    Ok(State::new(x, v, tau))
}

/// Center `(x, y)` of the circle traced by [`constant_b_orbit`].
pub fn magnetic_orbit_center(p: &ChargedParticle, b: f64) -> Result<(f64, f64)> {
    let omega = p.q * b / p.m;
    if omega == 0.0 {
        return Err(Error::InvalidParameter("qB = 0: no orbit center".into()));
    }
    Ok((p.x0[0] + p.v0[1] / omega, p.x0[1] - p.v0[0] / omega))
}

/// Radius `|V⊥| m / |qB|` of the magnetic orbit.
pub fn magnetic_orbit_radius(p: &ChargedParticle, b: f64) -> Result<f64> {
    let omega = p.q * b / p.m;
    if omega == 0.0 {
        return Err(Error::InvalidParameter("qB = 0: no orbit radius".into()));
    }
    Ok(p.v0[0].hypot(p.v0[1]) / omega.abs())
}

/// Closed-form orbit in a constant electric field `E ẑ` for `V0¹ = V0² = 0`.
///
/// With `a = qE/m`, `(V³, V⁴)` is boosted by rapidity `aτ`; from rest this is
/// `V³ = sinh aτ`, `V⁴ = cosh aτ` (hyperbolic motion).
pub fn constant_e_orbit(p: &ChargedParticle, e: f64, tau: f64) -> Result<State> {
    if p.v0[0] != 0.0 || p.v0[1] != 0.0 {
        return Err(Error::InvalidParameter(
            "constant-E closed form needs V0^1 = V0^2 = 0".into(),
        ));
    }
    let a = p.q * e / p.m;
    let (v3, v4) = (p.v0[2], p.v0[3]);
    if a == 0.0 {
        return Ok(State::new(p.x0 + p.v0 * tau, p.v0, tau));
    }
    let (sh, ch) = ((a * tau).sinh(), (a * tau).cosh());
    let v = Vector4::new(0.0, 0.0, v3 * ch + v4 * sh, v4 * ch + v3 * sh);
    // cosh − 1 = 2 sinh²(aτ/2) avoids cancellation for small aτ
    let chm1 = 2.0 * (0.5 * a * tau).sinh().powi(2);
    let x = p.x0
        + Vector4::new(
            0.0,
            0.0,
            (v3 * sh + v4 * chm1) / a,
            (v4 * sh + v3 * chm1) / a,
        );
    Ok(State::new(x, v, tau))
}

/// Axis-aligned box of events `lo ≤ x ≤ hi` (componentwise).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Patch {
    pub lo: Vector4<f64>,
    pub hi: Vector4<f64>,
}

impl Patch {
    pub fn new(lo: Vector4<f64>, hi: Vector4<f64>) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: &Vector4<f64>) -> bool {
        (0..4).all(|i| self.lo[i] <= x[i] && x[i] <= self.hi[i])
    }
}

/// Which constant-field family a [`TangentField`] describes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    /// Concentric circles about `center` in a field `B ẑ`.
    ConstantB { b: f64, center: (f64, f64) },
    /// Hyperbolae from rest at `t = 0` in a field `E ẑ`, one per starting `z`.
    ConstantE { e: f64 },
}

/// Field `ψ` of tangents to a non-intersecting family of geodesics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentField {
    pub scenario: Scenario,
    pub q: f64,
    pub m: f64,
    pub k: f64,
    pub patch: Patch,
    t: Tensor2,
}

/// Builds the tangent field for a scenario over `patch`.
pub fn tangent_field(
    scenario: Scenario,
    q: f64,
    m: f64,
    k: f64,
    patch: Patch,
) -> Result<TangentField> {
    let em = match scenario {
        Scenario::ConstantB { b, .. } => EMField::magnetic_z(b),
        Scenario::ConstantE { e } => EMField::electric_z(e),
    };
    let t = t_from_f(&f_from_eb(&em), q, m, k)?;
    Ok(TangentField {
        scenario,
        q,
        m,
        k,
        patch,
        t,
    })
}

impl TangentField {
    fn rate(&self) -> f64 {
        match self.scenario {
            Scenario::ConstantB { b, .. } => self.q * b / self.m,
            Scenario::ConstantE { e } => self.q * e / self.m,
        }
    }

    /// Tangent at `x`, ignoring the patch.
    pub fn velocity(&self, x: &Vector4<f64>) -> Vector4<f64> {
        let w = self.rate();
        match self.scenario {
            Scenario::ConstantB { center, .. } => {
                let v1 = w * (x[1] - center.1);
                let v2 = -w * (x[0] - center.0);
                Vector4::new(v1, v2, 0.0, (1.0 + v1 * v1 + v2 * v2).sqrt())
            }
            Scenario::ConstantE { .. } => {
                let v3 = w * x[3];
                Vector4::new(0.0, 0.0, v3, (1.0 + v3 * v3).sqrt())
            }
        }
    }

    /// True at the center of the magnetic family, where the member is a
    /// particle at rest in the plane.
    pub fn is_degenerate(&self, x: &Vector4<f64>) -> bool {
        match self.scenario {
            Scenario::ConstantB { center, .. } => x[0] == center.0 && x[1] == center.1,
            Scenario::ConstantE { .. } => false,
        }
    }

    /// Initial state of the member through event `x0`.
    pub fn member(&self, x0: &Vector4<f64>) -> ChargedParticle {
        ChargedParticle {
            q: self.q,
            m: self.m,
            x0: *x0,
            v0: self.velocity(x0),
        }
    }

    /// Closed-form state of the member through `x0` after proper time `tau`.
    pub fn member_state(&self, x0: &Vector4<f64>, tau: f64) -> Result<State> {
        let p = self.member(x0);
        match self.scenario {
            Scenario::ConstantB { b, .. } => {
                if self.is_degenerate(x0) {
                    Ok(State::new(x0 + p.v0 * tau, p.v0, tau))
                } else {
                    constant_b_orbit(&p, b, tau)
                }
            }
            Scenario::ConstantE { e } => constant_e_orbit(&p, e, tau),
        }
    }

    /// Smallest Euclidean distance in `(x, y, z, t)` between sampled events of
    /// two different members, over `n_samples` proper-time points in
    /// `[0, tau_max]`. Samples leaving the patch are skipped.
    pub fn min_member_separation(
        &self,
        starts: &[Vector4<f64>],
        tau_max: f64,
        n_samples: usize,
    ) -> Result<f64> {
        let mut paths = Vec::with_capacity(starts.len());
        for x0 in starts {
            let mut path = Vec::with_capacity(n_samples);
            for i in 0..n_samples {
                let tau = tau_max * i as f64 / (n_samples.max(2) - 1) as f64;
                let s = self.member_state(x0, tau)?;
                if self.patch.contains(&s.x) {
                    path.push(s.x);
                }
            }
            paths.push(path);
        }
        let mut best = f64::INFINITY;
        for i in 0..paths.len() {
            for j in (i + 1)..paths.len() {
                for a in &paths[i] {
                    for b in &paths[j] {
                        best = best.min((a - b).norm());
                    }
                }
            }
        }
        Ok(best)
    }
}

impl PsiField for TangentField {
    fn eval(&self, x: &Vector4<f64>) -> Result<Psi20> {
        if !self.patch.contains(x) {
            return Err(Error::OutsidePatch([x[0], x[1], x[2], x[3]]));
        }
        Ok(Psi20::new(self.velocity(x), self.t))
    }

    fn vector_jacobian(&self, x: &Vector4<f64>) -> Option<Matrix4<f64>> {
        let w = self.rate();
        let v = self.velocity(x);
        let mut jac = Matrix4::zeros();
        match self.scenario {
            Scenario::ConstantB { .. } => {
                jac[(0, 1)] = w;
                jac[(1, 0)] = -w;
                // V⁴ = √(1 + |V⊥|²)
                jac[(3, 0)] = (v[0] * jac[(0, 0)] + v[1] * jac[(1, 0)]) / v[3];
                jac[(3, 1)] = (v[0] * jac[(0, 1)] + v[1] * jac[(1, 1)]) / v[3];
            }
            Scenario::ConstantE { .. } => {
                jac[(2, 3)] = w;
                jac[(3, 3)] = v[2] * w / v[3];
            }
        }
        Some(jac)
    }
}
