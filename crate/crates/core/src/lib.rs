//! Vector-plus-tensor representation of the Poincaré group and the
//! charged-particle geodesics it induces.
//!
//! A 4-vector field `v^μ` paired with a rank-2 tensor field `T^{αβ}` forms a
//! 20-component field `ψ`. Under translations the tensor part leaks into the
//! vector part through `kT_σ^μ`, a connection. Curves whose tangent is
//! parallel-translated with this connection obey `d²X/dτ² = kT_σ^μ dX^σ/dτ`,
//! which is the Lorentz force law once `T = −(q/km) F`.
//!
//! Modules, bottom-up:
//! - [`indexing`]: flat metric, Levi-Civita symbol, double-index ↔ flat-index map
//! - [`generators`]: the 20×20 matrices `J^{ρσ}` and `P^μ`
//! - [`group`]: finite transformations `D(Λ, δx)` and commutator checks
//! - [`field`]: the field `ψ`, its translation, and the connection `Γ`
//! - [`geodesic`]: the geodesic equation, RK4 integration, norm diagnostics
//! - [`electrodynamics`]: `E`/`B` packing and closed-form constant-field orbits
//!
//! Tensor indices are 1-based in every public contract, with `4` the time
//! component and metric `diag(+1, +1, +1, −1)`.

pub mod electrodynamics;
pub mod error;
pub mod expm;
pub mod field;
pub mod generators;
pub mod geodesic;
pub mod group;
pub mod indexing;

pub use nalgebra::{Complex, Matrix4, Vector3, Vector4};

/// Complex scalar used by the generator matrices.
pub type C64 = Complex<f64>;
/// Dense 20×20 complex matrix.
pub type Mat20 = nalgebra::SMatrix<C64, 20, 20>;
/// Rank-2 tensor with entry `(α−1, β−1)` holding `T^{αβ}`.
pub type Tensor2 = Matrix4<f64>;

pub use electrodynamics::{ChargedParticle, EMField};
pub use error::{Error, Result};
pub use field::{Psi20, PsiField};
pub use generators::{GeneratorSet, MomentumConstants};
pub use geodesic::{Integrator, State, TensorField, Trajectory};
pub use group::{Omega, PoincareElement, RepMatrix};
pub use indexing::{IndexMap, LeviCivita, Metric};
