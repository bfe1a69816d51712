//! Scenario configuration file.
//!
//! ```json
//! {
//!   "k": 1.0, "q": 1.0, "m": 1.0,
//!   "field": { "e": [0, 0, 0], "b": [0, 0, 1] },
//!   "x0": [0, 0, 0, 0],
//!   "v0": [0.5, 0, 0],
//!   "step": 0.001, "n_steps": 10000,
//!   "integrator": "rk4"
//! }
//! ```
//!
//! `field` is either `{ "e": [..], "b": [..] }` (either key may be left out
//! and defaults to zero) or `{ "t": [[..], [..], [..], [..]] }` giving
//! `T^{αβ}` row by row. `v0` holds a 4-velocity when it has four entries
//! and a 3-velocity (`|u| < 1`) when it has three.

use crate::error::CliError;
use poincare_core::electrodynamics::{f_from_eb, four_velocity, t_from_f};
use poincare_core::{EMField, Integrator, Tensor2, Vector3, Vector4};
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub k: f64,
    pub q: f64,
    pub m: f64,
    pub field: FieldSpec,
    pub x0: [f64; 4],
    pub v0: Vec<f64>,
    pub step: f64,
    pub n_steps: usize,
    #[serde(default)]
    pub integrator: IntegratorName,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Raw(RawTensor),
    Em(EmSpec),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTensor {
    pub t: [[f64; 4]; 4],
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmSpec {
    pub e: Option<[f64; 3]>,
    pub b: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntegratorName {
    #[default]
    Rk4,
    Euler,
}

impl From<IntegratorName> for Integrator {
    fn from(n: IntegratorName) -> Self {
        match n {
            IntegratorName::Rk4 => Integrator::Rk4,
            IntegratorName::Euler => Integrator::Euler,
        }
    }
}

/// A validated scenario ready to integrate.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub k: f64,
    pub q: f64,
    pub m: f64,
    /// `Some` when the field was given as `E`/`B`.
    pub em: Option<EMField>,
    pub tensor: Tensor2,
    pub x0: Vector4<f64>,
    pub v0: Vector4<f64>,
    pub step: f64,
    pub n_steps: usize,
    pub integrator: Integrator,
}

impl ScenarioConfig {
    pub fn from_json(text: &str, path: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config {
            path: path.to_string(),
            message: format!("line {}, column {}: {}", e.line(), e.column(), e),
        })
    }

    pub fn validate(&self, path: &str) -> Result<Scenario, CliError> {
        let fail = |message: String| CliError::Config {
            path: path.to_string(),
            message,
        };
        let finite = |name: &str, xs: &[f64]| {
            if xs.iter().all(|x| x.is_finite()) {
                Ok(())
            } else {
                Err(fail(format!("`{name}` must be finite")))
            }
        };
        finite("k", &[self.k])?;
        finite("q", &[self.q])?;
        finite("x0", &self.x0)?;
        finite("v0", &self.v0)?;
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(fail(format!("`m` must be positive, got {}", self.m)));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(fail(format!("`step` must be positive, got {}", self.step)));
        }
        if self.n_steps == 0 {
            return Err(fail("`n_steps` must be at least 1".into()));
        }

        let v0 = match self.v0.as_slice() {
            [a, b, c, d] => Vector4::new(*a, *b, *c, *d),
            [a, b, c] => {
                four_velocity(&Vector3::new(*a, *b, *c)).map_err(|e| fail(format!("`v0`: {e}")))?
            }
            other => {
                return Err(fail(format!(
                    "`v0` needs 4 entries (4-velocity) or 3 entries (3-velocity), got {}",
                    other.len()
                )))
            }
        };

        let (em, tensor) = match &self.field {
            FieldSpec::Raw(raw) => {
                let flat: Vec<f64> = raw.t.iter().flatten().copied().collect();
                finite("field.t", &flat)?;
                (None, Tensor2::from_row_slice(&flat))
            }
            FieldSpec::Em(spec) => {
                if spec.e.is_none() && spec.b.is_none() {
                    return Err(fail("`field` needs `e`/`b` or `t`".into()));
                }
                let e = spec.e.unwrap_or_default();
                let b = spec.b.unwrap_or_default();
                finite("field.e", &e)?;
                finite("field.b", &b)?;
                let em = EMField::new(Vector3::from(e), Vector3::from(b));
                let t = t_from_f(&f_from_eb(&em), self.q, self.m, self.k)
                    .map_err(|e| fail(e.to_string()))?;
                (Some(em), t)
            }
        };

        Ok(Scenario {
            k: self.k,
            q: self.q,
            m: self.m,
            em,
            tensor,
            x0: Vector4::from(self.x0),
            v0,
            step: self.step,
            n_steps: self.n_steps,
            integrator: self.integrator.into(),
        })
    }
}
