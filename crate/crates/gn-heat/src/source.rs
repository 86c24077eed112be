//! Analytic source-term families.
//!
//! Sources are declared as named analytic profiles with parameters rather
//! than inline expressions so their time derivatives are exact — the
//! linearized Type III equation needs ṙ structurally, never by numerical
//! differencing. A profile is declared as either an energy supply r or an
//! entropy supply s; solvers convert one into the other via r = θs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether the profile prescribes the energy supply r or the entropy
/// supply s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceRole {
    Energy,
    Entropy,
}

/// The analytic shape of the supply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceProfile {
    Zero,
    Constant {
        amplitude: f64,
    },
    /// amplitude · sin(k·x + phase) · cos(ω·t)
    Sinusoidal {
        amplitude: f64,
        wavenumber: f64,
        angular_frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    /// amplitude · exp(−(x−x_c)²/2w_x²) · exp(−(t−t_c)²/2w_t²)
    GaussianPulse {
        amplitude: f64,
        center_x: f64,
        width_x: f64,
        center_t: f64,
        width_t: f64,
    },
}

impl SourceProfile {
    pub fn validate(&self) -> Result<()> {
        match self {
            SourceProfile::GaussianPulse { width_x, width_t, .. } => {
                if !(*width_x > 0.0) || !(*width_t > 0.0) {
                    return Err(Error::Config(format!(
                        "gaussian pulse widths must be positive, got width_x = {width_x}, width_t = {width_t}"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        match *self {
            SourceProfile::Zero => 0.0,
            SourceProfile::Constant { amplitude } => amplitude,
            SourceProfile::Sinusoidal { amplitude, wavenumber, angular_frequency, phase } => {
                amplitude * (wavenumber * x + phase).sin() * (angular_frequency * t).cos()
            }
            SourceProfile::GaussianPulse { amplitude, center_x, width_x, center_t, width_t } => {
                let ex = -((x - center_x) * (x - center_x)) / (2.0 * width_x * width_x);
                let et = -((t - center_t) * (t - center_t)) / (2.0 * width_t * width_t);
                amplitude * ex.exp() * et.exp()
            }
        }
    }

    /// Exact ∂/∂t of [`SourceProfile::eval`].
    pub fn eval_dt(&self, x: f64, t: f64) -> f64 {
        match *self {
            SourceProfile::Zero | SourceProfile::Constant { .. } => 0.0,
            SourceProfile::Sinusoidal { amplitude, wavenumber, angular_frequency, phase } => {
                -amplitude
                    * angular_frequency
                    * (wavenumber * x + phase).sin()
                    * (angular_frequency * t).sin()
            }
            SourceProfile::GaussianPulse { center_t, width_t, .. } => {
                self.eval(x, t) * (-(t - center_t) / (width_t * width_t))
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SourceProfile::Zero)
            || matches!(self, SourceProfile::Constant { amplitude } if *amplitude == 0.0)
    }
}

/// A supply profile together with its declared role.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceTerm {
    #[serde(flatten)]
    pub profile: SourceProfile,
    pub role: SourceRole,
}

impl SourceTerm {
    pub fn zero() -> Self {
        Self { profile: SourceProfile::Zero, role: SourceRole::Energy }
    }
}
