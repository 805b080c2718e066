use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Apéry's constant ζ(3).
pub const ZETA_3: f64 = 1.202_056_903_159_594_3;

/// Photon path of length `separation` across a compactified dimension of size `compact_scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompactDims {
    pub separation: f64,
    pub compact_scale: f64,
}

impl CompactDims {
    pub fn new(separation: f64, compact_scale: f64) -> Result<Self> {
        let d = Self { separation, compact_scale };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.compact_scale > 0.0 && self.compact_scale.is_finite()) {
            return Err(Error::domain(format!("compact_scale must be positive, got {}", self.compact_scale)));
        }
        if !(self.separation >= 0.0) || !self.epsilon().is_finite() {
            return Err(Error::domain(format!("separation must be finite and non-negative, got {}", self.separation)));
        }
        Ok(())
    }

    /// `ε = r / L`.
    pub fn epsilon(&self) -> f64 {
        self.separation / self.compact_scale
    }
}

/// Light-cone delay `Δt ≈ √(2 ζ(3) G₄ / π) · ε` in Planck times, with `G₄ = 1`.
pub fn compactification_delay(dims: &CompactDims) -> f64 {
    (2.0 * ZETA_3 / std::f64::consts::PI).sqrt() * dims.epsilon()
}
