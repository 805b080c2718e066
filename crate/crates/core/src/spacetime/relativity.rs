use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn require_timelike(g00: f64, what: &str) -> Result<()> {
    if g00 < 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{what}: g00 must be negative, got {g00}")))
    }
}

/// Clock-rate correction `Δt / √(−g00)`.
pub fn proper_time_correction(dt: f64, g00: f64) -> Result<f64> {
    require_timelike(g00, "proper time correction")?;
    Ok(dt / (-g00).sqrt())
}

/// Expected ratio of string lengths `len[A] / len[B] = √(g00_B / g00_A)` when
/// both observers stop at the same local proper time.
pub fn string_length_ratio(g00_a: f64, g00_b: f64) -> Result<f64> {
    require_timelike(g00_a, "observer A")?;
    require_timelike(g00_b, "observer B")?;
    Ok((g00_b / g00_a).sqrt())
}

/// Prefactor convention for the window-induced strain uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowFactor {
    /// `ΔW / (2 λ |sin(r / 2λ⁰)|)`.
    #[default]
    Eq5,
    /// `ΔW / (4 λ |sin(r / 2λ⁰)|)`, the form carried by the weak-field imbalance expansion.
    Weakfield,
    /// No degradation.
    Off,
}

impl WindowFactor {
    fn denominator(self) -> Option<f64> {
        match self {
            WindowFactor::Eq5 => Some(2.0),
            WindowFactor::Weakfield => Some(4.0),
            WindowFactor::Off => None,
        }
    }
}

/// Strain uncertainty `δh_t ≈ ΔW / (2 λ_gw |sin(r / 2λ⁰_gw)|)` with
/// `λ⁰_gw = λ_gw / 2π`, for a plane wave crossing the baseline at right angles.
pub fn amplitude_uncertainty(window: f64, lambda_gw: f64, r: f64) -> Result<f64> {
    window_degradation(window, lambda_gw, r, WindowFactor::Eq5)
}

/// `amplitude_uncertainty` with a selectable prefactor; `Off` yields 0.
pub fn window_degradation(window: f64, lambda_gw: f64, r: f64, factor: WindowFactor) -> Result<f64> {
    if !(window > 0.0) {
        return Err(Error::domain(format!("coincidence window must be positive, got {window}")));
    }
    if !(lambda_gw > 0.0) {
        return Err(Error::domain(format!("wavelength must be positive, got {lambda_gw}")));
    }
    let Some(denom) = factor.denominator() else {
        return Ok(0.0);
    };
    let reduced = lambda_gw / (2.0 * std::f64::consts::PI);
    let s = (r / (2.0 * reduced)).sin().abs();
    if s < 1e-12 {
        return Err(Error::Singularity(format!(
            "baseline r = {r} sits on a node of the wave (λ = {lambda_gw}); the window hides the strain"
        )));
    }
    Ok(window / (denom * lambda_gw * s))
}
