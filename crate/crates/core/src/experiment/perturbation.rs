use serde::{Deserialize, Serialize};

use super::records::{ObserverConfig, PairSourceConfig};
use crate::error::{Error, Result};
use crate::spacetime::{
    arrival_spread, compactification_delay, norm, plane_gw_strain, scale, window_degradation, CompactDims,
    FoamModel, PlaneGw, Vec3, WindowFactor,
};

/// Source of string coloration.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PerturbationModel {
    #[default]
    None,
    /// Superposition of discrete plane-wave modes.
    PlaneGw { modes: Vec<PlaneGw> },
    Foam(FoamModel),
    CompactDims(CompactDims),
}

impl PerturbationModel {
    /// Checks model invariants and normalises plane-wave directions.
    pub fn validated(&self) -> Result<PerturbationModel> {
        Ok(match self {
            PerturbationModel::None => PerturbationModel::None,
            PerturbationModel::PlaneGw { modes } => {
                if modes.is_empty() {
                    return Err(Error::domain("plane_gw perturbation needs at least one mode"));
                }
                PerturbationModel::PlaneGw {
                    modes: modes.iter().map(|m| m.normalized()).collect::<Result<_>>()?,
                }
            }
            PerturbationModel::Foam(f) => {
                f.validate()?;
                PerturbationModel::Foam(*f)
            }
            PerturbationModel::CompactDims(d) => {
                d.validate()?;
                PerturbationModel::CompactDims(*d)
            }
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            PerturbationModel::None => "none",
            PerturbationModel::PlaneGw { .. } => "plane_gw",
            PerturbationModel::Foam(_) => "foam",
            PerturbationModel::CompactDims(_) => "compact_dims",
        }
    }
}

/// How a perturbation reaches the observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Coupling {
    /// κ in `Q(t) = κ · h_eff(t)`.
    pub kappa: f64,
    /// Window degradation applied to `h_eff`.
    pub window_factor: WindowFactor,
    /// Perturbation modulates the per-slot coincidence probability.
    pub bit_channel: bool,
    /// Perturbation shifts observer B's arrival times.
    pub jitter_channel: bool,
    /// Per-slot standard deviation of the foam displacement increments, in
    /// imbalance units (one slot moves the imbalance by ±½).
    pub foam_coupling: f64,
    /// Records per step for the foam displacement generator.
    pub foam_records_per_step: usize,
}

impl Default for Coupling {
    fn default() -> Self {
        Self {
            kappa: 1.0,
            window_factor: WindowFactor::Eq5,
            bit_channel: true,
            jitter_channel: true,
            foam_coupling: 0.5,
            foam_records_per_step: 16,
        }
    }
}

impl Coupling {
    pub fn validate(&self) -> Result<()> {
        if !self.kappa.is_finite() {
            return Err(Error::domain("kappa must be finite"));
        }
        if !(self.foam_coupling > 0.0 && self.foam_coupling.is_finite()) {
            return Err(Error::domain(format!("foam_coupling must be positive, got {}", self.foam_coupling)));
        }
        if self.foam_records_per_step == 0 {
            return Err(Error::domain("foam_records_per_step must be at least 1"));
        }
        Ok(())
    }
}

/// Slot-level probability of a coincidence, `½(1 + κQ)` clipped to `[0, 1]`.
pub fn bit_probability(kappa: f64, q: f64) -> f64 {
    (0.5 * (1.0 + kappa * q)).clamp(0.0, 1.0)
}

/// `κ·Q(t)` at each coordinate time, the slot-level bias a plane wave would
/// inject. Zero for the other models. Useful as a matched template.
pub fn coupled_strain(
    model: &PerturbationModel,
    source: &PairSourceConfig,
    a: &ObserverConfig,
    b: &ObserverConfig,
    coupling: &Coupling,
    times: &[f64],
) -> Result<Vec<f64>> {
    let model = model.validated()?;
    let active = ActivePerturbation::new(&model, source, a, b, coupling)?;
    Ok(times.iter().map(|&t| coupling.kappa * active.q(t)).collect())
}

/// Unit vector from A to B, or x̂ when the observers coincide.
pub(crate) fn baseline(a: &ObserverConfig, b: &ObserverConfig) -> Vec3 {
    let d = [b.position[0] - a.position[0], b.position[1] - a.position[1], b.position[2] - a.position[2]];
    let len = norm(&d);
    if len > 0.0 {
        scale(&d, 1.0 / len)
    } else {
        [1.0, 0.0, 0.0]
    }
}

/// Precomputed per-run view of a perturbation.
pub(crate) struct ActivePerturbation<'a> {
    model: &'a PerturbationModel,
    baseline: Vec3,
    origin: Vec3,
    separation: f64,
    /// `1 − δh` per plane-wave mode.
    mode_weights: Vec<f64>,
    /// Arrival spread per mean pair interval (foam only).
    pub foam_unit_spread: f64,
    /// Constant extra-dimension delay (compact dims only).
    pub compact_delay: f64,
}

impl<'a> ActivePerturbation<'a> {
    pub fn new(
        model: &'a PerturbationModel,
        source: &PairSourceConfig,
        a: &ObserverConfig,
        b: &ObserverConfig,
        coupling: &Coupling,
    ) -> Result<Self> {
        let mut mode_weights = Vec::new();
        let mut foam_unit_spread = 0.0;
        let mut compact_delay = 0.0;
        match model {
            PerturbationModel::PlaneGw { modes } => {
                for m in modes {
                    let d = window_degradation(source.coherence_window, m.wavelength(), source.separation, coupling.window_factor)?;
                    mode_weights.push(1.0 - d);
                }
            }
            PerturbationModel::Foam(f) => foam_unit_spread = arrival_spread(f, 1.0 / source.rate)?,
            PerturbationModel::CompactDims(d) => compact_delay = compactification_delay(d),
            PerturbationModel::None => {}
        }
        Ok(Self {
            model,
            baseline: baseline(a, b),
            origin: a.position,
            separation: source.separation,
            mode_weights,
            foam_unit_spread,
            compact_delay,
        })
    }

    /// Baseline-projected strain `n̂ᵀ h n̂`, summed over modes, optionally window-weighted.
    pub fn projected_strain(&self, t: f64, weighted: bool) -> f64 {
        match self.model {
            PerturbationModel::PlaneGw { modes } => modes
                .iter()
                .zip(&self.mode_weights)
                .map(|(m, w)| {
                    let h = plane_gw_strain(m, t, &self.origin).spatial_projection(&self.baseline);
                    if weighted {
                        h * w
                    } else {
                        h
                    }
                })
                .sum(),
            _ => 0.0,
        }
    }

    /// `Q(t) = h_eff(t)` including the window factor.
    pub fn q(&self, t: f64) -> f64 {
        self.projected_strain(t, true)
    }

    /// Light-travel-time change along the baseline, `½ r n̂ᵀ h n̂`.
    pub fn gw_delay(&self, t: f64) -> f64 {
        0.5 * self.separation * self.projected_strain(t, false)
    }
}
