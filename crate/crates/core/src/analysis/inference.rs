use serde::{Deserialize, Serialize};

use super::hurst::HurstEstimate;
use super::spectral::SpectralFit;
use crate::error::{Error, Result};

/// Foam exponents of the three reference models, in order.
pub const ALPHA_ANCHORS: [f64; 3] = [0.5, 2.0 / 3.0, 1.0];
/// Smallest half-width of the band around Ĥ = ½ that is flagged null.
pub const NULL_BAND_FLOOR: f64 = 0.05;

/// Either kind of noise-color estimate, reduced to a Hurst exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Estimate {
    Hurst(HurstEstimate),
    /// Ĥ = a − ½.
    Spectral(SpectralFit),
}

impl Estimate {
    pub fn hurst(&self) -> (f64, f64) {
        match self {
            Estimate::Hurst(h) => (h.h, h.stderr),
            Estimate::Spectral(s) => (s.exponent - 0.5, s.exponent_stderr),
        }
    }
}

impl From<HurstEstimate> for Estimate {
    fn from(h: HurstEstimate) -> Self {
        Estimate::Hurst(h)
    }
}

impl From<SpectralFit> for Estimate {
    fn from(s: SpectralFit) -> Self {
        Estimate::Spectral(s)
    }
}

/// How a Hurst exponent translates to the foam exponent α.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mapping {
    /// α = 1 − H: fluctuations accumulate as `T^{1−α}`.
    #[default]
    Growth,
    /// α = H.
    Literal,
}

impl Mapping {
    pub fn alpha(self, h: f64) -> f64 {
        match self {
            Mapping::Growth => 1.0 - h,
            Mapping::Literal => h,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelClass {
    RandomWalk,
    Holographic,
    LoopQg,
    Undetermined,
}

impl ModelClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelClass::RandomWalk => "random-walk",
            ModelClass::Holographic => "holographic",
            ModelClass::LoopQg => "loop-qg",
            ModelClass::Undetermined => "undetermined",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelInference {
    pub hurst: f64,
    pub alpha_hat: f64,
    pub model_class: ModelClass,
    pub confidence: f64,
    /// Ĥ is statistically indistinguishable from memoryless noise.
    pub null: bool,
}

/// Classifies an estimate to the nearest foam anchor α ∈ {½, ⅔, 1}.
///
/// Confidence is the Gaussian likelihood weight of the chosen anchor among the
/// three, with the estimate's standard error as width. Estimates within
/// `max(2·stderr, 0.05)` of Ĥ = ½ keep their nearest class but carry the null
/// flag. A Hurst value outside (0, 1) is undetermined.
pub fn infer_qg_model(estimate: impl Into<Estimate>, mapping: Mapping) -> Result<ModelInference> {
    let (h, se) = estimate.into().hurst();
    if !se.is_finite() || se < 0.0 || h.is_nan() {
        return Err(Error::usage(format!("estimate needs a finite stderr, got {h} ± {se}")));
    }
    let alpha_hat = mapping.alpha(h);
    if !(h > 0.0 && h < 1.0) {
        return Ok(ModelInference {
            hurst: h,
            alpha_hat,
            model_class: ModelClass::Undetermined,
            confidence: 0.0,
            null: true,
        });
    }
    let dist: Vec<f64> = ALPHA_ANCHORS.iter().map(|a| (alpha_hat - a).abs()).collect();
    let best = (0..3).min_by(|&i, &j| dist[i].total_cmp(&dist[j])).unwrap_or(0);
    let confidence = if se == 0.0 {
        1.0
    } else {
        let logl: Vec<f64> = dist.iter().map(|d| -0.5 * (d / se).powi(2)).collect();
        let top = logl[best];
        1.0 / logl.iter().map(|l| (l - top).exp()).sum::<f64>()
    };
    let model_class = [ModelClass::RandomWalk, ModelClass::Holographic, ModelClass::LoopQg][best];
    Ok(ModelInference {
        hurst: h,
        alpha_hat,
        model_class,
        confidence,
        null: (h - 0.5).abs() <= (2.0 * se).max(NULL_BAND_FLOOR),
    })
}
