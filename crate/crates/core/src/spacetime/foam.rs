use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// First-order spacetime-foam model: `p² ≈ E² [1 + ξ (E/E_QG)^α]`.
///
/// The three named classes are α = ½ (random walk), α = ⅔ (holographic)
/// and α = 1 (loop quantum gravity); any α in (0, 1] is accepted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoamModel {
    pub alpha: f64,
    #[serde(default = "FoamModel::default_xi")]
    pub xi: f64,
    pub e_qg: f64,
    pub e_typ: f64,
    #[serde(default = "FoamModel::default_l_min")]
    pub l_min: f64,
}

impl FoamModel {
    fn default_xi() -> f64 {
        1.0
    }

    fn default_l_min() -> f64 {
        1.0
    }

    pub fn new(alpha: f64, xi: f64, e_qg: f64, e_typ: f64, l_min: f64) -> Result<Self> {
        let m = Self { alpha, xi, e_qg, e_typ, l_min };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::domain(format!("foam alpha must lie in (0, 1], got {}", self.alpha)));
        }
        if !(self.e_qg > 0.0) || !(self.e_typ > 0.0) {
            return Err(Error::domain("energy scales e_qg and e_typ must be positive"));
        }
        if self.e_typ > self.e_qg {
            return Err(Error::domain(format!(
                "e_typ ({}) must not exceed e_qg ({}): low-energy regime",
                self.e_typ, self.e_qg
            )));
        }
        if !(self.l_min > 0.0) {
            return Err(Error::domain(format!("l_min must be positive, got {}", self.l_min)));
        }
        Ok(())
    }

    /// Displacement amplitude spectral density `S(f) = L_min / √f`.
    pub fn displacement_asd(&self, f: f64) -> f64 {
        self.l_min / f.sqrt()
    }

    /// Growth exponent of the accumulated arrival jitter, `γ = 1 − α`.
    pub fn growth_exponent(&self) -> f64 {
        1.0 - self.alpha
    }
}

/// Sampled foam displacement spectrum and its band-integrated RMS.
#[derive(Debug, Clone, PartialEq)]
pub struct FoamNoise {
    /// `(f, S(f))` on a logarithmic grid from `1/T_obs` to `f_max`.
    pub spectrum: Vec<(f64, f64)>,
    /// `σ = √(∫ S² df) = L_min √(ln(f_max T_obs))`.
    pub sigma: f64,
}

pub const FOAM_GRID_POINTS: usize = 256;

pub fn foam_displacement_noise(model: &FoamModel, f_max: f64, t_obs: f64) -> Result<FoamNoise> {
    if !(t_obs > 0.0) {
        return Err(Error::domain(format!("observation time must be positive, got {t_obs}")));
    }
    let f_min = 1.0 / t_obs;
    if !(f_max > f_min) {
        return Err(Error::domain(format!(
            "empty band: f_max = {f_max} does not exceed 1/T_obs = {f_min}"
        )));
    }
    let (lo, hi) = (f_min.ln(), f_max.ln());
    let last = (FOAM_GRID_POINTS - 1) as f64;
    let spectrum = (0..FOAM_GRID_POINTS)
        .map(|k| {
            let f = if k + 1 == FOAM_GRID_POINTS { f_max } else { (lo + (hi - lo) * k as f64 / last).exp() };
            (f, model.displacement_asd(f))
        })
        .collect();
    let sigma = model.l_min * (f_max * t_obs).ln().sqrt();
    Ok(FoamNoise { spectrum, sigma })
}

/// Modified dispersion `p² = E² [1 + ξ (E/E_QG)^α]`.
pub fn modified_dispersion(energy: f64, model: &FoamModel) -> Result<f64> {
    if !(energy > 0.0) {
        return Err(Error::domain(format!("energy must be positive, got {energy}")));
    }
    Ok(energy * energy * (1.0 + model.xi * (energy / model.e_qg).powf(model.alpha)))
}

/// Arrival-time spread `σ_D = √( (α+α²)/2 · (E_typ/E_QG)^{α−1} · T_obs/E_QG )`.
pub fn arrival_spread(model: &FoamModel, t_obs: f64) -> Result<f64> {
    if !(t_obs > 0.0) {
        return Err(Error::domain(format!("observation time must be positive, got {t_obs}")));
    }
    let a = model.alpha;
    let prefactor = 0.5 * (a + a * a) * (model.e_typ / model.e_qg).powf(a - 1.0);
    Ok((prefactor * t_obs / model.e_qg).sqrt())
}
