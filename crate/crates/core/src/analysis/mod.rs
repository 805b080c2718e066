//! Noise-color measurement on coincidence strings and mapping of the measured
//! Hurst exponent to the foam model classes.

mod hurst;
mod inference;
mod spectral;
mod xcorr;

use serde::{Deserialize, Serialize};

pub use hurst::{
    expected_rs, haar_detail_variances, rescaled_range_hurst, rescaled_range_points, wavelet_hurst,
    HurstEstimate, HurstMethod, RsPoint, MIN_RS_LENGTH, MIN_WAVELET_LENGTH,
};
pub use inference::{
    infer_qg_model, Estimate, Mapping, ModelClass, ModelInference, ALPHA_ANCHORS, NULL_BAND_FLOOR,
};
pub use spectral::{periodogram, spectral_exponent, SpectralFit, MIN_SPECTRAL_LENGTH, POWER_LAW_RESIDUAL_LIMIT};
pub use xcorr::{cross_correlate, null_correlation_bound};

use crate::error::Result;
use crate::experiment::{imbalance_statistic, CoincidenceString};

/// Largest lag examined when none is configured.
pub const DEFAULT_MAX_LAG: usize = 64;

#[derive(Debug, Clone, Default)]
pub struct AnalysisOptions {
    pub mapping: Mapping,
    /// Hurst estimator whose result drives the report and the inference.
    pub estimator: HurstMethod,
    /// Lags `−max_lag..=max_lag`; capped at half the string length.
    pub max_lag: Option<usize>,
    /// Template sampled at the slot times. Without one the string is
    /// correlated with itself and lag 0 is ignored when locating the peak.
    pub reference: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XcorrSummary {
    /// `template` or `self`.
    pub reference: String,
    pub max_lag: usize,
    pub peak_lag: i64,
    pub peak_value: f64,
    pub null_bound: f64,
}

/// Per-trial summary written as `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub hurst: f64,
    pub hurst_stderr: f64,
    pub spectral_exponent: f64,
    pub alpha_hat: f64,
    pub model_class: ModelClass,
    pub confidence: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub hurst_method: HurstMethod,
    /// Companion estimates; `None` when that estimator had no usable fit
    /// (the selected one must succeed for the report to exist).
    pub rescaled_range_hurst: Option<f64>,
    pub wavelet_hurst: Option<f64>,
    pub spectral_exponent_stderr: f64,
    pub spectral_fit_residual: f64,
    pub power_law: bool,
    pub null: bool,
    pub mapping: Mapping,
    pub imbalance: f64,
    pub xcorr: XcorrSummary,
}

/// Everything computed for one string, including the curves behind the
/// headline numbers.
#[derive(Debug, Clone)]
pub struct StringAnalysis {
    pub report: AnalysisReport,
    pub rs_points: Vec<RsPoint>,
    pub spectrum: Vec<(f64, f64)>,
    pub spectral_fit: SpectralFit,
    /// Correlation by lag, index `max_lag + ℓ`.
    pub xcorr: Vec<f64>,
}

/// Runs both Hurst estimators on the centred bits, the spectral fit on the
/// running imbalance, the cross-correlation and the model inference. The
/// headline Hurst value and the model class come from `options.estimator`.
/// Slots are treated as unit-spaced samples.
pub fn analyze_string(string: &CoincidenceString, seed: u64, options: &AnalysisOptions) -> Result<StringAnalysis> {
    let steps = string.centered();
    let path = string.imbalance_path();
    let spectral_fit = spectral_exponent(&path, 1.0)?;
    let spectrum = periodogram(&path, 1.0)?;
    let rs = rescaled_range_hurst(&steps);
    let rs_points = rescaled_range_points(&steps).unwrap_or_default();
    let wavelet = wavelet_hurst(&steps);
    let primary = match options.estimator {
        HurstMethod::RescaledRange => rs.clone()?,
        HurstMethod::Wavelet => wavelet.clone()?,
    };
    let inference = infer_qg_model(primary, options.mapping)?;

    let n = steps.len();
    let max_lag = options.max_lag.unwrap_or(DEFAULT_MAX_LAG).min(n / 2);
    let (xcorr, label, skip_zero) = match &options.reference {
        Some(r) => (cross_correlate(&steps, r, max_lag)?, "template", false),
        None => (cross_correlate(&steps, &steps, max_lag)?, "self", true),
    };
    let peak = (0..xcorr.len())
        .filter(|&i| !(skip_zero && i == max_lag))
        .max_by(|&a, &b| xcorr[a].abs().total_cmp(&xcorr[b].abs()));
    let (peak_lag, peak_value) = peak.map_or((0, 0.0), |i| (i as i64 - max_lag as i64, xcorr[i]));

    let report = AnalysisReport {
        hurst: primary.h,
        hurst_stderr: primary.stderr,
        spectral_exponent: spectral_fit.exponent,
        alpha_hat: inference.alpha_hat,
        model_class: inference.model_class,
        confidence: inference.confidence,
        n_samples: n,
        seed,
        hurst_method: primary.method,
        rescaled_range_hurst: rs.ok().map(|e| e.h),
        wavelet_hurst: wavelet.ok().map(|e| e.h),
        spectral_exponent_stderr: spectral_fit.exponent_stderr,
        spectral_fit_residual: spectral_fit.fit_residual,
        power_law: spectral_fit.is_power_law(),
        null: inference.null,
        mapping: options.mapping,
        imbalance: imbalance_statistic(string),
        xcorr: XcorrSummary {
            reference: label.to_string(),
            max_lag,
            peak_lag,
            peak_value,
            null_bound: null_correlation_bound(n),
        },
    };
    Ok(StringAnalysis { report, rs_points, spectrum, spectral_fit, xcorr })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::RandomStream;
    use rand::Rng;

    fn coin_string(n: usize, seed: u64) -> CoincidenceString {
        let mut rng = RandomStream::new(seed, 0).rng();
        let bits = (0..n).map(|_| rng.random::<bool>() as u8).collect();
        CoincidenceString::new(bits, (0..n).map(|i| i as f64).collect()).unwrap()
    }

    #[test]
    fn report_uses_fixed_keys() {
        let a = analyze_string(&coin_string(4096, 3), 3, &AnalysisOptions::default()).unwrap();
        let json = serde_json::to_value(&a.report).unwrap();
        for key in [
            "hurst",
            "hurst_stderr",
            "spectral_exponent",
            "alpha_hat",
            "model_class",
            "confidence",
            "n_samples",
            "seed",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["n_samples"], 4096);
        assert_eq!(a.xcorr.len(), 2 * DEFAULT_MAX_LAG + 1);
        assert_ne!(a.report.xcorr.peak_lag, 0);
    }

    #[test]
    fn short_string_rejected() {
        assert!(analyze_string(&coin_string(500, 1), 1, &AnalysisOptions::default()).is_err());
    }
}
