use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlannerScalar};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::linear_fit;

pub const MIN_SPECTRAL_LENGTH: usize = 1024;
/// RMS log residual above which the spectrum is not treated as a power law.
pub const POWER_LAW_RESIDUAL_LIMIT: f64 = 1.0;
/// Largest single-bin excess over the fit, in natural-log amplitude units,
/// compatible with a stochastic power law. Periodogram ordinates are
/// exponentially distributed, so an excess of 2.5 has probability near
/// `e^{−83}` per bin; a spectral line easily exceeds it.
pub const PEAK_RESIDUAL_LIMIT: f64 = 2.5;
const LOWEST_BIN: usize = 4;
const MIN_FIT_BINS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralFit {
    /// `a` in `ASD(f) ∝ f^{−a}`.
    pub exponent: f64,
    pub exponent_stderr: f64,
    /// Prefactor `c` of `ASD(f) = c·f^{−a}`.
    pub amplitude: f64,
    /// RMS residual of the fit in natural-log units.
    pub fit_residual: f64,
    /// Largest positive residual in the fit band.
    pub peak_residual: f64,
    /// Fitted frequency band `(f_lo, f_hi)`.
    pub band: (f64, f64),
    pub n_bins: usize,
}

impl SpectralFit {
    pub fn is_power_law(&self) -> bool {
        self.fit_residual <= POWER_LAW_RESIDUAL_LIMIT && self.peak_residual <= PEAK_RESIDUAL_LIMIT
    }
}

/// One-sided periodogram `(f_k, PSD_k)` for `k = 1..N/2` of the path after
/// end-matching and mean removal. No taper is applied.
///
/// End-matching subtracts the straight line through the first and last
/// samples. A random-walk-like path otherwise carries a jump at the periodic
/// wrap-around whose leakage falls only as `f^{−2}` in power and hides any
/// steeper spectrum.
pub fn periodogram(path: &[f64], sample_interval: f64) -> Result<Vec<(f64, f64)>> {
    if !(sample_interval > 0.0) || !sample_interval.is_finite() {
        return Err(Error::domain(format!("sample_interval must be positive, got {sample_interval}")));
    }
    if path.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("path contains non-finite values"));
    }
    let n = path.len();
    if n < 2 {
        return Ok(Vec::new());
    }
    let drift = (path[n - 1] - path[0]) / (n - 1) as f64;
    let matched: Vec<f64> = path.iter().enumerate().map(|(i, &v)| v - drift * i as f64).collect();
    let mean = matched.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex<f64>> = matched.iter().map(|&v| Complex::new(v - mean, 0.0)).collect();
    let fft: Arc<dyn Fft<f64>> = FftPlannerScalar::new().plan_fft_forward(n);
    fft.process(&mut buf);
    let duration = n as f64 * sample_interval;
    let scale = 2.0 * sample_interval / n as f64;
    Ok((1..=n / 2)
        .map(|k| (k as f64 / duration, buf[k].norm_sqr() * scale))
        .collect())
}

/// Power-law fit to the amplitude spectral density of a cumulative path.
///
/// Admissible bins run from `k = 4` up to three quarters of Nyquist. The fit
/// uses the decade of bins centred geometrically in that range, so that both
/// the leakage-dominated low end and the aliased top are excluded.
pub fn spectral_exponent(path: &[f64], sample_interval: f64) -> Result<SpectralFit> {
    if path.len() < MIN_SPECTRAL_LENGTH {
        return Err(Error::usage(format!(
            "spectral fit needs at least {MIN_SPECTRAL_LENGTH} samples, got {}",
            path.len()
        )));
    }
    let spectrum = periodogram(path, sample_interval)?;
    if spectrum.iter().all(|&(_, p)| p == 0.0) {
        return Err(Error::degenerate("path has no fluctuating component"));
    }
    let k_hi_adm = (0.75 * (path.len() / 2) as f64).floor();
    let centre = (LOWEST_BIN as f64 * k_hi_adm).sqrt();
    let lo = (centre / 10f64.sqrt()).ceil().max(LOWEST_BIN as f64) as usize;
    let hi = (centre * 10f64.sqrt()).floor().min(k_hi_adm) as usize;
    let band = &spectrum[lo - 1..hi];
    if band.len() < MIN_FIT_BINS {
        return Err(Error::usage("fit band holds too few frequency bins"));
    }
    let x: Vec<f64> = band.iter().map(|&(f, _)| f.ln()).collect();
    let y: Vec<f64> = band
        .iter()
        .map(|&(_, p)| 0.5 * p.max(f64::MIN_POSITIVE).ln())
        .collect();
    let fit = linear_fit(&x, &y).ok_or_else(|| Error::degenerate("spectral fit failed"))?;
    Ok(SpectralFit {
        exponent: -fit.slope,
        exponent_stderr: fit.slope_stderr,
        amplitude: fit.intercept.exp(),
        fit_residual: fit.rms_residual,
        peak_residual: x
            .iter()
            .zip(&y)
            .map(|(xi, yi)| yi - (fit.intercept + fit.slope * xi))
            .fold(f64::NEG_INFINITY, f64::max),
        band: (band[0].0, band[band.len() - 1].0),
        n_bins: band.len(),
    })
}
