use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::fit::linear_fit;

pub const MIN_RS_LENGTH: usize = 256;
pub const MIN_WAVELET_LENGTH: usize = 512;
const RS_SIZES: usize = 12;
const RS_MIN_BLOCK: usize = 16;
const WAVELET_MIN_COEFFS: usize = 16;
const H_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HurstMethod {
    #[default]
    RescaledRange,
    Wavelet,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HurstEstimate {
    pub h: f64,
    pub stderr: f64,
    pub method: HurstMethod,
    pub n_points: usize,
}

/// One block size of the rescaled-range analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RsPoint {
    pub block_size: usize,
    /// Mean R/S over the non-overlapping blocks of this size.
    pub rs: f64,
    /// Anis-Lloyd expected R/S of white noise at this size.
    pub expected: f64,
}

fn check_series(series: &[f64], min_len: usize) -> Result<()> {
    if series.len() < min_len {
        return Err(Error::usage(format!(
            "series needs at least {min_len} samples, got {}",
            series.len()
        )));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("series contains non-finite values"));
    }
    let first = series[0];
    if series.iter().all(|&v| v == first) {
        return Err(Error::degenerate("series is constant"));
    }
    Ok(())
}

/// Expected R/S of `n ≥ 2` i.i.d. Gaussian samples (Anis & Lloyd, with the
/// Peters small-sample factor). The gamma ratio is taken in log space, so no
/// large-`n` approximation is needed.
pub fn expected_rs(n: usize) -> f64 {
    let nf = n as f64;
    let ratio = (ln_gamma((nf - 1.0) / 2.0) - ln_gamma(nf / 2.0)).exp() / std::f64::consts::PI.sqrt();
    let sum: f64 = (1..n).map(|i| ((nf - i as f64) / i as f64).sqrt()).sum();
    (nf - 0.5) / nf * ratio * sum
}

fn block_sizes(len: usize) -> Vec<usize> {
    let lo = RS_MIN_BLOCK as f64;
    let hi = (len / 4) as f64;
    let step = (hi / lo).ln() / (RS_SIZES - 1) as f64;
    let mut sizes: Vec<usize> = (0..RS_SIZES)
        .map(|i| (lo * (step * i as f64).exp()).round() as usize)
        .collect();
    sizes.dedup();
    sizes
}

fn mean_rs(series: &[f64], size: usize) -> Option<f64> {
    let mut total = 0.0;
    let mut used = 0usize;
    for block in series.chunks_exact(size) {
        let mean = block.iter().sum::<f64>() / size as f64;
        let (mut acc, mut lo, mut hi, mut ss) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for &v in block {
            let d = v - mean;
            acc += d;
            lo = lo.min(acc);
            hi = hi.max(acc);
            ss += d * d;
        }
        let s = (ss / size as f64).sqrt();
        if s > 0.0 {
            total += (hi - lo) / s;
            used += 1;
        }
    }
    (used > 0).then(|| total / used as f64)
}

/// Mean R/S per block size, for plotting and inspection.
pub fn rescaled_range_points(series: &[f64]) -> Result<Vec<RsPoint>> {
    check_series(series, MIN_RS_LENGTH)?;
    Ok(block_sizes(series.len())
        .into_iter()
        .filter_map(|size| {
            mean_rs(series, size).map(|rs| RsPoint {
                block_size: size,
                rs,
                expected: expected_rs(size),
            })
        })
        .collect())
}

/// Hurst exponent of an increment series by corrected rescaled-range
/// analysis.
///
/// Block sizes are 12 log-spaced values from 16 to `len/4`; each block has its
/// mean removed and blocks with zero spread are skipped. The fit regresses
/// `ln(R/S) − ln E[R/S]` on `ln n` and reports `½ + slope`, which removes the
/// small-sample upward bias of plain R/S. The result is clamped to
/// `[0.001, 0.999]`.
pub fn rescaled_range_hurst(series: &[f64]) -> Result<HurstEstimate> {
    let points = rescaled_range_points(series)?;
    let x: Vec<f64> = points.iter().map(|p| (p.block_size as f64).ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.rs.ln() - p.expected.ln()).collect();
    let fit = linear_fit(&x, &y).ok_or_else(|| Error::degenerate("too few usable block sizes"))?;
    Ok(HurstEstimate {
        h: (0.5 + fit.slope).clamp(H_FLOOR, 1.0 - H_FLOOR),
        stderr: fit.slope_stderr,
        method: HurstMethod::RescaledRange,
        n_points: points.len(),
    })
}

/// `(level, mean squared Haar detail)` for every level with at least 16
/// coefficients. Level 1 is the finest scale.
pub fn haar_detail_variances(series: &[f64]) -> Vec<(usize, f64)> {
    let mut approx = series.to_vec();
    let mut out = Vec::new();
    let mut level = 1;
    while approx.len() / 2 >= WAVELET_MIN_COEFFS {
        let half = approx.len() / 2;
        let mut next = Vec::with_capacity(half);
        let mut energy = 0.0;
        for pair in approx.chunks_exact(2) {
            let d = (pair[0] - pair[1]) * std::f64::consts::FRAC_1_SQRT_2;
            energy += d * d;
            next.push((pair[0] + pair[1]) * std::f64::consts::FRAC_1_SQRT_2);
        }
        out.push((level, energy / half as f64));
        approx = next;
        level += 1;
    }
    out
}

/// Hurst exponent of an increment series from the scaling of Haar wavelet
/// detail variances. For fractional Gaussian noise the variance at level `j`
/// grows as `2^{j(2H−1)}`.
pub fn wavelet_hurst(series: &[f64]) -> Result<HurstEstimate> {
    check_series(series, MIN_WAVELET_LENGTH)?;
    let levels = haar_detail_variances(series);
    if levels.iter().any(|&(_, v)| v <= 0.0) {
        return Err(Error::degenerate("a wavelet level has zero detail energy"));
    }
    let x: Vec<f64> = levels.iter().map(|&(j, _)| j as f64).collect();
    let y: Vec<f64> = levels.iter().map(|&(_, v)| v.log2()).collect();
    let fit = linear_fit(&x, &y).ok_or_else(|| Error::degenerate("too few wavelet levels"))?;
    Ok(HurstEstimate {
        h: ((fit.slope + 1.0) / 2.0).clamp(H_FLOOR, 1.0 - H_FLOOR),
        stderr: fit.slope_stderr / 2.0,
        method: HurstMethod::Wavelet,
        n_points: levels.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::{gaussian_sequence, RandomStream};

    #[test]
    fn expected_rs_reference_values() {
        // Evaluated independently with the plain gamma function.
        assert!((expected_rs(16) - 3.909420347501904).abs() < 1e-12);
        assert!((expected_rs(100) - 11.396001462507513).abs() < 1e-11);
        // Large n approaches √(nπ/2)·(1 − …) without overflow.
        let big = expected_rs(100_000);
        assert!(big.is_finite() && (big / (100_000.0 * std::f64::consts::FRAC_PI_2).sqrt() - 1.0).abs() < 0.01);
    }

    #[test]
    fn short_and_constant_series_rejected() {
        assert!(matches!(rescaled_range_hurst(&[1.0; 100]), Err(Error::Usage(_))));
        assert!(matches!(rescaled_range_hurst(&[1.0; 1000]), Err(Error::Degenerate(_))));
        assert!(matches!(wavelet_hurst(&[0.0; 300]), Err(Error::Usage(_))));
        assert!(matches!(wavelet_hurst(&[2.0; 600]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn block_sizes_span_range() {
        let sizes = block_sizes(1 << 14);
        assert_eq!(sizes.len(), 12);
        assert_eq!(sizes[0], 16);
        assert_eq!(*sizes.last().unwrap(), 4096);
        assert!(block_sizes(256).len() >= 8);
    }

    #[test]
    fn white_noise_near_half() {
        let mut rs = 0.0;
        let mut wv = 0.0;
        for seed in 0..8 {
            let x = gaussian_sequence(RandomStream::new(seed, 0), 1 << 14);
            rs += rescaled_range_hurst(&x).unwrap().h;
            wv += wavelet_hurst(&x).unwrap().h;
        }
        assert!((rs / 8.0 - 0.5).abs() < 0.05, "{}", rs / 8.0);
        assert!((wv / 8.0 - 0.5).abs() < 0.05, "{}", wv / 8.0);
    }

    #[test]
    fn haar_levels_have_enough_coefficients() {
        let levels = haar_detail_variances(&vec![1.0; 1024]);
        assert_eq!(levels.len(), 6);
        assert!(levels.iter().all(|&(_, v)| v == 0.0));
    }

    #[test]
    fn alternation_leaves_coarse_levels_empty() {
        let x: Vec<f64> = (0..1024).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        // All energy sits in level 1, coarser levels are empty.
        assert!(wavelet_hurst(&x).is_err());
    }
}
