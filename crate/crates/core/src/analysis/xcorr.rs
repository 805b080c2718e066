use crate::error::{Error, Result};

/// `4/√N`, the magnitude below which null cross-correlations of length `N`
/// fall with overwhelming probability.
pub fn null_correlation_bound(n: usize) -> f64 {
    4.0 / (n as f64).sqrt()
}

/// Normalised cross-correlation for lags `−max_lag..=max_lag`; element
/// `max_lag + ℓ` holds
/// `Σ_k (x_k − x̄)(y_{k+ℓ} − ȳ) / (N σ_x σ_y)` summed over the overlap.
///
/// Swapping the inputs mirrors the output exactly, because the overlap is
/// always traversed in ascending order of the `x` index.
pub fn cross_correlate(x: &[f64], y: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    if x.len() != y.len() {
        return Err(Error::usage(format!("length mismatch: {} vs {}", x.len(), y.len())));
    }
    let n = x.len();
    if n == 0 || n < 2 * max_lag {
        return Err(Error::usage(format!("length {n} is too short for max_lag {max_lag}")));
    }
    let (xc, sx) = centre(x)?;
    let (yc, sy) = centre(y)?;
    let denom = n as f64 * (sx * sy);
    let lag = max_lag as isize;
    Ok((-lag..=lag)
        .map(|l| {
            let (start, end) = if l >= 0 { (0, n - l as usize) } else { ((-l) as usize, n) };
            let sum: f64 = (start..end)
                .map(|k| xc[k] * yc[(k as isize + l) as usize])
                .sum();
            (sum / denom).clamp(-1.0, 1.0)
        })
        .collect())
}

fn centre(v: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let c: Vec<f64> = v.iter().map(|&a| a - mean).collect();
    let var = c.iter().map(|a| a * a).sum::<f64>() / n;
    if !(var > 0.0) {
        return Err(Error::degenerate("input has zero variance"));
    }
    Ok((c, var.sqrt()))
}
