//! Discrete fractional Brownian motion by the truncated Mandelbrot–van Ness
//! moving-average sum.
//!
//! For step `t = 1..=M`, with `H = β/2`:
//!
//! ```text
//! B(t) − B(t−1) = n^{−H} / Γ(H + ½) · [ Σ_{i=1..n}      i^{H−½} ξ[1 + n(M+t) − i]
//!                                     + Σ_{i=1..n(M−1)} ((n+i)^{H−½} − i^{H−½}) ξ[1 + n(M−1+t) − i] ]
//! ```
//!
//! `ξ` is a pool of `2nM` standard normal draws (1-based). Substituting
//! `j = n + i` in the second sum turns both into one causal filter of length
//! `nM` applied at positions `n(M+t)`, which is evaluated here by FFT
//! convolution.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlannerScalar};
use statrs::function::gamma::gamma;

use super::{gaussian_sequence, RandomStream};
use crate::error::{Error, Result};

/// A sampled fractional Brownian path `B(1), …, B(M)` with `B(0) = 0` implied.
#[derive(Debug, Clone, PartialEq)]
pub struct FbmSeries {
    /// Correlation parameter, `0 < β ≤ 2`; the Hurst exponent is `β/2`.
    pub beta: f64,
    /// Records per step.
    pub n: usize,
    /// Number of steps.
    pub m: usize,
    pub values: Vec<f64>,
}

impl FbmSeries {
    pub fn hurst(&self) -> f64 {
        self.beta / 2.0
    }

    /// The `M` increments `B(t) − B(t−1)`.
    pub fn increments(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.values
            .iter()
            .map(|&v| {
                let d = v - prev;
                prev = v;
                d
            })
            .collect()
    }
}

fn validate(beta: f64, n: usize, m: usize) -> Result<()> {
    if !(beta > 0.0 && beta <= 2.0) {
        return Err(Error::domain(format!("beta must lie in (0, 2], got {beta}")));
    }
    if n < 1 {
        return Err(Error::domain("records per step must be at least 1"));
    }
    if m < 2 {
        return Err(Error::domain(format!("step count must be at least 2, got {m}")));
    }
    Ok(())
}

/// Filter taps `c·w_j` for `j = 1..=nM`, including the `n^{−H}/Γ(H+½)` prefactor.
/// Element `j − 1` holds tap `j`.
pub fn fbm_kernel(beta: f64, n: usize, m: usize) -> Result<Vec<f64>> {
    validate(beta, n, m)?;
    let h = beta / 2.0;
    let e = h - 0.5;
    let scale = (n as f64).powf(-h) / gamma(h + 0.5);
    let taps = (1..=n * m)
        .map(|j| {
            let jf = j as f64;
            let w = if j <= n { jf.powf(e) } else { jf.powf(e) - ((j - n) as f64).powf(e) };
            scale * w
        })
        .collect();
    Ok(taps)
}

/// Exact variance of one increment: the sum of squared taps.
pub fn fbm_increment_variance(beta: f64, n: usize, m: usize) -> Result<f64> {
    Ok(fbm_kernel(beta, n, m)?.iter().map(|w| w * w).sum())
}

/// Evaluates the `M` increments on a caller-supplied Gaussian pool of length
/// `2nM` (pool element `q` is `ξ[q + 1]`).
pub fn fbm_increments_from_pool(beta: f64, n: usize, m: usize, pool: &[f64]) -> Result<Vec<f64>> {
    let taps = fbm_kernel(beta, n, m)?;
    if pool.len() != 2 * n * m {
        return Err(Error::usage(format!(
            "gaussian pool must hold 2nM = {} draws, got {}",
            2 * n * m,
            pool.len()
        )));
    }
    // conv[p] = Σ_j w_j x[p − j] with w_0 = 0; increment t reads conv[n(M+t)],
    // whose largest index is 2nM, so the transform must exceed 2nM points.
    let len = (2 * n * m + 1).next_power_of_two();
    let mut planner = FftPlannerScalar::<f64>::new();
    let forward: Arc<dyn Fft<f64>> = planner.plan_fft_forward(len);
    let inverse: Arc<dyn Fft<f64>> = planner.plan_fft_inverse(len);

    let mut signal = vec![Complex::new(0.0, 0.0); len];
    for (dst, &x) in signal.iter_mut().zip(pool) {
        dst.re = x;
    }
    let mut filter = vec![Complex::new(0.0, 0.0); len];
    for (j, &w) in taps.iter().enumerate() {
        filter[j + 1].re = w;
    }
    forward.process(&mut signal);
    forward.process(&mut filter);
    for (s, f) in signal.iter_mut().zip(&filter) {
        *s *= f;
    }
    inverse.process(&mut signal);
    let norm = 1.0 / len as f64;
    Ok((1..=m).map(|t| signal[n * (m + t)].re * norm).collect())
}

/// Draws the Gaussian pool from `stream` and returns the cumulative path.
pub fn generate_fbm(beta: f64, n: usize, m: usize, stream: RandomStream) -> Result<FbmSeries> {
    validate(beta, n, m)?;
    let pool = gaussian_sequence(stream, 2 * n * m);
    let increments = fbm_increments_from_pool(beta, n, m, &pool)?;
    let mut acc = 0.0;
    let values = increments
        .into_iter()
        .map(|d| {
            acc += d;
            acc
        })
        .collect();
    Ok(FbmSeries { beta, n, m, values })
}
