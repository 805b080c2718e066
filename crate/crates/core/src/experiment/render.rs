//! Outcome generation: independent coins for Bernoulli slots and the
//! error-feedback rendering that turns a displacement path into bits.

use rand::Rng;

use crate::error::Result;
use crate::spacetime::FoamModel;
use crate::stochastic::{fbm_increment_variance, gaussian_sequence, generate_fbm, RandomStream};

/// Independent outcomes with `P(bit_k = 1) = probabilities[k]`.
pub fn outcome_bits(probabilities: &[f64], stream: RandomStream) -> Vec<bool> {
    let mut rng = stream.rng();
    probabilities.iter().map(|&p| rng.random::<f64>() < p).collect()
}

/// One-bit rendering of a target imbalance path.
///
/// Slot `k` moves the running imbalance `I` by `+½` (bit 1) when
/// `target[k] ≥ I_{k−1}` and by `−½` otherwise, so `I` follows the target
/// with a bounded tracking error. The low-frequency content of the target,
/// and with it the growth exponent of the imbalance, carries into the bits.
pub fn render_bits(target: &[f64]) -> Vec<bool> {
    let mut imbalance = 0.0;
    target
        .iter()
        .map(|&y| {
            let bit = y >= imbalance;
            imbalance += if bit { 0.5 } else { -0.5 };
            bit
        })
        .collect()
}

/// Accumulated relative displacement `D_1, …, D_count` driven by foam, with
/// unit-variance increments.
///
/// The displacement grows as `T^{1−α}`: for α < 1 it is a discrete fBm with
/// `β = 2(1 − α)`; for α = 1 the fluctuations do not accumulate and `D` is
/// stationary white noise.
pub fn foam_displacement_path(
    model: &FoamModel,
    count: usize,
    records_per_step: usize,
    stream: RandomStream,
) -> Result<Vec<f64>> {
    model.validate()?;
    if count == 0 {
        return Ok(Vec::new());
    }
    let gamma = model.growth_exponent();
    if gamma <= 0.0 {
        // D_k = w_k / √2, so D_k − D_{k−1} has unit variance.
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        return Ok(gaussian_sequence(stream, count).into_iter().map(|w| w * scale).collect());
    }
    let beta = 2.0 * gamma;
    let steps = count.max(2);
    let sd = fbm_increment_variance(beta, records_per_step, steps)?.sqrt();
    let mut path = generate_fbm(beta, records_per_step, steps, stream)?.values;
    path.truncate(count);
    for v in &mut path {
        *v /= sd;
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering_tracks_target() {
        let target: Vec<f64> = (0..2000).map(|k| 3.0 * (k as f64 / 150.0).sin()).collect();
        let bits = render_bits(&target);
        let mut imb = 0.0;
        for (b, y) in bits.iter().zip(&target) {
            imb += if *b { 0.5 } else { -0.5 };
            assert!((imb - y).abs() <= 0.5 + 0.13, "lost track: {imb} vs {y}");
        }
    }

    #[test]
    fn flat_target_alternates() {
        let bits = render_bits(&[0.0; 6]);
        assert_eq!(bits, vec![true, false, true, false, true, false]);
    }

    #[test]
    fn loop_class_does_not_accumulate() {
        let m = FoamModel::new(1.0, 1.0, 10.0, 1.0, 1.0).unwrap();
        let d = foam_displacement_path(&m, 20_000, 16, RandomStream::new(1, 0)).unwrap();
        let early: f64 = d[..1000].iter().map(|v| v * v).sum::<f64>() / 1000.0;
        let late: f64 = d[19_000..].iter().map(|v| v * v).sum::<f64>() / 1000.0;
        assert!((early - 0.5).abs() < 0.1 && (late - 0.5).abs() < 0.1);
    }

    #[test]
    fn short_paths() {
        let m = FoamModel::new(2.0 / 3.0, 1.0, 10.0, 1.0, 1.0).unwrap();
        assert!(foam_displacement_path(&m, 0, 4, RandomStream::new(1, 0)).unwrap().is_empty());
        assert_eq!(foam_displacement_path(&m, 1, 4, RandomStream::new(1, 0)).unwrap().len(), 1);
    }

    #[test]
    fn coin_frequency() {
        let bits = outcome_bits(&vec![0.3; 20_000], RandomStream::new(4, 0));
        let f = bits.iter().filter(|&&b| b).count() as f64 / 20_000.0;
        assert!((f - 0.3).abs() < 4.0 * (0.21f64 / 20_000.0).sqrt());
    }
}
