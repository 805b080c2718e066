use serde::{Deserialize, Serialize};

use super::Vec3;
use crate::error::{Error, Result};

/// Metric perturbation components at one event.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricSample {
    pub h00: f64,
    pub h0a: Vec3,
    /// Symmetric spatial block.
    pub hab: [[f64; 3]; 3],
}

impl MetricSample {
    pub fn flat() -> Self {
        Self::default()
    }

    /// Component-wise sum, for superposing modes.
    pub fn add(&self, other: &MetricSample) -> MetricSample {
        let mut out = *self;
        out.h00 += other.h00;
        for a in 0..3 {
            out.h0a[a] += other.h0a[a];
            for b in 0..3 {
                out.hab[a][b] += other.hab[a][b];
            }
        }
        out
    }

    /// `dx^a h_ab dx^b`.
    pub fn spatial_projection(&self, dx: &Vec3) -> f64 {
        let mut acc = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                acc += self.hab[a][b] * dx[a] * dx[b];
            }
        }
        acc
    }

    fn guard_h00(&self) -> Result<f64> {
        let d = 1.0 + self.h00;
        if d == 0.0 {
            Err(Error::Singularity("h00 = -1 makes the lapse vanish".into()))
        } else {
            Ok(d)
        }
    }
}

/// Arm-length change `δl² ≈ (h_0α h_0β / (1 + h₀₀) − h_αβ) dx^α dx^β`.
pub fn arm_stretch(sample: &MetricSample, dx: &Vec3) -> Result<f64> {
    let lapse = sample.guard_h00()?;
    let shift = sample.h0a[0] * dx[0] + sample.h0a[1] * dx[1] + sample.h0a[2] * dx[2];
    Ok(shift * shift / lapse - sample.spatial_projection(dx))
}

/// Companion time-delay form `δt² ≈ (1/(1+h₀₀)) {h_0α h_0β − h_αβ (1 + h₀₀)} dx^α dx^β`,
/// evaluated component-wise rather than through [`arm_stretch`].
pub fn time_delay_sq(sample: &MetricSample, dx: &Vec3) -> Result<f64> {
    let lapse = sample.guard_h00()?;
    let mut acc = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            acc += (sample.h0a[a] * sample.h0a[b] - sample.hab[a][b] * lapse) * dx[a] * dx[b];
        }
    }
    Ok(acc / lapse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn flat_space_has_no_stretch() {
        assert_eq!(arm_stretch(&MetricSample::flat(), &[1.3, -2.0, 0.4]).unwrap(), 0.0);
    }

    #[test]
    fn plus_polarized_arm() {
        let mut s = MetricSample::flat();
        s.hab[0][0] = 0.01;
        s.hab[1][1] = -0.01;
        assert!((arm_stretch(&s, &[1.0, 0.0, 0.0]).unwrap() + 0.01).abs() < 1e-15);
    }

    #[test]
    fn shift_term() {
        let s = MetricSample { h00: 0.1, h0a: [0.2, 0.0, 0.0], hab: [[0.0; 3]; 3] };
        let v = arm_stretch(&s, &[1.0, 0.0, 0.0]).unwrap();
        assert!((v - 0.04 / 1.1).abs() < 1e-15);
        assert!((v - 0.036_363_636).abs() < 1e-8);
    }

    #[test]
    fn lapse_singularity() {
        let s = MetricSample { h00: -1.0, ..MetricSample::flat() };
        assert!(matches!(arm_stretch(&s, &[1.0, 0.0, 0.0]), Err(Error::Singularity(_))));
        assert!(time_delay_sq(&s, &[1.0, 0.0, 0.0]).is_err());
    }

    fn sample() -> impl Strategy<Value = MetricSample> {
        (-0.5f64..0.5, prop::array::uniform3(-0.5f64..0.5), prop::array::uniform6(-0.5f64..0.5)).prop_map(
            |(h00, h0a, u)| MetricSample {
                h00,
                h0a,
                hab: [[u[0], u[1], u[2]], [u[1], u[3], u[4]], [u[2], u[4], u[5]]],
            },
        )
    }

    proptest! {
        #[test]
        fn quadratic_in_dx(s in sample(), dx in prop::array::uniform3(-2.0f64..2.0), k in 0u32..4) {
            // c = 2^k keeps c² exact; the form then scales bit-for-bit.
            let c = (1u32 << k) as f64;
            let base = arm_stretch(&s, &dx).unwrap();
            let scaled = arm_stretch(&s, &[c * dx[0], c * dx[1], c * dx[2]]).unwrap();
            prop_assert_eq!(scaled, c * c * base);
        }

        #[test]
        fn two_forms_agree(s in sample(), dx in prop::array::uniform3(-2.0f64..2.0)) {
            let a = arm_stretch(&s, &dx).unwrap();
            let b = time_delay_sq(&s, &dx).unwrap();
            prop_assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()));
        }
    }
}
