use serde::{Deserialize, Serialize};

use super::{cross, dot, norm, scale, MetricSample, Vec3};
use crate::error::{Error, Result};

/// Weak-field guard on strain amplitudes.
pub const MAX_STRAIN: f64 = 0.1;

/// One monochromatic plane-wave mode in TT gauge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneGw {
    pub h_plus: f64,
    pub h_cross: f64,
    pub frequency: f64,
    /// Propagation direction; normalised by [`PlaneGw::new`].
    pub direction: Vec3,
    #[serde(default)]
    pub phase0: f64,
}

impl PlaneGw {
    pub fn new(h_plus: f64, h_cross: f64, frequency: f64, direction: Vec3, phase0: f64) -> Result<Self> {
        let gw = Self { h_plus, h_cross, frequency, direction, phase0 };
        gw.normalized()
    }

    /// Checks the weak-field invariants and returns a copy with a unit direction.
    pub fn normalized(mut self) -> Result<Self> {
        if !(self.h_plus.abs() < MAX_STRAIN && self.h_cross.abs() < MAX_STRAIN) {
            return Err(Error::domain(format!(
                "strain amplitudes must stay below {MAX_STRAIN} (weak field), got h+={} h×={}",
                self.h_plus, self.h_cross
            )));
        }
        if !(self.frequency > 0.0 && self.frequency.is_finite()) {
            return Err(Error::domain(format!("frequency must be positive, got {}", self.frequency)));
        }
        let len = norm(&self.direction);
        if !(len > 0.0 && len.is_finite()) {
            return Err(Error::domain("propagation direction must be a non-zero vector"));
        }
        self.direction = scale(&self.direction, 1.0 / len);
        Ok(self)
    }

    /// `λ_gw = 1/f`.
    pub fn wavelength(&self) -> f64 {
        1.0 / self.frequency
    }

    pub fn phase_at(&self, t: f64, x: &Vec3) -> f64 {
        2.0 * std::f64::consts::PI * self.frequency * (t - dot(&self.direction, x)) + self.phase0
    }
}

/// Transverse unit vectors `(m̂, n̂)` completing `Ω̂` to a right-handed triad.
/// `m̂ = Ω̂ × ẑ` normalised, or `x̂` when `Ω̂ ∥ ẑ`; `n̂ = Ω̂ × m̂`.
pub fn polarization_basis(direction: &Vec3) -> (Vec3, Vec3) {
    let c = cross(direction, &[0.0, 0.0, 1.0]);
    let len = norm(&c);
    let m = if len < 1e-9 { [1.0, 0.0, 0.0] } else { scale(&c, 1.0 / len) };
    let n = cross(direction, &m);
    (m, n)
}

/// Metric perturbation of a single mode at event `(t, x)`:
/// `h_ab = h₊ cos φ e⁺_ab + h× cos φ e×_ab`, with
/// `e⁺ = m̂⊗m̂ − n̂⊗n̂`, `e× = m̂⊗n̂ + n̂⊗m̂` and `φ = 2πf(t − Ω̂·x) + φ₀`.
pub fn plane_gw_strain(gw: &PlaneGw, t: f64, x: &Vec3) -> MetricSample {
    let (m, n) = polarization_basis(&gw.direction);
    let c = gw.phase_at(t, x).cos();
    let hp = gw.h_plus * c;
    let hx = gw.h_cross * c;
    let mut hab = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            hab[a][b] = hp * (m[a] * m[b] - n[a] * n[b]) + hx * (m[a] * n[b] + n[a] * m[b]);
        }
    }
    MetricSample { h00: 0.0, h0a: [0.0; 3], hab }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Z: Vec3 = [0.0, 0.0, 1.0];
    const ORIGIN: Vec3 = [0.0; 3];

    #[test]
    fn plus_mode_at_zero_phase() {
        let gw = PlaneGw::new(0.01, 0.0, 1.0, Z, 0.0).unwrap();
        let s = plane_gw_strain(&gw, 0.0, &ORIGIN);
        let expected = [[0.01, 0.0, 0.0], [0.0, -0.01, 0.0], [0.0, 0.0, 0.0]];
        for a in 0..3 {
            for b in 0..3 {
                assert!((s.hab[a][b] - expected[a][b]).abs() < 1e-15);
            }
        }
        assert_eq!(s.h00, 0.0);
        assert_eq!(s.h0a, [0.0; 3]);
    }

    #[test]
    fn quarter_period_zero_crossing() {
        let gw = PlaneGw::new(0.01, 0.0, 1.0, Z, 0.0).unwrap();
        let s = plane_gw_strain(&gw, 0.25, &ORIGIN);
        assert!(s.hab.iter().flatten().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn mixed_polarization_matches_hand_evaluation() {
        // Ω̂ = ẑ gives m̂ = x̂, n̂ = ŷ: h = [[h₊c, h×c, 0], [h×c, −h₊c, 0], [0, 0, 0]].
        let gw = PlaneGw::new(0.01, 0.02, 1.0, Z, 0.0).unwrap();
        let s = plane_gw_strain(&gw, 0.3, &ORIGIN);
        let c = (2.0 * std::f64::consts::PI * 0.3).cos();
        assert!((c - (-0.309_016_994_374_947_4)).abs() < 1e-15);
        let expected = [[0.01 * c, 0.02 * c, 0.0], [0.02 * c, -0.01 * c, 0.0], [0.0, 0.0, 0.0]];
        for a in 0..3 {
            for b in 0..3 {
                assert!((s.hab[a][b] - expected[a][b]).abs() < 1e-15, "{a}{b}");
            }
        }
    }

    #[test]
    fn rejects_strong_field() {
        assert!(PlaneGw::new(0.2, 0.0, 1.0, Z, 0.0).is_err());
        assert!(PlaneGw::new(0.01, 0.0, 0.0, Z, 0.0).is_err());
        assert!(PlaneGw::new(0.01, 0.0, 1.0, ORIGIN, 0.0).is_err());
    }

    fn direction() -> impl Strategy<Value = Vec3> {
        (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0).prop_filter_map("non-zero", |(x, y, z)| {
            let v = [x, y, z];
            (norm(&v) > 1e-3).then_some(v)
        })
    }

    proptest! {
        #[test]
        fn transverse_and_traceless(
            dir in direction(),
            hp in -0.09f64..0.09,
            hx in -0.09f64..0.09,
            f in 0.1f64..10.0,
            t in -5.0f64..5.0,
        ) {
            let gw = PlaneGw::new(hp, hx, f, dir, 0.3).unwrap();
            prop_assert!((norm(&gw.direction) - 1.0).abs() < 1e-12);
            let s = plane_gw_strain(&gw, t, &[0.2, -0.4, 1.0]);
            let trace = s.hab[0][0] + s.hab[1][1] + s.hab[2][2];
            prop_assert!(trace.abs() < 1e-12);
            for a in 0..3 {
                let v: f64 = (0..3).map(|b| s.hab[a][b] * gw.direction[b]).sum();
                prop_assert!(v.abs() < 1e-12);
                for b in 0..3 {
                    prop_assert_eq!(s.hab[a][b], s.hab[b][a]);
                }
            }
        }

        #[test]
        fn periodic_in_time(dir in direction(), f in 0.1f64..10.0, t in -3.0f64..3.0) {
            let gw = PlaneGw::new(0.05, -0.03, f, dir, 1.1).unwrap();
            let x = [0.5, 0.1, -0.2];
            let a = plane_gw_strain(&gw, t, &x);
            let b = plane_gw_strain(&gw, t + 1.0 / f, &x);
            for (u, v) in a.hab.iter().flatten().zip(b.hab.iter().flatten()) {
                prop_assert!((u - v).abs() < 1e-12);
            }
        }
    }
}
