//! Weak-field perturbation physics on a Minkowski background, `g = η + h`.
//!
//! Everything here is a pure function of its arguments.

mod compact;
mod foam;
mod metric;
mod relativity;
mod wave;

pub use compact::{compactification_delay, CompactDims, ZETA_3};
pub use foam::{arrival_spread, foam_displacement_noise, modified_dispersion, FoamModel, FoamNoise};
pub use metric::{arm_stretch, time_delay_sq, MetricSample};
pub use relativity::{amplitude_uncertainty, proper_time_correction, string_length_ratio, window_degradation, WindowFactor};
pub use wave::{plane_gw_strain, polarization_basis, PlaneGw};

pub type Vec3 = [f64; 3];

pub(crate) fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}
