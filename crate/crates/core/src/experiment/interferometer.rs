use rand::Rng;
use serde::{Deserialize, Serialize};

use super::perturbation::{bit_probability, Coupling, PerturbationModel};
use super::records::CoincidenceString;
use super::render::{foam_displacement_path, outcome_bits, render_bits};
use crate::error::{Error, Result};
use crate::spacetime::{arm_stretch, norm, plane_gw_strain, scale, MetricSample, Vec3};
use crate::stochastic::RandomStream;

/// Unbalanced interferometer pair with time-bin (short/long path) entanglement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferometerConfig {
    pub short_len: f64,
    pub long_len: f64,
    /// Relative phase between the |s⟩|s⟩ and |l⟩|l⟩ amplitudes. Post-selected
    /// branching is balanced for any value; the phase is carried for the record.
    #[serde(default)]
    pub phase: f64,
    pub n_pairs: usize,
    /// ΔW; the arm difference must exceed the implied coherence length.
    #[serde(default)]
    pub coherence_window: f64,
    /// Coordinate time between successive pairs.
    #[serde(default = "InterferometerConfig::default_interval")]
    pub pair_interval: f64,
    /// Direction of both arms.
    #[serde(default = "InterferometerConfig::default_arm")]
    pub arm_direction: Vec3,
}

impl InterferometerConfig {
    fn default_interval() -> f64 {
        1.0
    }

    fn default_arm() -> Vec3 {
        [1.0, 0.0, 0.0]
    }

    pub fn new(short_len: f64, long_len: f64, n_pairs: usize) -> Self {
        Self {
            short_len,
            long_len,
            phase: 0.0,
            n_pairs,
            coherence_window: 0.0,
            pair_interval: 1.0,
            arm_direction: Self::default_arm(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.short_len > 0.0) {
            return Err(Error::domain(format!("short_len must be positive, got {}", self.short_len)));
        }
        if !(self.long_len > self.short_len) {
            return Err(Error::domain("long_len must exceed short_len"));
        }
        if !(self.coherence_window >= 0.0) || !(self.long_len - self.short_len > self.coherence_window) {
            return Err(Error::domain(format!(
                "arm difference {} must exceed the coherence length {} for distinguishable peaks",
                self.long_len - self.short_len,
                self.coherence_window
            )));
        }
        if !(self.pair_interval > 0.0) {
            return Err(Error::domain("pair_interval must be positive"));
        }
        if !(norm(&self.arm_direction) > 0.0) {
            return Err(Error::domain("arm_direction must be non-zero"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterferometerOutcome {
    /// Counts in the (short/short, mixed, long/long) arrival peaks.
    pub peaks: [u64; 3],
    /// Post-selected events: short/short → 1, long/long → 0.
    pub string: CoincidenceString,
}

/// Relative arm stretch seen by the long/short path difference,
/// `−(δl²_long − δl²_short) / (l_long² − l_short²)`.
fn stretch_fraction(sample: &MetricSample, cfg: &InterferometerConfig, arm: &Vec3) -> Result<f64> {
    let long = arm_stretch(sample, &scale(arm, cfg.long_len))?;
    let short = arm_stretch(sample, &scale(arm, cfg.short_len))?;
    Ok(-(long - short) / (cfg.long_len.powi(2) - cfg.short_len.powi(2)))
}

/// Sends `n_pairs` pairs through the interferometers. Each pair lands in the
/// mixed peak with probability ½; otherwise it is post-selected into ss or ll.
/// Without perturbation the split is even, giving peaks in ratio ¼ : ½ : ¼.
/// A plane wave biases the ss branch to `½(1 + κ·s(t))` with `s` the relative
/// arm stretch; foam renders its displacement path into the ss/ll sequence.
pub fn simulate_interferometer(
    cfg: &InterferometerConfig,
    perturbation: &PerturbationModel,
    coupling: &Coupling,
    stream: RandomStream,
) -> Result<InterferometerOutcome> {
    cfg.validate()?;
    coupling.validate()?;
    let perturbation = perturbation.validated()?;
    let arm = scale(&cfg.arm_direction, 1.0 / norm(&cfg.arm_direction));

    let mut rng = stream.lane(0).rng();
    let mut selected_times = Vec::new();
    let mut mixed = 0u64;
    for k in 0..cfg.n_pairs {
        if rng.random::<bool>() {
            mixed += 1;
        } else {
            selected_times.push(k as f64 * cfg.pair_interval);
        }
    }
    let count = selected_times.len();

    let ss: Vec<bool> = match &perturbation {
        PerturbationModel::PlaneGw { modes } if coupling.bit_channel => {
            let p = selected_times
                .iter()
                .map(|&t| {
                    let sample = modes
                        .iter()
                        .fold(MetricSample::flat(), |acc, m| acc.add(&plane_gw_strain(m, t, &[0.0; 3])));
                    Ok(bit_probability(coupling.kappa, stretch_fraction(&sample, cfg, &arm)?))
                })
                .collect::<Result<Vec<_>>>()?;
            outcome_bits(&p, stream.lane(1))
        }
        PerturbationModel::Foam(model) if coupling.bit_channel => {
            let d = foam_displacement_path(model, count, coupling.foam_records_per_step, stream.lane(2))?;
            let target: Vec<f64> = d.iter().map(|v| coupling.foam_coupling * v).collect();
            render_bits(&target)
        }
        _ => outcome_bits(&vec![0.5; count], stream.lane(1)),
    };

    let n_ss = ss.iter().filter(|&&b| b).count() as u64;
    let peaks = [n_ss, mixed, count as u64 - n_ss];
    let string = CoincidenceString::new(ss.into_iter().map(u8::from).collect(), selected_times)?;
    Ok(InterferometerOutcome { peaks, string })
}
