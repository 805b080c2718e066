//! The two-observer coincidence experiment and its interferometric variant.
//!
//! A run emits entangled pairs from a Poisson source co-located with
//! observer A, propagates one photon to each observer, stamps each detection
//! with the observer's local proper time, and then reconciles the two records
//! into a binary coincidence string (1 when the measured states agree).

mod coincidence;
mod interferometer;
mod perturbation;
mod records;
mod render;
mod simulate;

pub use coincidence::{extract_coincidences, imbalance_statistic, synchronize_and_correct, AlignedEvent};
pub use interferometer::{simulate_interferometer, InterferometerConfig, InterferometerOutcome};
pub use perturbation::{bit_probability, coupled_strain, Coupling, PerturbationModel};
pub use records::{CoincidenceString, DetectionRecord, ObserverConfig, ObserverLabel, PairSourceConfig, State};
pub use render::{foam_displacement_path, outcome_bits, render_bits};
pub use simulate::{simulate_detections, simulate_with_truth, SimulationTruth};
