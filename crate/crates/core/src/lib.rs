//! Coincidence-string simulation for two observers sharing entangled photon
//! pairs, with spacetime perturbations injected into the arrival times and
//! joint outcomes, plus the noise-color statistics used to detect them.
//!
//! The crate is organised bottom-up:
//!
//! * [`stochastic`]: seeded random streams, the discrete fractional Brownian
//!   motion sum and the Itô imbalance accumulator.
//! * [`spacetime`]: weak-field metric perturbations (plane waves, foam
//!   dispersion, compactified dimensions, interferometer arm stretch).
//! * [`experiment`]: the two-observer coincidence protocol and the
//!   short/long-path interferometer variant.
//! * [`analysis`]: Hurst estimators, spectral power-law fits,
//!   cross-correlation and model-class inference.
//!
//! All quantities are in natural units (c = ħ = G = 1).

pub mod analysis;
pub mod error;
pub mod experiment;
mod fit;
pub mod spacetime;
pub mod stochastic;

pub use analysis::{
    analyze_string, cross_correlate, infer_qg_model, null_correlation_bound, rescaled_range_hurst, spectral_exponent,
    wavelet_hurst, AnalysisOptions, AnalysisReport, Estimate, HurstEstimate, HurstMethod, Mapping, ModelClass,
    ModelInference, SpectralFit,
};
pub use error::{Error, Result};
pub use experiment::{
    extract_coincidences, imbalance_statistic, simulate_detections, simulate_interferometer,
    synchronize_and_correct, AlignedEvent, CoincidenceString, Coupling, DetectionRecord,
    InterferometerConfig, InterferometerOutcome, ObserverConfig, ObserverLabel, PairSourceConfig,
    PerturbationModel, State,
};
pub use spacetime::{CompactDims, FoamModel, MetricSample, PlaneGw, Vec3, WindowFactor};
pub use stochastic::{generate_fbm, gaussian_sequence, ito_imbalance, FbmSeries, ImbalancePath, RandomStream};
