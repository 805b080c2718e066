use rand::Rng;
use rand_distr::{Distribution, Exp};

use super::perturbation::{bit_probability, ActivePerturbation, Coupling, PerturbationModel};
use super::records::{DetectionRecord, ObserverConfig, ObserverLabel, PairSourceConfig, State};
use super::render::{foam_displacement_path, outcome_bits, render_bits};
use crate::error::{Error, Result};
use crate::stochastic::RandomStream;

const LANE_EMISSION: u64 = 0;
const LANE_STATES: u64 = 1;
const LANE_OUTCOMES: u64 = 2;
const LANE_FOAM: u64 = 3;

/// Ground truth of one simulated run, for injection tests.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTruth {
    /// Coordinate emission time of each pair.
    pub emission_times: Vec<f64>,
    /// Whether each pair's joint outcome coincides.
    pub coincide: Vec<bool>,
    /// `κ Q(t)` at each emission (zero for non-wave models).
    pub coupled_q: Vec<f64>,
    /// Extra arrival delay applied to B's photon.
    pub b_delay: Vec<f64>,
}

pub(crate) fn validate_setup(
    source: &PairSourceConfig,
    obs_a: &ObserverConfig,
    obs_b: &ObserverConfig,
    coupling: &Coupling,
) -> Result<()> {
    source.validate()?;
    obs_a.validate()?;
    obs_b.validate()?;
    coupling.validate()?;
    if obs_a.label != ObserverLabel::A || obs_b.label != ObserverLabel::B {
        return Err(Error::usage("observer configs must be passed as (A, B)"));
    }
    Ok(())
}

/// Runs the two-observer protocol for `duration` units of each observer's
/// local proper time.
///
/// Pairs are emitted by a homogeneous Poisson process at A's position. A
/// detects its photon at emission; B at emission plus the separation plus any
/// perturbation delay. Each detection is stamped with the local clock
/// `τ = clock_offset + √(−g00)·t` and kept while `√(−g00)·t ≤ duration`,
/// so observers with different `g00` stop after different coordinate spans.
///
/// Joint outcomes are fair coins unless the perturbation says otherwise:
/// plane waves bias each slot to `½(1 + κQ(t))`; foam renders the coupled
/// displacement path into bits; compactified dimensions add a constant delay
/// only.
pub fn simulate_detections(
    source: &PairSourceConfig,
    obs_a: &ObserverConfig,
    obs_b: &ObserverConfig,
    perturbation: &PerturbationModel,
    coupling: &Coupling,
    duration: f64,
    stream: RandomStream,
) -> Result<(DetectionRecord, DetectionRecord)> {
    simulate_with_truth(source, obs_a, obs_b, perturbation, coupling, duration, stream).map(|(a, b, _)| (a, b))
}

/// [`simulate_detections`] that also returns the injected ground truth.
pub fn simulate_with_truth(
    source: &PairSourceConfig,
    obs_a: &ObserverConfig,
    obs_b: &ObserverConfig,
    perturbation: &PerturbationModel,
    coupling: &Coupling,
    duration: f64,
    stream: RandomStream,
) -> Result<(DetectionRecord, DetectionRecord, SimulationTruth)> {
    validate_setup(source, obs_a, obs_b, coupling)?;
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::domain(format!("duration must be positive, got {duration}")));
    }
    let perturbation = perturbation.validated()?;
    let active = ActivePerturbation::new(&perturbation, source, obs_a, obs_b, coupling)?;

    // Coordinate time after which neither observer is still recording.
    let horizon = (duration / obs_a.clock_rate()).max(duration / obs_b.clock_rate());
    let mut rng = stream.lane(LANE_EMISSION).rng();
    let gap = Exp::new(source.rate).map_err(|e| Error::domain(e.to_string()))?;
    let mut emission_times = Vec::new();
    let mut t = gap.sample(&mut rng);
    while t <= horizon {
        emission_times.push(t);
        t += gap.sample(&mut rng);
    }
    let count = emission_times.len();

    let mut coupled_q = vec![0.0; count];
    let mut b_delay = vec![0.0; count];
    let coincide = match &perturbation {
        PerturbationModel::PlaneGw { .. } => {
            for (k, &te) in emission_times.iter().enumerate() {
                if coupling.bit_channel {
                    coupled_q[k] = coupling.kappa * active.q(te);
                }
                if coupling.jitter_channel {
                    b_delay[k] = active.gw_delay(te);
                }
            }
            let p: Vec<f64> = coupled_q.iter().map(|&kq| bit_probability(1.0, kq)).collect();
            outcome_bits(&p, stream.lane(LANE_OUTCOMES))
        }
        PerturbationModel::Foam(model) => {
            let d = foam_displacement_path(model, count, coupling.foam_records_per_step, stream.lane(LANE_FOAM))?;
            if coupling.jitter_channel {
                for (delay, dk) in b_delay.iter_mut().zip(&d) {
                    *delay = active.foam_unit_spread * dk;
                }
            }
            if coupling.bit_channel {
                let target: Vec<f64> = d.iter().map(|v| coupling.foam_coupling * v).collect();
                render_bits(&target)
            } else {
                outcome_bits(&vec![0.5; count], stream.lane(LANE_OUTCOMES))
            }
        }
        PerturbationModel::CompactDims(_) => {
            if coupling.jitter_channel {
                b_delay.fill(active.compact_delay);
            }
            outcome_bits(&vec![0.5; count], stream.lane(LANE_OUTCOMES))
        }
        PerturbationModel::None => outcome_bits(&vec![0.5; count], stream.lane(LANE_OUTCOMES)),
    };

    let mut state_rng = stream.lane(LANE_STATES).rng();
    let mut a_events = Vec::with_capacity(count);
    let mut b_events = Vec::with_capacity(count);
    let (rate_a, rate_b) = (obs_a.clock_rate(), obs_b.clock_rate());
    for k in 0..count {
        let sa = if state_rng.random::<bool>() { State::One } else { State::Two };
        let sb = if coincide[k] { sa } else { sa.flipped() };
        let ta = emission_times[k];
        let tb = emission_times[k] + source.separation + b_delay[k];
        if rate_a * ta <= duration {
            a_events.push((obs_a.clock_offset + rate_a * ta, sa));
        }
        if tb >= 0.0 && rate_b * tb <= duration {
            b_events.push((obs_b.clock_offset + rate_b * tb, sb));
        }
    }

    let truth = SimulationTruth { emission_times, coincide, coupled_q, b_delay };
    Ok((into_record(a_events)?, into_record(b_events)?, truth))
}

fn into_record(mut events: Vec<(f64, State)>) -> Result<DetectionRecord> {
    events.sort_by(|x, y| x.0.total_cmp(&y.0));
    events.dedup_by(|later, earlier| later.0 == earlier.0);
    let (times, states) = events.into_iter().unzip();
    DetectionRecord::new(times, states)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn setup(rate: f64, g00_b: f64) -> (PairSourceConfig, ObserverConfig, ObserverConfig) {
        let source = PairSourceConfig { rate, phase: 0.0, coherence_window: 0.01 / rate, separation: 1e-3 };
        let a = ObserverConfig::new(ObserverLabel::A, [0.0; 3], -1.0);
        let b = ObserverConfig::new(ObserverLabel::B, [1e-3, 0.0, 0.0], g00_b);
        (source, a, b)
    }

    #[test]
    fn poisson_counts() {
        let (s, a, b) = setup(100.0, -1.0);
        let (ra, rb) =
            simulate_detections(&s, &a, &b, &PerturbationModel::None, &Coupling::default(), 10.0, RandomStream::new(3, 0))
                .unwrap();
        for r in [&ra, &rb] {
            assert!((r.len() as f64 - 1000.0).abs() < 4.0 * 1000f64.sqrt(), "{}", r.len());
        }
    }

    #[test]
    fn deterministic() {
        let (s, a, b) = setup(100.0, -1.02);
        let run = || {
            simulate_detections(&s, &a, &b, &PerturbationModel::None, &Coupling::default(), 5.0, RandomStream::new(8, 2))
                .unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn invalid_configs_rejected() {
        let (s, a, b) = setup(100.0, -1.0);
        let none = PerturbationModel::None;
        let c = Coupling::default();
        let stream = RandomStream::new(0, 0);
        assert!(simulate_detections(&s, &a, &b, &none, &c, 0.0, stream).is_err());
        let bad_b = ObserverConfig { g00: 1.0, ..b };
        assert!(simulate_detections(&s, &a, &bad_b, &none, &c, 1.0, stream).is_err());
        assert!(simulate_detections(&s, &b, &a, &none, &c, 1.0, stream).is_err());
        let bad_source = PairSourceConfig { coherence_window: 1.0, ..s };
        assert!(simulate_detections(&bad_source, &a, &b, &none, &c, 1.0, stream).is_err());
    }

    #[test]
    fn slower_clock_records_fewer_events() {
        let (s, a, b) = setup(1000.0, -1.02);
        let (ra, rb) =
            simulate_detections(&s, &a, &b, &PerturbationModel::None, &Coupling::default(), 20.0, RandomStream::new(1, 0))
                .unwrap();
        let ratio = ra.len() as f64 / rb.len() as f64;
        assert!((ratio - 1.02f64.sqrt()).abs() < 0.005, "{ratio}");
    }
}
