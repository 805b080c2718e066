use super::records::{CoincidenceString, DetectionRecord, ObserverConfig, ObserverLabel, State};
use crate::error::{Error, Result};
use crate::spacetime::proper_time_correction;

/// A detection mapped onto the common, synchronised time axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignedEvent {
    pub time: f64,
    pub state: State,
    pub observer: ObserverLabel,
}

/// Anchors both records at their first detection and rescales every
/// subsequent local interval with [`proper_time_correction`] for that
/// observer's `g00`. Returns the merged events ordered by corrected time,
/// A before B on ties.
pub fn synchronize_and_correct(
    a: &DetectionRecord,
    b: &DetectionRecord,
    obs_a: &ObserverConfig,
    obs_b: &ObserverConfig,
) -> Result<Vec<AlignedEvent>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::usage("cannot synchronise an empty detection record"));
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    for (rec, obs, label) in [(a, obs_a, ObserverLabel::A), (b, obs_b, ObserverLabel::B)] {
        let origin = rec.times[0];
        for (&t, &state) in rec.times.iter().zip(&rec.states) {
            out.push(AlignedEvent { time: proper_time_correction(t - origin, obs.g00)?, state, observer: label });
        }
    }
    out.sort_by(|x, y| {
        x.time
            .total_cmp(&y.time)
            .then_with(|| (x.observer == ObserverLabel::B).cmp(&(y.observer == ObserverLabel::B)))
    });
    Ok(out)
}

/// Pairs A and B events closer than `window` into coincidence slots.
///
/// Candidate pairs are accepted nearest-first; when two candidates are
/// equally near, the one whose partner came earlier wins. Each event joins at
/// most one slot and unmatched events are dropped. A slot's bit is 1 when the
/// two states agree, and its time is the midpoint of the two events.
pub fn extract_coincidences(events: &[AlignedEvent], window: f64) -> Result<CoincidenceString> {
    if !(window > 0.0) {
        return Err(Error::domain(format!("coincidence window must be positive, got {window}")));
    }
    let split = |label| -> Vec<AlignedEvent> {
        let mut v: Vec<_> = events.iter().copied().filter(|e| e.observer == label).collect();
        v.sort_by(|x, y| x.time.total_cmp(&y.time));
        v
    };
    let a = split(ObserverLabel::A);
    let b = split(ObserverLabel::B);

    // (|Δt|, later of the two times, i, j)
    let mut candidates: Vec<(f64, f64, usize, usize)> = Vec::new();
    let mut start = 0;
    for (i, ea) in a.iter().enumerate() {
        while start < b.len() && b[start].time <= ea.time - window {
            start += 1;
        }
        let mut j = start;
        while j < b.len() && b[j].time < ea.time + window {
            let dt = (b[j].time - ea.time).abs();
            if dt < window {
                candidates.push((dt, ea.time.max(b[j].time), i, j));
            }
            j += 1;
        }
    }
    candidates.sort_by(|x, y| {
        x.0.total_cmp(&y.0)
            .then_with(|| x.1.total_cmp(&y.1))
            .then_with(|| x.2.cmp(&y.2))
            .then_with(|| x.3.cmp(&y.3))
    });

    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut slots: Vec<(f64, usize, u8)> = Vec::new();
    for (_, _, i, j) in candidates {
        if used_a[i] || used_b[j] {
            continue;
        }
        used_a[i] = true;
        used_b[j] = true;
        let t = 0.5 * (a[i].time + b[j].time);
        slots.push((t, i, u8::from(a[i].state == b[j].state)));
    }
    slots.sort_by(|x, y| x.0.total_cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
    let (slot_times, bits) = slots.into_iter().map(|(t, _, bit)| (t, bit)).unzip();
    CoincidenceString::new(bits, slot_times)
}

/// `|N₁ − N₀|`.
pub fn imbalance_statistic(s: &CoincidenceString) -> f64 {
    let ones = s.ones();
    (ones as f64 - (s.len() - ones) as f64).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(time: f64, state: u8, observer: ObserverLabel) -> AlignedEvent {
        AlignedEvent { time, state: State::from_u8(state).unwrap(), observer }
    }

    fn obs(label: ObserverLabel, g00: f64) -> ObserverConfig {
        ObserverConfig::new(label, [0.0; 3], g00)
    }

    #[test]
    fn matching_states_write_one() {
        let s = extract_coincidences(&[ev(1.0, 1, ObserverLabel::A), ev(1.0, 1, ObserverLabel::B)], 0.1).unwrap();
        assert_eq!(s.bits, vec![1]);
        assert_eq!(s.slot_times, vec![1.0]);
    }

    #[test]
    fn differing_states_write_zero() {
        let s = extract_coincidences(&[ev(1.0, 1, ObserverLabel::A), ev(1.0, 2, ObserverLabel::B)], 0.1).unwrap();
        assert_eq!(s.bits, vec![0]);
    }

    #[test]
    fn empty_and_unmatched() {
        assert!(extract_coincidences(&[], 0.1).unwrap().is_empty());
        let s = extract_coincidences(&[ev(1.0, 1, ObserverLabel::A), ev(1.5, 1, ObserverLabel::B)], 0.1).unwrap();
        assert!(s.is_empty());
        assert!(extract_coincidences(&[], 0.0).is_err());
    }

    #[test]
    fn nearest_candidate_wins() {
        // B at 1.04 is nearer to A at 1.05 than to A at 1.0.
        let events = [
            ev(1.0, 1, ObserverLabel::A),
            ev(1.04, 2, ObserverLabel::B),
            ev(1.05, 2, ObserverLabel::A),
        ];
        let s = extract_coincidences(&events, 0.1).unwrap();
        assert_eq!(s.bits, vec![1]);
        assert!((s.slot_times[0] - 1.045).abs() < 1e-12);
    }

    #[test]
    fn exact_tie_prefers_earlier_partner() {
        let events = [
            ev(0.75, 1, ObserverLabel::B),
            ev(1.0, 2, ObserverLabel::A),
            ev(1.25, 2, ObserverLabel::B),
        ];
        let s = extract_coincidences(&events, 0.5).unwrap();
        assert_eq!(s.bits, vec![0]);
        assert_eq!(s.slot_times, vec![0.875]);
    }

    #[test]
    fn identity_correction_shifts_to_common_origin() {
        let a = DetectionRecord::new(vec![5.0, 6.0, 7.5], vec![State::One; 3]).unwrap();
        let b = DetectionRecord::new(vec![10.0, 11.0, 12.5], vec![State::Two; 3]).unwrap();
        let ev = synchronize_and_correct(&a, &b, &obs(ObserverLabel::A, -1.0), &obs(ObserverLabel::B, -1.0)).unwrap();
        let times: Vec<f64> = ev.iter().map(|e| e.time).collect();
        assert_eq!(times, vec![0.0, 0.0, 1.0, 1.0, 2.5, 2.5]);
        assert_eq!(ev[0].observer, ObserverLabel::A);
        assert_eq!(ev[1].observer, ObserverLabel::B);
    }

    #[test]
    fn slow_clock_gaps_are_rescaled() {
        let a = DetectionRecord::new(vec![0.0, 1.0, 3.0], vec![State::One; 3]).unwrap();
        let b = DetectionRecord::new(vec![2.0, 3.0, 5.0], vec![State::One; 3]).unwrap();
        let ev = synchronize_and_correct(&a, &b, &obs(ObserverLabel::A, -1.0), &obs(ObserverLabel::B, -1.02)).unwrap();
        let bt: Vec<f64> = ev.iter().filter(|e| e.observer == ObserverLabel::B).map(|e| e.time).collect();
        let k = 1.0 / 1.02f64.sqrt();
        assert_eq!(bt[0], 0.0);
        assert!((bt[1] - k).abs() < 1e-15);
        assert!((bt[2] - 3.0 * k).abs() < 1e-15);
    }

    #[test]
    fn empty_record_is_usage_error() {
        let a = DetectionRecord::default();
        let b = DetectionRecord::new(vec![1.0], vec![State::One]).unwrap();
        let r = synchronize_and_correct(&a, &b, &obs(ObserverLabel::A, -1.0), &obs(ObserverLabel::B, -1.0));
        assert!(matches!(r, Err(Error::Usage(_))));
    }

    #[test]
    fn imbalance_values() {
        let s = CoincidenceString::new(vec![1, 1, 1, 1], vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(imbalance_statistic(&s), 4.0);
        let s = CoincidenceString::new(vec![1, 0, 1, 0], vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(imbalance_statistic(&s), 0.0);
    }
}
