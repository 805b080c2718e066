use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spacetime::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ObserverLabel {
    A,
    B,
}

/// Measured eigenstate, `|1⟩` or `|2⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum State {
    One,
    Two,
}

impl State {
    pub fn as_u8(self) -> u8 {
        match self {
            State::One => 1,
            State::Two => 2,
        }
    }

    pub fn from_u8(v: u8) -> Option<State> {
        match v {
            1 => Some(State::One),
            2 => Some(State::Two),
            _ => None,
        }
    }

    pub fn flipped(self) -> State {
        match self {
            State::One => State::Two,
            State::Two => State::One,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverConfig {
    pub label: ObserverLabel,
    pub position: Vec3,
    /// Local time-time metric component, static offset included. Must be negative.
    pub g00: f64,
    /// Reading of the local clock at coordinate time zero.
    #[serde(default)]
    pub clock_offset: f64,
}

impl ObserverConfig {
    pub fn new(label: ObserverLabel, position: Vec3, g00: f64) -> Self {
        Self { label, position, g00, clock_offset: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g00 < 0.0) {
            return Err(Error::domain(format!("observer {:?}: g00 must be negative, got {}", self.label, self.g00)));
        }
        if !self.clock_offset.is_finite() || self.position.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(format!("observer {:?}: non-finite position or clock offset", self.label)));
        }
        Ok(())
    }

    /// Local clock rate `dτ/dt = √(−g00)`.
    pub fn clock_rate(&self) -> f64 {
        (-self.g00).sqrt()
    }
}

/// Entangled-pair source shared by both observers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSourceConfig {
    /// Pair emissions per unit coordinate time.
    pub rate: f64,
    /// Relative phase of the two-photon state.
    #[serde(default)]
    pub phase: f64,
    /// Time-of-arrival indetermination ΔW.
    pub coherence_window: f64,
    /// Observer separation r.
    pub separation: f64,
}

impl PairSourceConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rate > 0.0 && self.rate.is_finite()) {
            return Err(Error::domain(format!("rate must be positive, got {}", self.rate)));
        }
        if !(self.coherence_window > 0.0) {
            return Err(Error::domain(format!("coherence_window must be positive, got {}", self.coherence_window)));
        }
        if !(self.coherence_window < 1.0 / self.rate) {
            return Err(Error::domain(format!(
                "coherence_window ({}) must be shorter than the mean pair spacing 1/rate ({})",
                self.coherence_window,
                1.0 / self.rate
            )));
        }
        if !(self.separation > 0.0 && self.separation.is_finite()) {
            return Err(Error::domain(format!("separation must be positive, got {}", self.separation)));
        }
        Ok(())
    }
}

/// One observer's detections, stamped in local proper time.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DetectionRecord {
    pub times: Vec<f64>,
    pub states: Vec<State>,
}

impl DetectionRecord {
    pub fn new(times: Vec<f64>, states: Vec<State>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::usage(format!(
                "{} times but {} states in detection record",
                times.len(),
                states.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::usage("detection times must be strictly increasing"));
        }
        Ok(Self { times, states })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `time<TAB>state` per line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::with_capacity(self.len() * 24);
        for (t, s) in self.times.iter().zip(&self.states) {
            let _ = writeln!(out, "{t}\t{}", s.as_u8());
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut times = Vec::new();
        let mut states = Vec::new();
        for (line_no, t, v) in parse_columns(text)? {
            let state = v
                .parse::<u8>()
                .ok()
                .and_then(State::from_u8)
                .ok_or_else(|| Error::Parse { line: line_no, message: format!("state must be 1 or 2, got {v:?}") })?;
            times.push(t);
            states.push(state);
        }
        Self::new(times, states)
    }
}

/// The shared binary string: 1 where the two observers' states coincide.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoincidenceString {
    pub bits: Vec<u8>,
    pub slot_times: Vec<f64>,
}

impl CoincidenceString {
    pub fn new(bits: Vec<u8>, slot_times: Vec<f64>) -> Result<Self> {
        if bits.len() != slot_times.len() {
            return Err(Error::usage(format!("{} bits but {} slot times", bits.len(), slot_times.len())));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::usage("coincidence bits must be 0 or 1"));
        }
        Ok(Self { bits, slot_times })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// Bits mapped to `±½` steps.
    pub fn centered(&self) -> Vec<f64> {
        self.bits.iter().map(|&b| b as f64 - 0.5).collect()
    }

    /// Running imbalance `(N₁ − N₀)/2` after each slot.
    pub fn imbalance_path(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.bits
            .iter()
            .map(|&b| {
                acc += b as f64 - 0.5;
                acc
            })
            .collect()
    }

    /// `time<TAB>bit` per line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::with_capacity(self.len() * 24);
        for (t, b) in self.slot_times.iter().zip(&self.bits) {
            let _ = writeln!(out, "{t}\t{b}");
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut bits = Vec::new();
        let mut times = Vec::new();
        for (line_no, t, v) in parse_columns(text)? {
            let bit = match v {
                "0" => 0,
                "1" => 1,
                _ => return Err(Error::Parse { line: line_no, message: format!("bit must be 0 or 1, got {v:?}") }),
            };
            times.push(t);
            bits.push(bit);
        }
        Self::new(bits, times)
    }
}

fn parse_columns(text: &str) -> Result<Vec<(usize, f64, &str)>> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let line_no = i + 1;
        let mut cols = line.split('\t');
        let (Some(t), Some(v), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(Error::Parse { line: line_no, message: "expected two tab-separated columns".into() });
        };
        let t: f64 = t
            .trim()
            .parse()
            .map_err(|_| Error::Parse { line: line_no, message: format!("bad time {t:?}") })?;
        rows.push((line_no, t, v.trim()));
    }
    Ok(rows)
}
