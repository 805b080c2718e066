//! TOML run configuration.
//!
//! ```toml
//! duration = 100000.0
//! seeds = [1, 2, 3]          # or a count: seeds = 32  (→ 0..31)
//!
//! [source]
//! rate = 1.0
//! coherence_window = 0.01    # default
//! separation = 1.0           # default
//!
//! [observer_b]
//! g00 = -1.02                # observers default to flat clocks at 0 and r·x̂
//!
//! [perturbation]
//! kind = "foam"              # none | plane_gw | foam | compact_dims
//! alpha = 0.6666666666666666
//! e_qg = 1e12
//! e_typ = 1e6
//!
//! [coupling]                 # optional, see `Coupling`
//! [interferometer]           # optional, runs the short/long-path variant per trial
//! [analysis]                 # mapping, estimator, max_lag, coincidence_window
//! ```
//!
//! Every table rejects unknown keys.

use std::collections::BTreeSet;
use std::path::PathBuf;

use qgcolor_core::analysis::{HurstMethod, Mapping};
use qgcolor_core::{
    Coupling, InterferometerConfig, ObserverConfig, ObserverLabel, PairSourceConfig, PerturbationModel, Vec3,
    WindowFactor,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Seeds {
    List(Vec<u64>),
    /// `n` trials with seeds `0..n`.
    Count(u64),
}

impl Seeds {
    pub fn to_vec(&self) -> Vec<u64> {
        match self {
            Seeds::List(v) => v.clone(),
            Seeds::Count(n) => (0..*n).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSection {
    pub rate: f64,
    #[serde(default)]
    pub phase: f64,
    #[serde(default = "SourceSection::default_window")]
    pub coherence_window: f64,
    #[serde(default = "SourceSection::default_separation")]
    pub separation: f64,
}

impl SourceSection {
    fn default_window() -> f64 {
        0.01
    }

    fn default_separation() -> f64 {
        1.0
    }

    pub fn to_core(&self) -> PairSourceConfig {
        PairSourceConfig {
            rate: self.rate,
            phase: self.phase,
            coherence_window: self.coherence_window,
            separation: self.separation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverSection {
    /// Defaults to the origin for A and `separation · x̂` for B.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<Vec3>,
    #[serde(default = "ObserverSection::flat")]
    pub g00: f64,
    #[serde(default)]
    pub clock_offset: f64,
}

impl ObserverSection {
    fn flat() -> f64 {
        -1.0
    }
}

impl Default for ObserverSection {
    fn default() -> Self {
        Self { position: None, g00: -1.0, clock_offset: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    #[serde(default)]
    pub mapping: Mapping,
    /// Hurst estimator that drives the reported Ĥ and class.
    #[serde(default)]
    pub estimator: HurstMethod,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_lag: Option<usize>,
    /// Coincidence window used for slot matching; defaults to the source ΔW.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coincidence_window: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Recording time on each observer's local clock.
    pub duration: f64,
    pub seeds: Seeds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    pub source: SourceSection,
    #[serde(default)]
    pub observer_a: ObserverSection,
    #[serde(default)]
    pub observer_b: ObserverSection,
    #[serde(default)]
    pub perturbation: PerturbationModel,
    #[serde(default)]
    pub coupling: Coupling,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interferometer: Option<InterferometerConfig>,
    #[serde(default)]
    pub analysis: AnalysisSection,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seeds: Vec<u64>,
    pub trials: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub mapping: Option<Mapping>,
    pub window_factor: Option<WindowFactor>,
}

impl RunConfig {
    pub fn observers(&self) -> (ObserverConfig, ObserverConfig) {
        let a = &self.observer_a;
        let b = &self.observer_b;
        (
            ObserverConfig {
                label: ObserverLabel::A,
                position: a.position.unwrap_or([0.0; 3]),
                g00: a.g00,
                clock_offset: a.clock_offset,
            },
            ObserverConfig {
                label: ObserverLabel::B,
                position: b.position.unwrap_or([self.source.separation, 0.0, 0.0]),
                g00: b.g00,
                clock_offset: b.clock_offset,
            },
        )
    }

    pub fn coincidence_window(&self) -> f64 {
        self.analysis.coincidence_window.unwrap_or(self.source.coherence_window)
    }

    pub fn seed_list(&self) -> Vec<u64> {
        self.seeds.to_vec()
    }

    pub fn apply(&mut self, o: &Overrides) {
        if !o.seeds.is_empty() {
            self.seeds = Seeds::List(o.seeds.clone());
        } else if let Some(n) = o.trials {
            self.seeds = Seeds::Count(n);
        }
        if let Some(dir) = &o.output_dir {
            self.output_dir = Some(dir.clone());
        }
        if let Some(m) = o.mapping {
            self.analysis.mapping = m;
        }
        if let Some(w) = o.window_factor {
            self.coupling.window_factor = w;
        }
    }

    /// Re-checks every module-level invariant.
    pub fn validate(&self) -> CliResult<()> {
        let fail = |e: qgcolor_core::Error| CliError::Config(e.to_string());
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(CliError::Config(format!("duration must be positive, got {}", self.duration)));
        }
        let seeds = self.seed_list();
        if seeds.is_empty() {
            return Err(CliError::Config("seeds must not be empty".into()));
        }
        if seeds.iter().collect::<BTreeSet<_>>().len() != seeds.len() {
            return Err(CliError::Config("seeds must be distinct".into()));
        }
        self.source.to_core().validate().map_err(fail)?;
        let (a, b) = self.observers();
        a.validate().map_err(fail)?;
        b.validate().map_err(fail)?;
        self.perturbation.validated().map_err(fail)?;
        self.coupling.validate().map_err(fail)?;
        if let Some(i) = &self.interferometer {
            i.validate().map_err(fail)?;
        }
        let w = self.coincidence_window();
        if !(w > 0.0 && w.is_finite()) {
            return Err(CliError::Config(format!("coincidence_window must be positive, got {w}")));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::Config(format!("cannot serialise config: {e}")))
    }
}

/// Parses and validates a TOML document.
pub fn parse_config(text: &str) -> CliResult<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &std::path::Path) -> CliResult<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_expand() {
        assert_eq!(Seeds::Count(3).to_vec(), vec![0, 1, 2]);
        assert_eq!(Seeds::List(vec![9, 4]).to_vec(), vec![9, 4]);
    }

    #[test]
    fn default_observer_positions() {
        let cfg = parse_config("duration = 10.0\nseeds = [1]\n[source]\nrate = 1.0\nseparation = 4.0\n").unwrap();
        let (a, b) = cfg.observers();
        assert_eq!(a.position, [0.0; 3]);
        assert_eq!(b.position, [4.0, 0.0, 0.0]);
    }

    #[test]
    fn overrides_take_precedence() {
        let mut cfg = parse_config("duration = 10.0\nseeds = 4\n[source]\nrate = 1.0\n").unwrap();
        cfg.apply(&Overrides {
            seeds: vec![],
            trials: Some(2),
            mapping: Some(Mapping::Literal),
            window_factor: Some(WindowFactor::Weakfield),
            output_dir: None,
        });
        assert_eq!(cfg.seed_list(), vec![0, 1]);
        assert_eq!(cfg.analysis.mapping, Mapping::Literal);
        assert_eq!(cfg.coupling.window_factor, WindowFactor::Weakfield);
        cfg.apply(&Overrides { seeds: vec![7, 8], trials: Some(5), ..Overrides::default() });
        assert_eq!(cfg.seed_list(), vec![7, 8]);
    }

    #[test]
    fn duplicate_and_empty_seeds_rejected() {
        assert!(parse_config("duration = 1.0\nseeds = [1, 1]\n[source]\nrate = 1.0\n").is_err());
        assert!(parse_config("duration = 1.0\nseeds = []\n[source]\nrate = 1.0\n").is_err());
        assert!(parse_config("duration = 1.0\nseeds = 0\n[source]\nrate = 1.0\n").is_err());
    }
}
