use std::collections::BTreeMap;

use qgcolor_core::analysis::AnalysisReport;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialEntry {
    pub seed: u64,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Paths relative to the run directory.
    pub files: Vec<String>,
    pub wall_time_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<AnalysisReport>,
    /// Fractions in the (ss, mixed, ll) peaks when the interferometer ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interferometer_fractions: Option<[f64; 3]>,
}

impl TrialEntry {
    /// `null` when the estimate is indistinguishable from memoryless noise,
    /// the model class otherwise.
    pub fn verdict(&self) -> Option<&'static str> {
        self.report
            .as_ref()
            .map(|r| if r.null { "null" } else { r.model_class.as_str() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStderr {
    pub mean: f64,
    /// Standard error of the mean; absent for a single trial.
    pub stderr: Option<f64>,
    pub n: usize,
}

impl MeanStderr {
    pub fn of(values: &[f64]) -> Option<Self> {
        let n = values.len();
        if n == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let stderr = (n > 1).then(|| {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        });
        Some(Self { mean, stderr, n })
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub trials_ok: usize,
    pub trials_failed: usize,
    pub hurst: Option<MeanStderr>,
    pub spectral_exponent: Option<MeanStderr>,
    pub alpha_hat: Option<MeanStderr>,
    pub votes: BTreeMap<String, usize>,
    /// Most frequent per-trial verdict; ties go to the alphabetically first.
    pub verdict: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interferometer_fractions: Option<[f64; 3]>,
}

impl EnsembleSummary {
    pub fn from_trials(trials: &[TrialEntry]) -> Self {
        let ok: Vec<&TrialEntry> = trials.iter().filter(|t| t.ok).collect();
        let reports: Vec<&AnalysisReport> = ok.iter().filter_map(|t| t.report.as_ref()).collect();
        let pick = |f: fn(&AnalysisReport) -> f64| MeanStderr::of(&reports.iter().map(|r| f(r)).collect::<Vec<_>>());
        let mut votes = BTreeMap::new();
        for t in &ok {
            if let Some(v) = t.verdict() {
                *votes.entry(v.to_string()).or_insert(0) += 1;
            }
        }
        let verdict = votes
            .iter()
            .fold(None::<(&String, usize)>, |best, (k, &c)| match best {
                Some((_, bc)) if bc >= c => best,
                _ => Some((k, c)),
            })
            .map(|(k, _)| k.clone());
        let fractions: Vec<[f64; 3]> = ok.iter().filter_map(|t| t.interferometer_fractions).collect();
        let interferometer_fractions = (!fractions.is_empty()).then(|| {
            let n = fractions.len() as f64;
            let mut mean = [0.0; 3];
            for f in &fractions {
                for i in 0..3 {
                    mean[i] += f[i] / n;
                }
            }
            mean
        });
        Self {
            trials_ok: ok.len(),
            trials_failed: trials.len() - ok.len(),
            hurst: pick(|r| r.hurst),
            spectral_exponent: pick(|r| r.spectral_exponent),
            alpha_hat: pick(|r| r.alpha_hat),
            votes,
            verdict,
            interferometer_fractions,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    /// `simulate`, `analyze`, `fbm` or `pipeline`.
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
    pub trials: Vec<TrialEntry>,
    pub summary: EnsembleSummary,
    /// Every file in the run directory, this manifest included.
    pub files: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config: Option<RunConfig>, mut trials: Vec<TrialEntry>) -> Self {
        trials.sort_by_key(|t| t.seed);
        let summary = EnsembleSummary::from_trials(&trials);
        let mut files: Vec<String> = trials.iter().flat_map(|t| t.files.iter().cloned()).collect();
        files.push(MANIFEST_FILE.to_string());
        files.sort();
        files.dedup();
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            trials,
            summary,
            files,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn failed(seed: u64) -> TrialEntry {
        TrialEntry {
            seed,
            ok: false,
            error: Some("boom".into()),
            files: vec![],
            wall_time_s: 0.0,
            report: None,
            interferometer_fractions: None,
        }
    }

    #[test]
    fn mean_and_stderr() {
        let s = MeanStderr::of(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.mean, 2.0);
        assert!((s.stderr.unwrap() - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(MeanStderr::of(&[5.0]).unwrap().stderr, None);
        assert!(MeanStderr::of(&[]).is_none());
    }

    #[test]
    fn failed_trials_are_counted_not_averaged() {
        let m = RunManifest::new("pipeline", None, vec![failed(3), failed(1)]);
        assert_eq!(m.trials[0].seed, 1);
        assert_eq!(m.summary.trials_failed, 2);
        assert!(m.summary.hurst.is_none());
        assert_eq!(m.files, vec![MANIFEST_FILE.to_string()]);
    }
}
