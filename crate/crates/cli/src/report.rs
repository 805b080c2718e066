use std::fmt::Write as _;

use crate::manifest::{MeanStderr, RunManifest};

/// Phase-factor bounds quoted for comparison only; nothing here derives them.
pub const DELTA_PHI_EARTH_MARS: f64 = 2.15e-13;
pub const DELTA_PHI_PLANCK: f64 = 6.15e-17;

fn stat(s: &Option<MeanStderr>) -> String {
    match s {
        Some(MeanStderr { mean, stderr: Some(se), n }) => format!("{mean:.4} ± {se:.4}  (n = {n})"),
        Some(MeanStderr { mean, stderr: None, n }) => format!("{mean:.4}  (n = {n})"),
        None => "n/a".to_string(),
    }
}

/// Human-readable summary of a run manifest.
pub fn emit_report(m: &RunManifest) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} · {} run", m.tool, m.version, m.command);
    if let Some(cfg) = &m.config {
        let _ = writeln!(
            out,
            "perturbation: {}   duration: {}   rate: {}   trials: {}",
            cfg.perturbation.kind(),
            cfg.duration,
            cfg.source.rate,
            m.trials.len()
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:>8}  {:>6}  {:>8}  {:>7}  {:>7}  {:>7}  {:<12}  {:>5}",
        "seed", "status", "slots", "H", "a", "alpha", "class", "conf"
    );
    for t in &m.trials {
        match (&t.report, t.ok) {
            (Some(r), true) => {
                let _ = writeln!(
                    out,
                    "{:>8}  {:>6}  {:>8}  {:>7.4}  {:>7.4}  {:>7.4}  {:<12}  {:>5.2}",
                    t.seed,
                    "ok",
                    r.n_samples,
                    r.hurst,
                    r.spectral_exponent,
                    r.alpha_hat,
                    t.verdict().unwrap_or("-"),
                    r.confidence
                );
            }
            (None, true) => {
                let _ = writeln!(out, "{:>8}  {:>6}  (no analysis)", t.seed, "ok");
            }
            _ => {
                let _ = writeln!(out, "{:>8}  {:>6}  {}", t.seed, "FAILED", t.error.as_deref().unwrap_or("unknown error"));
            }
        }
    }
    let s = &m.summary;
    let _ = writeln!(out);
    let _ = writeln!(out, "ensemble ({} ok, {} failed; failed trials excluded)", s.trials_ok, s.trials_failed);
    let _ = writeln!(out, "  H      {}", stat(&s.hurst));
    let _ = writeln!(out, "  a      {}", stat(&s.spectral_exponent));
    let _ = writeln!(out, "  alpha  {}", stat(&s.alpha_hat));
    if let Some(f) = s.interferometer_fractions {
        let _ = writeln!(out, "  interferometer peaks (ss, mixed, ll): {:.4} {:.4} {:.4}", f[0], f[1], f[2]);
    }
    let votes: Vec<String> = s.votes.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    let _ = writeln!(
        out,
        "  verdict: {}{}",
        s.verdict.as_deref().unwrap_or("n/a"),
        if votes.is_empty() { String::new() } else { format!("  ({})", votes.join(", ")) }
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "phase-factor bounds (quoted reference, not derived):");
    let _ = writeln!(out, "  delta_phi ~ {DELTA_PHI_EARTH_MARS:.2e}   alpha = 0.67, Earth-Mars baseline");
    let _ = writeln!(out, "  delta_phi ~ {DELTA_PHI_PLANCK:.2e}   Planck-scale fluctuations");
    out
}
