use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use qgcolor_core::analysis::{analyze_string, AnalysisOptions, StringAnalysis};
use qgcolor_core::experiment::coupled_strain;
use qgcolor_core::{
    extract_coincidences, generate_fbm, simulate_detections, simulate_interferometer, synchronize_and_correct,
    CoincidenceString, DetectionRecord, InterferometerOutcome, PerturbationModel, RandomStream,
};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::manifest::{RunManifest, TrialEntry, MANIFEST_FILE};
use crate::plot::{write_svg, Series};

/// Stream id of the detection simulation; the interferometer uses the next one.
const DETECTION_STREAM: u64 = 0;
const INTERFEROMETER_STREAM: u64 = 1;

#[derive(Debug, Clone)]
pub struct TrialOutput {
    pub seed: u64,
    pub events_a: DetectionRecord,
    pub events_b: DetectionRecord,
    pub string: CoincidenceString,
    pub analysis: Option<StringAnalysis>,
    pub interferometer: Option<InterferometerOutcome>,
}

/// Simulates both records and extracts the coincidence string.
pub fn simulate_trial(cfg: &RunConfig, seed: u64) -> CliResult<(DetectionRecord, DetectionRecord, CoincidenceString)> {
    let (a, b) = cfg.observers();
    let (ra, rb) = simulate_detections(
        &cfg.source.to_core(),
        &a,
        &b,
        &cfg.perturbation,
        &cfg.coupling,
        cfg.duration,
        RandomStream::new(seed, DETECTION_STREAM),
    )?;
    let string = coincidence_string(cfg, &ra, &rb)?;
    Ok((ra, rb, string))
}

pub fn coincidence_string(cfg: &RunConfig, ra: &DetectionRecord, rb: &DetectionRecord) -> CliResult<CoincidenceString> {
    let (a, b) = cfg.observers();
    let events = synchronize_and_correct(ra, rb, &a, &b)?;
    Ok(extract_coincidences(&events, cfg.coincidence_window())?)
}

/// Runs the analysis suite. For plane waves the string is correlated with
/// the injected `κQ(t)` at the slot times, taken relative to A's first
/// detection on its coordinate clock.
pub fn analyze(
    cfg: &RunConfig,
    seed: u64,
    ra: &DetectionRecord,
    string: &CoincidenceString,
) -> CliResult<StringAnalysis> {
    let reference = match &cfg.perturbation {
        PerturbationModel::PlaneGw { .. } => {
            let (a, b) = cfg.observers();
            let start = ra.times.first().map_or(0.0, |&t| (t - a.clock_offset) / a.clock_rate());
            let times: Vec<f64> = string.slot_times.iter().map(|t| start + t).collect();
            Some(coupled_strain(
                &cfg.perturbation,
                &cfg.source.to_core(),
                &a,
                &b,
                &cfg.coupling,
                &times,
            )?)
        }
        _ => None,
    };
    let options = AnalysisOptions {
        mapping: cfg.analysis.mapping,
        estimator: cfg.analysis.estimator,
        max_lag: cfg.analysis.max_lag,
        reference,
    };
    Ok(analyze_string(string, seed, &options)?)
}

/// One complete trial held in memory.
pub fn run_trial(cfg: &RunConfig, seed: u64, with_analysis: bool) -> CliResult<TrialOutput> {
    let (events_a, events_b, string) = simulate_trial(cfg, seed)?;
    let analysis = if with_analysis {
        Some(analyze(cfg, seed, &events_a, &string)?)
    } else {
        None
    };
    let interferometer = match &cfg.interferometer {
        Some(icfg) => Some(simulate_interferometer(
            icfg,
            &cfg.perturbation,
            &cfg.coupling,
            RandomStream::new(seed, INTERFEROMETER_STREAM),
        )?),
        None => None,
    };
    Ok(TrialOutput {
        seed,
        events_a,
        events_b,
        string,
        analysis,
        interferometer,
    })
}

/// Makes `dir` ready for a new run. A directory holding a previous manifest
/// is cleared of the files that manifest lists; any other non-empty
/// directory is refused.
pub fn prepare_output_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    let manifest_path = dir.join(MANIFEST_FILE);
    if manifest_path.exists() {
        let text = fs::read_to_string(&manifest_path).map_err(CliError::io(&manifest_path))?;
        let old: RunManifest = serde_json::from_str(&text)
            .map_err(|e| CliError::Runtime(format!("existing {} is unreadable: {e}", manifest_path.display())))?;
        for rel in &old.files {
            let p = dir.join(rel);
            if p.is_file() {
                fs::remove_file(&p).map_err(CliError::io(&p))?;
            }
            if let Some(parent) = p.parent().filter(|q| *q != dir) {
                // Only succeeds once the trial directory is empty.
                let _ = fs::remove_dir(parent);
            }
        }
    }
    let mut entries = fs::read_dir(dir).map_err(CliError::io(dir))?;
    if entries.next().is_some() {
        return Err(CliError::Runtime(format!(
            "output directory {} is not empty and holds no manifest from a previous run",
            dir.display()
        )));
    }
    // Probe writability before any simulation work.
    let probe = dir.join(".write_probe");
    fs::write(&probe, b"").map_err(CliError::io(&probe))?;
    fs::remove_file(&probe).map_err(CliError::io(&probe))?;
    Ok(())
}

/// Collects the relative paths of everything written for one trial.
struct TrialWriter<'a> {
    root: &'a Path,
    dir: String,
    files: Vec<String>,
}

impl<'a> TrialWriter<'a> {
    fn new(root: &'a Path, dir: String) -> CliResult<Self> {
        let p = root.join(&dir);
        fs::create_dir_all(&p).map_err(CliError::io(&p))?;
        Ok(Self {
            root,
            dir,
            files: Vec::new(),
        })
    }

    fn path(&self, name: &str) -> (String, PathBuf) {
        let rel = format!("{}/{name}", self.dir);
        let abs = self.root.join(&rel);
        (rel, abs)
    }

    fn write(&mut self, name: &str, contents: &str) -> CliResult<()> {
        let (rel, abs) = self.path(name);
        fs::write(&abs, contents).map_err(CliError::io(&abs))?;
        self.files.push(rel);
        Ok(())
    }

    fn plot(&mut self, name: &str, title: &str, xl: &str, yl: &str, series: Vec<Series>, log: bool) -> CliResult<()> {
        let (rel, abs) = self.path(name);
        // Record first: a failed render may still leave a partial file.
        self.files.push(rel);
        write_svg(&abs, title, xl, yl, series, log)
    }
}

fn json(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialise");
    s.push('\n');
    s
}

fn write_analysis(w: &mut TrialWriter, a: &StringAnalysis, plots: bool) -> CliResult<()> {
    w.write("report.json", &json(&a.report))?;
    let mut rs = String::from("# block_size\trs\texpected_rs\n");
    for p in &a.rs_points {
        let _ = writeln!(rs, "{}\t{}\t{}", p.block_size, p.rs, p.expected);
    }
    w.write("rs_points.tsv", &rs)?;
    let mut spec = String::from("# frequency\tpsd\n");
    for (f, p) in &a.spectrum {
        let _ = writeln!(spec, "{f}\t{p}");
    }
    w.write("periodogram.tsv", &spec)?;
    let max_lag = a.report.xcorr.max_lag as i64;
    let mut xc = String::from("# lag\tcorrelation\n");
    for (i, c) in a.xcorr.iter().enumerate() {
        let _ = writeln!(xc, "{}\t{c}", i as i64 - max_lag);
    }
    w.write("xcorr.tsv", &xc)?;
    if plots {
        let fit = &a.spectral_fit;
        let measured: Vec<(f64, f64)> = a.rs_points.iter().map(|p| (p.block_size as f64, p.rs)).collect();
        let expected: Vec<(f64, f64)> = a.rs_points.iter().map(|p| (p.block_size as f64, p.expected)).collect();
        if !a.rs_points.is_empty() {
            w.plot(
                "rs.svg",
                "Rescaled range",
                "block size",
                "R/S",
                vec![
                    Series {
                        label: "measured",
                        points: measured,
                    },
                    Series {
                        label: "white-noise expectation",
                        points: expected,
                    },
                ],
                true,
            )?;
        }
        let asd: Vec<(f64, f64)> = a.spectrum.iter().map(|&(f, p)| (f, p.sqrt())).collect();
        let line: Vec<(f64, f64)> = [fit.band.0, fit.band.1]
            .iter()
            .map(|&f| (f, fit.amplitude * f.powf(-fit.exponent)))
            .collect();
        w.plot(
            "periodogram.svg",
            "Amplitude spectral density of the imbalance path",
            "frequency",
            "ASD",
            vec![
                Series {
                    label: "periodogram",
                    points: asd,
                },
                Series {
                    label: "power-law fit",
                    points: line,
                },
            ],
            true,
        )?;
        let lags: Vec<(f64, f64)> = a
            .xcorr
            .iter()
            .enumerate()
            .map(|(i, &c)| ((i as i64 - max_lag) as f64, c))
            .collect();
        w.plot(
            "xcorr.svg",
            &format!("Cross-correlation ({})", a.report.xcorr.reference),
            "lag",
            "correlation",
            vec![Series {
                label: "correlation",
                points: lags,
            }],
            false,
        )?;
    }
    Ok(())
}

fn trial_entry(seed: u64, started: Instant, files: Vec<String>, outcome: CliResult<TrialOutput>) -> TrialEntry {
    let wall_time_s = started.elapsed().as_secs_f64();
    match outcome {
        Ok(t) => TrialEntry {
            seed,
            ok: true,
            error: None,
            files,
            wall_time_s,
            report: t.analysis.map(|a| a.report),
            interferometer_fractions: t.interferometer.map(|i| {
                let total = i.peaks.iter().sum::<u64>().max(1) as f64;
                i.peaks.map(|c| c as f64 / total)
            }),
        },
        Err(e) => TrialEntry {
            seed,
            ok: false,
            error: Some(e.to_string()),
            files,
            wall_time_s,
            report: None,
            interferometer_fractions: None,
        },
    }
}

fn run_and_write(cfg: &RunConfig, root: &Path, seed: u64, analysis: bool, plots: bool) -> TrialEntry {
    let started = Instant::now();
    let mut writer = match TrialWriter::new(root, format!("trial_{seed}")) {
        Ok(w) => w,
        Err(e) => return trial_entry(seed, started, Vec::new(), Err(e)),
    };
    let outcome = (|| {
        let trial = run_trial(cfg, seed, analysis)?;
        writer.write("events_a.tsv", &trial.events_a.to_tsv())?;
        writer.write("events_b.tsv", &trial.events_b.to_tsv())?;
        writer.write("string.tsv", &trial.string.to_tsv())?;
        if let Some(a) = &trial.analysis {
            write_analysis(&mut writer, a, plots)?;
        }
        if let Some(i) = &trial.interferometer {
            let value = serde_json::json!({ "peaks": i.peaks, "post_selected": i.string.len(), "short_short": i.string.ones() });
            writer.write("interferometer.json", &json(&value))?;
        }
        Ok(trial)
    })();
    trial_entry(seed, started, writer.files, outcome)
}

fn finish(root: &Path, manifest: RunManifest) -> CliResult<RunManifest> {
    let path = root.join(MANIFEST_FILE);
    fs::write(&path, json(&manifest)).map_err(CliError::io(&path))?;
    Ok(manifest)
}

fn output_dir(cfg: &RunConfig) -> CliResult<PathBuf> {
    cfg.output_dir
        .clone()
        .ok_or_else(|| CliError::Config("no output directory: set output_dir or pass --out".into()))
}

/// Simulate → synchronise → extract → analyse for every seed, in parallel,
/// then write the manifest. Failed trials are recorded and do not stop the
/// others.
pub fn run_pipeline(cfg: &RunConfig, plots: bool) -> CliResult<RunManifest> {
    run_batch(cfg, "pipeline", true, plots)
}

/// Like [`run_pipeline`] without the analysis suite: records and strings only.
pub fn run_simulate(cfg: &RunConfig) -> CliResult<RunManifest> {
    run_batch(cfg, "simulate", false, false)
}

fn run_batch(cfg: &RunConfig, command: &str, analysis: bool, plots: bool) -> CliResult<RunManifest> {
    cfg.validate()?;
    let root = output_dir(cfg)?;
    prepare_output_dir(&root)?;
    let trials: Vec<TrialEntry> = cfg
        .seed_list()
        .par_iter()
        .map(|&seed| run_and_write(cfg, &root, seed, analysis, plots))
        .collect();
    finish(&root, RunManifest::new(command, Some(cfg.clone()), trials))
}

/// Analyses existing `events_a.tsv`/`events_b.tsv` in `input` (or a lone
/// `string.tsv`) and writes the results to the configured output directory.
pub fn run_analyze(cfg: &RunConfig, input: &Path, seed: u64, plots: bool) -> CliResult<RunManifest> {
    cfg.validate()?;
    let read = |name: &str| -> CliResult<Option<String>> {
        let p = input.join(name);
        if p.exists() {
            fs::read_to_string(&p).map(Some).map_err(CliError::io(p))
        } else {
            Ok(None)
        }
    };
    let parse = |e: qgcolor_core::Error| CliError::Runtime(format!("{}: {e}", input.display()));
    let (ra, string) = match (read("events_a.tsv")?, read("events_b.tsv")?) {
        (Some(a), Some(b)) => {
            let ra = DetectionRecord::from_tsv(&a).map_err(parse)?;
            let rb = DetectionRecord::from_tsv(&b).map_err(parse)?;
            let s = coincidence_string(cfg, &ra, &rb)?;
            (ra, s)
        }
        _ => match read("string.tsv")? {
            Some(s) => (
                DetectionRecord::default(),
                CoincidenceString::from_tsv(&s).map_err(parse)?,
            ),
            None => {
                return Err(CliError::Runtime(format!(
                    "{} holds neither events_a.tsv/events_b.tsv nor string.tsv",
                    input.display()
                )))
            }
        },
    };
    let root = output_dir(cfg)?;
    prepare_output_dir(&root)?;
    let started = Instant::now();
    let mut writer = TrialWriter::new(&root, format!("trial_{seed}"))?;
    let outcome = (|| {
        let analysis = analyze(cfg, seed, &ra, &string)?;
        writer.write("string.tsv", &string.to_tsv())?;
        write_analysis(&mut writer, &analysis, plots)?;
        Ok(TrialOutput {
            seed,
            events_a: ra.clone(),
            events_b: DetectionRecord::default(),
            string: string.clone(),
            analysis: Some(analysis),
            interferometer: None,
        })
    })();
    let entry = trial_entry(seed, started, writer.files, outcome);
    finish(&root, RunManifest::new("analyze", Some(cfg.clone()), vec![entry]))
}

/// Writes `t<TAB>B(t)` for `t = 0..=M` for each seed.
pub fn run_fbm(root: &Path, beta: f64, n: usize, m: usize, seeds: &[u64]) -> CliResult<RunManifest> {
    if seeds.is_empty() {
        return Err(CliError::Config("at least one seed is required".into()));
    }
    // Validate once so that domain errors surface as configuration errors.
    generate_fbm(beta, n, 2, RandomStream::new(0, 0)).map_err(|e| CliError::Config(e.to_string()))?;
    prepare_output_dir(root)?;
    let trials = seeds
        .par_iter()
        .map(|&seed| {
            let started = Instant::now();
            let mut files = Vec::new();
            let outcome = (|| {
                let series = generate_fbm(beta, n, m, RandomStream::new(seed, 0))?;
                let mut text = format!("# beta={beta} n={n} M={m} seed={seed}\n0\t0\n");
                for (t, v) in series.values.iter().enumerate() {
                    let _ = writeln!(text, "{}\t{v}", t + 1);
                }
                let rel = format!("fbm_{seed}.tsv");
                let abs = root.join(&rel);
                fs::write(&abs, text).map_err(CliError::io(&abs))?;
                files.push(rel);
                Ok(())
            })();
            TrialEntry {
                seed,
                ok: outcome.is_ok(),
                error: outcome.err().map(|e: CliError| e.to_string()),
                files,
                wall_time_s: started.elapsed().as_secs_f64(),
                report: None,
                interferometer_fractions: None,
            }
        })
        .collect();
    finish(root, RunManifest::new("fbm", None, trials))
}

pub fn load_manifest(path: &Path) -> CliResult<RunManifest> {
    let path = if path.is_dir() {
        path.join(MANIFEST_FILE)
    } else {
        path.to_path_buf()
    };
    let text = fs::read_to_string(&path).map_err(CliError::io(&path))?;
    serde_json::from_str(&text).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}
