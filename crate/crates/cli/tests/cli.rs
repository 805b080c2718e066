use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::Command;

use qgcolor_cli::{parse_config, run_pipeline, CliError, RunConfig, RunManifest, MANIFEST_FILE};
use qgcolor_core::PerturbationModel;

const SMALL: &str = r#"
duration = 3000.0
seeds = [3, 5]

[source]
rate = 1.0
separation = 10.0
"#;

fn small_config(out: &Path) -> RunConfig {
    let mut cfg = parse_config(SMALL).unwrap();
    cfg.output_dir = Some(out.to_path_buf());
    cfg
}

fn scan(root: &Path) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(root).unwrap().to_string_lossy().replace('\\', "/"));
            }
        }
    }
    out
}

#[test]
fn minimal_document_gets_defaults() {
    let cfg = parse_config("duration = 100.0\nseeds = [7]\n[source]\nrate = 2.0\n").unwrap();
    assert_eq!(cfg.coupling.kappa, 1.0);
    assert_eq!(cfg.coupling.window_factor, qgcolor_core::WindowFactor::Eq5);
    assert_eq!(cfg.analysis.mapping, qgcolor_core::Mapping::Growth);
    assert_eq!(cfg.perturbation, PerturbationModel::None);
    assert_eq!(cfg.observer_b.g00, -1.0);
}

#[test]
fn config_round_trips_through_toml() {
    for path in ["null.toml", "foam_holographic.toml", "plane_gw.toml", "interferometer.toml"] {
        let text = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(path)).unwrap();
        let cfg = parse_config(&text).unwrap();
        let again = parse_config(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(cfg, again, "{path}");
    }
}

#[test]
fn foam_alpha_is_echoed() {
    let cfg = parse_config(
        "duration = 10.0\nseeds = 1\n[source]\nrate = 1.0\n[perturbation]\nkind = \"foam\"\nalpha = 0.6666666666666666\ne_qg = 10.0\ne_typ = 1.0\n",
    )
    .unwrap();
    match cfg.perturbation {
        PerturbationModel::Foam(f) => assert_eq!(f.alpha, 2.0 / 3.0),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn unknown_key_is_named() {
    let err = parse_config("duration = 10.0\nseeds = 1\n[source]\nrate = 1.0\nwobble = 3\n").unwrap_err();
    assert!(matches!(err, CliError::Config(_)));
    assert!(err.to_string().contains("wobble"), "{err}");
}

#[test]
fn positive_g00_is_rejected() {
    let err = parse_config("duration = 10.0\nseeds = 1\n[source]\nrate = 1.0\n[observer_b]\ng00 = 1.0\n").unwrap_err();
    assert!(err.to_string().contains("g00 must be negative"), "{err}");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn manifest_lists_exactly_the_files_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let manifest = run_pipeline(&small_config(&out), true).unwrap();
    let listed: BTreeSet<String> = manifest.files.iter().cloned().collect();
    assert_eq!(listed, scan(&out));
    assert!(listed.contains("trial_3/report.json"));
    assert!(listed.contains("trial_5/xcorr.svg"));
    assert!(listed.contains(MANIFEST_FILE));
    let on_disk: RunManifest = serde_json::from_str(&fs::read_to_string(out.join(MANIFEST_FILE)).unwrap()).unwrap();
    assert_eq!(on_disk, manifest);
}

#[test]
fn rerun_is_byte_identical_and_replaces_previous_output() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a");
    let second = dir.path().join("b");
    run_pipeline(&small_config(&first), false).unwrap();
    run_pipeline(&small_config(&second), false).unwrap();
    let files = scan(&first);
    assert_eq!(files, scan(&second));
    for f in files.iter().filter(|f| f.as_str() != MANIFEST_FILE) {
        assert_eq!(fs::read(first.join(f)).unwrap(), fs::read(second.join(f)).unwrap(), "{f}");
    }
    // Same directory again, with fewer trials: stale trial folders vanish.
    let mut cfg = small_config(&first);
    cfg.seeds = qgcolor_cli::Seeds::List(vec![5]);
    let m = run_pipeline(&cfg, false).unwrap();
    assert_eq!(m.files.iter().cloned().collect::<BTreeSet<_>>(), scan(&first));
    assert!(!first.join("trial_3").exists());
}

#[test]
fn foreign_directory_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("notes.txt"), "mine").unwrap();
    let err = run_pipeline(&small_config(dir.path()), false).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert_eq!(fs::read_to_string(dir.path().join("notes.txt")).unwrap(), "mine");
}

#[test]
fn failed_trial_is_recorded_and_others_proceed() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_config(dir.path());
    // Too few slots for the spectral fit: every trial fails, the run does not.
    cfg.duration = 500.0;
    let m = run_pipeline(&cfg, false).unwrap();
    assert_eq!(m.summary.trials_failed, 2);
    assert!(m.trials.iter().all(|t| t.error.as_deref().unwrap_or("").contains("1024")));
    assert_eq!(m.files.iter().cloned().collect::<BTreeSet<_>>(), scan(dir.path()));
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qgcolor"))
}

#[test]
fn binary_exit_codes_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, SMALL).unwrap();
    let out = dir.path().join("out");
    let status = bin()
        .args(["pipeline", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(["--seed", "9", "--mapping", "literal", "--window-factor", "weakfield"])
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let report = bin().args(["report", "--out"]).arg(&out).output().unwrap();
    let text = String::from_utf8(report.stdout).unwrap();
    assert!(text.contains("quoted reference, not derived"));
    let written: RunManifest = serde_json::from_str(&fs::read_to_string(out.join(MANIFEST_FILE)).unwrap()).unwrap();
    assert_eq!(written.trials.len(), 1);
    assert_eq!(written.trials[0].seed, 9);
    assert_eq!(written.config.unwrap().analysis.mapping, qgcolor_core::Mapping::Literal);

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "duration = 1.0\nseeds = 1\n[source]\nrate = 1.0\n[observer_a]\ng00 = 0.5\n").unwrap();
    let code = bin().args(["pipeline", "--config"]).arg(&bad).arg("--out").arg(dir.path().join("x")).status().unwrap();
    assert_eq!(code.code(), Some(2));

    let busy = dir.path().join("busy");
    fs::create_dir(&busy).unwrap();
    fs::write(busy.join("keep"), "x").unwrap();
    let code = bin().args(["pipeline", "--config"]).arg(&cfg).arg("--out").arg(&busy).status().unwrap();
    assert_eq!(code.code(), Some(3));
}

#[test]
fn simulate_then_analyze_matches_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.toml");
    fs::write(&cfg_path, SMALL).unwrap();
    let sim = dir.path().join("sim");
    let ok = bin().args(["simulate", "--config"]).arg(&cfg_path).arg("--out").arg(&sim).status().unwrap();
    assert!(ok.success());
    let ana = dir.path().join("ana");
    let ok = bin()
        .args(["analyze", "--config"])
        .arg(&cfg_path)
        .arg("--input")
        .arg(sim.join("trial_3"))
        .arg("--out")
        .arg(&ana)
        .args(["--seed", "3"])
        .status()
        .unwrap();
    assert!(ok.success());
    let pipe = dir.path().join("pipe");
    run_pipeline(&small_config(&pipe), false).unwrap();
    assert_eq!(
        fs::read(ana.join("trial_3/report.json")).unwrap(),
        fs::read(pipe.join("trial_3/report.json")).unwrap()
    );
}

#[test]
fn fbm_subcommand_writes_series() {
    let dir = tempfile::tempdir().unwrap();
    let ok = bin()
        .args(["fbm", "--beta", "1.0", "--n", "4", "--m", "64", "--trials", "2", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(ok.success());
    let text = fs::read_to_string(dir.path().join("fbm_1.tsv")).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 65);
    let code = bin().args(["fbm", "--beta", "2.5", "--out"]).arg(dir.path().join("x")).status().unwrap();
    assert_eq!(code.code(), Some(2));
}
