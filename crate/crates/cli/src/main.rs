use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgcolor_cli::{
    emit_report, load_config, load_manifest, run_analyze, run_fbm, run_pipeline, run_simulate, CliResult,
    Overrides, RunConfig,
};
use qgcolor_core::analysis::Mapping;
use qgcolor_core::WindowFactor;

#[derive(Parser)]
#[command(name = "qgcolor", version, about = "Entangled-pair coincidence strings under spacetime perturbations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate detection records and coincidence strings only.
    Simulate(RunArgs),
    /// Analyse existing record files.
    Analyze {
        #[command(flatten)]
        run: RunArgs,
        /// Directory holding events_a.tsv and events_b.tsv, or string.tsv.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        plots: bool,
    },
    /// Emit reference fractional Brownian motion paths.
    Fbm {
        #[arg(long)]
        beta: f64,
        /// Records per step.
        #[arg(long, default_value_t = 16)]
        n: usize,
        /// Number of steps.
        #[arg(long, default_value_t = 4096)]
        m: usize,
        #[arg(long = "seed")]
        seeds: Vec<u64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate, analyse and summarise every trial.
    Pipeline {
        #[command(flatten)]
        run: RunArgs,
        /// Also render SVG plots next to the columnar plot data.
        #[arg(long)]
        plots: bool,
    },
    /// Print the summary of a finished run.
    Report {
        /// Run directory or manifest file.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Seed to run; repeat for several. Replaces the configured seeds.
    #[arg(long = "seed")]
    seeds: Vec<u64>,
    /// Run seeds 0..N when no --seed is given.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    mapping: Option<MappingArg>,
    #[arg(long, value_enum)]
    window_factor: Option<WindowArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MappingArg {
    /// alpha = 1 - H
    Growth,
    /// alpha = H
    Literal,
}

#[derive(Clone, Copy, ValueEnum)]
enum WindowArg {
    Eq5,
    Weakfield,
    Off,
}

impl RunArgs {
    fn load(&self) -> CliResult<RunConfig> {
        let mut cfg = load_config(&self.config)?;
        cfg.apply(&Overrides {
            seeds: self.seeds.clone(),
            trials: self.trials,
            output_dir: self.out.clone(),
            mapping: self.mapping.map(|m| match m {
                MappingArg::Growth => Mapping::Growth,
                MappingArg::Literal => Mapping::Literal,
            }),
            window_factor: self.window_factor.map(|w| match w {
                WindowArg::Eq5 => WindowFactor::Eq5,
                WindowArg::Weakfield => WindowFactor::Weakfield,
                WindowArg::Off => WindowFactor::Off,
            }),
        });
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Simulate(args) => {
            let m = run_simulate(&args.load()?)?;
            let failed = m.trials.iter().filter(|t| !t.ok).count();
            println!("simulated {} trials ({failed} failed), {} files", m.trials.len(), m.files.len());
        }
        Command::Analyze { run, input, plots } => {
            let cfg = run.load()?;
            let seed = run.seeds.first().copied().unwrap_or(0);
            print!("{}", emit_report(&run_analyze(&cfg, &input, seed, plots)?));
        }
        Command::Fbm { beta, n, m, seeds, trials, out } => {
            let seeds = if !seeds.is_empty() { seeds } else { (0..trials.unwrap_or(1)).collect() };
            let manifest = run_fbm(&out, beta, n, m, &seeds)?;
            println!("wrote {} series to {}", manifest.trials.len(), out.display());
        }
        Command::Pipeline { run, plots } => {
            print!("{}", emit_report(&run_pipeline(&run.load()?, plots)?));
        }
        Command::Report { out } => print!("{}", emit_report(&load_manifest(&out)?)),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
