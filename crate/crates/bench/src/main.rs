use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crackbench::report::{mean_std, to_markdown};
use crackbench::run::{Calibration, RunConfig, SamplerChoice};
use crackbench::{
    evaluate_dirs, parse_methods, run_benchmark_detailed, write_synthetic_dataset, BenchError,
    ReportFormat,
};
use crackseg::metrics::BpmConfig;
use crackseg::qi::{Binarize, DensityKind, HamiltonianConfig};
use crackseg::qseg::WeightOffset;
use crackseg::SynthConfig;

#[derive(Parser)]
#[command(
    name = "crackbench",
    version,
    about = "Benchmark label-free crack segmenters"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run methods over a manifest and write masks, scores and a report.
    Run(RunArgs),
    /// Write seeded synthetic patches, masks and a manifest.
    Synth(SynthArgs),
    /// Score a directory of predicted masks against ground truth.
    Eval(EvalArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Comma-separated: mgm, qi, qseg, external:NAME.
    #[arg(long, default_value = "mgm,qi,qseg")]
    methods: String,
    #[arg(long)]
    out: PathBuf,
    /// Gaussian width of the QI coupling kernel.
    #[arg(long, default_value_t = crackseg::qi::DEFAULT_SIGMA)]
    sigma: f64,
    /// Fixed QI density threshold instead of Otsu.
    #[arg(long)]
    qi_threshold: Option<f64>,
    /// Sum |v| instead of v² when building the QI density.
    #[arg(long)]
    qi_abs_density: bool,
    #[arg(long, default_value_t = crackseg::metrics::DEFAULT_BPM_RADIUS)]
    bpm_radius: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    overlays: bool,
    /// Write QI density maps as 16-bit PGM.
    #[arg(long)]
    dump_density: bool,
    #[arg(long, default_value = "csv")]
    report_format: String,
    /// Calibrate the MGM threshold on this manifest instead of the scored set.
    #[arg(long, conflicts_with = "mgm_threshold")]
    calib_manifest: Option<PathBuf>,
    /// Use this MGM threshold instead of calibrating.
    #[arg(long)]
    mgm_threshold: Option<f64>,
    /// local, cmd:PATH or http:URL.
    #[arg(long, default_value = "local")]
    sampler: String,
    #[arg(long, default_value_t = crackseg::qseg::DEFAULT_SWEEPS)]
    sweeps: usize,
    #[arg(long, default_value_t = crackseg::qseg::DEFAULT_RESTARTS)]
    restarts: usize,
    /// Q-Seg weight offset: "mean" or a number.
    #[arg(long, default_value = "mean")]
    offset: String,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 32)]
    size: usize,
    #[arg(long, default_value_t = 0.6)]
    depth: f64,
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    #[arg(long, default_value_t = crackseg::metrics::DEFAULT_BPM_RADIUS)]
    bpm_radius: u32,
}

fn run_config(a: RunArgs) -> Result<RunConfig, BenchError> {
    let mut cfg = RunConfig::new(a.manifest, parse_methods(&a.methods)?, a.out);
    cfg.hamiltonian = HamiltonianConfig {
        sigma: a.sigma,
        binarize: a.qi_threshold.map_or(Binarize::Otsu, Binarize::Fixed),
        density: if a.qi_abs_density {
            DensityKind::Absolute
        } else {
            DensityKind::Squared
        },
    };
    cfg.offset = match a.offset.as_str() {
        "mean" => WeightOffset::Mean,
        v => WeightOffset::Fixed(
            v.parse()
                .map_err(|_| BenchError::Config(format!("bad offset {v:?}")))?,
        ),
    };
    cfg.sweeps = a.sweeps;
    cfg.restarts = a.restarts;
    cfg.sampler = SamplerChoice::parse(&a.sampler)?;
    cfg.bpm = BpmConfig {
        radius: a.bpm_radius,
    };
    cfg.calibration = match (a.calib_manifest, a.mgm_threshold) {
        (Some(m), _) => Calibration::Manifest(m),
        (None, Some(t)) => Calibration::Fixed(t),
        (None, None) => Calibration::ScoredSet,
    };
    cfg.overlays = a.overlays;
    cfg.dump_density = a.dump_density;
    cfg.report_format = a.report_format.parse::<ReportFormat>()?;
    cfg.seed = a.seed;
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::Run(a) => {
            let out = run_benchmark_detailed(&run_config(a)?)?;
            print!("{}", to_markdown(&out.rows));
            println!("report: {}", out.report_path.display());
        }
        Command::Synth(a) => {
            let base = SynthConfig {
                size: a.size,
                crack_depth: a.depth,
                noise_sigma: a.noise,
                ..SynthConfig::default()
            };
            let path = write_synthetic_dataset(&a.out, a.count, a.seed, &base)?;
            println!("{}", path.display());
        }
        Command::Eval(a) => {
            let bpm = BpmConfig {
                radius: a.bpm_radius,
            };
            let records = evaluate_dirs(&a.pred, &a.truth, &bpm)?;
            println!("name\tiou\tf1\tiou_bpm\tf1_bpm");
            for r in &records {
                println!(
                    "{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}",
                    r.name, r.iou, r.f1, r.iou_bpm, r.f1_bpm
                );
            }
            let col = |f: fn(&crackbench::EvalRecord) -> f64| {
                mean_std(&records.iter().map(f).collect::<Vec<_>>()).0
            };
            println!(
                "mean\t{:.4}\t{:.4}\t{:.4}\t{:.4}",
                col(|r| r.iou),
                col(|r| r.f1),
                col(|r| r.iou_bpm),
                col(|r| r.f1_bpm)
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
