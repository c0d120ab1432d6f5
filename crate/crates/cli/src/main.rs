//! `comfort` — command-line front end for the comfort pipeline.
//!
//! Subcommands: `gen-data`, `train`, `predict`, `simulate`, `check`.
//! Exit codes: 0 success, 1 usage error, 2 data/parse error, 3 numeric
//! failure, 4 calibration-check failure.

mod checks;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use comfort_core::chamber::{
    read_plant_params, run_closed_loop, write_plant_params, write_trace, ChamberState, PlantParams,
    SimError,
};
use comfort_core::classify::classify_comfort;
use comfort_core::control::{ControlError, PmvSource};
use comfort_core::dataset::{
    generate_dataset, read_dataset, split_and_normalize, write_dataset, write_stats, DatasetError,
};
use comfort_core::mlp::{evaluate, init_model, train, MlpError, MlpModel, TrainConfig};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "comfort",
    version,
    about = "PMV comfort modeling, surrogate training, and closed-loop simulation"
)]
struct Cli {
    /// Seed for data generation, training, and simulation noise.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Plant-parameter file (used by `simulate`).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SourceArg {
    Analytic,
    Surrogate,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labeled synthetic corpus over the 0-50 °C x 0-100 % box.
    GenData {
        /// Number of records.
        #[arg(long, default_value_t = 50_000)]
        n: usize,
        /// Output corpus file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Train the surrogate network on a corpus file.
    Train {
        /// Corpus file produced by gen-data.
        #[arg(long)]
        data: PathBuf,
        /// Output weight file.
        #[arg(long)]
        model_out: PathBuf,
        /// Optional normalization-stats file.
        #[arg(long)]
        stats_out: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        epochs: usize,
        #[arg(long, default_value_t = 64)]
        batch_size: usize,
        #[arg(long, default_value_t = 1e-3)]
        learning_rate: f64,
        /// Fraction of records used for training; the rest is held out.
        #[arg(long, default_value_t = 0.8)]
        train_fraction: f64,
        /// Four comma-separated hidden-layer widths.
        #[arg(long, default_value = "16,16,16,16")]
        widths: String,
    },
    /// Predict PMV for one temperature/humidity pair using a trained model.
    Predict {
        /// Weight file produced by train.
        #[arg(long)]
        model: PathBuf,
        /// Air temperature in °C.
        #[arg(long)]
        temp: f64,
        /// Relative humidity in percent.
        #[arg(long)]
        rh: f64,
    },
    /// Run the closed-loop chamber simulation and write a trace.
    Simulate {
        #[arg(long)]
        steps: u64,
        #[arg(long, value_enum, default_value_t = SourceArg::Analytic)]
        source: SourceArg,
        /// Weight file (required when --source surrogate).
        #[arg(long)]
        model: Option<PathBuf>,
        /// Output trace file.
        #[arg(long)]
        trace_out: PathBuf,
        /// Optional energy/occupancy report file.
        #[arg(long)]
        report_out: Option<PathBuf>,
        /// Initial chamber temperature in °C (default: ambient).
        #[arg(long)]
        init_temp: Option<f64>,
        /// Initial chamber humidity in percent (default: ambient).
        #[arg(long)]
        init_rh: Option<f64>,
        /// Write the effective plant parameters to this file.
        #[arg(long)]
        params_out: Option<PathBuf>,
    },
    /// Run the built-in calibration battery and report pass/fail per check.
    Check {
        /// Weight file; without it only the analytic subset runs.
        #[arg(long)]
        model: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    Numeric(String),
    ChecksFailed(usize),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::ChecksFailed(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Data(msg) | CliError::Numeric(msg) => f.write_str(msg),
            CliError::ChecksFailed(n) => write!(f, "{n} calibration check(s) failed"),
        }
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        match e {
            DatasetError::InvalidCount | DatasetError::InvalidFraction(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<MlpError> for CliError {
    fn from(e: MlpError) -> Self {
        match e {
            MlpError::InvalidWidth | MlpError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            MlpError::DivergedTraining { .. } | MlpError::UndefinedR2 => {
                CliError::Numeric(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::InvalidSteps | SimError::Control(ControlError::MissingModel) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    match cli.command {
        Command::GenData { n, out } => cmd_gen_data(n, seed, out),
        Command::Train {
            data,
            model_out,
            stats_out,
            epochs,
            batch_size,
            learning_rate,
            train_fraction,
            widths,
        } => cmd_train(
            data,
            model_out,
            stats_out,
            epochs,
            batch_size,
            learning_rate,
            train_fraction,
            &widths,
            seed,
        ),
        Command::Predict { model, temp, rh } => cmd_predict(model, temp, rh),
        Command::Simulate {
            steps,
            source,
            model,
            trace_out,
            report_out,
            init_temp,
            init_rh,
            params_out,
        } => cmd_simulate(
            cli.config, cli.seed, steps, source, model, trace_out, report_out, init_temp, init_rh,
            params_out,
        ),
        Command::Check { model } => cmd_check(model),
    }
}

fn cmd_gen_data(n: usize, seed: u64, out: PathBuf) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let dataset = generate_dataset(n, seed)?;
    write_dataset(&out, &dataset.records)?;
    println!("records={}", dataset.records.len());
    println!("resamples={}", dataset.resample_count);
    println!("seed={seed}");
    println!("path={}", out.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_train(
    data: PathBuf,
    model_out: PathBuf,
    stats_out: Option<PathBuf>,
    epochs: usize,
    batch_size: usize,
    learning_rate: f64,
    train_fraction: f64,
    widths: &str,
    seed: u64,
) -> Result<(), CliError> {
    if epochs == 0 {
        return Err(CliError::Usage("--epochs must be at least 1".into()));
    }
    if batch_size == 0 {
        return Err(CliError::Usage("--batch-size must be at least 1".into()));
    }
    if !(learning_rate.is_finite() && learning_rate > 0.0) {
        return Err(CliError::Usage("--learning-rate must be positive".into()));
    }
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(CliError::Usage(
            "--train-fraction must lie strictly between 0 and 1".into(),
        ));
    }
    let widths = parse_widths(widths)?;

    let records = read_dataset(&data)?;
    let (train_split, test_split, stats) = split_and_normalize(&records, train_fraction, seed)?;
    let mut model = init_model(widths, seed, stats)?;
    let config = TrainConfig {
        learning_rate,
        batch_size,
        epochs,
        seed,
        ..TrainConfig::default()
    };
    let history = train(&mut model, &train_split, &config)?;
    let metrics = evaluate(&model, &test_split)?;
    model.save(&model_out)?;
    if let Some(stats_path) = stats_out {
        write_stats(&stats_path, &stats, seed)?;
    }
    println!(
        "mse={:.6} mae={:.6} r2={:.6}",
        metrics.mse, metrics.mae, metrics.r_squared
    );
    println!("train_records={}", train_split.len());
    println!("test_records={}", test_split.len());
    println!(
        "final_epoch_loss={:.6e}",
        history.last().copied().unwrap_or(f64::NAN)
    );
    println!("model={}", model_out.display());
    Ok(())
}

fn parse_widths(widths: &str) -> Result<[usize; 4], CliError> {
    let parts: Vec<&str> = widths.split(',').collect();
    if parts.len() != 4 {
        return Err(CliError::Usage(format!(
            "--widths needs exactly 4 comma-separated values, found {}",
            parts.len()
        )));
    }
    let mut out = [0usize; 4];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("bad width value {part:?}")))?;
        if *slot == 0 {
            return Err(CliError::Usage("hidden widths must be positive".into()));
        }
    }
    Ok(out)
}

fn cmd_predict(model_path: PathBuf, temp: f64, rh: f64) -> Result<(), CliError> {
    if !(temp.is_finite() && (-40.0..=80.0).contains(&temp)) {
        return Err(CliError::Usage(format!(
            "--temp {temp} must lie in [-40, 80] °C"
        )));
    }
    if !(rh.is_finite() && (0.0..=100.0).contains(&rh)) {
        return Err(CliError::Usage(format!("--rh {rh} must lie in [0, 100] %")));
    }
    let model = MlpModel::load(&model_path)?;
    let prediction = model.predict_pmv(temp, rh);
    println!("Predicted PMV: {:.3}", prediction.pmv);
    println!("class={}", classify_comfort(prediction.pmv));
    if prediction.out_of_domain {
        println!("out_of_domain=true");
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    config: Option<PathBuf>,
    seed_override: Option<u64>,
    steps: u64,
    source: SourceArg,
    model_path: Option<PathBuf>,
    trace_out: PathBuf,
    report_out: Option<PathBuf>,
    init_temp: Option<f64>,
    init_rh: Option<f64>,
    params_out: Option<PathBuf>,
) -> Result<(), CliError> {
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let mut params = match config {
        Some(path) => read_plant_params(&path)?,
        None => PlantParams::default(),
    };
    if let Some(seed) = seed_override {
        params.noise_seed = seed;
    }
    let model = match (source, model_path) {
        (SourceArg::Surrogate, Some(path)) => Some(MlpModel::load(&path)?),
        (SourceArg::Surrogate, None) => {
            return Err(CliError::Usage(
                "--source surrogate requires --model".into(),
            ))
        }
        (SourceArg::Analytic, _) => None,
    };
    let pmv_source = match source {
        SourceArg::Analytic => PmvSource::Analytic,
        SourceArg::Surrogate => PmvSource::Surrogate,
    };

    let initial = ChamberState::new(
        init_temp.unwrap_or(params.ambient_temp_c),
        init_rh
            .map(|pct| pct / 100.0)
            .unwrap_or(params.ambient_rh_fraction),
    );
    let occupant = comfort_core::occupant::OccupantProfile::default();
    let (trace, report) = run_closed_loop(
        initial,
        &params,
        &occupant,
        pmv_source,
        model.as_ref(),
        steps,
    )?;

    write_trace(&trace_out, &trace)?;
    if let Some(report_path) = report_out {
        std::fs::write(&report_path, report.render())
            .map_err(|e| CliError::Data(format!("{}: {e}", report_path.display())))?;
    }
    if let Some(params_path) = params_out {
        write_plant_params(&params_path, &params)?;
    }
    print!("{}", report.render());
    println!("trace={}", trace_out.display());

    let held_fraction = report.held_steps as f64 / report.steps as f64;
    if held_fraction > 0.10 {
        return Err(CliError::Numeric(format!(
            "comfort solve failed on {:.1} % of steps",
            held_fraction * 100.0
        )));
    }
    Ok(())
}

fn cmd_check(model_path: Option<PathBuf>) -> Result<(), CliError> {
    let model = match model_path {
        Some(path) => Some(MlpModel::load(&path)?),
        None => None,
    };
    let outcomes = checks::run_battery(model.as_ref());
    let mut failed = 0usize;
    for outcome in &outcomes {
        println!(
            "check={} status={} {}",
            outcome.name,
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.detail
        );
        if !outcome.passed {
            failed += 1;
        }
    }
    println!(
        "result={} checks={} failed={failed}",
        if failed == 0 { "PASS" } else { "FAIL" },
        outcomes.len()
    );
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(())
}
