//! Command-line driver: loads an experiment config, runs the requested
//! checks over the configured graph, and writes deterministic artifacts.

mod checks;
mod config;
mod emit;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use checks::{CheckContext, CheckOutcome};
use config::{ExperimentConfig, Format, MeasureConfig};
use staticmass::{
    convergence_experiment, energy_report, stability_report, GraphManifold, Measure,
    ReferenceSpace, SweepResult,
};

/// Process failure modes and their exit codes: check failure 1, bad
/// configuration 2, filesystem trouble 3.
#[derive(Debug)]
pub enum CliError {
    Check(String),
    Config(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Check(m) | CliError::Config(m) | CliError::Io(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(name = "staticmass", version, about = "verification suites for static graph manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured checks and write energy/stability artifacts.
    Verify(RunArgs),
    /// Run the shrinking-parameter sweep and write its table and plot.
    Sweep(RunArgs),
    /// List the available check names with one-line descriptions.
    ListChecks,
}

#[derive(Args)]
struct RunArgs {
    /// Path to the experiment configuration (JSON).
    config: String,
    /// Overrides output.directory from the config.
    #[arg(long)]
    output_dir: Option<String>,
    /// Overrides constants.measure from the config.
    #[arg(long, value_enum)]
    measure: Option<MeasureArg>,
    /// Overrides constants.xi from the config.
    #[arg(long)]
    xi: Option<f64>,
    /// Residual gate for the static-equation and scalar-curvature checks.
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Product,
    Static,
}

impl From<MeasureArg> for MeasureConfig {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Product => MeasureConfig::Product,
            MeasureArg::Static => MeasureConfig::Static,
        }
    }
}

/// ASCII "staticma": the seed used when STATICMASS_SEED is unset.
const DEFAULT_SEED: u64 = 0x7374_6174_6963_6d61;

fn seed_from_env() -> Result<u64, CliError> {
    match std::env::var("STATICMASS_SEED") {
        Ok(text) => text.trim().parse::<u64>().map_err(|_| {
            CliError::Config(format!("STATICMASS_SEED must be an unsigned integer, got \"{text}\""))
        }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_SEED),
        Err(e) => Err(CliError::Config(format!("STATICMASS_SEED: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::ListChecks => {
            for (name, description, _) in checks::REGISTRY {
                println!("{name:<24} {description}");
            }
            Ok(())
        }
        Command::Verify(args) => run(args, Mode::Verify),
        Command::Sweep(args) => run(args, Mode::Sweep),
    }
}

#[derive(PartialEq, Clone, Copy)]
enum Mode {
    Verify,
    Sweep,
}

struct Prepared {
    config: ExperimentConfig,
    config_path: String,
    out_dir: PathBuf,
    space: ReferenceSpace<f64>,
    graph: GraphManifold<f64>,
    seed: u64,
    tolerance: f64,
}

impl Prepared {
    fn measure(&self) -> Measure {
        self.config.constants.measure.into()
    }

    fn wants(&self, format: Format) -> bool {
        self.config.output.formats.contains(&format)
    }
}

fn prepare(args: &RunArgs) -> Result<Prepared, CliError> {
    let mut config = config::load(&args.config)?;
    if let Some(dir) = &args.output_dir {
        config.output.directory = dir.clone();
    }
    if let Some(measure) = args.measure {
        config.constants.measure = measure.into();
    }
    if let Some(xi) = args.xi {
        if !(xi > 0.0) {
            return Err(CliError::Config(format!("xi must be positive, got {xi}")));
        }
        config.constants.xi = xi;
    }
    if !(args.tolerance > 0.0) {
        return Err(CliError::Config(format!(
            "tolerance must be positive, got {}",
            args.tolerance
        )));
    }
    let out_dir = PathBuf::from(&config.output.directory);
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out_dir.display())))?;
    let space = config::build_space(&config)?;
    let graph = config::build_graph(&config, &space)?;
    Ok(Prepared {
        config,
        config_path: args.config.clone(),
        out_dir,
        space,
        graph,
        seed: seed_from_env()?,
        tolerance: args.tolerance,
    })
}

fn run(args: RunArgs, mode: Mode) -> Result<(), CliError> {
    let started = Instant::now();
    let p = prepare(&args)?;

    if mode == Mode::Verify && p.config.checks.is_empty() {
        return Err(CliError::Config(
            "verify needs at least one entry in \"checks\"".into(),
        ));
    }
    if mode == Mode::Sweep && p.config.family.steps.is_none() {
        return Err(CliError::Config(
            "sweep needs family.steps in the config".into(),
        ));
    }

    // Execute checks in declared order, deduplicated by canonical name.
    let ctx = CheckContext {
        space: &p.space,
        graph: &p.graph,
        xi: p.config.constants.xi,
        measure: p.measure(),
        tolerance: p.tolerance,
        seed: p.seed,
    };
    let mut outcomes: Vec<CheckOutcome> = Vec::new();
    for requested in &p.config.checks {
        let (name, runner) = checks::resolve(requested).expect("names validated at load");
        if outcomes.iter().any(|o| o.name == name) {
            continue;
        }
        let outcome = runner(&ctx);
        println!(
            "{} {:<24} {}",
            if outcome.passed { "PASS" } else { "FAIL" },
            name,
            outcome.detail
        );
        outcomes.push(outcome);
    }

    // Compute everything first, then write all artifacts.
    let mut skipped: Vec<String> = Vec::new();
    let sweep: Option<SweepResult<f64>> = match p.config.family.steps {
        Some(steps) if p.wants(Format::Csv) || p.wants(Format::Svg) => {
            match convergence_experiment(
                &p.space,
                p.config.family.r_outer,
                steps,
                p.config.constants.xi,
                p.measure(),
            ) {
                Ok(s) => Some(s),
                Err(e) if mode == Mode::Sweep => {
                    return Err(CliError::Config(format!("sweep failed: {e}")));
                }
                Err(e) => {
                    skipped.push(format!("sweep.csv: {e}"));
                    None
                }
            }
        }
        _ => None,
    };

    if p.wants(Format::Json) {
        match energy_report(&p.graph) {
            Ok(report) => emit::energy_json(&p.out_dir.join("energy.json"), &report)?,
            Err(e) => skipped.push(format!("energy.json: {e}")),
        }
        match stability_report(&p.graph, p.config.constants.xi, p.measure()) {
            Ok(report) => emit::stability_json(&p.out_dir.join("stability.json"), &report)?,
            Err(e) => skipped.push(format!("stability.json: {e}")),
        }
    }
    if p.wants(Format::Csv) {
        match &sweep {
            Some(s) => emit::sweep_csv(&p.out_dir.join("sweep.csv"), s)?,
            None if p.config.family.steps.is_none() => {
                skipped.push("sweep.csv: family.steps not set".into())
            }
            None => {}
        }
    }
    if p.wants(Format::Svg) {
        if let Some(s) = &sweep {
            emit::sweep_svg(&p.out_dir.join("sweep.svg"), s)?;
        }
    }

    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    emit::run_summary_json(
        &p.out_dir.join("run_summary.json"),
        &p.config_path,
        &outcomes,
        &skipped,
        started.elapsed().as_secs_f64(),
        timestamp,
    )?;

    let failures: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.name)
        .collect();
    if failures.is_empty() {
        println!(
            "ok: {} check(s), artifacts in {}",
            outcomes.len(),
            p.out_dir.display()
        );
        Ok(())
    } else {
        Err(CliError::Check(format!(
            "{} of {} checks failed: {}",
            failures.len(),
            outcomes.len(),
            failures.join(", ")
        )))
    }
}
