use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use risec_cli::{
    exit, point_csv, point_table, run_point, run_sweep, sweep_csv, validate, CliError, RunConfig,
    Tolerances, Verdict,
};
use risec_core::{Model, SopMode};

#[derive(Parser)]
#[command(
    name = "risec",
    version,
    about = "Secrecy capacity and outage of RIS-assisted vehicular links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Start from the defaults of this model instead of a config file.
    #[arg(long, global = true, value_enum, conflicts_with = "config")]
    model: Option<ModelArg>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override the simulation seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the simulation trial count.
    #[arg(long, global = true)]
    trials: Option<u64>,

    /// Relay outage constants.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,

    /// Print the effective configuration as JSON and exit.
    #[arg(long, global = true)]
    dump_config: bool,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "RISEC_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the requested metrics at one parameter point.
    Eval {
        /// Emit a CSV header and row instead of a table.
        #[arg(long)]
        csv: bool,
    },
    /// Evaluate the sweep and emit CSV.
    Sweep,
    /// Compare analytic and simulated metrics; exit 1 unless all pass.
    Validate {
        /// Absolute SOP tolerance.
        #[arg(long, default_value_t = 0.02)]
        sop_tol: f64,
        /// ASC tolerance in simulation standard errors.
        #[arg(long, default_value_t = 3.0)]
        asc_se: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    V2vRisAp,
    VanetRisRelay,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Corrected,
    PaperLiteral,
}

fn load(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match (&cli.config, cli.model) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, Some(ModelArg::V2vRisAp)) => RunConfig::new(Model::V2vRisAp),
        (None, Some(ModelArg::VanetRisRelay)) => RunConfig::new(Model::VanetRisRelay),
        (None, None) => return Err(CliError::config("one of --config or --model is required")),
    };
    cfg.override_mc(cli.seed, cli.trials);
    if let Some(mode) = cli.mode {
        cfg.sop_mode = match mode {
            ModeArg::Corrected => SopMode::Corrected,
            ModeArg::PaperLiteral => SopMode::PaperLiteral,
        };
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<u8, CliError> {
    let cfg = load(cli)?;
    if cli.dump_config {
        emit(cli, &(cfg.to_json() + "\n"))?;
        return Ok(exit::SUCCESS);
    }
    match cli.command {
        Command::Eval { csv } => {
            if cfg.sweep.is_some() {
                return Err(CliError::config(
                    "eval: config has a sweep; use `risec sweep`",
                ));
            }
            let metrics = run_point(&cfg)?;
            let text = if csv {
                point_csv(&cfg, &metrics)
            } else {
                point_table(&cfg, &metrics)
            };
            emit(cli, &text)?;
            Ok(exit::SUCCESS)
        }
        Command::Sweep => {
            let rows = run_sweep(&cfg)?;
            emit(cli, &sweep_csv(&cfg, &rows))?;
            Ok(exit::SUCCESS)
        }
        Command::Validate { sop_tol, asc_se } => {
            if !(sop_tol > 0.0 && asc_se > 0.0) {
                return Err(CliError::config("validate: tolerances must be > 0"));
            }
            let tol = Tolerances {
                asc_std_errors: asc_se,
                sop_abs: sop_tol,
            };
            let report = validate(&cfg, &tol)?;
            emit(cli, &format!("{report}\n"))?;
            Ok(match report.verdict() {
                Verdict::Pass => exit::SUCCESS,
                Verdict::Fail | Verdict::Inconclusive => exit::VALIDATION_FAILED,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("risec: {e}");
            return ExitCode::from(exit::CONFIG);
        }
    }
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("risec: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
