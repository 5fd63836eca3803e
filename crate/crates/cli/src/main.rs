mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wifimab::agents::{Algorithm, Architecture};
use wifimab::mac::BondingMode;
use wifimab::report::Statistic;

#[derive(Parser, Debug)]
#[command(
    name = "wifimab",
    version,
    about = "Bandit-driven Wi-Fi channel access simulator"
)]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the trials of one scenario under one method.
    Run(RunArgs),
    /// Random search for the exploration coefficient.
    Tune(TuneArgs),
    /// Flatten result files into CSV tables.
    Export(ExportArgs),
    /// Print the built-in scenarios.
    ListScenarios,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Ucb,
    Linucb,
    /// Learning BSSs run legacy DCF on a fixed allocation.
    None,
}

impl AlgoArg {
    fn algorithm(self) -> Option<Algorithm> {
        match self {
            AlgoArg::Ucb => Some(Algorithm::Ucb),
            AlgoArg::Linucb => Some(Algorithm::Linucb),
            AlgoArg::None => None,
        }
    }
}

#[derive(Args, Debug)]
pub struct RunArgs {
    /// Built-in scenario name or path to a TOML scenario file.
    #[arg(short, long)]
    pub scenario: String,
    #[arg(long)]
    pub bonding: Option<BondingMode>,
    #[arg(long, value_enum, default_value = "linucb")]
    pub algo: AlgoArg,
    /// Ignored with --algo none.
    #[arg(long, default_value = "ma")]
    pub arch: Architecture,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Defaults to the scenario's trial count.
    #[arg(long)]
    pub trials: Option<u32>,
    /// Simulated seconds per trial.
    #[arg(long)]
    pub duration: Option<f64>,
    /// Static allocation label (1-7) for --algo none.
    #[arg(long)]
    pub channel: Option<u8>,
    /// Primary channel (1-4) inside --channel.
    #[arg(long, requires = "channel")]
    pub primary: Option<u8>,
    #[arg(short, long, env = "WIFIMAB_OUT_DIR", default_value = "results")]
    pub out: PathBuf,
    /// Write one CSV row per learning round.
    #[arg(long)]
    pub decision_log: bool,
    /// Write the event trace of every trial.
    #[arg(long)]
    pub trace: bool,
    /// Run trials one after another on this thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Args, Debug)]
pub struct TuneArgs {
    #[arg(long, default_value = "ucb")]
    pub algo: Algorithm,
    #[arg(long, default_value = "sa")]
    pub arch: Architecture,
    #[arg(long, default_value_t = 100)]
    pub candidates: usize,
    /// Search range as LO,HI. Defaults to the algorithm's range.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub range: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub bss_counts: Option<Vec<usize>>,
    /// Deployment durations in seconds.
    #[arg(long, value_delimiter = ',')]
    pub durations: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long, env = "WIFIMAB_OUT_DIR", default_value = "results")]
    pub out: PathBuf,
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    /// Directory holding run results.
    #[arg(env = "WIFIMAB_OUT_DIR", default_value = "results")]
    pub results: PathBuf,
    /// Where tables go. Defaults to <results>/tables.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    /// Also flag the trial maximizing this statistic per scenario and method.
    #[arg(long)]
    pub representative: Option<Statistic>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .init();

    let outcome = match cli.command {
        Command::Run(args) => commands::run(&args),
        Command::Tune(args) => commands::tune(&args),
        Command::Export(args) => commands::export(&args),
        Command::ListScenarios => {
            commands::list_scenarios();
            Ok(())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
