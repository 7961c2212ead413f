use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use qd_haze_cli::commands::{cmd_bimodal, cmd_mutual_info, cmd_redundancy, run_validation, validation_csv};
use qd_haze_cli::config::{ConfigError, SweepConfig};

const EXIT_VALIDATION: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "qd-haze", version, about = "Information flow from a qubit into a hazy dephasing environment")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// I(S:F) over a time × fragment-size grid
    MutualInfo(SweepArgs),
    /// Minimal fragment and redundancy over a haziness × time grid
    Redundancy(SweepArgs),
    /// Record-count distributions of one fragment, with overlap and deficit
    Bimodal(SweepArgs),
    /// Cross-check every fast path against the dense oracle
    Validate(ValidateArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// `key = value` config file; flags given here override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n_env: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    s00: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    s01_re: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    s01_im: Option<String>,
    #[arg(long)]
    r00: Option<String>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "haziness")]
    r01: Option<String>,
    #[arg(long)]
    haziness: Option<String>,
    /// `start:stop:count`, a comma list, or one value; accepts `pi/2`-style tokens
    #[arg(long, allow_hyphen_values = true)]
    t_grid: Option<String>,
    /// `all`, or a comma list of sizes and `a-b` ranges
    #[arg(long)]
    frag_grid: Option<String>,
    /// haziness axis for `redundancy`
    #[arg(long)]
    h_grid: Option<String>,
    /// fragment size for `bimodal`
    #[arg(long)]
    n_frag: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    /// auto, schur, closed-form or oracle
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    threads: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// print the merged configuration and exit
    #[arg(long)]
    print_config: bool,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// flip the sign of the imperfect-decoherence correction (harness self-test)
    #[arg(long)]
    inject_fault: bool,
}

impl SweepArgs {
    fn merged(&self) -> Result<SweepConfig, ConfigError> {
        let file = match &self.config {
            Some(p) => SweepConfig::from_file(p)?,
            None => SweepConfig::default(),
        };
        let mut flags = SweepConfig::default();
        let pairs = [
            ("n_env", &self.n_env),
            ("s00", &self.s00),
            ("s01_re", &self.s01_re),
            ("s01_im", &self.s01_im),
            ("r00", &self.r00),
            ("r01", &self.r01),
            ("haziness", &self.haziness),
            ("t_grid", &self.t_grid),
            ("frag_grid", &self.frag_grid),
            ("h_grid", &self.h_grid),
            ("n_frag", &self.n_frag),
            ("delta", &self.delta),
            ("method", &self.method),
            ("threads", &self.threads),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                flags.set(key, v)?;
            }
        }
        if let Some(p) = &self.output {
            flags.output = Some(p.clone());
        }
        Ok(flags.over(file))
    }
}

fn emit(output: Option<&PathBuf>, text: &str) -> std::io::Result<()> {
    match output {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn config_failure(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("config error: {e}");
    ExitCode::from(EXIT_CONFIG)
}

fn run_sweep(args: &SweepArgs, default_t: &str, which: &Command) -> ExitCode {
    let merged = match args.merged() {
        Ok(c) => c,
        Err(e) => return config_failure(e),
    };
    if args.print_config {
        print!("{}", merged.serialize());
        return ExitCode::SUCCESS;
    }
    let sweep = match merged.resolve(default_t) {
        Ok(s) => s,
        Err(e) => return config_failure(e),
    };
    let table = match which {
        Command::MutualInfo(_) => cmd_mutual_info(&sweep),
        Command::Redundancy(_) => cmd_redundancy(&sweep),
        Command::Bimodal(_) => match cmd_bimodal(&sweep) {
            Ok(t) => t,
            Err(e) => return config_failure(e),
        },
        Command::Validate(_) => unreachable!("validate is not a sweep"),
    };
    if table.errors > 0 {
        warn!("{} grid point(s) failed; see the error markers in the output", table.errors);
    }
    if let Err(e) = emit(sweep.output.as_ref(), &table.csv) {
        return config_failure(format!("cannot write output: {e}"));
    }
    ExitCode::SUCCESS
}

fn run_validate(args: &ValidateArgs) -> ExitCode {
    let threads = match args.threads {
        Some(0) => return config_failure("field `threads`: must be at least 1"),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    if args.inject_fault {
        info!("fault injection on: the correction term enters with the wrong sign");
    }
    let checks = run_validation(threads, args.inject_fault);
    for c in &checks {
        eprintln!(
            "{:<4} {:<38} max |dev| = {:.3e}  (tol {:.0e})",
            if c.pass() { "ok" } else { "FAIL" },
            c.name,
            c.max_abs_deviation,
            c.tolerance
        );
    }
    if let Err(e) = emit(args.output.as_ref(), &validation_csv(&checks)) {
        return config_failure(format!("cannot write output: {e}"));
    }
    let failed = checks.iter().filter(|c| !c.pass()).count();
    if failed > 0 {
        eprintln!("{failed} of {} checks failed", checks.len());
        ExitCode::from(EXIT_VALIDATION)
    } else {
        eprintln!("all {} checks passed", checks.len());
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match &cli.command {
        Command::MutualInfo(a) => run_sweep(a, "0:pi/2:9", &cli.command),
        Command::Redundancy(a) => run_sweep(a, "pi/2", &cli.command),
        Command::Bimodal(a) => run_sweep(a, "pi/2", &cli.command),
        Command::Validate(a) => run_validate(a),
    }
}
