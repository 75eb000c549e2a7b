use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qbm_cli::{run, Command, Format};

#[derive(Parser)]
#[command(name = "qbm", version, about = "Monitored quantum Brownian motion: figure data and sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Conditional density over (gamma, mu, t, x_F).
    Surface(Common),
    /// Conditional variance over (gamma, mu, t) with its limit forms.
    Variance(Common),
    /// Equilibrium correlators over (gamma, t).
    Correlators(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file; standard output when omitted and the config has none.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Surface(a) => (Command::Surface, a),
        Sub::Variance(a) => (Command::Variance, a),
        Sub::Correlators(a) => (Command::Correlators, a),
    };
    match run(command, &args.config, args.out.as_deref(), args.format, args.threads) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qbm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
