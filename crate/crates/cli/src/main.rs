use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use distill_cli::{execute, CliError, ConfigError, Scenario, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "distill",
    version,
    about = "Distillability of entangled pairs under decoherence, as CSV"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Singlet fidelity under dissipation and dephasing
    Fig1(Named),
    /// Critical time against dimension
    Fig2(Named),
    /// Reduction value for d = 5 and 7 spin models
    Fig3(Named),
    /// Qubit Kraus channels on the singlet
    Kraus2x2(Named),
    /// Run whichever scenario a config document names
    Custom {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Args)]
struct Named {
    /// Config document; flags take precedence over its keys
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct Overrides {
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long = "t-max", allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
    /// CSV destination; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Overrides {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut v = Vec::new();
        if let Some(x) = self.gamma {
            v.push(("gamma", x.to_string()));
        }
        if let Some(x) = self.omega {
            v.push(("omega", x.to_string()));
        }
        if let Some(x) = self.d {
            v.push(("d", x.to_string()));
        }
        if let Some(x) = self.t_max {
            v.push(("t_max", x.to_string()));
        }
        if let Some(x) = self.dt {
            v.push(("dt", x.to_string()));
        }
        if let Some(x) = &self.out {
            v.push(("out", x.display().to_string()));
        }
        v
    }
}

fn load(
    expected: Option<Scenario>,
    config: Option<&PathBuf>,
    overrides: &Overrides,
) -> Result<ScenarioConfig, CliError> {
    let text = match config {
        Some(path) => std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
            path: path.clone(),
            source,
        })?,
        None => format!("scenario = {}\n", expected.expect("named subcommand")),
    };
    let cfg = ScenarioConfig::parse_with_overrides(&text, &overrides.pairs())?;
    if let Some(s) = expected {
        if cfg.scenario != s {
            return Err(ConfigError {
                line: None,
                key: "scenario".into(),
                message: format!("config names '{}' but the subcommand is '{s}'", cfg.scenario),
            }
            .into());
        }
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match &cli.command {
        Command::Fig1(n) => load(Some(Scenario::Fig1), n.config.as_ref(), &n.overrides),
        Command::Fig2(n) => load(Some(Scenario::Fig2), n.config.as_ref(), &n.overrides),
        Command::Fig3(n) => load(Some(Scenario::Fig3), n.config.as_ref(), &n.overrides),
        Command::Kraus2x2(n) => load(Some(Scenario::Kraus2x2), n.config.as_ref(), &n.overrides),
        Command::Custom { config, overrides } => load(None, Some(config), overrides),
    };
    match cfg.and_then(|cfg| execute(&cfg)) {
        Ok(Some(csv)) => {
            print!("{csv}");
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("distill: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
