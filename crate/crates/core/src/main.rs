use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use mkropina::flag::Method;
use mkropina::report::Format;
use mkropina::scenario::{self, Command, RunOptions};
use mkropina::{Execution, Sigma};

#[derive(Parser)]
#[command(name = "mkropina", version, about = "Flag curvature of homogeneous m-Kropina spaces")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Scenario file (JSON)
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,

    /// Comma-separated subset of general,thm31,natred,biinv
    #[arg(long, global = true, value_delimiter = ',')]
    methods: Option<Vec<String>>,

    /// Number of sampled flags (scan, verify) or Latifi poles (check)
    #[arg(long, global = true)]
    count: Option<usize>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Overrides every scenario tolerance
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Sign applied to the raw Püttmann-type curvature expressions (default -1)
    #[arg(long, global = true, allow_hyphen_values = true)]
    sigma: Option<i32>,

    /// Run on one thread
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Structural and natural-reductivity report
    Check,
    /// Flag curvature for the scenario's explicit flags
    Curvature,
    /// Flag curvature for seeded random orthonormal flags
    Scan,
    /// Oracle cross-checks; exit code 2 if any residual exceeds tolerance
    Verify,
}

#[derive(ValueEnum, Clone, Copy)]
enum OutFormat {
    Csv,
    Json,
}

fn run(cli: &Cli) -> anyhow::Result<i32> {
    let path = cli.scenario.as_ref().context("--scenario PATH is required")?;
    let sc = scenario::load_scenario_file(path)
        .with_context(|| format!("invalid scenario {}", path.display()))?;
    let methods = cli
        .methods
        .as_ref()
        .map(|ms| ms.iter().map(|m| Method::parse(m)).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    let opts = RunOptions {
        methods,
        count: cli.count,
        seed: cli.seed,
        tolerance: cli.tolerance,
        sigma: cli.sigma.map(Sigma::new).transpose()?,
        exec: if cli.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        },
    };
    let cmd = match cli.command {
        Cmd::Check => Command::Check,
        Cmd::Curvature => Command::Curvature,
        Cmd::Scan => Command::Scan,
        Cmd::Verify => Command::Verify,
    };
    let format = match cli.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    };
    let out = scenario::run_command(&sc, cmd, &opts)?;
    std::io::stdout().write_all(out.render(format).as_bytes())?;
    Ok(out.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
