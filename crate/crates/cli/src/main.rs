use std::path::PathBuf;
use std::process::ExitCode;

use alexandrov_cli::commands::{cmd_bcg, cmd_check, cmd_cone, cmd_double_geodesic, cmd_entropy, cmd_gromov};
use alexandrov_cli::config::{Overrides, RunConfig};
use alexandrov_cli::output::{write_atomic, Format, Report};
use alexandrov_cli::CliError;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "alexandrov", version, about = "Comparison-geometry checkers for doubled bodies, cone surfaces and spherical-volume embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Run configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Directory for report files; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Comparison checkers on random triangles.
    Check(Common),
    /// Embedding metric bounds, vol_phi and pushforward checks.
    Bcg(Common),
    /// Ball-growth slope.
    Entropy(Common),
    /// Cone-angle dichotomy and cone-surface areas.
    Cone(Common),
    /// A geodesic of a doubled body.
    DoubleGeodesic(Common),
    /// Simplicial volume from hyperbolic volume.
    Gromov {
        #[arg(long)]
        vol: f64,
        #[arg(long)]
        n: usize,
        /// Volume of the regular ideal simplex; defaults to pi for n = 2.
        #[arg(long)]
        vn: Option<f64>,
        #[arg(long)]
        doubled: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn emit(report: &Report, format: Format, out: Option<&PathBuf>, name: &str) -> Result<(), CliError> {
    let text = report.render(format);
    match out {
        Some(dir) => {
            let path = write_atomic(dir, &format!("{name}.{}", format.extension()), &text)?;
            eprintln!("{}: {} ({})", report.command, if report.pass { "pass" } else { "FAIL" }, path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let (common, f): (Common, fn(&RunConfig) -> Result<Report, CliError>) = match cli.command {
        Command::Gromov { vol, n, vn, doubled, out, format } => {
            let r = cmd_gromov(vol, n, vn, doubled)?;
            emit(&r, format, out.as_ref(), "gromov")?;
            return Ok(r.pass);
        }
        Command::Check(c) => (c, cmd_check),
        Command::Bcg(c) => (c, cmd_bcg),
        Command::Entropy(c) => (c, cmd_entropy),
        Command::Cone(c) => (c, cmd_cone),
        Command::DoubleGeodesic(c) => (c, cmd_double_geodesic),
    };
    let overrides = Overrides {
        seed: common.seed,
        trials: common.trials,
        out: common.out.clone(),
    };
    let cfg = RunConfig::load(&common.config)?.apply(&overrides);
    let report = f(&cfg)?;
    let name = cfg.output.name.clone().unwrap_or_else(|| report.command.clone());
    emit(&report, common.format, cfg.output.dir.as_ref(), &name)?;
    Ok(report.pass)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
