use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quup_cli::config::{load_config, ExperimentKind, Format};
use quup_cli::{presets, run, verify, CliError, Context, Result};

/// Interference of undecayed unstable particles.
#[derive(Parser)]
#[command(name = "quup", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Double-slit sweep over the path difference or screen position.
    Dslit(Common),
    /// Gravity interferometer sweep over the tilt angle.
    Cow(Common),
    /// Wave-packet detection probabilities, quadrature against closed form.
    Packet(Common),
    /// Visibility, predictability and the duality residual.
    DualityReport(Common),
    /// Run the oracle checks and print a pass/fail table.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run document; each command has a built-in default.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads for sweep points.
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
}

fn execute(kind: ExperimentKind, args: &Common) -> Result<()> {
    let (constants, source) = presets::constants_from_env()?;
    let config = load_config(args.config.as_deref(), kind, &constants)?;
    let ctx = Context::new(constants, source, args.threads.map(usize::from));
    let table = run(&config, &ctx)?;

    let format = args.format.unwrap_or(config.output.format);
    let text = table.render(format, config.output.precision);
    let out = args.out.clone().or_else(|| config.output.path.as_ref().map(PathBuf::from));
    match out {
        Some(path) => write_file(&path, &text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io("<stdout>", e))?;
        }
    }

    match verify::failures(&table) {
        0 => Ok(()),
        n if kind == ExperimentKind::Verify => Err(CliError::Verification(n)),
        _ => Ok(()),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Dslit(a) => (ExperimentKind::Dslit, a),
        Command::Cow(a) => (ExperimentKind::Cow, a),
        Command::Packet(a) => (ExperimentKind::Packet, a),
        Command::DualityReport(a) => (ExperimentKind::DualityReport, a),
        Command::Verify(a) => (ExperimentKind::Verify, a),
    };
    match execute(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("quup {kind}: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
