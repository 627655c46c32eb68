use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use holonorm_cli::{emit_plot, run, CliError, ExperimentConfig, PlotKind};

#[derive(Parser)]
#[command(name = "holonorm", version, about = "Run a holonorm experiment from a TOML config")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Favard constant K_n with a certified tail bound.
    Favard(RunArgs),
    /// Table of whole-line Landau-Kolmogorov constants.
    LkTable(RunArgs),
    /// One max-form interpolation inequality on a union of half-lines.
    VerifyLk(RunArgs),
    /// Recession cone, classification and ray sweep.
    Recession(RunArgs),
    /// Sup-norm estimate of one derivative.
    Probe(RunArgs),
    /// Divergence witness for one derivative.
    Witness(RunArgs),
    /// Evidence for membership in the bounded and continuous spaces.
    Membership(RunArgs),
    /// Primitive-based bound on a bounded convex domain.
    ChainBound(RunArgs),
    /// Gap filling on a union of half-lines.
    Thm42(RunArgs),
    /// Gap filling down to order zero on a bounded convex domain.
    Thm47(RunArgs),
    /// Primitive along a straight segment.
    Primitive(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Report path; the report goes to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    plot: Option<PlotKind>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

impl Command {
    fn parts(&self) -> (&'static str, &RunArgs) {
        match self {
            Command::Favard(a) => ("favard", a),
            Command::LkTable(a) => ("lk-table", a),
            Command::VerifyLk(a) => ("verify-lk", a),
            Command::Recession(a) => ("recession", a),
            Command::Probe(a) => ("probe", a),
            Command::Witness(a) => ("witness", a),
            Command::Membership(a) => ("membership", a),
            Command::ChainBound(a) => ("chain-bound", a),
            Command::Thm42(a) => ("thm42", a),
            Command::Thm47(a) => ("thm47", a),
            Command::Primitive(a) => ("primitive", a),
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn plot_path(kind: PlotKind, configured: Option<&Path>, report: Option<&Path>) -> PathBuf {
    if let Some(p) = configured {
        return p.to_path_buf();
    }
    match report {
        Some(r) => {
            let stem = r.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            r.with_file_name(format!("{stem}-{kind}.svg"))
        }
        None => PathBuf::from(format!("holonorm-{kind}.svg")),
    }
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    let (name, args) = cli.command.parts();
    let mut config = ExperimentConfig::load(&args.config)?;
    if config.task.name() != name {
        return Err(CliError::Config(format!(
            "subcommand {name} does not match task.kind = \"{}\"",
            config.task.name()
        )));
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let output = config.output.clone().unwrap_or_default();
    let report = run(config)?;
    let report_path = args.out.clone().or(output.report);
    match &report_path {
        Some(path) => {
            write(path, &report.to_json())?;
            print!("{}", report.summary_table());
        }
        None => {
            eprint!("{}", report.summary_table());
            print!("{}", report.to_json());
        }
    }
    if let Some(kind) = args.plot {
        let svg = emit_plot(&report, kind)?;
        write(&plot_path(kind, output.plot.as_deref(), report_path.as_deref()), &svg)?;
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
