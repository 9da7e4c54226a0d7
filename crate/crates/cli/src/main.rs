use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use fairaudit_cli::commands;
use fairaudit::measures::MeasureKind;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fairaudit",
    version,
    about = "Intersectional group fairness audits over classifier prediction files"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    #[value(name = "tpr_deficiency")]
    TprDeficiency,
    #[value(name = "fpr")]
    Fpr,
    #[value(name = "accuracy_deficiency")]
    AccuracyDeficiency,
}

impl From<MeasureArg> for MeasureKind {
    fn from(arg: MeasureArg) -> Self {
        match arg {
            MeasureArg::TprDeficiency => MeasureKind::TprDeficiency,
            MeasureArg::Fpr => MeasureKind::Fpr,
            MeasureArg::AccuracyDeficiency => MeasureKind::AccuracyDeficiency,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Audit one prediction file and write the report.
    Audit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also emit summary/per-group/curve CSVs into this directory.
        #[arg(long)]
        csv_dir: Option<PathBuf>,
    },
    /// Compare two audit reports produced with the same config.
    Compare {
        #[arg(long)]
        baseline: PathBuf,
        #[arg(long)]
        candidate: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Tolerance for delta sign classification.
        #[arg(long, default_value_t = 1e-9)]
        tau: f64,
        /// Also evaluate the all-groups leveling-down variant.
        #[arg(long)]
        strict: bool,
    },
    /// Re-audit on every prefix of the configured axis order.
    SweepAxes {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Emit the (alpha, IF_alpha, DF) curve of a report as CSV.
    SweepAlpha {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Required when the report holds more than one measure.
        #[arg(long, value_enum)]
        measure: Option<MeasureArg>,
    },
    /// Check an input file against a config without auditing.
    Validate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        config: PathBuf,
    },
    #[command(hide = true)]
    Explore {
        #[arg(long, default_value_t = 10_000)]
        samples: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => match err.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            _ => {
                let first_line = err.to_string();
                let first_line = first_line.lines().next().unwrap_or("invalid arguments");
                eprintln!("error: usage: {first_line}");
                return ExitCode::from(64);
            }
        },
    };

    let result = match cli.command {
        Command::Audit {
            input,
            config,
            out,
            csv_dir,
        } => commands::cmd_audit(&input, &config, &out, csv_dir.as_deref()),
        Command::Compare {
            baseline,
            candidate,
            out,
            tau,
            strict,
        } => commands::cmd_compare(&baseline, &candidate, &out, tau, strict),
        Command::SweepAxes {
            input,
            config,
            out_dir,
        } => commands::cmd_sweep_axes(&input, &config, &out_dir),
        Command::SweepAlpha {
            report,
            out,
            measure,
        } => commands::cmd_sweep_alpha(&report, &out, measure.map(Into::into)),
        Command::Validate { input, config } => commands::cmd_validate(&input, &config),
        Command::Explore { samples, seed } => commands::cmd_explore(samples, seed),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.diagnostic());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
