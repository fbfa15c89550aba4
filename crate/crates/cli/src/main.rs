use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cluster_surface::golden::Golden;
use cluster_surface_cli::check::{cmd_check, table, CheckConfig, Family};
use cluster_surface_cli::{cmd_expand, CliError, JobSpec, Method, Output};

/// Exact cluster-variable expansions for polygons and annuli.
#[derive(Parser)]
#[command(name = "clsurf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Expand the target arc(s) of a job file in the initial cluster.
    Expand {
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[arg(long, value_enum)]
        output: Option<Output>,
        /// Accept targets that are arcs of the triangulation.
        #[arg(long)]
        target_in_t: bool,
        /// Job file; `-` or nothing reads standard input.
        input: Option<PathBuf>,
    },
    /// Run the invariant suite on seeded random instances.
    Check {
        #[arg(long, value_enum, default_value = "polygon")]
        family: Family,
        /// Defaults to 100, or 0 when only golden files are checked.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest total number of marked points (default 12 for
        /// polygons, 6 for annuli).
        #[arg(long)]
        max_m: Option<usize>,
        #[arg(long, default_value_t = 2)]
        max_winding: i64,
        /// Golden files to compare against; the bundled ones if no file
        /// is given.
        #[arg(long, num_args = 0.., value_name = "FILE")]
        golden: Option<Vec<PathBuf>>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

fn read_input(input: Option<PathBuf>) -> Result<String, CliError> {
    let mut text = String::new();
    match input {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(&p)
                .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::Input(format!("standard input: {e}")))?;
        }
    }
    Ok(text)
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Expand {
            method,
            output,
            target_in_t,
            input,
        } => {
            let job = JobSpec::parse(&read_input(input)?)?;
            cmd_expand(&job, method, output, target_in_t)
        }
        Command::Check {
            family,
            trials,
            seed,
            max_m,
            max_winding,
            golden,
            format,
        } => {
            let golden = match golden {
                None => Vec::new(),
                Some(files) if files.is_empty() => Golden::builtin(),
                Some(files) => files
                    .iter()
                    .map(|f| {
                        Golden::load(f).map_err(|e| CliError::Input(format!("{}: {e}", f.display())))
                    })
                    .collect::<Result<_, _>>()?,
            };
            let cfg = CheckConfig {
                family,
                trials: trials.unwrap_or(if golden.is_empty() { 100 } else { 0 }),
                seed,
                max_m: max_m.unwrap_or(match family {
                    Family::Polygon => 12,
                    Family::Annulus => 6,
                }),
                max_winding,
                golden,
            };
            let report = cmd_check(&cfg)?;
            let text = match format {
                Format::Table => table(&report),
                Format::Json => serde_json::to_string_pretty(&report).unwrap() + "\n",
            };
            if report.ok {
                Ok(text)
            } else {
                print!("{text}");
                let dump = report
                    .counterexample
                    .as_ref()
                    .map(|c| serde_json::to_string_pretty(c).unwrap())
                    .unwrap_or_else(|| "golden comparison failed".into());
                Err(CliError::Property(format!("counterexample:\n{dump}")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Any panic inside the engine is an internal bug, not an input error.
    let result = std::panic::catch_unwind(|| run(cli));
    let mut out = std::io::stdout().lock();
    match result {
        Ok(Ok(text)) => {
            let _ = out.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            let _ = out.flush();
            eprintln!("clsurf: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => ExitCode::from(3),
    }
}
