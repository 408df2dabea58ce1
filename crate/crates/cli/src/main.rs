//! `edl`: browse the symmetric-space catalog and run verification suites.
//!
//! Exit status is 0 when every record passes, 1 when any record fails and
//! 2 on bad input.

mod config;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use edl_core::geometry::euler_range_report;
use edl_core::root_systems::{build_root_system, RootFamily, WEYL_ENUMERATION_RANK_CAP};
use edl_core::symspace::{Catalog, ParameterBinding};
use edl_core::verify::{ct_command_tasks, row_tasks, run_report, suite_tasks, RunConfig, Suite, Task};

use config::ConfigArgs;

#[derive(Parser, Debug)]
#[command(name = "edl", version)]
#[command(about = "Root systems, symmetric spaces and the integral identities behind their Euler parameterizations")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Summarize a root system and check |W| = |Z| r! prod(n_i)
    Roots {
        /// Family letter: A, B, C, D, E, F or G
        family: String,
        rank: usize,
    },
    /// Exact constant term against its product formulas
    Ct {
        /// Family letter, BC included
        family: String,
        rank: usize,
        /// Multiplicities: one value, or one per orbit (long,short[,double])
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<u32>,
    },
    /// Run a verification suite, or the checks for one catalog row
    Verify {
        /// Catalog label such as FII or AIV
        #[arg(conflicts_with = "suite")]
        label: Option<String>,

        /// roots, ct, split, restricted, classical, catalog or all
        #[arg(long)]
        suite: Option<Suite>,

        #[command(flatten)]
        params: Params,
    },
    /// Print a catalog row with its Euler coordinate ranges
    Show {
        label: String,

        #[command(flatten)]
        params: Params,
    },
}

#[derive(Args, Debug, Clone)]
struct Params {
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    p: Option<i64>,
    #[arg(long)]
    q: Option<i64>,
}

impl Params {
    fn binding(&self) -> ParameterBinding {
        [("n", self.n), ("p", self.p), ("q", self.q)]
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k, v)))
            .fold(ParameterBinding::new(), |b, (k, v)| b.with(k, v))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether every record passed.
fn run(cli: Cli) -> Result<bool> {
    let config = cli.config.resolve()?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Roots { family, rank } => {
            let fam = root_family(&family, rank)?;
            let sys = build_root_system(fam)?;
            if config.output_format == edl_core::verify::OutputFormat::Text {
                out.write_all(output::roots_summary(&sys).as_bytes())?;
            }
            let mut tasks = vec![edl_core::verify::relation_task(fam)];
            if rank <= WEYL_ENUMERATION_RANK_CAP {
                tasks.push(edl_core::verify::enumeration_task(fam));
            }
            report(&mut out, config, tasks)
        }
        Command::Ct { family, rank, k } => {
            let fam = root_family(&family, rank)?;
            let tasks = ct_command_tasks(fam, k).map_err(|e| anyhow!(e))?;
            report(&mut out, config, tasks)
        }
        Command::Verify { label, suite, params } => {
            let tasks = match label {
                Some(label) => {
                    Catalog::builtin().lookup(&label, &params.binding())?;
                    let (tasks, skipped) = row_tasks(&label, &params.binding(), &config);
                    for note in skipped {
                        eprintln!("note: {note}");
                    }
                    tasks
                }
                None => suite_tasks(suite.unwrap_or(Suite::All), &config),
            };
            report(&mut out, config, tasks)
        }
        Command::Show { label, params } => {
            let catalog = Catalog::builtin();
            let row = catalog.row(&label)?;
            let entry = catalog.lookup(&label, &params.binding())?;
            let euler = euler_range_report(&entry)?;
            output::write_show(&mut out, row, &entry, &euler, config.output_format)?;
            Ok(true)
        }
    }
}

fn root_family(family: &str, rank: usize) -> Result<RootFamily> {
    let letter = family.parse().with_context(|| format!("family `{family}`"))?;
    Ok(RootFamily::new(letter, rank)?)
}

fn report(out: &mut impl Write, config: RunConfig, tasks: Vec<Task>) -> Result<bool> {
    let report = run_report(config, tasks);
    output::write_report(out, &report, config.output_format)?;
    out.flush()?;
    Ok(report.all_pass)
}
