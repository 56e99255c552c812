mod bound;
mod census;
mod fields;
mod group;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::{Outcome, Output};

#[derive(Parser, Debug)]
#[command(name = "torsionlab", version, about = "Bounds, exhaustive checks and census statistics for l-torsion in class groups")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Print machine-readable JSON instead of the table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the command's tabular data to this CSV file.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Reject a dataset on its first malformed row.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 20240601)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one of the explicit bounds.
    Bound(bound::BoundCmd),
    /// Rank bound for a tower of degree-l steps, compared with the simple form.
    Tower(bound::TowerCmd),
    /// Run an exhaustive or randomized verification suite.
    #[command(subcommand)]
    Verify(verify::VerifyCmd),
    /// Count a-full numbers and compare with the Euler-product constant.
    Afull(fields::AfullCmd),
    /// Census statistics over a field dataset.
    #[command(subcommand)]
    Census(census::CensusCmd),
    /// Class group of an imaginary quadratic field, with the genus check.
    Classgroup(fields::ClassgroupCmd),
    /// Permutation-group utilities.
    #[command(subcommand)]
    Group(group::GroupCmd),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = Output::new(cli.global.clone());
    let result = match cli.command {
        Command::Bound(c) => bound::run(&c, &mut out),
        Command::Tower(c) => bound::run_tower(&c, &mut out),
        Command::Verify(c) => verify::run(&c, &mut out),
        Command::Afull(c) => fields::run_afull(&c, &mut out),
        Command::Census(c) => census::run(&c, &mut out),
        Command::Classgroup(c) => fields::run_classgroup(&c, &mut out),
        Command::Group(c) => group::run(&c, &mut out),
    };
    match result.and_then(|outcome| out.finish().map(|_| outcome)) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(output::exit_code(&e))
        }
    }
}
