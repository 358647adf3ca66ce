use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    ExitCode::from(dfs_cli::run(dfs_cli::Cli::parse()))
}
