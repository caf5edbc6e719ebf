use std::process::ExitCode;

use clap::Parser;
use codemine_cli::{Cli, run};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CODEMINE_LOG", "warn")).init();
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs
        && let Err(err) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global()
    {
        log::warn!("cannot size the worker pool: {err}");
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
