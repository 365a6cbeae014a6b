//! Command-line front end: heights, prime splitting, Kummer ramification,
//! certificates, witness tables and tower reports.

mod commands;
mod error;
mod job;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use rayon::prelude::*;

use commands::{run_job, Output};
use error::{CliError, CliResult, EXIT_PARSE};
use job::{Command, JobSpec};

#[derive(Debug, Parser)]
#[command(name = "bogocert", version, about = "Height-gap certificates for Kummer extensions of number fields")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Job files for `run`
    files: Vec<PathBuf>,
    /// Worker threads for `run`
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    spec: JobSpec,
}

fn seed_from_env() -> CliResult<()> {
    if let Ok(s) = std::env::var("BOGOCERT_SEED") {
        let seed = s
            .trim()
            .parse::<u64>()
            .map_err(|_| CliError::usage(format!("BOGOCERT_SEED must be an unsigned integer, got {s:?}")))?;
        bogocert_core::modp::set_seed(seed);
    }
    Ok(())
}

fn emit(out: Output) -> CliResult<Option<CliError>> {
    if let Some((path, body)) = &out.file {
        std::fs::write(path, body).map_err(|e| CliError::io(path, e))?;
    }
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(out.stdout.as_bytes()).map_err(|e| CliError::io("<stdout>", e))?;
    Ok(out.failure)
}

fn report(err: &CliError, job: Option<&str>) -> i32 {
    eprintln!("{}", err.to_json(job));
    err.exit_code()
}

fn run_batch(files: &[PathBuf], jobs: Option<usize>) -> i32 {
    if files.is_empty() {
        return report(&CliError::usage("run requires at least one job file"), None);
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => return report(&CliError::Core(bogocert_core::Error::internal("cli", e.to_string())), None),
    };
    let results: Vec<CliResult<Output>> = pool.install(|| {
        files
            .par_iter()
            .map(|path| JobSpec::from_file(path).and_then(|spec| run_job(spec.command.expect("checked on load"), &spec)))
            .collect()
    });
    let mut code = 0;
    for (path, result) in files.iter().zip(results) {
        let name = path.display().to_string();
        let failure = match result.and_then(emit) {
            Ok(f) => f,
            Err(e) => Some(e),
        };
        if let Some(e) = failure {
            let c = report(&e, Some(&name));
            if code == 0 {
                code = c;
            }
        }
    }
    code
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            eprintln!("{}", serde_json::json!({ "category": "parse", "module": "cli", "message": e.kind().to_string() }));
            return ExitCode::from(EXIT_PARSE as u8);
        }
    };
    if let Err(e) = seed_from_env() {
        return ExitCode::from(report(&e, None) as u8);
    }
    let code = if cli.command == Command::Run {
        run_batch(&cli.files, cli.jobs)
    } else if !cli.files.is_empty() {
        report(&CliError::usage(format!("{} takes no positional arguments", cli.command.name())), None)
    } else {
        match run_job(cli.command, &cli.spec).and_then(emit) {
            Ok(None) => 0,
            Ok(Some(e)) | Err(e) => report(&e, None),
        }
    };
    ExitCode::from(code as u8)
}
