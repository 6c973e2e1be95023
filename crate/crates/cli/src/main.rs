use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use symprod_cli::{run, selftest, Artifact, Cli, CliError, Command};

fn emit(artifact: &Artifact, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, &artifact.body)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            println!("{}", artifact.summary);
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(artifact.body.as_bytes())
                .map_err(|e| CliError::Validation(e.to_string()))?;
            eprintln!("{}", artifact.summary);
        }
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    if let Command::Selftest(args) = &cli.command {
        let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("selftest-artifacts"));
        let (outcomes, artifact) = selftest::run(args.seed, &dir)?;
        println!("{}", artifact.summary);
        println!("artifacts written to {}", dir.display());
        let failed = outcomes.iter().filter(|o| !o.passed).count();
        if failed > 0 {
            return Err(CliError::Numerical(format!("{failed} criteria failed")));
        }
        return Ok(());
    }
    let out = match &cli.command {
        Command::Roots(a)
        | Command::Symmetrize(a)
        | Command::Member(a)
        | Command::Separate(a)
        | Command::Arrangement(a)
        | Command::Classify(a)
        | Command::Distance(a)
        | Command::Exhaust(a)
        | Command::PeakVerify(a)
        | Command::Diverge(a)
        | Command::Selftest(a) => a.out.clone(),
    };
    emit(&run(&cli.command)?, out.as_ref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
