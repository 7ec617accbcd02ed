use std::process::ExitCode;

use clap::Parser;
use qfluid_cli::{common, run, Cli, EXIT_INPUT_ERROR};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let outcome = match run(&cli.command) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
    };
    if let Some(dir) = &common(&cli.command).output {
        if let Err(e) = outcome.write(dir) {
            eprintln!("{e}");
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
    }
    for line in &outcome.lines {
        println!("{line}");
    }
    for check in outcome.report.failed() {
        let relation = if check.below { "not below" } else { "not above" };
        eprintln!("FAIL {}: {:e} {relation} {:e}", check.name, check.value, check.threshold);
    }
    ExitCode::from(outcome.exit_code() as u8)
}
