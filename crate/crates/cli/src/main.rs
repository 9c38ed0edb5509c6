use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use walkrange_cli::{error_json, run, Cli, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("walkrange: cannot configure {threads} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            let written = match cli.output.format {
                Format::Json => {
                    writeln!(out, "{}", outcome.report.to_json()).map_err(|e| e.to_string())
                }
                Format::Csv => outcome
                    .report
                    .write_csv(&mut out)
                    .map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("walkrange: {e}");
                return ExitCode::from(1);
            }
            if outcome.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            println!("{}", error_json(e.kind(), &e.to_string()));
            eprintln!("walkrange: {e}");
            ExitCode::from(1)
        }
    }
}
