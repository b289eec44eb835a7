use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use kee_cli::{destination, run, Cli, OUTPUT_DIR_ENV};

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
    let command = cli.command.name();
    let output = cli.output.clone();
    match run(cli) {
        Ok(out) => {
            let env_dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
            match destination(output.as_deref(), env_dir.as_deref(), command, out.extension) {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &out.body) {
                        eprintln!("kee: cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                    eprintln!("kee: wrote {}", path.display());
                }
                None => {
                    let _ = std::io::stdout().write_all(out.body.as_bytes());
                }
            }
            ExitCode::from(out.exit_code)
        }
        Err(e) => {
            eprintln!("kee: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
