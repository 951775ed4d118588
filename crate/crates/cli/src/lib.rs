pub mod args;
pub mod commands;
pub mod report;

use std::io::Write;

use args::Cli;
use commands::Outcome;

/// Runs a parsed command, writes its output and returns the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return 1;
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return 3;
        }
    }
    match commands::run(cli) {
        Ok(Outcome { text, pass }) => {
            let to_file = !matches!(cli.command, args::Command::Build(_));
            let written = match (&cli.output, to_file) {
                (Some(path), true) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
                _ => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 1;
            }
            if pass {
                0
            } else {
                eprintln!("verification failed");
                2
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
