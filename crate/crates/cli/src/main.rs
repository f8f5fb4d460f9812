use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = compos_cli::run(std::env::args_os());
    // Ignore broken pipes (e.g. piping into `head`): the data is complete
    // as far as this process is concerned.
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code)
}
