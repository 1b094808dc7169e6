use std::process::ExitCode;

fn main() -> ExitCode {
    mutsub::cli::run()
}
