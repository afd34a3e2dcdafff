use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(optionrace::cli::run())
}
