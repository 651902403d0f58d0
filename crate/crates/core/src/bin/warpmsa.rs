use std::process::ExitCode;

fn main() -> ExitCode {
    warpmsa::cli::main_with_args(std::env::args_os())
}
