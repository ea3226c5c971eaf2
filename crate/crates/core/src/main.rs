use std::process::ExitCode;

fn main() -> ExitCode {
    icosa_core::cli::main_with_args(std::env::args_os())
}
