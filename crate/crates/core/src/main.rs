use std::process::ExitCode;

fn main() -> ExitCode {
    match jaya::cli::main_with_args(std::env::args_os()) {
        0 => ExitCode::SUCCESS,
        code => ExitCode::from(code as u8),
    }
}
