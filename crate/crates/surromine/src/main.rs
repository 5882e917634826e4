use std::process::ExitCode;

fn main() -> ExitCode {
    surromine::cli::main()
}
