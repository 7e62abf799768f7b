use std::process::ExitCode;

fn main() -> ExitCode {
    geoent::cli::run(std::env::args_os())
}
