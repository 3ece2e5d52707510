use std::process::ExitCode;

fn main() -> ExitCode {
    if let Err(e) = sjslab::cli::configure_threads() {
        eprintln!("sjslab: {e}");
        return ExitCode::from(sjslab::cli::EXIT_USAGE as u8);
    }
    ExitCode::from(sjslab::cli::main_with_args(std::env::args_os()) as u8)
}
