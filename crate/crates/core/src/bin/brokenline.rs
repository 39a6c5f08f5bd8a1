use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    match brokenline::cli::run(std::env::args_os(), &mut io::stdout()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
